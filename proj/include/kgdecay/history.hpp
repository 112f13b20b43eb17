#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "kgdecay/grid.hpp"

namespace kgd {

enum class Component { u, v };

/// Full state of the coupled system at one time, in reduced variables.
struct SystemState {
    FieldPair u;
    FieldPair v;
    double t = 0.0;
};

/// Time-stamped sequence of states at a fixed output stride, with cubic
/// temporal interpolation of values and stored time-derivative slots.
class History {
public:
    History() = default;
    History(double t0, double stride) : t0_(t0), stride_(stride) {
        if (!(stride > 0.0)) throw std::invalid_argument("History: stride must be positive");
    }

    void push(SystemState s) {
        if (!states_.empty()) {
            const double expect = t0_ + states_.size() * stride_;
            if (std::abs(s.t - expect) > 1e-9 * (1.0 + std::abs(expect)))
                throw std::invalid_argument("History: non-uniform stride");
        }
        states_.push_back(std::move(s));
    }

    bool empty() const { return states_.empty(); }
    std::size_t size() const { return states_.size(); }
    double t_begin() const { return t0_; }
    double t_end() const { return t0_ + (states_.size() - 1) * stride_; }
    double stride() const { return stride_; }
    const SystemState& at(std::size_t i) const { return states_[i]; }
    const SystemState& back() const { return states_.back(); }

    bool covers(double t) const { return t >= t_begin() - 1e-12 && t <= t_end() + 1e-12; }

    const FieldPair& pair(std::size_t i, Component c) const {
        return c == Component::u ? states_[i].u : states_[i].v;
    }

    /// Cubic Lagrange window for time t: snapshot base index and offsets.
    struct Stencil {
        std::size_t base;
        std::array<double, 4> w;   // value weights
        std::array<double, 4> dw;  // d/dt weights
    };

    Stencil stencil(double t) const {
        if (states_.size() < 4) throw std::invalid_argument("History: need >= 4 snapshots");
        if (!covers(t)) throw std::invalid_argument("History: time outside window");
        double x = (t - t0_) / stride_;
        long i = static_cast<long>(std::floor(x)) - 1;
        long last = static_cast<long>(states_.size()) - 4;
        if (i < 0) i = 0;
        if (i > last) i = last;
        Stencil st;
        st.base = static_cast<std::size_t>(i);
        // Lagrange basis on nodes i, i+1, i+2, i+3 in units of the stride.
        const double s = x - i;
        const std::array<double, 4> nodes = {0.0, 1.0, 2.0, 3.0};
        for (int a = 0; a < 4; ++a) {
            double val = 1.0, der = 0.0;
            for (int b = 0; b < 4; ++b) {
                if (b == a) continue;
                der = der * (s - nodes[b]) + val;
                val *= (s - nodes[b]);
            }
            double denom = 1.0;
            for (int b = 0; b < 4; ++b)
                if (b != a) denom *= (nodes[a] - nodes[b]);
            st.w[a] = val / denom;
            st.dw[a] = der / denom / stride_;
        }
        return st;
    }

    enum class Slot { value, dvalue };

    /// Cubic-in-time interpolation of a stored slot.
    Field interp(Component c, Slot slot, double t) const {
        const Stencil st = stencil(t);
        const std::size_t n = states_[0].u.value.size();
        Field out(n, 0.0);
        for (int a = 0; a < 4; ++a) {
            const FieldPair& p = pair(st.base + a, c);
            const Field& f = slot == Slot::value ? p.value : p.dvalue;
            for (std::size_t j = 0; j < n; ++j) out[j] += st.w[a] * f[j];
        }
        return out;
    }

    /// d/dt of the cubic interpolant of a stored slot.
    Field interp_ddt(Component c, Slot slot, double t) const {
        const Stencil st = stencil(t);
        const std::size_t n = states_[0].u.value.size();
        Field out(n, 0.0);
        for (int a = 0; a < 4; ++a) {
            const FieldPair& p = pair(st.base + a, c);
            const Field& f = slot == Slot::value ? p.value : p.dvalue;
            for (std::size_t j = 0; j < n; ++j) out[j] += st.dw[a] * f[j];
        }
        return out;
    }

    /// Snapshot-wise difference a - b; the histories must share the time grid.
    static History difference(const History& a, const History& b) {
        if (a.size() != b.size() || a.t_begin() != b.t_begin() || a.stride() != b.stride())
            throw std::invalid_argument("History::difference: mismatched time grids");
        History d(a.t_begin(), a.stride());
        for (std::size_t i = 0; i < a.size(); ++i) {
            SystemState s;
            s.t = a.at(i).t;
            auto sub = [](const Field& x, const Field& y) {
                Field r(x.size());
                for (std::size_t j = 0; j < x.size(); ++j) r[j] = x[j] - y[j];
                return r;
            };
            s.u = {sub(a.at(i).u.value, b.at(i).u.value), sub(a.at(i).u.dvalue, b.at(i).u.dvalue)};
            s.v = {sub(a.at(i).v.value, b.at(i).v.value), sub(a.at(i).v.dvalue, b.at(i).v.dvalue)};
            d.push(std::move(s));
        }
        return d;
    }

private:
    double t0_ = 0.0;
    double stride_ = 1.0;
    std::vector<SystemState> states_;
};

}  // namespace kgd
