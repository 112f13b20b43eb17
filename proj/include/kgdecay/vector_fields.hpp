#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgdecay/history.hpp"

namespace kgd {

/// Letters of the admissible set in radial mode. Rotations annihilate radial
/// fields identically, so Omega is kept only to document that fact.
enum class FieldLetter { dt, dr, boost_r, rotation };

/// An ordered word of at most two letters, applied left-to-right from the
/// outside: word {A, B} means A(B(u)).
struct VectorFieldWord {
    std::vector<FieldLetter> letters;

    void validate() const {
        if (letters.size() > 2)
            throw std::invalid_argument("VectorFieldWord: derivative cap is 2");
    }
    std::string name() const {
        std::string s;
        for (FieldLetter l : letters) {
            switch (l) {
                case FieldLetter::dt: s += "dt "; break;
                case FieldLetter::dr: s += "dr "; break;
                case FieldLetter::boost_r: s += "Lr "; break;
                default: s += "Om "; break;
            }
        }
        if (!s.empty()) s.pop_back();
        return s.empty() ? "id" : s;
    }
};

/// All words up to the cap over {dt, dr, Lr}: 1 + 3 + 9 = 13 at cap 2.
inline std::vector<VectorFieldWord> all_words(int cap) {
    if (cap < 0 || cap > 2) throw std::invalid_argument("all_words: cap in 0..2");
    std::vector<VectorFieldWord> out{{}};
    const std::vector<FieldLetter> base{FieldLetter::dt, FieldLetter::dr, FieldLetter::boost_r};
    if (cap >= 1)
        for (FieldLetter l : base) out.push_back({{l}});
    if (cap >= 2)
        for (FieldLetter a : base)
            for (FieldLetter b : base) out.push_back({{a, b}});
    return out;
}

namespace detail {

/// Radial derivative of a physical field via the reduced representation:
/// d_r u = ((r u)' - u) / r with the sine-spectral derivative of r u.
inline Field radial_derivative_physical(const RadialGrid& g, const Field& u) {
    Field w(g.size());
    for (int j = 0; j < g.size(); ++j) w[j] = u[j] * g.node(j);
    const Field dw = g.derivative(w);
    Field out(g.size());
    for (int j = 0; j < g.size(); ++j) out[j] = (dw[j] - u[j]) / g.node(j);
    return out;
}

/// Evaluate a word over the history at time t, returning the physical field.
/// The innermost d_t uses the stored time-derivative slots (exact for the
/// solver's state); outer d_t letters differentiate the cubic interpolant.
inline Field eval_word(const RadialGrid& g, const History& h, Component c,
                       const std::vector<FieldLetter>& letters, std::size_t pos, double t) {
    const int n = g.size();
    auto physical = [&](const Field& w) {
        Field u(n);
        for (int j = 0; j < n; ++j) u[j] = w[j] / g.node(j);
        return u;
    };
    if (pos == letters.size()) return physical(h.interp(c, History::Slot::value, t));

    const FieldLetter l = letters[pos];
    const bool inner_is_last = pos + 1 == letters.size();
    switch (l) {
        case FieldLetter::dt: {
            if (inner_is_last) return physical(h.interp(c, History::Slot::dvalue, t));
            // d/dt of the cubic interpolant of the inner word.
            const auto st = h.stencil(t);
            Field acc(n, 0.0);
            for (int a = 0; a < 4; ++a) {
                const double ta = h.t_begin() + (st.base + a) * h.stride();
                const Field fa = eval_word(g, h, c, letters, pos + 1, ta);
                for (int j = 0; j < n; ++j) acc[j] += st.dw[a] * fa[j];
            }
            return acc;
        }
        case FieldLetter::dr:
            return radial_derivative_physical(g, eval_word(g, h, c, letters, pos + 1, t));
        case FieldLetter::boost_r: {
            // L_r = r d_t + t d_r
            Field ft;
            if (inner_is_last) {
                ft = physical(h.interp(c, History::Slot::dvalue, t));
            } else {
                const auto st = h.stencil(t);
                ft.assign(n, 0.0);
                for (int a = 0; a < 4; ++a) {
                    const double ta = h.t_begin() + (st.base + a) * h.stride();
                    const Field fa = eval_word(g, h, c, letters, pos + 1, ta);
                    for (int j = 0; j < n; ++j) ft[j] += st.dw[a] * fa[j];
                }
            }
            const Field fr =
                radial_derivative_physical(g, eval_word(g, h, c, letters, pos + 1, t));
            Field out(n);
            for (int j = 0; j < n; ++j) out[j] = g.node(j) * ft[j] + t * fr[j];
            return out;
        }
        default:
            return Field(n, 0.0);  // rotations annihilate radial fields
    }
}

}  // namespace detail

/// Gamma^I u at time t as a physical field over the grid.
inline Field apply_vector_field(const RadialGrid& g, const History& h, Component c,
                                const VectorFieldWord& word, double t) {
    word.validate();
    if (!h.covers(t)) throw std::invalid_argument("apply_vector_field: t outside window");
    return detail::eval_word(g, h, c, word.letters, 0, t);
}

/// History of the reduced representation of Gamma^I u: value slot r * Gamma^I u,
/// derivative slot r * d_t Gamma^I u, sampled at the interior snapshots (the
/// edge snapshots are dropped where d_t would fall back to one-sided stencils).
inline History derived_history(const RadialGrid& g, const History& h, Component c,
                               const VectorFieldWord& word) {
    word.validate();
    if (h.size() < 6) throw std::invalid_argument("derived_history: history too short");
    VectorFieldWord dtw;
    dtw.letters.push_back(FieldLetter::dt);
    for (FieldLetter l : word.letters) dtw.letters.push_back(l);

    const std::size_t lo = 2, hi = h.size() - 2;
    History out(h.t_begin() + lo * h.stride(), h.stride());
    for (std::size_t i = lo; i < hi; ++i) {
        const double t = h.t_begin() + i * h.stride();
        Field u = detail::eval_word(g, h, c, word.letters, 0, t);
        // d_t (Gamma^I u): one extra letter; cap 3 only arises internally here.
        Field ut = detail::eval_word(g, h, c, dtw.letters, 0, t);
        SystemState s;
        s.t = t;
        s.u.value.resize(g.size());
        s.u.dvalue.resize(g.size());
        for (int j = 0; j < g.size(); ++j) {
            s.u.value[j] = u[j] * g.node(j);
            s.u.dvalue[j] = ut[j] * g.node(j);
        }
        s.v = s.u;
        out.push(s);
    }
    return out;
}

}  // namespace kgd
