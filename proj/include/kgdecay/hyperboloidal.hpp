#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgdecay/history.hpp"
#include "kgdecay/system.hpp"

namespace kgd {

/// Time of the hyperboloid t^2 - r^2 = s^2 above radius r.
inline double slice_time(double s, double r) {
    if (!(s >= 2.0)) throw std::invalid_argument("slice_time: s must be >= 2");
    return std::sqrt(s * s + r * r);
}

/// Spatial sample set of the slice: solver nodes inside the cone r < t - 1.
/// Cone membership caps the radius at (s^2 - 1) / 2.
struct HyperboloidSlice {
    double s = 0.0;
    std::vector<int> nodes;   // grid node indices
    std::vector<double> r, t; // per sample
};

inline HyperboloidSlice make_slice(const RadialGrid& g, double s) {
    HyperboloidSlice sl;
    sl.s = s;
    const double r_max = 0.5 * (s * s - 1.0);
    for (int j = 0; j < g.size() && g.node(j) < r_max; ++j) {
        const double t = slice_time(s, g.node(j));
        sl.nodes.push_back(j);
        sl.r.push_back(g.node(j));
        sl.t.push_back(t);
    }
    if (sl.nodes.empty()) throw std::invalid_argument("make_slice: empty cone section");
    return sl;
}

/// Transition matrices between the Cartesian and semi-hyperboloidal frames:
/// Phi lower-triangular with unit diagonal and first column (1, x^a/t);
/// Psi is its closed-form inverse with the off-diagonal column negated.
struct FrameMatrices {
    std::array<std::array<double, 4>, 4> Phi{}, Psi{};
};

inline FrameMatrices frame_matrices(double t, double x1, double x2, double x3) {
    if (!(t > 0.0)) throw std::invalid_argument("frame_matrices: t must be positive");
    FrameMatrices f;
    for (int a = 0; a < 4; ++a) f.Phi[a][a] = f.Psi[a][a] = 1.0;
    const double x[3] = {x1, x2, x3};
    for (int a = 1; a < 4; ++a) {
        f.Phi[a][0] = x[a - 1] / t;
        f.Psi[a][0] = -x[a - 1] / t;
    }
    return f;
}

/// One component pulled back to a slice: physical value, Cartesian time
/// derivative and radial derivative at every sample node.
struct HyperboloidSample {
    Field value, dt, dr;
};

namespace detail {

/// Per-snapshot spectral d/dr of the reduced variable, computed on demand.
class SnapshotDerivatives {
public:
    SnapshotDerivatives(const RadialGrid& g, const History& h, Component c)
        : g_(g), h_(h), c_(c), cache_(h.size()) {}

    const Field& operator()(std::size_t i) {
        if (!cache_[i]) cache_[i] = g_.derivative(h_.pair(i, c_).value);
        return *cache_[i];
    }

private:
    const RadialGrid& g_;
    const History& h_;
    Component c_;
    std::vector<std::optional<Field>> cache_;
};

}  // namespace detail

/// Pull one component back to the slice: cubic-in-time interpolation of the
/// stored value and time-derivative slots per node, spectral d/dr computed
/// at the contributing snapshots and interpolated with the same weights.
/// Rejected when the slice's time range leaves the recorded window.
inline HyperboloidSample interpolate_onto_slice(const RadialGrid& g, const History& h,
                                                const HyperboloidSlice& sl, Component c) {
    if (h.size() < 4) throw std::invalid_argument("interpolate_onto_slice: history too short");
    const double t_lo = sl.t.front(), t_hi = sl.t.back();
    if (!h.covers(t_lo) || !h.covers(t_hi))
        throw std::invalid_argument(
            "interpolate_onto_slice: slice needs t in [" + std::to_string(t_lo) + ", " +
            std::to_string(t_hi) + "], window is [" + std::to_string(h.t_begin()) + ", " +
            std::to_string(h.t_end()) + "]");

    detail::SnapshotDerivatives deriv(g, h, c);
    const std::size_t n = sl.nodes.size();
    HyperboloidSample out;
    out.value.resize(n);
    out.dt.resize(n);
    out.dr.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int j = sl.nodes[i];
        const double r = sl.r[i];
        const auto st = h.stencil(sl.t[i]);
        double w = 0.0, wt = 0.0, wr = 0.0;
        for (int a = 0; a < 4; ++a) {
            const FieldPair& p = h.pair(st.base + a, c);
            w += st.w[a] * p.value[j];
            wt += st.w[a] * p.dvalue[j];
            wr += st.w[a] * deriv(st.base + a)[j];
        }
        out.value[i] = w / r;
        out.dt[i] = wt / r;
        out.dr[i] = (wr - out.value[i]) / r;
    }
    return out;
}

/// Tangential and transverse derivatives of the semi-hyperboloidal frame,
/// radial mode: under_r = (r/t) d_t + d_r (= L_r / t), perp = d_t + (r/t) d_r.
struct SemiHyperboloidalDerivatives {
    Field under_r, perp;
};

inline SemiHyperboloidalDerivatives semi_hyperboloidal_derivatives(
    const HyperboloidSlice& sl, const HyperboloidSample& sm) {
    SemiHyperboloidalDerivatives out;
    const std::size_t n = sl.nodes.size();
    out.under_r.resize(n);
    out.perp.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rt = sl.r[i] / sl.t[i];
        out.under_r[i] = rt * sm.dt[i] + sm.dr[i];
        out.perp[i] = sm.dt[i] + rt * sm.dr[i];
    }
    return out;
}

/// Flat-measure quadrature of a per-node integrand over the slice.
inline double slice_integral(const RadialGrid& g, const HyperboloidSlice& sl,
                             const Field& integrand) {
    double s = 0.0;
    for (std::size_t i = 0; i < sl.nodes.size(); ++i)
        s += integrand[i] * sl.r[i] * sl.r[i];
    return 4.0 * std::numbers::pi * g.spacing() * s;
}

/// L2 norm of a per-node sampled function over the slice (flat measure).
inline double slice_l2(const RadialGrid& g, const HyperboloidSlice& sl, const Field& f) {
    Field sq(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i];
    return std::sqrt(slice_integral(g, sl, sq));
}

/// Hyperboloidal energy in one of its three equivalent forms (radial mode;
/// the rotational terms of form 2 vanish identically on radial fields):
///   1: u_t^2 + u_r^2 + 2 (r/t) u_t u_r + m^2 u^2
///   2: ((s/t) u_t)^2 + (under_r u)^2 + m^2 u^2
///   3: (perp u)^2 + ((s/t) u_r)^2 + m^2 u^2
inline double hyperboloidal_energy(const RadialGrid& g, const HyperboloidSlice& sl,
                                   const HyperboloidSample& sm, double m, int form = 1) {
    check_mass(m);
    if (form < 1 || form > 3) throw std::invalid_argument("hyperboloidal_energy: form in 1..3");
    const std::size_t n = sl.nodes.size();
    Field e(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ut = sm.dt[i], ur = sm.dr[i], u = sm.value[i];
        const double rt = sl.r[i] / sl.t[i], st = sl.s / sl.t[i];
        switch (form) {
            case 1: e[i] = ut * ut + ur * ur + 2.0 * rt * ut * ur; break;
            case 2: {
                const double tang = rt * ut + ur;
                e[i] = st * ut * st * ut + tang * tang;
                break;
            }
            default: {
                const double perp = ut + rt * ur;
                e[i] = perp * perp + st * ur * st * ur;
            }
        }
        e[i] += m * m * u * u;
    }
    return slice_integral(g, sl, e);
}

/// Energy inequality along the hyperboloidal foliation for one component:
///   E_m(s, u)^{1/2} <= E_m(s0, u)^{1/2} + int_{s0}^s ||f||_{L2_f(H_s')} ds'
/// with f the component's own nonlinearity evaluated on the slice. Returns
/// slack(s) = RHS - LHS per slice (>= 0 up to interpolation error; equality
/// at zero source).
struct SlackSeries {
    std::vector<double> s;
    std::vector<double> energy_sqrt;  // LHS
    std::vector<double> slack;
    double base_sqrt = 0.0;
};

inline SlackSeries energy_inequality_slack(const RadialGrid& g, const History& h,
                                           const SystemParams& prm,
                                           const NonlinearityPreset& preset, Component c,
                                           const std::vector<double>& s_values) {
    if (s_values.size() < 2) throw std::invalid_argument("energy_inequality_slack: need >= 2 s");
    const double mass = c == Component::u ? prm.m : 1.0;
    SlackSeries out;
    double integral = 0.0, prev_norm = 0.0, prev_s = 0.0;
    for (double s : s_values) {
        const HyperboloidSlice sl = make_slice(g, s);
        const HyperboloidSample su = interpolate_onto_slice(g, h, sl, Component::u);
        const HyperboloidSample sv = interpolate_onto_slice(g, h, sl, Component::v);
        PhysicalState p;
        p.u = su.value;
        p.ut = su.dt;
        p.ur = su.dr;
        p.v = sv.value;
        p.vt = sv.dt;
        p.vr = sv.dr;
        const Field f = c == Component::u ? rhs_u_physical(p, prm, preset)
                                          : rhs_v_physical(p, prm, preset);
        const double fnorm = slice_l2(g, sl, f);
        const double esqrt =
            std::sqrt(hyperboloidal_energy(g, sl, c == Component::u ? su : sv, mass, 1));
        if (out.s.empty()) {
            out.base_sqrt = esqrt;
        } else {
            integral += 0.5 * (s - prev_s) * (fnorm + prev_norm);
        }
        out.s.push_back(s);
        out.energy_sqrt.push_back(esqrt);
        out.slack.push_back(out.base_sqrt + integral - esqrt);
        prev_norm = fnorm;
        prev_s = s;
    }
    return out;
}

}  // namespace kgd
