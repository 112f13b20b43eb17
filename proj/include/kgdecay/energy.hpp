#pragma once

#include <cmath>
#include <numbers>

#include "kgdecay/grid.hpp"

namespace kgd {

/// Flat-slice energy E_m(t, u) = sum_alpha ||d_alpha u||^2 + m^2 ||u||^2
/// over R^3, evaluated in reduced variables:
///   ||d_t u||^2 = 4 pi int w_t^2 dr,
///   ||grad u||^2 = 4 pi int (w' - w/r)^2 dr,
///   ||u||^2     = 4 pi int w^2 dr.
inline double flat_energy(const RadialGrid& g, const FieldPair& state, double m) {
    check_mass(m);
    const Field wr = g.derivative_with_ends(g.transform_forward(state.value));
    double s_t = 0.0, s_r = 0.0, s_0 = 0.0;
    for (int j = 0; j < g.size(); ++j) {
        const double du = wr[j + 1] - state.value[j] / g.node(j);
        s_t += state.dvalue[j] * state.dvalue[j];
        s_r += du * du;
        s_0 += state.value[j] * state.value[j];
    }
    // Trapezoid endpoints: the integrands vanish at r = 0 and, except for the
    // (w' - w/r)^2 term, at r = R as well.
    s_r += 0.5 * wr[g.size() + 1] * wr[g.size() + 1];
    return 4.0 * std::numbers::pi * g.spacing() * (s_t + s_r + m * m * s_0);
}

/// Same functional through Plancherel: 4 pi (R/2) sum_k (ct_k^2 + omega_k^2 c_k^2).
/// Exactly conserved by the homogeneous per-mode rotations.
inline double flat_energy_spectral(const RadialGrid& g, const FieldPair& state, double m) {
    check_mass(m);
    const Field c = g.transform_forward(state.value);
    const Field ct = g.transform_forward(state.dvalue);
    double s = 0.0;
    for (int k = 0; k < g.size(); ++k) {
        const double om = multiplier_omega_value(g.kappa(k), m);
        s += ct[k] * ct[k] + om * om * c[k] * c[k];
    }
    return 4.0 * std::numbers::pi * 0.5 * g.outer_radius() * s;
}

/// ||u||_{L^2(R^3)} of the radial field u = w/r.
inline double l2_norm_3d(const RadialGrid& g, const Field& w) {
    return std::sqrt(g.l2sq_3d(w));
}

/// sup over the grid of |u| = |w/r|, including the recovered r = 0 value.
inline double sup_norm_u(const RadialGrid& g, const Field& w) {
    double s = std::abs(g.origin_value(w));
    for (int j = 0; j < g.size(); ++j) s = std::max(s, std::abs(w[j] / g.node(j)));
    return s;
}

}  // namespace kgd
