#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "kgdecay/grid.hpp"

namespace kgd {

/// One exact mode rotation of c'' = -omega^2 c by dt.
/// At omega = 0 the limit formula c + dt c_t applies (secular zero mode).
inline void rotate_mode(double& c, double& ct, double omega, double dt) {
    if (omega == 0.0) {
        c += dt * ct;
        return;
    }
    const double co = std::cos(omega * dt), si = std::sin(omega * dt);
    const double c0 = c, ct0 = ct;
    c = co * c0 + (si / omega) * ct0;
    ct = -omega * si * c0 + co * ct0;
}

/// Exact-in-time homogeneous Klein-Gordon flow in transform space.
/// Fields are the grid's native representation (reduced variable in radial mode).
inline FieldPair evolve_homogeneous(const RadialGrid& g, const FieldPair& state,
                                    double m, double dt) {
    check_mass(m);
    if (!std::isfinite(dt)) throw std::invalid_argument("evolve_homogeneous: dt not finite");
    Field c = g.transform_forward(state.value);
    Field ct = g.transform_forward(state.dvalue);
    for (int k = 0; k < g.size(); ++k)
        rotate_mode(c[k], ct[k], multiplier_omega_value(g.kappa(k), m), dt);
    return {g.transform_inverse(c), g.transform_inverse(ct)};
}

inline FieldPair evolve_homogeneous(const BoxGrid& g, const FieldPair& state,
                                    double m, double dt) {
    check_mass(m);
    if (!std::isfinite(dt)) throw std::invalid_argument("evolve_homogeneous: dt not finite");
    auto c = g.transform_forward(state.value);
    auto ct = g.transform_forward(state.dvalue);
    g.for_each_mode([&](std::size_t idx, int i1, int i2, int i3) {
        const double omega = multiplier_omega_value(g.kappa_mag(i1, i2, i3), m);
        double cr = c[idx].real(), ctr = ct[idx].real();
        double ci = c[idx].imag(), cti = ct[idx].imag();
        rotate_mode(cr, ctr, omega, dt);
        rotate_mode(ci, cti, omega, dt);
        c[idx] = {cr, ci};
        ct[idx] = {ctr, cti};
    });
    return {g.transform_inverse(c), g.transform_inverse(ct)};
}

/// Coefficient-space state of one component, for step loops that avoid
/// transforming back and forth every half step.
struct SpectralPair {
    Field c, ct;
};

inline SpectralPair to_spectral(const RadialGrid& g, const FieldPair& s) {
    return {g.transform_forward(s.value), g.transform_forward(s.dvalue)};
}

inline FieldPair from_spectral(const RadialGrid& g, const SpectralPair& s) {
    return {g.transform_inverse(s.c), g.transform_inverse(s.ct)};
}

inline void rotate_pair(const RadialGrid& g, SpectralPair& s, double m, double dt) {
    for (int k = 0; k < g.size(); ++k)
        rotate_mode(s.c[k], s.ct[k], multiplier_omega_value(g.kappa(k), m), dt);
}

/// One forced step by midpoint quadrature of the Duhamel integral:
///   delta c   = dt sin(omega dt / 2) / omega * f_mid_hat
///   delta c_t = dt cos(omega dt / 2)         * f_mid_hat
/// Second-order accurate for smooth sources; exact when f_mid = 0.
inline void duhamel_kick(const RadialGrid& g, SpectralPair& s,
                         std::span<const double> f_mid_hat, double m, double dt) {
    for (int k = 0; k < g.size(); ++k) {
        const double omega = multiplier_omega_value(g.kappa(k), m);
        const double half = 0.5 * omega * dt;
        const double sinc = omega == 0.0 ? 0.5 * dt : std::sin(half) / omega;
        s.c[k] += dt * sinc * f_mid_hat[k];
        s.ct[k] += dt * std::cos(half) * f_mid_hat[k];
    }
}

inline FieldPair duhamel_step(const RadialGrid& g, const FieldPair& state,
                              const Field& f_mid, double m, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("duhamel_step: dt must be positive");
    if (f_mid.size() != state.value.size())
        throw std::invalid_argument("duhamel_step: grid mismatch");
    SpectralPair s = to_spectral(g, state);
    rotate_pair(g, s, m, dt);
    duhamel_kick(g, s, g.transform_forward(f_mid), m, dt);
    return from_spectral(g, s);
}

/// Source callback: native-representation source at given time.
using ForcingFn = std::function<Field(double t)>;

/// Evolve a forced linear component from t0 to t0 + nsteps*dt, with the source
/// sampled at step midpoints. The recorder sees the state after every step.
inline FieldPair evolve_forced(const RadialGrid& g, FieldPair state, double m,
                               double t0, double dt, int nsteps, const ForcingFn& forcing,
                               const std::function<void(double, const FieldPair&)>& record = {}) {
    SpectralPair s = to_spectral(g, state);
    double t = t0;
    for (int i = 0; i < nsteps; ++i) {
        rotate_pair(g, s, m, dt);
        if (forcing) {
            Field f = forcing(t + 0.5 * dt);
            duhamel_kick(g, s, g.transform_forward(f), m, dt);
        }
        t = t0 + (i + 1) * dt;
        if (record) record(t, from_spectral(g, s));
    }
    return from_spectral(g, s);
}

}  // namespace kgd
