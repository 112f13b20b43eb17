#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kgdecay/history.hpp"
#include "kgdecay/system.hpp"

namespace kgd {

struct ResidualPoint {
    double t;
    double residual;   // L2(R^3) norm of the defect field
    double reference;  // L2(R^3) norm of the field being decomposed
};

/// Decomposition of the u component into auxiliary linear solves driven by the
/// recorded v trajectory:
///   L chi0 = P0 r v^2   with zero data,
///   L chi5 = M1 r v^3   with data (w0, w1 - P0 r v0^2),
/// where L is the reduced operator d_tt - d_rr + m^2. Then w_u should equal
/// d_t chi0 + chi5 up to the time-discretization error of the original run.
///
/// Radial mode supports only the time component P0 here: the radial transport
/// term does not commute with the reduced operator's odd extension, so Pr must
/// vanish for the identity to close.
inline std::vector<ResidualPoint> divergence_decomposition_check(
    const RadialGrid& g, const History& h, const SystemParams& prm, double dt_aux = 0.0) {
    prm.validate();
    if (prm.Pr != 0.0)
        throw std::invalid_argument(
            "divergence_decomposition_check: radial mode requires Pr = 0");
    if (h.size() < 4)
        throw std::invalid_argument("divergence_decomposition_check: history too short");
    const double dtm = dt_max(g);
    double dt = dt_aux > 0.0 ? dt_aux : dtm;
    if (dt > dtm * (1.0 + 1e-12))
        throw std::invalid_argument("divergence_decomposition_check: dt exceeds 0.5/omega_max");
    const long steps_per = std::lround(h.stride() / dt);
    if (steps_per < 1 || std::abs(steps_per * dt - h.stride()) > 1e-9 * h.stride())
        throw std::invalid_argument(
            "divergence_decomposition_check: history stride must be a multiple of dt");

    const int n = g.size();
    auto source = [&](double coef, int power, double t) {
        // coef * r * v^power from the recorded trajectory (v = w_v / r).
        const Field wv = h.interp(Component::v, History::Slot::value, t);
        Field f(n);
        for (int j = 0; j < n; ++j) {
            const double v = wv[j] / g.node(j);
            f[j] = coef * g.node(j) * std::pow(v, power);
        }
        return f;
    };

    SpectralPair chi0{Field(n, 0.0), Field(n, 0.0)};
    SpectralPair chi5;
    {
        FieldPair d5 = h.pair(0, Component::u);
        const Field& wv0 = h.pair(0, Component::v).value;
        for (int j = 0; j < n; ++j) {
            const double v0 = wv0[j] / g.node(j);
            d5.dvalue[j] -= prm.P0 * g.node(j) * v0 * v0;
        }
        chi5 = to_spectral(g, d5);
    }

    std::vector<ResidualPoint> out;
    auto record = [&](std::size_t i) {
        const Field dchi0 = g.transform_inverse(chi0.ct);
        const Field c5 = g.transform_inverse(chi5.c);
        const Field& wu = h.pair(i, Component::u).value;
        Field defect(n);
        for (int j = 0; j < n; ++j) defect[j] = wu[j] - dchi0[j] - c5[j];
        out.push_back({h.at(i).t, l2_norm_3d(g, defect), l2_norm_3d(g, wu)});
    };
    record(0);

    for (std::size_t i = 1; i < h.size(); ++i) {
        const double t0 = h.t_begin() + (i - 1) * h.stride();
        for (long k = 0; k < steps_per; ++k) {
            const double tm = t0 + (k + 0.5) * dt;
            rotate_pair(g, chi0, prm.m, dt);
            rotate_pair(g, chi5, prm.m, dt);
            duhamel_kick(g, chi0, g.transform_forward(source(prm.P0, 2, tm)), prm.m, dt);
            duhamel_kick(g, chi5, g.transform_forward(source(prm.M1, 3, tm)), prm.m, dt);
        }
        record(i);
    }
    return out;
}

/// Residual of the combined-variable equation for the type-2 pair: with
/// ubar = u + v^2 and Q_v the configured cubic, the combination satisfies
///   d_tt ubar - Lap ubar + m^2 ubar = 2 v Q_v
/// exactly in the continuum. Time second derivatives use a five-point stencil
/// over history snapshots, spatial derivatives are spectral, so the series
/// measures the integrator's splitting error.
///
/// The stencil can only certify modes whose period is long compared with the
/// snapshot stride: its truncation error per mode grows like (omega * stride)^4,
/// so high-frequency tails of the data would swamp the splitting error with a
/// stride-dependent floor. omega_cutoff restricts the defect to modes with
/// sqrt(kappa^2 + m^2) <= omega_cutoff before taking the norm; pass infinity to
/// keep the full spectrum.
inline std::vector<ResidualPoint> type2_residual(
    const RadialGrid& g, const History& h, const SystemParams& prm,
    const NonlinearityPreset& preset,
    double omega_cutoff = std::numeric_limits<double>::infinity()) {
    prm.validate();
    if (preset.tag != PresetTag::type2_pair)
        throw std::invalid_argument("type2_residual: requires the type2_pair preset");
    if (h.size() < 5) throw std::invalid_argument("type2_residual: need >= 5 snapshots");
    if (!(omega_cutoff > 0.0))
        throw std::invalid_argument("type2_residual: omega_cutoff must be positive");

    const int n = g.size();
    const double hs = h.stride();
    auto wbar = [&](std::size_t i) {
        // Reduced combined variable r ubar = w_u + w_v^2 / r.
        const Field& wu = h.pair(i, Component::u).value;
        const Field& wv = h.pair(i, Component::v).value;
        Field f(n);
        for (int j = 0; j < n; ++j) f[j] = wu[j] + wv[j] * wv[j] / g.node(j);
        return f;
    };

    std::vector<ResidualPoint> out;
    for (std::size_t i = 2; i + 2 < h.size(); ++i) {
        const Field c2 = wbar(i - 2), c1 = wbar(i - 1), c0 = wbar(i), p1 = wbar(i + 1),
                    p2 = wbar(i + 2);
        // Fourth-order five-point second derivative in time.
        Field dtt(n);
        for (int j = 0; j < n; ++j)
            dtt[j] = (-c2[j] + 16.0 * c1[j] - 30.0 * c0[j] + 16.0 * p1[j] - p2[j]) /
                     (12.0 * hs * hs);
        // Spectral second derivative in r of the reduced variable.
        Field chat = g.transform_forward(c0);
        for (int k = 0; k < n; ++k) chat[k] *= -g.kappa(k) * g.kappa(k);
        const Field drr = g.transform_inverse(chat);

        const Field& wv = h.pair(i, Component::v).value;
        Field defect(n);
        for (int j = 0; j < n; ++j) {
            const double v = wv[j] / g.node(j);
            const double src = 2.0 * v * preset.type2_qv * v * v * v;  // 2 v Q_v
            defect[j] = dtt[j] - drr[j] + prm.m * prm.m * c0[j] - g.node(j) * src;
        }
        if (std::isfinite(omega_cutoff)) {
            Field dh = g.transform_forward(defect);
            for (int k = 0; k < n; ++k)
                if (std::sqrt(g.kappa(k) * g.kappa(k) + prm.m * prm.m) > omega_cutoff)
                    dh[k] = 0.0;
            defect = g.transform_inverse(dh);
        }
        out.push_back({h.at(i).t, l2_norm_3d(g, defect), l2_norm_3d(g, c0)});
    }
    return out;
}

}  // namespace kgd
