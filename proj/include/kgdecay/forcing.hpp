#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kgdecay/growth.hpp"
#include "kgdecay/propagator.hpp"

namespace kgd {

/// Source for the growth trichotomy: each retained mode is driven in phase
/// with its own oscillation, f_hat_k(t) = A(t) cos(omega_k t) g_k, so the
/// Duhamel integral accumulates coherently as int A dt. A fixed spatial
/// profile would not do: off resonance the oscillatory integral stays
/// bounded regardless of how slowly A decays.
struct ResonantForcingSpec {
    double m = 0.0;          // mass of the driven component
    double q = 0.0;          // norm decay ||f(t)|| = amplitude * t^{q-1}
    double amplitude = 1.0;
    int modes = 24;          // low-frequency band carrying the source
    double validate(const RadialGrid& g) const {
        check_mass(m);
        if (!(q >= -1.0 && q <= 1.0)) throw std::invalid_argument("forcing: q outside [-1, 1]");
        if (modes < 1 || modes > g.size()) throw std::invalid_argument("forcing: bad mode count");
        return q;
    }
};

/// Physical-space source (native reduced representation) with the 3d L2 norm
/// pinned to amplitude * t^{q-1} at every sample time.
inline ForcingFn make_resonant_forcing(const RadialGrid& g, ResonantForcingSpec spec) {
    spec.validate(g);
    const int nm = spec.modes;
    std::vector<double> gk(nm), omega(nm);
    for (int k = 0; k < nm; ++k) {
        const double x = (k + 1) / (0.4 * nm);
        gk[k] = std::exp(-x * x);
        omega[k] = multiplier_omega_value(g.kappa(k), spec.m);
    }
    const double R = g.outer_radius();
    const int n = g.size();
    auto grid = g;  // shared plan handles; cheap copy
    return [=](double t) {
        Field fhat(n, 0.0);
        double s2 = 0.0;
        for (int k = 0; k < nm; ++k) {
            fhat[k] = std::cos(omega[k] * t) * gk[k];
            s2 += fhat[k] * fhat[k];
        }
        double nrm = std::sqrt(4.0 * std::numbers::pi * 0.5 * R * s2);
        if (nrm < 1e-12) nrm = 1e-12;  // all-node phase coincidence guard
        const double scale = spec.amplitude * std::pow(t, spec.q - 1.0) / nrm;
        for (int k = 0; k < nm; ++k) fhat[k] *= scale;
        return grid.transform_inverse(fhat);
    };
}

/// Drive zero data with the resonant source and record ||u(t)||_{L2(R^3)}.
inline NormSeries forced_growth_series(const RadialGrid& g, const ResonantForcingSpec& spec,
                                       double t0, double t_max, double dt) {
    if (!(dt > 0.0 && t_max > t0)) throw std::invalid_argument("forced_growth_series: bad window");
    const int nsteps = static_cast<int>(std::ceil((t_max - t0) / dt));
    FieldPair state{Field(g.size(), 0.0), Field(g.size(), 0.0)};
    NormSeries out;
    out.reserve(nsteps + 1);
    auto fn = make_resonant_forcing(g, spec);
    evolve_forced(g, state, spec.m, t0, dt, nsteps, fn,
                  [&](double t, const FieldPair& s) {
                      out.push_back({t, std::sqrt(g.l2sq_3d(s.value))});
                  });
    return out;
}

}  // namespace kgd
