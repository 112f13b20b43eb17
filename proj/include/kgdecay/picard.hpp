#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kgdecay/history.hpp"
#include "kgdecay/system.hpp"
#include "kgdecay/xnorm.hpp"

namespace kgd {

/// Configuration of the fixed-point iteration of the solution map T: a
/// candidate pair is sent to the solution of the *linear* equations whose
/// sources are built from the candidate.
struct PicardSpec {
    SystemParams params;
    NonlinearityPreset preset;
    FieldPair data_u, data_v;  // reduced data at t0
    double t0 = 2.0;
    double t_max = 50.0;
    double dt = 0.0;  // 0: use dt_max of the grid
    double history_stride = 0.1;
    /// Norm options for the iterate distances d_n.
    XNormOptions norm;
};

struct PicardResult {
    /// Iterates 1..n at the output stride; the first is the homogeneous
    /// linear solution.
    std::vector<History> iterates;
    /// d_n = || iterate(n+1) - iterate(n) ||_X for n = 1 .. size-1.
    std::vector<double> distances;
    /// Set when d_n increased three times in a row, or when an iterate
    /// overflowed before reaching t_max (data too large).
    bool diverged = false;
};

namespace detail {

/// Per-step spectral states of one iterate, kept so the next application of
/// the map can read the candidate exactly where the kicks need it. Keeping
/// spectral coefficients (no physical round-trips, no time interpolation)
/// makes the fixed point of the discrete map coincide bit-for-bit with the
/// direct solver's trajectory.
struct StepTrajectory {
    std::vector<SpectralPair> u, v;  // states at t0 + i dt, i = 0 .. nsteps-1
};

/// One application of the solution map: evolve the linear pair (masses m, 1)
/// with Strang-placed kicks whose sources come from the previous iterate,
/// half-rotated to the step midpoint exactly as the direct solver does with
/// its own state. prev == nullptr gives the homogeneous flow.
inline History picard_map(const RadialGrid& g, const PicardSpec& spec,
                          const StepTrajectory* prev, StepTrajectory& out) {
    const double dtm = dt_max(g);
    const double dt = spec.dt > 0.0 ? spec.dt : dtm;
    if (dt > dtm * (1.0 + 1e-12))
        throw std::invalid_argument("picard_map: dt exceeds 0.5/omega_max");
    const long hist_every = std::max(1L, std::lround(spec.history_stride / dt));
    long nsteps = std::lround((spec.t_max - spec.t0) / dt);
    nsteps = ((nsteps + hist_every - 1) / hist_every) * hist_every;
    if (prev && prev->u.size() != static_cast<std::size_t>(nsteps))
        throw std::invalid_argument("picard_map: iterate step counts differ");

    SpectralPair su = to_spectral(g, spec.data_u);
    SpectralPair sv = to_spectral(g, spec.data_v);
    out.u.clear();
    out.v.clear();
    out.u.reserve(nsteps);
    out.v.reserve(nsteps);

    History h(spec.t0, hist_every * dt);
    auto push = [&](double t) {
        SystemState st;
        st.t = t;
        st.u = from_spectral(g, su);
        st.v = from_spectral(g, sv);
        h.push(std::move(st));
    };
    push(spec.t0);

    for (long i = 0; i < nsteps; ++i) {
        out.u.push_back(su);
        out.v.push_back(sv);
        rotate_pair(g, su, spec.params.m, 0.5 * dt);
        rotate_pair(g, sv, 1.0, 0.5 * dt);
        if (prev) {
            SpectralSystem mid{prev->u[i], prev->v[i], spec.t0 + (i + 0.5) * dt};
            rotate_pair(g, mid.u, spec.params.m, 0.5 * dt);
            rotate_pair(g, mid.v, 1.0, 0.5 * dt);
            const auto [fuh, fvh] =
                kick_sources(g, mid, spec.params, spec.preset, dt, nullptr);
            for (int k = 0; k < g.size(); ++k) {
                su.ct[k] += dt * fuh[k];
                sv.ct[k] += dt * fvh[k];
            }
        }
        rotate_pair(g, su, spec.params.m, 0.5 * dt);
        rotate_pair(g, sv, 1.0, 0.5 * dt);
        if ((i + 1) % hist_every == 0) push(spec.t0 + (i + 1) * dt);
    }
    return h;
}

}  // namespace detail

/// Run n_iters applications of the solution map starting from the homogeneous
/// linear solution, measuring successive distances in the discrete X-norm.
inline PicardResult picard_iterate(const RadialGrid& g, const PicardSpec& spec, int n_iters) {
    spec.params.validate();
    if (n_iters < 2) throw std::invalid_argument("picard_iterate: need n_iters >= 2");
    if (!(spec.t_max > spec.t0))
        throw std::invalid_argument("picard_iterate: t_max <= t0");

    PicardResult res;
    detail::StepTrajectory prev, next;
    res.iterates.push_back(detail::picard_map(g, spec, nullptr, prev));
    int rising = 0;
    for (int n = 2; n <= n_iters; ++n) {
        History h;
        try {
            h = detail::picard_map(g, spec, &prev, next);
        } catch (const std::invalid_argument&) {
            // Overflow to non-finite values inside a transform: the map left
            // every ball the contraction argument works on.
            res.diverged = true;
            return res;
        }
        const double d = discrete_x_norm(g, History::difference(h, res.iterates.back()),
                                         spec.params.m, spec.norm);
        if (!res.distances.empty() && d > res.distances.back()) {
            if (++rising >= 3) res.diverged = true;
        } else {
            rising = 0;
        }
        res.distances.push_back(d);
        res.iterates.push_back(std::move(h));
        std::swap(prev, next);
    }
    return res;
}

/// Largest physical sup-norm gap between two histories on a shared time grid.
inline double history_sup_distance(const RadialGrid& g, const History& a, const History& b) {
    const History d = History::difference(a, b);
    double worst = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (const FieldPair* p : {&d.at(i).u, &d.at(i).v})
            worst = std::max(worst, sup_norm_u(g, p->value));
    return worst;
}

}  // namespace kgd
