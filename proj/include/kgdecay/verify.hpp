#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgdecay/hyperboloidal.hpp"
#include "kgdecay/inequalities.hpp"
#include "kgdecay/picard.hpp"
#include "kgdecay/profiles.hpp"
#include "kgdecay/structural.hpp"
#include "kgdecay/symbolic_field.hpp"

namespace kgd {

/// One named measurement against its bound. All checks are phrased so that
/// measured <= bound means pass.
struct CheckResult {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool passed = false;
};

struct SuiteResult {
    std::string name;
    std::vector<CheckResult> checks;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

inline const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> names{
        "transforms", "propagator", "energy-forms", "commutators",
        "inequalities", "picard", "decomposition", "type2"};
    return names;
}

namespace detail {

inline void add_check(SuiteResult& s, const std::string& name, double measured,
                      double bound) {
    s.checks.push_back({name, measured, bound, measured <= bound});
}

inline double max_abs_diff(const Field& a, const Field& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        worst = std::max(worst, std::abs(a[j] - b[j]));
    return worst;
}

inline SuiteResult suite_transforms() {
    SuiteResult s{"transforms", {}};
    RadialGrid g(20.0, 256);
    const Field w = reduced_profile(g, "bump", 1.0);
    const Field w2 = reduced_profile(g, "shell", 1.0);

    const Field round = g.transform_inverse(g.transform_forward(w));
    add_check(s, "forward/inverse round trip", max_abs_diff(round, w), 1e-12);

    Field lin(g.size());
    for (int j = 0; j < g.size(); ++j) lin[j] = 2.0 * w[j] - 3.0 * w2[j];
    const Field fa = g.transform_forward(lin);
    const Field fb1 = g.transform_forward(w), fb2 = g.transform_forward(w2);
    Field fb(g.size());
    for (int j = 0; j < g.size(); ++j) fb[j] = 2.0 * fb1[j] - 3.0 * fb2[j];
    add_check(s, "transform linearity", max_abs_diff(fa, fb), 1e-12);

    const double kappa = g.kappa(3);
    Field mode(g.size());
    for (int j = 0; j < g.size(); ++j) mode[j] = std::sin(kappa * g.node(j));
    add_check(s, "origin value of a pure mode", std::abs(g.origin_value(mode) - kappa),
              1e-10);
    return s;
}

inline SuiteResult suite_propagator() {
    SuiteResult s{"propagator", {}};
    RadialGrid g(20.0, 256);
    const double dt = dt_max(g);

    {
        SpectralPair p = to_spectral(g, reduced_data(g, "bump", "shell", 1.0));
        auto energy = [&](const SpectralPair& sp) {
            return flat_energy_spectral(
                g, {g.transform_inverse(sp.c), g.transform_inverse(sp.ct)}, 0.5);
        };
        const double e0 = energy(p);
        double drift = 0.0;
        for (int i = 0; i < 10000; ++i) {
            rotate_pair(g, p, 0.5, dt);
            if (i % 100 == 99) drift = std::max(drift, std::abs(energy(p) - e0));
        }
        add_check(s, "flat energy drift over 1e4 steps", drift / e0, 1e-10);
    }
    {
        SpectralPair p = to_spectral(g, reduced_data(g, "bump", "shell", 1.0));
        const SpectralPair p0 = p;
        rotate_pair(g, p, 0.5, dt);
        rotate_pair(g, p, 0.5, -dt);
        add_check(s, "reversibility",
                  std::max(max_abs_diff(p.c, p0.c), max_abs_diff(p.ct, p0.ct)), 1e-12);
        SpectralPair a = p0, b = p0;
        rotate_pair(g, a, 0.5, dt);
        rotate_pair(g, a, 0.5, dt);
        rotate_pair(g, b, 0.5, 2.0 * dt);
        add_check(s, "group property",
                  std::max(max_abs_diff(a.c, b.c), max_abs_diff(a.ct, b.ct)), 1e-12);
    }
    {
        // Massless single mode against the closed-form sup norm.
        const int k = 2;
        const double kappa = g.kappa(k);
        SolveSpec spec;
        Field w0(g.size(), 0.0), w1(g.size());
        for (int j = 0; j < g.size(); ++j) w1[j] = std::sin(kappa * g.node(j));
        spec.data_u = {w0, w1};
        spec.data_v = reduced_data(g, "zero", "zero", 0.0);
        spec.t_max = 10.0;
        const auto run = solve_system(g, spec);
        double worst = 0.0;
        for (const auto& p : run.probes)
            worst = std::max(
                worst, std::abs(p.sup_u - std::abs(std::sin(kappa * (p.t - spec.t0)))));
        add_check(s, "massless closed-form agreement", worst, 1e-8);
    }
    return s;
}

inline SuiteResult suite_energy_forms() {
    SuiteResult s{"energy-forms", {}};
    {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> xd(-3.0, 3.0), td(1.0, 6.0);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const auto f = frame_matrices(td(rng), xd(rng), xd(rng), xd(rng));
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    double sum = 0.0;
                    for (int c = 0; c < 4; ++c) sum += f.Phi[a][c] * f.Psi[c][b];
                    worst = std::max(worst, std::abs(sum - (a == b ? 1.0 : 0.0)));
                }
        }
        add_check(s, "transition matrices invert", worst, 1e-14);
    }
    RadialGrid g(12.0, 128);
    SolveSpec spec;
    spec.params = {.m = 1.0};
    spec.data_u = reduced_data(g, "bump", "shell", 1.0);
    spec.data_v = reduced_data(g, "zero", "zero", 0.0);
    spec.t_max = 14.0;
    spec.history_stride = 0.025;
    const auto run = solve_system(g, spec);
    const auto sl = make_slice(g, 3.0);
    const auto sm = interpolate_onto_slice(g, run.history, sl, Component::u);
    const double e1 = hyperboloidal_energy(g, sl, sm, 1.0, 1);
    const double e2 = hyperboloidal_energy(g, sl, sm, 1.0, 2);
    const double e3 = hyperboloidal_energy(g, sl, sm, 1.0, 3);
    add_check(s, "energy form 1 vs 2", std::abs(e1 - e2) / e1, 1e-3);
    add_check(s, "energy form 1 vs 3", std::abs(e1 - e3) / e1, 1e-3);

    const auto slack =
        energy_inequality_slack(g, run.history, spec.params, {}, Component::u, {2.2, 2.6});
    double worst = 0.0;
    for (double v : slack.slack) worst = std::max(worst, -v / slack.base_sqrt);
    add_check(s, "energy inequality slack", worst, 1e-3);
    return s;
}

inline SuiteResult suite_commutators() {
    SuiteResult s{"commutators", {}};
    // (x1 x2 + t) exp(-|x|^2 / 4): smooth, non-radial, polynomially weighted.
    SymField f;
    f.p = Poly4::coord(1) * Poly4::coord(2) + Poly4::coord(0);
    Poly4 q;
    for (int a = 1; a < 4; ++a) q += Poly4::coord(a) * Poly4::coord(a);
    f.g = q * -0.25;

    std::mt19937 rng(23);
    std::uniform_real_distribution<double> td(1.0, 5.0), xd(-2.0, 2.0);
    std::vector<std::array<double, 4>> pts;
    for (int i = 0; i < 16; ++i) pts.push_back({td(rng), xd(rng), xd(rng), xd(rng)});
    auto sup = [&](const SymField& r) {
        double worst = 0.0;
        for (const auto& x : pts) worst = std::max(worst, std::abs(r.eval(x)));
        return worst;
    };
    auto comm = [](const SymOp& a, const SymOp& b, const SymField& u) {
        SymField lhs = sym_apply(a, sym_apply(b, u));
        const SymField rhs = sym_apply(b, sym_apply(a, u));
        lhs.p = lhs.p - rhs.p;
        return lhs;
    };

    const SymOp dt{SymOp::Kind::partial, 0};
    const SymOp d1{SymOp::Kind::partial, 1};
    const SymOp L1{SymOp::Kind::boost, 1};
    const SymOp L2{SymOp::Kind::boost, 2};
    const SymOp O12{SymOp::Kind::rotation, 1, 2};
    {
        SymField r = comm(dt, L1, f);
        r.p = r.p - sym_apply(d1, f).p;
        add_check(s, "[d_t, L_1] = d_1", sup(r), 1e-10);
    }
    {
        SymField r = comm(L1, L2, f);
        r.p = r.p - sym_apply(O12, f).p;
        add_check(s, "[L_1, L_2] = Omega_12", sup(r), 1e-10);
    }
    for (double m : {0.0, 0.5, 1.0}) {
        double worst = 0.0;
        for (const SymOp& op : {L1, L2, O12}) {
            SymField lhs = sym_apply(op, sym_kg_operator(f, m));
            const SymField rhs = sym_kg_operator(sym_apply(op, f), m);
            lhs.p = lhs.p - rhs.p;
            worst = std::max(worst, sup(lhs));
        }
        add_check(s, "[Gamma, -Box + m^2] = 0, m = " + std::to_string(m), worst, 1e-10);
    }
    return s;
}

inline SuiteResult suite_inequalities() {
    SuiteResult s{"inequalities", {}};
    RadialGrid g(26.0, 256);
    {
        double worst = 0.0;
        for (const char* name : {"bump", "shell", "bump2", "wide"})
            worst = std::max(worst, hardy_ratio(g, reduced_profile(g, name, 1.0)));
        add_check(s, "Hardy ratio on the bump battery", worst, 2.1);
    }
    {
        SolveSpec spec;
        spec.data_u = reduced_data(g, "bump", "shell", 1.0);
        spec.data_v = reduced_data(g, "zero", "zero", 0.0);
        spec.t_max = 14.0;
        spec.history_stride = 0.05;
        const auto run = solve_system(g, spec);
        add_check(s, "pointwise/derivative-norm ratio bounded",
                  ks_ratio(g, run.history, Component::u, 6.0), 10.0);
    }
    return s;
}

inline SuiteResult suite_picard() {
    SuiteResult s{"picard", {}};
    RadialGrid g(20.0, 192);
    PicardSpec spec;
    spec.params = {.M1 = 1.0, .N1 = 1.0, .N2 = 1.0, .N3 = 1.0, .P0 = 0.5, .m = 1.0};
    spec.data_u = reduced_data(g, "bump", "shell", 1e-3);
    spec.data_v = reduced_data(g, "shell", "bump", 1e-3);
    spec.t_max = 15.0;
    spec.dt = 0.0125;
    const auto res = picard_iterate(g, spec, 5);
    double worst_ratio = 0.0;
    for (std::size_t n = 1; n < res.distances.size(); ++n)
        if (res.distances[n - 1] > 0.0)
            worst_ratio = std::max(worst_ratio, res.distances[n] / res.distances[n - 1]);
    add_check(s, "iteration distance ratio", worst_ratio, 0.5);

    SolveSpec direct;
    direct.params = spec.params;
    direct.data_u = spec.data_u;
    direct.data_v = spec.data_v;
    direct.t_max = spec.t_max;
    direct.dt = spec.dt;
    direct.history_stride = spec.history_stride;
    const auto run = solve_system(g, direct);
    const double gap = history_sup_distance(g, res.iterates.back(), run.history);
    // Once the iteration hits the roundoff cycle, d_last underflows below the
    // representable gap; allow a few hundred ulps of the solution scale.
    double scale = 0.0;
    for (std::size_t i = 0; i < run.history.size(); ++i)
        scale = std::max(scale, sup_norm_u(g, run.history.pair(i, Component::u).value));
    add_check(s, "limit matches the direct solve", gap,
              10.0 * res.distances.back() + 256.0 * 2.22e-16 * scale);
    return s;
}

inline SuiteResult suite_decomposition() {
    SuiteResult s{"decomposition", {}};
    RadialGrid g(18.0, 256);
    SolveSpec spec;
    spec.params = {.M1 = 1.0, .N1 = 1.0, .N3 = 1.0, .P0 = 0.5, .m = 0.5};
    spec.data_u = reduced_data(g, "bump", "shell", 1e-3);
    spec.data_v = reduced_data(g, "shell", "bump", 1e-3);
    spec.t_max = 12.0;
    spec.dt = 1e-2;
    spec.history_stride = 0.05;
    const auto run = solve_system(g, spec);
    const auto series = divergence_decomposition_check(g, run.history, spec.params, spec.dt);
    double ref = 0.0, res = 0.0;
    for (const auto& p : series) {
        ref = std::max(ref, p.reference);
        res = std::max(res, p.residual);
    }
    add_check(s, "decomposition residual at dt = 1e-2", res / ref, 1e-4);
    return s;
}

inline SuiteResult suite_type2() {
    SuiteResult s{"type2", {}};
    RadialGrid g(18.0, 256);
    SolveSpec spec;
    spec.params = {.m = 0.5};
    spec.preset = {.tag = PresetTag::type2_pair, .type2_qv = 1.0};
    spec.data_u = reduced_data(g, "broad", "broad_shell", 1e-3);
    spec.data_v = reduced_data(g, "broad_shell", "broad", 1e-3);
    spec.t_max = 12.0;
    spec.dt = 1e-2;
    spec.history_stride = spec.dt;
    const auto run = solve_system(g, spec);
    const auto series = type2_residual(g, run.history, spec.params, spec.preset, 2.0);
    double ref = 0.0, res = 0.0;
    for (const auto& p : series) {
        ref = std::max(ref, p.reference);
        res = std::max(res, p.residual);
    }
    add_check(s, "combined-variable residual at dt = 1e-2", res / ref, 1e-3);
    return s;
}

}  // namespace detail

inline SuiteResult run_suite(const std::string& name) {
    if (name == "transforms") return detail::suite_transforms();
    if (name == "propagator") return detail::suite_propagator();
    if (name == "energy-forms") return detail::suite_energy_forms();
    if (name == "commutators") return detail::suite_commutators();
    if (name == "inequalities") return detail::suite_inequalities();
    if (name == "picard") return detail::suite_picard();
    if (name == "decomposition") return detail::suite_decomposition();
    if (name == "type2") return detail::suite_type2();
    throw std::invalid_argument("verify: unknown suite '" + name + "'");
}

}  // namespace kgd
