#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kgdecay/hyperboloidal.hpp"
#include "kgdecay/profiles.hpp"

using namespace kgd;

namespace {

/// History of an analytic reduced field w(t, r) at a fixed stride.
History analytic_history(const RadialGrid& g, double t0, double stride, int count,
                         auto&& w, auto&& wt) {
    History h(t0, stride);
    for (int i = 0; i < count; ++i) {
        const double t = t0 + i * stride;
        SystemState s;
        s.t = t;
        s.u.value.resize(g.size());
        s.u.dvalue.resize(g.size());
        for (int j = 0; j < g.size(); ++j) {
            s.u.value[j] = w(t, g.node(j));
            s.u.dvalue[j] = wt(t, g.node(j));
        }
        s.v = s.u;
        h.push(s);
    }
    return h;
}

}  // namespace

TEST_CASE("slice_time: hyperboloid geometry") {
    CHECK(slice_time(2.0, 0.0) == 2.0);
    CHECK_THAT(slice_time(2.0, 1.5), Catch::Matchers::WithinAbs(2.5, 1e-15));
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> rd(0.0, 20.0), sd(2.0, 8.0);
    for (int i = 0; i < 50; ++i) {
        const double s = sd(rng), r = rd(rng), t = slice_time(s, r);
        CHECK_THAT(t * t - r * r, Catch::Matchers::WithinAbs(s * s, 1e-12));
        CHECK(t >= s);
    }
    CHECK_THROWS(slice_time(1.5, 0.0));
}

TEST_CASE("make_slice: samples live strictly inside the cone") {
    RadialGrid g(30.0, 256);
    for (double s : {2.2, 3.0, 5.0, 7.0}) {
        const auto sl = make_slice(g, s);
        REQUIRE_FALSE(sl.nodes.empty());
        for (std::size_t i = 0; i < sl.nodes.size(); ++i) {
            CHECK(sl.r[i] < sl.t[i] - 1.0);
            CHECK(sl.t[i] > s);
            CHECK(sl.t[i] < s * s);
            CHECK(sl.r[i] < sl.t[i]);
        }
        // Radius cap (s^2 - 1) / 2: the next node is outside.
        const double cap = 0.5 * (s * s - 1.0);
        CHECK(sl.r.back() < cap);
        if (static_cast<std::size_t>(g.size()) > sl.nodes.size())
            CHECK(g.node(sl.nodes.size()) >= cap);
    }
}

TEST_CASE("frame_matrices: transition matrices invert in closed form") {
    const auto id = frame_matrices(5.0, 0.0, 0.0, 0.0);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            CHECK(id.Phi[a][b] == (a == b ? 1.0 : 0.0));
            CHECK(id.Psi[a][b] == (a == b ? 1.0 : 0.0));
        }
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> xd(-10.0, 10.0), td(0.5, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double t = td(rng);
        const auto f = frame_matrices(t, xd(rng), xd(rng), xd(rng));
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                double prod = 0.0;
                for (int k = 0; k < 4; ++k) prod += f.Phi[a][k] * f.Psi[k][b];
                CHECK_THAT(prod, Catch::Matchers::WithinAbs(a == b ? 1.0 : 0.0, 1e-14));
            }
        // First column carries x^a / t, lower triangle elsewhere empty.
        CHECK(f.Phi[1][0] * t == Catch::Approx(-f.Psi[1][0] * t));
        CHECK(f.Phi[0][1] == 0.0);
    }
    CHECK_THROWS(frame_matrices(0.0, 1.0, 0.0, 0.0));
}

TEST_CASE("semi-hyperboloidal derivatives: frame identities on analytic fields") {
    RadialGrid g(30.0, 128);
    const auto sl = make_slice(g, 4.0);
    const std::size_t n = sl.nodes.size();

    SECTION("zero field maps to zero") {
        HyperboloidSample sm{Field(n, 0.0), Field(n, 0.0), Field(n, 0.0)};
        const auto d = semi_hyperboloidal_derivatives(sl, sm);
        for (double x : d.under_r) CHECK(x == 0.0);
        for (double x : d.perp) CHECK(x == 0.0);
    }
    SECTION("static u = r^2: tangential derivative reduces to d_r") {
        HyperboloidSample sm;
        sm.value.resize(n);
        sm.dt.assign(n, 0.0);
        sm.dr.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            sm.value[i] = sl.r[i] * sl.r[i];
            sm.dr[i] = 2.0 * sl.r[i];
        }
        const auto d = semi_hyperboloidal_derivatives(sl, sm);
        for (std::size_t i = 0; i < n; ++i)
            CHECK_THAT(d.under_r[i], Catch::Matchers::WithinAbs(2.0 * sl.r[i], 1e-14));
    }
    SECTION("under_r equals the boost over t on u = sin(t) e^{-r^2}") {
        HyperboloidSample sm;
        sm.value.resize(n);
        sm.dt.resize(n);
        sm.dr.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = sl.t[i], r = sl.r[i], e = std::exp(-r * r);
            sm.value[i] = std::sin(t) * e;
            sm.dt[i] = std::cos(t) * e;
            sm.dr[i] = -2.0 * r * std::sin(t) * e;
        }
        const auto d = semi_hyperboloidal_derivatives(sl, sm);
        for (std::size_t i = 0; i < n; ++i) {
            const double boost = sl.r[i] * sm.dt[i] + sl.t[i] * sm.dr[i];  // L_r u
            CHECK_THAT(d.under_r[i], Catch::Matchers::WithinAbs(boost / sl.t[i], 1e-14));
        }
    }
    SECTION("boost-tangency: functions of t^2 - r^2 are annihilated") {
        HyperboloidSample sm;
        sm.value.resize(n);
        sm.dt.resize(n);
        sm.dr.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = sl.t[i], r = sl.r[i];
            const double q = std::exp(-(t * t - r * r) / 10.0);
            sm.value[i] = q;
            sm.dt[i] = -0.2 * t * q;
            sm.dr[i] = 0.2 * r * q;
        }
        const auto d = semi_hyperboloidal_derivatives(sl, sm);
        for (double x : d.under_r) CHECK_THAT(x, Catch::Matchers::WithinAbs(0.0, 1e-14));
    }
}

TEST_CASE("interpolate_onto_slice: exactness and rejection") {
    RadialGrid g(20.0, 128);
    const auto sl = make_slice(g, 3.0);  // t up to 5

    SECTION("static field restricts exactly") {
        auto h = analytic_history(
            g, 2.0, 0.5, 10, [](double, double r) { return r * std::exp(-r * r); },
            [](double, double) { return 0.0; });
        const auto sm = interpolate_onto_slice(g, h, sl, Component::u);
        for (std::size_t i = 0; i < sl.nodes.size(); ++i) {
            const double r = sl.r[i];
            CHECK_THAT(sm.value[i], Catch::Matchers::WithinAbs(std::exp(-r * r), 1e-13));
            CHECK_THAT(sm.dr[i],
                       Catch::Matchers::WithinAbs(-2.0 * r * std::exp(-r * r), 1e-9));
        }
    }
    SECTION("u = t is reproduced exactly by the cubic") {
        auto h = analytic_history(
            g, 2.0, 0.5, 10, [](double t, double r) { return r * t; },
            [](double, double r) { return r; });
        const auto sm = interpolate_onto_slice(g, h, sl, Component::u);
        for (std::size_t i = 0; i < sl.nodes.size(); ++i) {
            CHECK_THAT(sm.value[i], Catch::Matchers::WithinAbs(sl.t[i], 1e-8));
            CHECK_THAT(sm.dt[i], Catch::Matchers::WithinAbs(1.0, 1e-8));
        }
    }
    SECTION("slices outside the recorded window are rejected") {
        auto h = analytic_history(
            g, 2.0, 0.5, 5, [](double, double r) { return r; },
            [](double, double) { return 0.0; });  // window [2, 4]
        CHECK_THROWS(interpolate_onto_slice(g, h, make_slice(g, 4.0), Component::u));
    }
    SECTION("halving the stride improves analytic-field error by >= 8x") {
        auto w = [](double t, double r) { return std::sin(1.5 * t) * r * std::exp(-r * r); };
        auto wt = [](double t, double r) {
            return 1.5 * std::cos(1.5 * t) * r * std::exp(-r * r);
        };
        auto err = [&](double stride) {
            auto h = analytic_history(g, 2.0, stride, int(4.0 / stride) + 2, w, wt);
            const auto sm = interpolate_onto_slice(g, h, sl, Component::u);
            double e = 0.0;
            for (std::size_t i = 0; i < sl.nodes.size(); ++i)
                e = std::max(e, std::abs(sm.value[i] -
                                         std::sin(1.5 * sl.t[i]) * std::exp(-sl.r[i] * sl.r[i])));
            return e;
        };
        const double e1 = err(0.4), e2 = err(0.2);
        INFO("errors " << e1 << " " << e2);
        CHECK(e1 / e2 >= 8.0);
    }
}

TEST_CASE("hyperboloidal energy: three forms agree, mass term separates") {
    RadialGrid g(30.0, 256);
    const auto sl = make_slice(g, 4.5);
    const std::size_t n = sl.nodes.size();
    HyperboloidSample sm;
    sm.value.resize(n);
    sm.dt.resize(n);
    sm.dr.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = sl.t[i], r = sl.r[i], e = std::exp(-0.7 * r * r);
        sm.value[i] = std::sin(1.3 * t) * e;
        sm.dt[i] = 1.3 * std::cos(1.3 * t) * e;
        sm.dr[i] = -1.4 * r * std::sin(1.3 * t) * e;
    }
    SECTION("zero sample gives zero in every form") {
        HyperboloidSample z{Field(n, 0.0), Field(n, 0.0), Field(n, 0.0)};
        for (int form : {1, 2, 3})
            CHECK(hyperboloidal_energy(g, sl, z, 0.5, form) == 0.0);
    }
    SECTION("form equivalence on an analytic injection") {
        for (double m : {0.0, 0.5, 1.0}) {
            const double e1 = hyperboloidal_energy(g, sl, sm, m, 1);
            const double e2 = hyperboloidal_energy(g, sl, sm, m, 2);
            const double e3 = hyperboloidal_energy(g, sl, sm, m, 3);
            REQUIRE(e1 > 0.0);
            CHECK_THAT(e2 / e1, Catch::Matchers::WithinAbs(1.0, 1e-10));
            CHECK_THAT(e3 / e1, Catch::Matchers::WithinAbs(1.0, 1e-10));
        }
    }
    SECTION("mass term is exactly m^2 ||u||^2 on the slice") {
        const double m = 0.8;
        Field usq(n);
        for (std::size_t i = 0; i < n; ++i) usq[i] = sm.value[i] * sm.value[i];
        const double diff = hyperboloidal_energy(g, sl, sm, m, 1) -
                            hyperboloidal_energy(g, sl, sm, 0.0, 1);
        CHECK_THAT(diff, Catch::Matchers::WithinRel(m * m * slice_integral(g, sl, usq), 1e-12));
    }
    SECTION("bad form index rejected") {
        CHECK_THROWS(hyperboloidal_energy(g, sl, sm, 0.5, 4));
    }
}

TEST_CASE("hyperboloidal energy: conserved along the homogeneous flow") {
    RadialGrid g(30.0, 1024);
    SolveSpec spec;
    spec.params = {.m = 0.5};  // zero couplings: linear flow
    spec.data_u = reduced_data(g, "bump", "shell", 1.0);
    spec.data_v = reduced_data(g, "shell", "zero", 1.0);
    spec.t_max = 20.0;
    // Cubic time interpolation damps modes with omega * stride ~ 1; the
    // stride must resolve the data's full spectral band for 1e-4 energy flatness.
    spec.history_stride = 0.0125;
    const auto res = solve_system(g, spec);
    REQUIRE(res.status == RunStatus::completed);

    std::vector<double> svals;
    for (double s = 2.2; s <= 6.0 + 1e-9; s += 0.4) svals.push_back(s);
    double e0 = 0.0;
    for (double s : svals) {
        const auto sl = make_slice(g, s);
        const auto sm = interpolate_onto_slice(g, res.history, sl, Component::u);
        const double e = hyperboloidal_energy(g, sl, sm, 0.5, 1);
        if (e0 == 0.0) e0 = e;
        CHECK_THAT(e / e0, Catch::Matchers::WithinAbs(1.0, 1e-4));
    }
}

TEST_CASE("energy inequality: equality at zero source, inequality on model runs") {
    RadialGrid g(30.0, 512);
    std::vector<double> svals;
    for (double s = 2.2; s <= 6.0 + 1e-9; s += 0.4) svals.push_back(s);

    SECTION("zero source: slack is zero to interpolation tolerance") {
        SolveSpec spec;
        spec.params = {.m = 0.3};
        spec.data_u = reduced_data(g, "bump", "shell", 1.0);
        spec.data_v = reduced_data(g, "shell", "bump", 1.0);
        spec.t_max = 20.0;
        spec.history_stride = 0.025;
        const auto res = solve_system(g, spec);
        REQUIRE(res.status == RunStatus::completed);
        for (Component c : {Component::u, Component::v}) {
            const auto sl = energy_inequality_slack(g, res.history, spec.params, {}, c, svals);
            for (std::size_t i = 0; i < sl.s.size(); ++i)
                CHECK_THAT(sl.slack[i] / sl.base_sqrt, Catch::Matchers::WithinAbs(0.0, 1e-3));
        }
    }
    SECTION("small-data model run: slack never below -1e-3 relative") {
        SolveSpec spec;
        spec.params = {.M1 = 1.0, .N1 = 1.0, .N2 = 1.0, .N3 = 1.0, .P0 = 1.0, .Pr = 1.0,
                       .m = 0.3};
        spec.data_u = reduced_data(g, "bump", "zero", 1e-3);
        spec.data_v = reduced_data(g, "bump", "zero", 1e-3);
        spec.t_max = 20.0;
        spec.history_stride = 0.025;
        const auto res = solve_system(g, spec);
        REQUIRE(res.status == RunStatus::completed);
        for (Component c : {Component::u, Component::v}) {
            const auto sl =
                energy_inequality_slack(g, res.history, spec.params, {}, c, svals);
            for (std::size_t i = 0; i < sl.s.size(); ++i)
                CHECK(sl.slack[i] >= -1e-3 * sl.base_sqrt);
        }
    }
    SECTION("backward evolution reproduces the base slice energy") {
        SolveSpec spec;
        spec.params = {.m = 0.5};
        spec.data_u = reduced_data(g, "bump", "shell", 1.0);
        spec.data_v = reduced_data(g, "zero", "zero", 0.0);
        spec.t_max = 20.0;
        spec.history_stride = 0.025;
        const auto res = solve_system(g, spec);
        REQUIRE(res.status == RunStatus::completed);
        // Recover the data by running the exact flow backward from the end.
        const auto& last = res.history.back();
        const FieldPair back = evolve_homogeneous(g, last.u, 0.5, -(last.t - 2.0));
        for (int j = 0; j < g.size(); ++j)
            CHECK_THAT(back.value[j],
                       Catch::Matchers::WithinAbs(spec.data_u.value[j], 1e-10));
        // Identical data gives the identical base-slice energy.
        const auto sl = make_slice(g, 2.2);
        const auto sm = interpolate_onto_slice(g, res.history, sl, Component::u);
        const double e = hyperboloidal_energy(g, sl, sm, 0.5, 1);
        const auto sl0 = energy_inequality_slack(g, res.history, spec.params, {},
                                                 Component::u, {2.2, 2.4});
        CHECK_THAT(e, Catch::Matchers::WithinRel(sl0.energy_sqrt[0] * sl0.energy_sqrt[0], 1e-9));
    }
}
