#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "kgdecay/decay.hpp"
#include "kgdecay/forcing.hpp"
#include "kgdecay/growth.hpp"

using namespace kgd;

namespace {

NormSeries sample(double t0, double t1, std::size_t n, auto&& f) {
    NormSeries s;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + (t1 - t0) * i / double(n - 1);
        s.push_back({t, f(t)});
    }
    return s;
}

}  // namespace

TEST_CASE("growth classifier: logarithmic series recovers constants") {
    auto s = sample(2.0, 400.0, 400, [](double t) { return 3.0 + 2.0 * std::log(t); });
    auto c = l2_growth_classify(s);
    REQUIRE(c.branch == GrowthBranch::grows_like_log);
    CHECK(c.q == 0.0);
    CHECK_THAT(c.c0, Catch::Matchers::WithinRel(3.0, 0.05));
    CHECK_THAT(c.cf, Catch::Matchers::WithinRel(2.0, 0.05));
}

TEST_CASE("growth classifier: power series recovers exponent") {
    auto s = sample(2.0, 400.0, 400, [](double t) { return 1.0 + 0.5 * std::pow(t, 0.35); });
    auto c = l2_growth_classify(s);
    REQUIRE(c.branch == GrowthBranch::grows_like_t_pow_q);
    CHECK_THAT(c.q, Catch::Matchers::WithinAbs(0.35, 0.02));
    CHECK_THAT(c.cf, Catch::Matchers::WithinRel(0.5, 0.1));
}

TEST_CASE("growth classifier: constant series is bounded") {
    auto s = sample(2.0, 400.0, 400, [](double) { return 7.25; });
    auto c = l2_growth_classify(s);
    REQUIRE(c.branch == GrowthBranch::bounded);
    CHECK_THAT(c.c0, Catch::Matchers::WithinRel(7.25, 0.01));
}

TEST_CASE("growth classifier: decaying-to-limit series is bounded") {
    auto s = sample(2.0, 500.0, 500, [](double t) { return 4.0 + 3.0 * std::pow(t, -0.5); });
    auto c = l2_growth_classify(s);
    REQUIRE(c.branch == GrowthBranch::bounded);
    CHECK_THAT(c.c0, Catch::Matchers::WithinRel(4.0, 0.05));
}

TEST_CASE("growth classifier: short window is inconclusive") {
    auto s = sample(2.0, 15.0, 100, [](double t) { return 3.0 + 2.0 * std::log(t); });
    CHECK(l2_growth_classify(s).branch == GrowthBranch::inconclusive);
    CHECK(l2_growth_classify(NormSeries{}).branch == GrowthBranch::inconclusive);
}

TEST_CASE("growth classifier: resonantly forced field realizes the trichotomy") {
    RadialGrid g(30.0, 256);
    ResonantForcingSpec spec;
    spec.m = 0.4;

    SECTION("source norm t^{q-1}, q = 0.3: power branch with matching exponent") {
        spec.q = 0.3;
        auto series = forced_growth_series(g, spec, 2.0, 400.0, 0.1);
        auto c = l2_growth_classify(series);
        REQUIRE(c.branch == GrowthBranch::grows_like_t_pow_q);
        CHECK_THAT(c.q, Catch::Matchers::WithinAbs(0.3, 0.1));
    }
    SECTION("critical source norm t^{-1}: logarithmic branch") {
        spec.q = 0.0;
        auto series = forced_growth_series(g, spec, 2.0, 400.0, 0.1);
        CHECK(l2_growth_classify(series).branch == GrowthBranch::grows_like_log);
    }
    SECTION("integrable source norm t^{-1.8}: bounded branch") {
        spec.q = -0.8;
        auto series = forced_growth_series(g, spec, 2.0, 400.0, 0.1);
        CHECK(l2_growth_classify(series).branch == GrowthBranch::bounded);
    }
    SECTION("forcing norm is pinned at every sample time") {
        spec.q = 0.3;
        auto fn = make_resonant_forcing(g, spec);
        for (double t : {2.0, 17.3, 250.0}) {
            Field f = fn(t);
            CHECK_THAT(std::sqrt(g.l2sq_3d(f)),
                       Catch::Matchers::WithinRel(std::pow(t, -0.7), 1e-9));
        }
    }
}

TEST_CASE("envelope: running max over window covers oscillation troughs") {
    const double m = 0.5;
    auto s = sample(2.0, 200.0, 4000, [m](double t) {
        return std::pow(t, -1.5) * std::abs(std::cos(m * t));
    });
    auto e = envelope(s, envelope_window(m));
    // The envelope should hug the t^{-3/2} curve, not the oscillation.
    for (const auto& p : e) {
        if (p.t < 30.0 || p.t > 170.0) continue;
        const double ref = std::pow(p.t - 0.5 * envelope_window(m), -1.5);
        CHECK(p.value <= ref * 1.001);
        CHECK(p.value >= std::pow(p.t + 0.5 * envelope_window(m), -1.5) * 0.95);
    }
    SECTION("massless: no window, envelope is the series") {
        auto e0 = envelope(s, envelope_window(0.0));
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(e0[i].value == s[i].value);
    }
}

TEST_CASE("fit_exponent: oscillating Klein-Gordon-like decay") {
    const double m = 0.6;
    auto s = sample(2.0, 500.0, 20000, [m](double t) {
        return 2.0 * std::pow(t, -1.5) * std::abs(std::cos(m * t + 0.3));
    });
    auto f = fit_exponent(s, m, 20.0, 480.0);
    REQUIRE(f.ok);
    CHECK_THAT(f.p, Catch::Matchers::WithinAbs(-1.5, 0.1));

    SECTION("pure power recovers exactly") {
        auto p = sample(2.0, 500.0, 2000, [](double t) { return 3.0 * std::pow(t, -1.0); });
        auto g = fit_exponent(p, 0.0, 5.0, 500.0);
        REQUIRE(g.ok);
        CHECK_THAT(g.p, Catch::Matchers::WithinAbs(-1.0, 1e-6));
        CHECK(g.width < 1e-6);
    }
    SECTION("sub-decade window refuses to fit") {
        CHECK_FALSE(fit_exponent(s, m, 100.0, 400.0).ok);
    }
}

TEST_CASE("unified_constant: saturated by the model envelope") {
    // A(t) = 1 / (t + m t^{3/2}) makes the constant exactly 1.
    for (double m : {0.0, 0.3, 1.0}) {
        auto s = sample(2.0, 300.0, 600, [m](double t) {
            return 1.0 / (t + m * t * std::sqrt(t));
        });
        CHECK_THAT(unified_constant(s, m), Catch::Matchers::WithinRel(1.0, 1e-12));
    }
    CHECK_THROWS(unified_constant(NormSeries{}, 0.5));
}

TEST_CASE("v_constant: sup of A(t) t^{3/2 - delta}") {
    auto s = sample(2.0, 300.0, 600, [](double t) { return std::pow(t, -1.45); });
    CHECK_THAT(v_constant(s, 0.05), Catch::Matchers::WithinRel(1.0, 1e-12));
}

TEST_CASE("crossover_time: synthetic slope break at t = m^-2") {
    const double m = 0.2;
    const double ts = 1.0 / (m * m);  // 25
    auto shape = [ts](double t) {
        // Slope -1 before ts, -1.5 after, continuous at ts.
        return t < ts ? 1.0 / t : std::sqrt(ts) / std::pow(t, 1.5);
    };
    auto s = sample(2.0, 400.0, 2000, shape);
    auto c = crossover_time(s, m);
    REQUIRE(c.status == CrossoverStatus::detected);
    CHECK_THAT(c.t_star, Catch::Matchers::WithinRel(ts, 0.4));
    CHECK(c.slope_early > -1.25);
    CHECK(c.slope_late < -1.25);

    SECTION("pure wave decay never crosses") {
        auto w = sample(2.0, 400.0, 2000, [](double t) { return 1.0 / t; });
        CHECK(crossover_time(w, m).status == CrossoverStatus::not_reached);
    }
    SECTION("heavy mass is immediately in the fast regime") {
        auto h = sample(2.0, 400.0, 2000, [](double t) { return std::pow(t, -1.5); });
        auto r = crossover_time(h, 1.0);
        CHECK(r.status == CrossoverStatus::immediate);
    }
    SECTION("mass zero rejected") {
        CHECK_THROWS(crossover_time(s, 0.0));
    }
}
