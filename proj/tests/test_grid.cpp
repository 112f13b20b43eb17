#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "kgdecay/grid.hpp"
#include "kgdecay/profiles.hpp"

using namespace kgd;
using std::numbers::pi;

namespace {

Field random_field(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    Field f(n);
    for (double& v : f) v = dist(rng);
    return f;
}

}  // namespace

TEST_CASE("radial transform of a single sine mode is one coefficient") {
    RadialGrid g(3.0, 64);
    Field w(g.size());
    for (int j = 0; j < g.size(); ++j) w[j] = std::sin(pi * g.node(j) / g.outer_radius());
    Field c = g.transform_forward(w);
    CHECK(c[0] == Catch::Approx(1.0).margin(1e-13));
    for (int k = 1; k < g.size(); ++k) CHECK(std::abs(c[k]) < 1e-12);
}

TEST_CASE("zero field transforms to zero coefficients") {
    RadialGrid g(2.0, 32);
    Field c = g.transform_forward(Field(32, 0.0));
    for (double v : c) CHECK(v == 0.0);
}

TEST_CASE("discrete Plancherel and round trip") {
    RadialGrid g(5.0, 129);
    Field w = random_field(g.size(), 12345);
    Field c = g.transform_forward(w);

    // h sum w^2 = (R/2) sum c^2 under the chosen normalization.
    double lhs = g.l2sq_reduced(w);
    double rhs = 0.0;
    for (double v : c) rhs += v * v;
    rhs *= 0.5 * g.outer_radius();
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));

    Field back = g.transform_inverse(c);
    for (int j = 0; j < g.size(); ++j)
        CHECK(back[j] == Catch::Approx(w[j]).margin(1e-12 * (1.0 + std::abs(w[j]))));
}

TEST_CASE("transform rejects non-finite input") {
    RadialGrid g(2.0, 16);
    Field w(16, 0.0);
    w[3] = std::nan("");
    CHECK_THROWS_AS(g.transform_forward(w), std::invalid_argument);
}

TEST_CASE("grid invariants are enforced") {
    CHECK_THROWS_AS(RadialGrid(-1.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(RadialGrid(1.0, 4), std::invalid_argument);
    RadialGrid g(2.0, 16);
    CHECK(g.node(0) > 0.0);
    CHECK(g.node(g.size() - 1) < g.outer_radius());
    for (int j = 1; j < g.size(); ++j) CHECK(g.node(j) > g.node(j - 1));
}

TEST_CASE("multiplier_omega") {
    RadialGrid g(pi, 32);

    SECTION("m = 1 at kappa -> 0 tends to 1; formula value at k = 3") {
        CHECK(multiplier_omega_value(0.0, 1.0) == 1.0);
        auto om = multiplier_omega(g, 0.5);
        // R = pi so kappa_k = k+1; mode index 2 has kappa = 3.
        CHECK(om[2] == Catch::Approx(std::sqrt(9.0 + 0.25)).epsilon(1e-14));
    }
    SECTION("massless case reduces to kappa") {
        auto om = multiplier_omega(g, 0.0);
        for (int k = 0; k < g.size(); ++k) CHECK(om[k] == g.kappa(k));
    }
    SECTION("mass outside [0,1] rejected") {
        CHECK_THROWS_AS(multiplier_omega(g, -0.1), std::invalid_argument);
        CHECK_THROWS_AS(multiplier_omega(g, 1.5), std::invalid_argument);
    }
    SECTION("monotone in m, strictly; concavity bound") {
        auto om1 = multiplier_omega(g, 0.3);
        auto om2 = multiplier_omega(g, 0.7);
        for (int k = 0; k < g.size(); ++k) {
            CHECK(om1[k] < om2[k]);
            CHECK(om1[k] >= g.kappa(k));
            CHECK(om1[k] - g.kappa(k) <= 0.09 / (2.0 * g.kappa(k)) + 1e-15);
        }
    }
}

TEST_CASE("spectral derivative of sin(pi r / R)") {
    RadialGrid g(2.0, 128);
    const double k1 = pi / g.outer_radius();
    Field w(g.size());
    for (int j = 0; j < g.size(); ++j) w[j] = std::sin(k1 * g.node(j));
    Field dw = g.derivative(w);
    for (int j = 0; j < g.size(); ++j)
        CHECK(dw[j] == Catch::Approx(k1 * std::cos(k1 * g.node(j))).margin(1e-10));
    CHECK(g.origin_value(w) == Catch::Approx(k1).margin(1e-10));
}

TEST_CASE("d/dr of sin(pi r/R)/r matches the closed form") {
    // u = sin(a r)/r; du/dr = (a r cos(a r) - sin(a r)) / r^2,
    // computed through the reduced chain rule (w' - u)/r with w = sin(a r).
    RadialGrid g(4.0, 512);
    const double a = pi / g.outer_radius() * 3.0;
    Field w(g.size());
    for (int j = 0; j < g.size(); ++j) w[j] = std::sin(a * g.node(j));
    Field dw = g.derivative(w);
    for (int j = 0; j < g.size(); ++j) {
        const double r = g.node(j);
        const double u = w[j] / r;
        const double got = (dw[j] - u) / r;
        const double want = (a * r * std::cos(a * r) - std::sin(a * r)) / (r * r);
        CHECK(got == Catch::Approx(want).margin(1e-8));
    }
}

TEST_CASE("derivative of a constant reduced slope is flat") {
    // w = r (so u = 1): the derivative of the sine interpolant of w at the
    // interior nodes matches 1 away from the Dirichlet wall.
    RadialGrid g(10.0, 1024);
    Field w(g.size());
    for (int j = 0; j < g.size(); ++j) w[j] = g.node(j) * bump(g.node(j) / 4.0);
    Field dw = g.derivative(w);
    // Compare against a fine finite difference of the same smooth function.
    auto f = [&](double r) { return r * bump(r / 4.0); };
    for (int j = 10; j < g.size(); j += 37) {
        const double r = g.node(j), h = 1e-4;
        const double want = (f(r + h) - f(r - h)) / (2.0 * h);
        CHECK(dw[j] == Catch::Approx(want).margin(1e-6));
    }
}

TEST_CASE("box transforms: round trip, Plancherel, derivative") {
    BoxGrid g(2.0, 16);
    Field f = random_field(static_cast<int>(g.size()), 777);
    auto c = g.transform_forward(f);
    Field back = g.transform_inverse(c);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(back[i] == Catch::Approx(f[i]).margin(1e-12));

    SECTION("derivative of a plane wave along each axis") {
        const double k = pi / g.half_period();
        for (int axis = 1; axis <= 3; ++axis) {
            Field p(g.size());
            std::size_t idx = 0;
            for (int i1 = 0; i1 < g.points_per_axis(); ++i1)
                for (int i2 = 0; i2 < g.points_per_axis(); ++i2)
                    for (int i3 = 0; i3 < g.points_per_axis(); ++i3, ++idx) {
                        const double x = axis == 1 ? g.coord(i1)
                                       : axis == 2 ? g.coord(i2)
                                                   : g.coord(i3);
                        p[idx] = std::sin(k * x);
                    }
            Field dp = g.spectral_derivative(p, axis);
            idx = 0;
            for (int i1 = 0; i1 < g.points_per_axis(); ++i1)
                for (int i2 = 0; i2 < g.points_per_axis(); ++i2)
                    for (int i3 = 0; i3 < g.points_per_axis(); ++i3, ++idx) {
                        const double x = axis == 1 ? g.coord(i1)
                                       : axis == 2 ? g.coord(i2)
                                                   : g.coord(i3);
                        CHECK(dp[idx] == Catch::Approx(k * std::cos(k * x)).margin(1e-10));
                    }
        }
    }
    SECTION("derivative of a constant vanishes; axis range checked") {
        Field one(g.size(), 1.0);
        Field d = g.spectral_derivative(one, 2);
        for (double v : d) CHECK(std::abs(v) < 1e-12);
        CHECK_THROWS_AS(g.spectral_derivative(one, 0), std::invalid_argument);
        CHECK_THROWS_AS(g.spectral_derivative(one, 4), std::invalid_argument);
    }
    SECTION("mixed derivatives commute") {
        Field p = random_field(static_cast<int>(g.size()), 42);
        Field dab = g.spectral_derivative(g.spectral_derivative(p, 1), 2);
        Field dba = g.spectral_derivative(g.spectral_derivative(p, 2), 1);
        for (std::size_t i = 0; i < p.size(); ++i)
            CHECK(dab[i] == Catch::Approx(dba[i]).margin(1e-9));
    }
}
