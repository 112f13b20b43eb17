#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgd {

struct NormPoint {
    double t;
    double value;
};
using NormSeries = std::vector<NormPoint>;

enum class GrowthBranch { grows_like_t_pow_q, grows_like_log, bounded, inconclusive };

inline std::string to_string(GrowthBranch b) {
    switch (b) {
        case GrowthBranch::grows_like_t_pow_q: return "t_pow_q";
        case GrowthBranch::grows_like_log: return "log";
        case GrowthBranch::bounded: return "bounded";
        default: return "inconclusive";
    }
}

struct GrowthClassification {
    GrowthBranch branch = GrowthBranch::inconclusive;
    double q = 0.0;        // fitted exponent of the power model
    double c0 = 0.0;       // fitted offset of the winning model
    double cf = 0.0;       // fitted coefficient of the winning model
    double residual = 0.0; // rms residual of the winning model
};

namespace detail {

/// Least squares for y = a + b * phi(t); returns (a, b, rms residual).
template <typename Phi>
inline std::array<double, 3> fit_offset_model(const NormSeries& s, Phi&& phi) {
    const double n = static_cast<double>(s.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& p : s) {
        const double x = phi(p.t);
        sx += x;
        sy += p.value;
        sxx += x * x;
        sxy += x * p.value;
    }
    const double det = n * sxx - sx * sx;
    double b = det != 0.0 ? (n * sxy - sx * sy) / det : 0.0;
    double a = (sy - b * sx) / n;
    double ss = 0.0;
    for (const auto& p : s) {
        const double r = p.value - a - b * phi(p.t);
        ss += r * r;
    }
    return {a, b, std::sqrt(ss / n)};
}

}  // namespace detail

/// Fit a norm history against the growth trichotomy: C + C_f t^q (q > 0),
/// C + C_f log t (q = 0), or bounded (q < 0). Fits the final 60% of the
/// window in log-t to suppress transients; requires at least one decade.
inline GrowthClassification l2_growth_classify(const NormSeries& history) {
    GrowthClassification out;
    if (history.size() < 8) return out;
    const double t_lo = history.front().t, t_hi = history.back().t;
    if (!(t_lo > 0.0) || t_hi / t_lo < 10.0) return out;  // < one decade: inconclusive

    // Final 60% of the log-t window.
    const double cut = std::exp(std::log(t_lo) + 0.4 * (std::log(t_hi) - std::log(t_lo)));
    NormSeries tail;
    for (const auto& p : history)
        if (p.t >= cut) tail.push_back(p);
    if (tail.size() < 6) return out;

    // Power model with free q by grid search, refined once.
    double best_q = 0.0, best_res = 1e300;
    std::array<double, 3> best_fit{};
    auto scan = [&](double q0, double q1, double dq) {
        for (double q = q0; q <= q1 + 1e-12; q += dq) {
            if (std::abs(q) < 1e-9) continue;
            auto f = detail::fit_offset_model(tail, [q](double t) { return std::pow(t, q); });
            if (f[2] < best_res) {
                best_res = f[2];
                best_q = q;
                best_fit = f;
            }
        }
    };
    scan(-1.0, 1.0, 0.02);
    scan(best_q - 0.02, best_q + 0.02, 0.002);

    auto flog = detail::fit_offset_model(tail, [](double t) { return std::log(t); });

    double mean = 0.0;
    for (const auto& p : tail) mean += p.value;
    mean /= static_cast<double>(tail.size());

    // Variation explained by the fitted trend over the tail window.
    const double trend_p =
        std::abs(best_fit[1]) * std::abs(std::pow(tail.back().t, best_q) - std::pow(tail.front().t, best_q));

    out.q = best_q;
    if (trend_p < 5e-3 * std::abs(mean) + 1e-300) {
        out.branch = GrowthBranch::bounded;
        out.c0 = mean;
        out.cf = 0.0;
        out.residual = best_res;
        return out;
    }
    if (best_q >= 0.1) {
        out.branch = GrowthBranch::grows_like_t_pow_q;
        out.c0 = best_fit[0];
        out.cf = best_fit[1];
        out.residual = best_res;
    } else if (best_q <= -0.1) {
        out.branch = GrowthBranch::bounded;
        out.c0 = best_fit[0] + best_fit[1] * std::pow(t_hi, best_q);  // asymptotic level
        out.cf = best_fit[1];
        out.residual = best_res;
    } else {
        out.branch = GrowthBranch::grows_like_log;
        out.q = 0.0;
        out.c0 = flog[0];
        out.cf = flog[1];
        out.residual = flog[2];
    }
    return out;
}

}  // namespace kgd
