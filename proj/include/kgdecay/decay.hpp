#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgdecay/growth.hpp"
#include "kgdecay/system.hpp"

namespace kgd {

/// Sup-norm time series of one component: (t, sup_x |field|).
struct DecaySeries {
    std::string component;
    NormSeries points;
};

struct ExponentFit {
    double p = 0.0;      // log-log slope
    double width = 0.0;  // confidence width (stderr-based, widened on bad envelopes)
    bool ok = false;
};

enum class CrossoverStatus { detected, immediate, not_reached };

struct CrossoverResult {
    CrossoverStatus status = CrossoverStatus::not_reached;
    double t_star = 0.0;
    double slope_early = 0.0, slope_late = 0.0;
};

/// Per-run decay verdict.
struct DecayReport {
    double m = 0.0;
    ExponentFit p_u, p_v;
    double C_u = 0.0;  // sup_t A_u(t) (t + m t^{3/2})
    double C_v = 0.0;  // sup_t A_v(t) t^{3/2 - delta}
    CrossoverResult crossover;
    std::string status = "ok";
};

/// Sup-norm series from recorded probes.
inline DecaySeries sup_series(const std::vector<ProbeRow>& probes, Component c) {
    DecaySeries s;
    s.component = c == Component::u ? "u" : "v";
    s.points.reserve(probes.size());
    for (const auto& row : probes)
        s.points.push_back({row.t, c == Component::u ? row.sup_u : row.sup_v});
    return s;
}

/// Sup-norm series from History snapshots (including the r = 0 value).
inline DecaySeries sup_series(const RadialGrid& g, const History& h, Component c) {
    DecaySeries s;
    s.component = c == Component::u ? "u" : "v";
    for (std::size_t i = 0; i < h.size(); ++i)
        s.points.push_back({h.at(i).t, sup_norm_u(g, h.pair(i, c).value)});
    return s;
}

/// Running maximum over sliding windows of the given width. KG sup norms
/// oscillate under the decay envelope; raw log-log fits would alias.
inline NormSeries envelope(const NormSeries& s, double window) {
    NormSeries out;
    out.reserve(s.size());
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double a = s[i].t - 0.5 * window, b = s[i].t + 0.5 * window;
        while (lo < s.size() && s[lo].t < a) ++lo;
        while (hi < s.size() && s[hi].t <= b) ++hi;
        double m = 0.0;
        for (std::size_t j = lo; j < hi; ++j) m = std::max(m, s[j].value);
        out.push_back({s[i].t, m});
    }
    return out;
}

/// Envelope window used by the fits: 4 oscillation periods estimated from
/// omega(0) = m; no enveloping in the massless case.
inline double envelope_window(double m) {
    return m > 1e-6 ? 4.0 * 2.0 * std::numbers::pi / m : 0.0;
}

namespace detail {

struct LineFit {
    double slope = 0.0, intercept = 0.0, stderr_slope = 0.0, rms = 0.0;
    std::size_t n = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                        std::size_t lo, std::size_t hi) {
    LineFit f;
    f.n = hi - lo;
    if (f.n < 3) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double n = static_cast<double>(f.n);
    const double det = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    f.stderr_slope = f.n > 2 ? std::sqrt(ss / (n - 2.0) / (sxx - sx * sx / n)) : 0.0;
    return f;
}

/// Strict local maxima of the series. Oscillating norms touch their decay
/// envelope exactly at the peaks, with no time shift; a running max would
/// drag early values left by half a window and bias log-log slopes.
/// A monotone series has no interior peaks and is returned unchanged.
inline NormSeries peaks_or_all(const NormSeries& s) {
    NormSeries p;
    for (std::size_t i = 1; i + 1 < s.size(); ++i)
        if (s[i].value >= s[i - 1].value && s[i].value >= s[i + 1].value &&
            (s[i].value > s[i - 1].value || s[i].value > s[i + 1].value))
            p.push_back(s[i]);
    return p.size() >= 8 ? p : s;
}

inline void loglog_arrays(const NormSeries& s, std::vector<double>& x, std::vector<double>& y) {
    for (const auto& p : s) {
        if (p.t > 0.0 && p.value > 0.0) {
            x.push_back(std::log(p.t));
            y.push_back(std::log(p.value));
        }
    }
}

}  // namespace detail

/// Least-squares log-log slope of the envelope over [t_lo, t_hi].
/// The window must span at least one decade.
inline ExponentFit fit_exponent(const NormSeries& series, double m, double t_lo, double t_hi) {
    ExponentFit out;
    NormSeries win;
    for (const auto& p : series)
        if (p.t >= t_lo && p.t <= t_hi) win.push_back(p);
    if (win.size() < 8 || !(t_lo > 0.0) || t_hi / t_lo < 10.0) return out;
    NormSeries env = detail::peaks_or_all(win);
    std::vector<double> x, y;
    detail::loglog_arrays(env, x, y);
    if (x.size() < 8) return out;
    auto f = detail::fit_line(x, y, 0, x.size());
    out.p = f.slope;
    out.width = 2.0 * f.stderr_slope;
    // A non-monotone envelope beyond tolerance widens the confidence band.
    double worst = 0.0;
    for (std::size_t i = 1; i < env.size(); ++i)
        if (env[i].value > env[i - 1].value * 1.02)
            worst = std::max(worst, env[i].value / env[i - 1].value - 1.0);
    out.width += worst;
    out.ok = true;
    return out;
}

/// sup_t A(t) (t + m t^{3/2}) over the series.
inline double unified_constant(const NormSeries& series, double m) {
    check_mass(m);
    if (series.empty()) throw std::invalid_argument("unified_constant: empty series");
    double c = 0.0;
    for (const auto& p : series)
        c = std::max(c, p.value * (p.t + m * p.t * std::sqrt(p.t)));
    return c;
}

/// sup_t A(t) t^{3/2 - delta}.
inline double v_constant(const NormSeries& series, double delta) {
    double c = 0.0;
    for (const auto& p : series) c = std::max(c, p.value * std::pow(p.t, 1.5 - delta));
    return c;
}

/// Two-piece linear fit in log-log with the breakpoint chosen by least total
/// residual; the wave-to-Klein-Gordon handover shows as a slope change near
/// t = m^{-2}.
inline CrossoverResult crossover_time(const NormSeries& series, double m) {
    if (!(m > 0.0 && m < 1.0 + 1e-12))
        throw std::invalid_argument("crossover_time: need m in (0, 1]");
    CrossoverResult out;
    NormSeries env = detail::peaks_or_all(series);
    std::vector<double> x, y;
    detail::loglog_arrays(env, x, y);
    const std::size_t n = x.size();
    if (n < 16) return out;

    auto single = detail::fit_line(x, y, 0, n);
    double best = 1e300;
    std::size_t best_k = 0;
    detail::LineFit bl, br;
    for (std::size_t k = 5; k + 5 < n; ++k) {
        auto l = detail::fit_line(x, y, 0, k);
        auto r = detail::fit_line(x, y, k, n);
        const double tot = l.rms * l.rms * k + r.rms * r.rms * (n - k);
        if (tot < best) {
            best = tot;
            best_k = k;
            bl = l;
            br = r;
        }
    }
    out.slope_early = bl.slope;
    out.slope_late = br.slope;
    const double t_break = std::exp(x[best_k]);

    const double kg_slope = -1.25;  // handover threshold between -1 and -3/2
    if (bl.slope <= kg_slope) {
        // Already in the Klein-Gordon regime at the start of the window.
        out.status = CrossoverStatus::immediate;
        out.t_star = std::exp(x.front());
        return out;
    }
    const double improvement = single.rms * single.rms * n > 0.0
                                   ? 1.0 - best / (single.rms * single.rms * n)
                                   : 0.0;
    if (br.slope <= kg_slope && improvement > 0.05) {
        out.status = CrossoverStatus::detected;
        out.t_star = t_break;
        return out;
    }
    out.status = CrossoverStatus::not_reached;  // the zero-mass phenomenon
    return out;
}

/// Fit window and v-exponent slack shared by report assembly and sweeps.
struct AnalysisWindow {
    double t_lo = 10.0;
    double t_hi = 0.0;  // 0: end of the recorded series
    double v_delta = 0.1;
};

/// Assemble the per-run verdict from the recorded probe series.
inline DecayReport analyze_run(const RunResult& run, double m, AnalysisWindow w = {}) {
    DecayReport rep;
    rep.m = m;
    if (run.status != RunStatus::completed) {
        rep.status = run.status == RunStatus::blowup ? "blowup" : "non-finite";
        return rep;
    }
    if (run.probes.empty()) {
        rep.status = "empty";
        return rep;
    }
    const DecaySeries su = sup_series(run.probes, Component::u);
    const DecaySeries sv = sup_series(run.probes, Component::v);
    const double t_hi = w.t_hi > 0.0 ? w.t_hi : su.points.back().t;
    rep.p_u = fit_exponent(su.points, m, w.t_lo, t_hi);
    rep.p_v = fit_exponent(sv.points, m, w.t_lo, t_hi);
    NormSeries win_u, win_v;
    for (const auto& p : su.points)
        if (p.t >= w.t_lo && p.t <= t_hi) win_u.push_back(p);
    for (const auto& p : sv.points)
        if (p.t >= w.t_lo && p.t <= t_hi) win_v.push_back(p);
    if (win_u.empty() || win_v.empty()) {
        rep.status = "window outside series";
        return rep;
    }
    rep.C_u = unified_constant(win_u, m);
    rep.C_v = v_constant(win_v, w.v_delta);
    if (m > 0.0) {
        rep.crossover = crossover_time(win_u, m);
    }
    return rep;
}

struct SweepOutcome {
    std::vector<DecayReport> reports;  // one per mass, input order
    double spread = 0.0;               // max C_u / min C_u over completed runs
    bool failed = false;
    double culprit_m = 0.0;  // first mass whose run did not complete
};

/// Run the same data and grid across a list of masses and aggregate the
/// per-mass verdicts; the headline quantity is the spread of the unified
/// constant, which a mass-uniform bound keeps at O(1).
inline SweepOutcome mass_sweep(const RadialGrid& g, const SolveSpec& base,
                               const std::vector<double>& masses, AnalysisWindow w = {}) {
    if (masses.empty()) throw std::invalid_argument("mass_sweep: empty mass list");
    for (double m : masses) check_mass(m);
    SweepOutcome out;
    out.reports.reserve(masses.size());
    for (double m : masses) {
        SolveSpec spec = base;
        spec.params.m = m;
        const RunResult run = solve_system(g, spec);
        out.reports.push_back(analyze_run(run, m, w));
        if (run.status != RunStatus::completed && !out.failed) {
            out.failed = true;
            out.culprit_m = m;
        }
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : out.reports)
        if (r.status == "ok") {
            lo = std::min(lo, r.C_u);
            hi = std::max(hi, r.C_u);
        }
    if (lo > 0.0 && std::isfinite(lo)) out.spread = hi / lo;
    return out;
}

}  // namespace kgd
