#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kgdecay/hyperboloidal.hpp"
#include "kgdecay/vector_fields.hpp"

namespace kgd {

namespace detail {

/// 3d L2 norm of a physical radial field.
inline double l2_physical(const RadialGrid& g, const Field& u) {
    Field w(u.size());
    for (int j = 0; j < g.size(); ++j) w[j] = u[j] * g.node(j);
    return std::sqrt(g.l2sq_3d(w));
}

/// Interior snapshot times of the window [a, b], at most max_count of them.
inline std::vector<double> sample_times(const History& h, double a, double b,
                                        std::size_t max_count) {
    std::vector<double> all;
    for (std::size_t i = 2; i + 2 < h.size(); ++i) {
        const double t = h.t_begin() + i * h.stride();
        if (t >= a && t <= b) all.push_back(t);
    }
    if (all.size() <= max_count) return all;
    std::vector<double> out;
    for (std::size_t k = 0; k < max_count; ++k)
        out.push_back(all[k * (all.size() - 1) / (max_count - 1)]);
    return out;
}

}  // namespace detail

/// Klainerman-Sobolev monitor: sup_x |u(t, x)| * t over the word-energy sup
/// up to 2t. Bounded over linear runs; the derivative cap is 2 (the classical
/// inequality uses 3; lowered for desk-scale noise control). Zero field maps
/// to 0.
inline double ks_ratio(const RadialGrid& g, const History& h, Component c, double t,
                       std::size_t max_samples = 32) {
    if (!h.covers(2.0 * t))
        throw std::invalid_argument("ks_ratio: window must reach 2t");
    const Field u = apply_vector_field(g, h, c, {}, t);
    double sup = 0.0;
    for (int j = 0; j < g.size(); ++j) sup = std::max(sup, std::abs(u[j]));

    double denom = 0.0;
    const auto times = detail::sample_times(h, h.t_begin(), 2.0 * t, max_samples);
    for (const auto& word : all_words(2)) {
        double best = 0.0;
        for (double tp : times)
            best = std::max(best, detail::l2_physical(g, apply_vector_field(g, h, c, word, tp)));
        denom += best;
    }
    if (denom == 0.0) return 0.0;
    return sup * t / denom;
}

/// Hyperboloidal Sobolev monitor on one slice: sup_{H_s} |t^{3/2} u| over
/// the flat-measure L2 norms of the boost words L^J u, |J| <= 2.
inline double hyperboloidal_sobolev_ratio(const RadialGrid& g, const History& h, Component c,
                                          double s) {
    const HyperboloidSlice sl = make_slice(g, s);
    const HyperboloidSample sm = interpolate_onto_slice(g, h, sl, c);
    double sup = 0.0;
    for (std::size_t i = 0; i < sl.nodes.size(); ++i)
        sup = std::max(sup, std::pow(sl.t[i], 1.5) * std::abs(sm.value[i]));

    double denom = 0.0;
    for (int len = 0; len <= 2; ++len) {
        VectorFieldWord word;
        word.letters.assign(len, FieldLetter::boost_r);
        const History dh = derived_history(g, h, c, word);
        const HyperboloidSample ds = interpolate_onto_slice(g, dh, sl, Component::u);
        denom += slice_l2(g, sl, ds.value);
    }
    if (denom == 0.0) return 0.0;
    return sup / denom;
}

/// Hardy monitor: ||phi / r|| / sum_a ||d_a phi|| for a static radial field
/// given in reduced form w = r phi. For radial fields the three Cartesian
/// derivative norms collapse to sqrt(3) ||phi'||; the classical sharp 3d
/// constant bounds the ratio by 2 / sqrt(3).
inline double hardy_ratio(const RadialGrid& g, const Field& w) {
    double num2 = 0.0;
    for (int j = 0; j < g.size(); ++j) {
        const double phi_over_r = w[j] / g.node(j) / g.node(j);
        num2 += phi_over_r * phi_over_r * g.node(j) * g.node(j);
    }
    num2 *= g.spacing();

    const Field wr = g.derivative(w);
    double den2 = 0.0;
    for (int j = 0; j < g.size(); ++j) {
        const double dphi = (wr[j] - w[j] / g.node(j)) / g.node(j);
        den2 += dphi * dphi * g.node(j) * g.node(j);
    }
    den2 *= g.spacing();
    if (den2 == 0.0) return 0.0;
    return std::sqrt(num2) / (std::sqrt(3.0) * std::sqrt(den2));
}

}  // namespace kgd
