#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kgdecay/energy.hpp"
#include "kgdecay/hyperboloidal.hpp"
#include "kgdecay/inequalities.hpp"
#include "kgdecay/vector_fields.hpp"

namespace kgd {

struct XNormOptions {
    int cap = 2;                  // word-length cap of the flat block
    double delta = 0.05;          // weight exponent, 0 < delta << 1/10
    std::vector<double> s_values; // hyperboloidal block slices; empty: skip
    std::size_t max_time_samples = 24;
};

/// Discrete solution-space norm: the flat block sums mass-1 word energies of
/// u plus t^{-delta}-weighted word energies of v over recorded times; the
/// hyperboloidal block sums square roots of slice energies of the boost
/// words (cap lowered by one), E_m for u and s^{-delta} E_1 for v. The two
/// blocks deliberately mix squared and square-rooted energies, matching the
/// definition being tested verbatim.
inline double discrete_x_norm(const RadialGrid& g, const History& h, double m,
                              const XNormOptions& opt = {}) {
    check_mass(m);
    if (h.empty()) throw std::invalid_argument("discrete_x_norm: empty history");
    if (opt.cap < 0 || opt.cap > 2) throw std::invalid_argument("discrete_x_norm: cap in 0..2");
    if (!(opt.delta > 0.0 && opt.delta < 0.1))
        throw std::invalid_argument("discrete_x_norm: delta in (0, 0.1)");

    const auto words = all_words(opt.cap);
    auto word_energy = [&](Component c, const VectorFieldWord& w, double t) {
        VectorFieldWord dtw;
        dtw.letters.push_back(FieldLetter::dt);
        for (FieldLetter l : w.letters) dtw.letters.push_back(l);
        const Field u = detail::eval_word(g, h, c, w.letters, 0, t);
        const Field ut = detail::eval_word(g, h, c, dtw.letters, 0, t);
        FieldPair reduced{Field(g.size()), Field(g.size())};
        for (int j = 0; j < g.size(); ++j) {
            reduced.value[j] = u[j] * g.node(j);
            reduced.dvalue[j] = ut[j] * g.node(j);
        }
        return flat_energy(g, reduced, 1.0);
    };

    double flat_block = 0.0;
    for (double t : detail::sample_times(h, h.t_begin(), h.t_end(), opt.max_time_samples)) {
        double sum = 0.0;
        for (const auto& w : words)
            sum += word_energy(Component::u, w, t) +
                   std::pow(t, -opt.delta) * word_energy(Component::v, w, t);
        flat_block = std::max(flat_block, sum);
    }

    double hyper_block = 0.0;
    if (!opt.s_values.empty()) {
        const int jcap = std::max(opt.cap - 1, 0);
        std::vector<History> du, dv;
        for (int len = 0; len <= jcap; ++len) {
            VectorFieldWord w;
            w.letters.assign(len, FieldLetter::boost_r);
            du.push_back(derived_history(g, h, Component::u, w));
            dv.push_back(derived_history(g, h, Component::v, w));
        }
        for (double s : opt.s_values) {
            const HyperboloidSlice sl = make_slice(g, s);
            double sum = 0.0;
            for (int len = 0; len <= jcap; ++len) {
                const auto su = interpolate_onto_slice(g, du[len], sl, Component::u);
                const auto sv = interpolate_onto_slice(g, dv[len], sl, Component::u);
                sum += std::sqrt(hyperboloidal_energy(g, sl, su, m, 1)) +
                       std::pow(s, -opt.delta) *
                           std::sqrt(hyperboloidal_energy(g, sl, sv, 1.0, 1));
            }
            hyper_block = std::max(hyper_block, sum);
        }
    }
    return flat_block + hyper_block;
}

}  // namespace kgd
