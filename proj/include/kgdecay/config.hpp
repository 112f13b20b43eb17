#pragma once

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgdecay/decay.hpp"
#include "kgdecay/profiles.hpp"
#include "kgdecay/system.hpp"

namespace kgd {

/// One run, fully described: grid, system, data, stepping, analysis window,
/// sweep masses, and output location. Parsed from a flat sectioned key-value
/// file (one level of [section] headers, '#' comments) so configs stay
/// hand-editable and diffable.
struct RunConfig {
    // [grid]
    std::string mode = "radial";
    double R = 60.0;
    int n = 1024;
    // [system]
    SystemParams params;
    NonlinearityPreset preset;
    // [data]
    std::string profile_u = "bump", dprofile_u = "shell";
    std::string profile_v = "zero", dprofile_v = "zero";
    double epsilon = 1e-3;
    // [run]
    double t0 = 2.0;
    double t_max = 50.0;
    double dt = 0.0;  // 0: largest stable step of the grid
    double history_stride = 0.5;
    double probe_stride = 0.25;
    double blowup_ceiling = 1e3;
    unsigned long seed = 0;
    // [analysis]
    AnalysisWindow window;
    // [sweep]
    std::vector<double> masses{0.0, 0.03, 0.1, 0.3, 1.0};
    // [output]
    std::string out_dir = "out";

    void validate() const {
        if (mode != "radial")
            throw std::invalid_argument(
                "config: mode '" + mode + "' not runnable (only 'radial' solves; the box "
                "grid is a validation-only discretization)");
        if (!(R > 0.0)) throw std::invalid_argument("config: R must be positive");
        if (n < 8) throw std::invalid_argument("config: n must be at least 8");
        params.validate();
        if (!(epsilon > 0.0)) throw std::invalid_argument("config: epsilon must be positive");
        if (!(t_max > t0)) throw std::invalid_argument("config: t_max must exceed t0");
        if (dt < 0.0) throw std::invalid_argument("config: dt must be nonnegative");
        if (!(history_stride > 0.0) || !(probe_stride > 0.0))
            throw std::invalid_argument("config: strides must be positive");
        if (masses.empty()) throw std::invalid_argument("config: sweep mass list is empty");
        for (double m : masses) check_mass(m);
        if (out_dir.empty()) throw std::invalid_argument("config: output directory is empty");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for '" + key + "': " + v);
    }
    if (pos != v.size())
        throw std::invalid_argument("config: trailing junk for '" + key + "': " + v);
    return x;
}

inline std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    return out;
}

}  // namespace detail

/// Parse a sectioned key-value stream. Unknown sections or keys are errors:
/// a typo silently falling back to a default would invalidate a whole study.
inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "grid" && section != "system" && section != "data" &&
                section != "run" && section != "analysis" && section != "sweep" &&
                section != "output")
                throw std::invalid_argument("config: unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;
        auto num = [&] { return detail::to_double(qual, val); };

        if (qual == "grid.mode") cfg.mode = val;
        else if (qual == "grid.R") cfg.R = num();
        else if (qual == "grid.n") cfg.n = static_cast<int>(num());
        else if (qual == "system.m") cfg.params.m = num();
        else if (qual == "system.M1") cfg.params.M1 = num();
        else if (qual == "system.N1") cfg.params.N1 = num();
        else if (qual == "system.N2") cfg.params.N2 = num();
        else if (qual == "system.N3") cfg.params.N3 = num();
        else if (qual == "system.P0") cfg.params.P0 = num();
        else if (qual == "system.Pr") cfg.params.Pr = num();
        else if (qual == "system.preset") {
            if (val == "model") cfg.preset.tag = PresetTag::model;
            else if (val == "model+null") cfg.preset.tag = PresetTag::model_plus_strong_null;
            else if (val == "type2") cfg.preset.tag = PresetTag::type2_pair;
            else throw std::invalid_argument("config: unknown preset '" + val + "'");
        } else if (qual == "system.null_c0r") cfg.preset.null_c0r = num();
        else if (qual == "system.type2_qv") cfg.preset.type2_qv = num();
        else if (qual == "data.profile_u") cfg.profile_u = val;
        else if (qual == "data.dprofile_u") cfg.dprofile_u = val;
        else if (qual == "data.profile_v") cfg.profile_v = val;
        else if (qual == "data.dprofile_v") cfg.dprofile_v = val;
        else if (qual == "data.epsilon") cfg.epsilon = num();
        else if (qual == "run.t0") cfg.t0 = num();
        else if (qual == "run.t_max") cfg.t_max = num();
        else if (qual == "run.dt") cfg.dt = num();
        else if (qual == "run.history_stride") cfg.history_stride = num();
        else if (qual == "run.probe_stride") cfg.probe_stride = num();
        else if (qual == "run.blowup_ceiling") cfg.blowup_ceiling = num();
        else if (qual == "run.seed") cfg.seed = static_cast<unsigned long>(num());
        else if (qual == "analysis.t_lo") cfg.window.t_lo = num();
        else if (qual == "analysis.t_hi") cfg.window.t_hi = num();
        else if (qual == "analysis.v_delta") cfg.window.v_delta = num();
        else if (qual == "sweep.masses") cfg.masses = detail::to_list(qual, val);
        else if (qual == "output.dir") cfg.out_dir = val;
        else throw std::invalid_argument("config: unknown key '" + qual + "'");
    }
    cfg.validate();
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    return parse_config(in);
}

/// Materialize the solver input described by a config on a given grid.
inline SolveSpec to_solve_spec(const RadialGrid& g, const RunConfig& cfg) {
    SolveSpec spec;
    spec.params = cfg.params;
    spec.preset = cfg.preset;
    spec.data_u = reduced_data(g, cfg.profile_u, cfg.dprofile_u, cfg.epsilon);
    spec.data_v = reduced_data(g, cfg.profile_v, cfg.dprofile_v, cfg.epsilon);
    spec.t0 = cfg.t0;
    spec.t_max = cfg.t_max;
    spec.dt = cfg.dt;
    spec.history_stride = cfg.history_stride;
    spec.probe_stride = cfg.probe_stride;
    spec.blowup_ceiling = cfg.blowup_ceiling;
    return spec;
}

}  // namespace kgd
