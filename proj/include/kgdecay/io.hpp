#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgdecay/config.hpp"
#include "kgdecay/decay.hpp"

namespace kgd {

using json = nlohmann::ordered_json;

/// All floating-point text output carries 17 significant digits so files
/// round-trip bit-exactly through parsing.
inline std::string fp(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("io: cannot write " + path.string());
    return out;
}

}  // namespace detail

inline void write_probe_csv(const std::filesystem::path& path,
                            const std::vector<ProbeRow>& probes) {
    auto out = detail::open_out(path);
    out << "t,sup_u,sup_v,l2_u,l2_v,energy_u,energy_v\n";
    for (const auto& r : probes)
        out << fp(r.t) << ',' << fp(r.sup_u) << ',' << fp(r.sup_v) << ',' << fp(r.l2_u)
            << ',' << fp(r.l2_v) << ',' << fp(r.energy_u) << ',' << fp(r.energy_v) << '\n';
    if (!out) throw std::runtime_error("io: failed writing " + path.string());
}

inline void write_series_csv(const std::filesystem::path& path, const NormSeries& s,
                             const std::string& value_name) {
    auto out = detail::open_out(path);
    out << "t," << value_name << '\n';
    for (const auto& p : s) out << fp(p.t) << ',' << fp(p.value) << '\n';
    if (!out) throw std::runtime_error("io: failed writing " + path.string());
}

inline json report_json(const DecayReport& r) {
    json j;
    j["schema"] = "decay-report@1";
    j["m"] = r.m;
    j["status"] = r.status;
    j["p_u"] = {{"value", r.p_u.p}, {"width", r.p_u.width}, {"ok", r.p_u.ok}};
    j["p_v"] = {{"value", r.p_v.p}, {"width", r.p_v.width}, {"ok", r.p_v.ok}};
    j["C_u"] = r.C_u;
    j["C_v"] = r.C_v;
    const char* cs = r.crossover.status == CrossoverStatus::detected    ? "detected"
                     : r.crossover.status == CrossoverStatus::immediate ? "immediate"
                                                                        : "not-reached";
    j["crossover"] = {{"status", cs},
                      {"t_star", r.crossover.t_star},
                      {"slope_early", r.crossover.slope_early},
                      {"slope_late", r.crossover.slope_late}};
    return j;
}

inline json sweep_json(const SweepOutcome& sw) {
    json j;
    j["schema"] = "mass-sweep@1";
    j["failed"] = sw.failed;
    if (sw.failed) j["culprit_m"] = sw.culprit_m;
    j["C_u_spread"] = sw.spread;
    j["rows"] = json::array();
    for (const auto& r : sw.reports) j["rows"].push_back(report_json(r));
    return j;
}

inline json config_json(const RunConfig& cfg) {
    json j;
    j["grid"] = {{"mode", cfg.mode}, {"R", cfg.R}, {"n", cfg.n}};
    const char* preset = cfg.preset.tag == PresetTag::model ? "model"
                         : cfg.preset.tag == PresetTag::model_plus_strong_null
                             ? "model+null"
                             : "type2";
    j["system"] = {{"m", cfg.params.m},   {"M1", cfg.params.M1}, {"N1", cfg.params.N1},
                   {"N2", cfg.params.N2}, {"N3", cfg.params.N3}, {"P0", cfg.params.P0},
                   {"Pr", cfg.params.Pr}, {"preset", preset},
                   {"null_c0r", cfg.preset.null_c0r}, {"type2_qv", cfg.preset.type2_qv}};
    j["data"] = {{"profile_u", cfg.profile_u},
                 {"dprofile_u", cfg.dprofile_u},
                 {"profile_v", cfg.profile_v},
                 {"dprofile_v", cfg.dprofile_v},
                 {"epsilon", cfg.epsilon}};
    j["run"] = {{"t0", cfg.t0},
                {"t_max", cfg.t_max},
                {"dt", cfg.dt},
                {"history_stride", cfg.history_stride},
                {"probe_stride", cfg.probe_stride},
                {"blowup_ceiling", cfg.blowup_ceiling},
                {"seed", cfg.seed}};
    j["analysis"] = {{"t_lo", cfg.window.t_lo},
                     {"t_hi", cfg.window.t_hi},
                     {"v_delta", cfg.window.v_delta}};
    j["sweep"] = {{"masses", cfg.masses}};
    return j;
}

/// Manifest written next to every artifact set: the resolved config, the
/// actually used step size, and the run verdict.
inline json manifest_json(const RunConfig& cfg, double dt_used, const std::string& status,
                          const std::string& abort_reason = "") {
    json j;
    j["schema"] = "run-manifest@1";
    j["config"] = config_json(cfg);
    j["dt_used"] = dt_used;
    j["status"] = status;
    if (!abort_reason.empty()) j["abort_reason"] = abort_reason;
    return j;
}

/// Plain-language description of every JSON document this tool emits, shipped
/// alongside the outputs so they are interpretable without the source.
inline json schema_description() {
    json j;
    j["schema"] = "schema-index@1";
    j["run-manifest@1"] = {
        {"config", "resolved run configuration, sectioned as in the config file"},
        {"dt_used", "time step actually taken (config dt, or the grid's largest stable step)"},
        {"status", "completed | blowup | non-finite"},
        {"abort_reason", "present only when status != completed"}};
    j["decay-report@1"] = {
        {"m", "mass parameter of the run"},
        {"status", "ok, or the reason analysis was skipped"},
        {"p_u/p_v", "fitted log-log decay exponent with confidence width"},
        {"C_u", "sup over the window of sup_x|u| * (t + m t^{3/2})"},
        {"C_v", "sup over the window of sup_x|v| * t^{3/2 - delta}"},
        {"crossover", "two-piece slope fit: status, break time, early/late slopes"}};
    j["mass-sweep@1"] = {
        {"rows", "one decay-report@1 per mass, input order"},
        {"C_u_spread", "max/min of C_u over completed rows (uniformity proxy)"},
        {"failed", "true if any run aborted; culprit_m names the first"}};
    j["verify-report@1"] = {
        {"suite", "name of the check battery"},
        {"passed", "conjunction of all checks"},
        {"checks", "per check: name, measured value, bound, pass"}};
    return j;
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    auto out = detail::open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("io: failed writing " + path.string());
}

}  // namespace kgd
