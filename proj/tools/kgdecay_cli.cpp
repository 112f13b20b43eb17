// Command-line front end: solve one configured run, sweep a mass list with
// shared data, or run the verification suites. Exit codes: 0 success,
// 1 verification failure, 2 invalid config/arguments, 3 aborted run (blow-up
// or non-finite fields), 4 I/O failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "kgdecay/config.hpp"
#include "kgdecay/io.hpp"
#include "kgdecay/verify.hpp"

namespace fs = std::filesystem;
using namespace kgd;

namespace {

constexpr int exit_ok = 0, exit_verify_failed = 1, exit_bad_config = 2, exit_aborted = 3,
              exit_io = 4;

std::string status_string(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::blowup: return "blowup";
        default: return "non-finite";
    }
}

void write_run_artifacts(const fs::path& dir, const RunConfig& cfg, double dt_used,
                         const RunResult& run, const DecayReport& rep) {
    fs::create_directories(dir / "series");
    write_json(dir / "schema.json", schema_description());
    write_json(dir / "manifest.json",
               manifest_json(cfg, dt_used, status_string(run.status), run.abort_reason));
    write_probe_csv(dir / "series" / "probes.csv", run.probes);
    write_series_csv(dir / "series" / "sup_u.csv", sup_series(run.probes, Component::u).points,
                     "sup_u");
    write_series_csv(dir / "series" / "sup_v.csv", sup_series(run.probes, Component::v).points,
                     "sup_v");
    write_json(dir / "report.json", report_json(rep));
}

int cmd_solve(const RunConfig& cfg) {
    RadialGrid g(cfg.R, cfg.n);
    const SolveSpec spec = to_solve_spec(g, cfg);
    const double dt_used = spec.dt > 0.0 ? spec.dt : dt_max(g);
    const RunResult run = solve_system(g, spec);
    const DecayReport rep = analyze_run(run, cfg.params.m, cfg.window);
    write_run_artifacts(cfg.out_dir, cfg, dt_used, run, rep);
    if (run.status != RunStatus::completed) {
        std::fprintf(stderr, "run aborted at t = %.6g: %s\n", run.t_abort,
                     run.abort_reason.c_str());
        return exit_aborted;
    }
    std::printf("completed: m = %g, C_u = %.6g, p_u = %.4f, report in %s\n", cfg.params.m,
                rep.C_u, rep.p_u.p, cfg.out_dir.c_str());
    return exit_ok;
}

int cmd_sweep(const RunConfig& cfg, std::vector<double> masses, unsigned jobs) {
    // Deduplicate while preserving first-occurrence order.
    std::vector<double> unique;
    for (double m : masses) {
        if (std::find(unique.begin(), unique.end(), m) != unique.end())
            std::fprintf(stderr, "warning: duplicate mass %g dropped\n", m);
        else
            unique.push_back(m);
    }
    masses = std::move(unique);

    struct Slot {
        RunResult run;
        DecayReport report;
        double dt_used = 0.0;
    };
    std::vector<Slot> slots(masses.size());
    std::mutex planner;  // grid construction uses the FFT planner, which is not thread-safe
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= masses.size()) return;
            std::unique_lock<std::mutex> lock(planner);
            RadialGrid g(cfg.R, cfg.n);
            SolveSpec spec = to_solve_spec(g, cfg);
            lock.unlock();
            spec.params.m = masses[i];
            slots[i].dt_used = spec.dt > 0.0 ? spec.dt : dt_max(g);
            slots[i].run = solve_system(g, spec);
            slots[i].report = analyze_run(slots[i].run, masses[i], cfg.window);
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, masses.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < jobs; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    SweepOutcome sweep;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        sweep.reports.push_back(slots[i].report);
        if (slots[i].run.status != RunStatus::completed && !sweep.failed) {
            sweep.failed = true;
            sweep.culprit_m = masses[i];
        }
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : sweep.reports)
        if (r.status == "ok") {
            lo = std::min(lo, r.C_u);
            hi = std::max(hi, r.C_u);
        }
    if (lo > 0.0 && std::isfinite(lo)) sweep.spread = hi / lo;

    const fs::path dir = cfg.out_dir;
    fs::create_directories(dir);
    write_json(dir / "schema.json", schema_description());
    write_json(dir / "sweep.json", sweep_json(sweep));
    for (std::size_t i = 0; i < masses.size(); ++i) {
        RunConfig per = cfg;
        per.params.m = masses[i];
        char sub[32];
        std::snprintf(sub, sizeof sub, "m_%g", masses[i]);
        write_run_artifacts(dir / sub, per, slots[i].dt_used, slots[i].run,
                            slots[i].report);
    }
    for (const auto& r : sweep.reports)
        std::printf("m = %-6g status = %-10s C_u = %-12.6g p_u = %.4f\n", r.m,
                    r.status.c_str(), r.C_u, r.p_u.p);
    std::printf("C_u spread = %.4g over %zu masses, table in %s\n", sweep.spread,
                masses.size(), (dir / "sweep.json").string().c_str());
    if (sweep.failed) {
        std::fprintf(stderr, "sweep failed: run for m = %g aborted\n", sweep.culprit_m);
        return exit_aborted;
    }
    return exit_ok;
}

int cmd_verify(const std::string& suite, const std::string& out_dir) {
    std::vector<std::string> names;
    if (suite == "all")
        names = verify_suites();
    else
        names.push_back(suite);

    json report;
    report["schema"] = "verify-report@1";
    report["suites"] = json::array();
    bool all_passed = true;
    for (const auto& name : names) {
        const SuiteResult res = run_suite(name);  // throws on unknown suite
        json js;
        js["suite"] = res.name;
        js["passed"] = res.passed();
        js["checks"] = json::array();
        for (const auto& c : res.checks) {
            js["checks"].push_back({{"name", c.name},
                                    {"measured", c.measured},
                                    {"bound", c.bound},
                                    {"pass", c.passed}});
            std::printf("%-14s %-45s %-12.4g <= %-8.4g %s\n", res.name.c_str(),
                        c.name.c_str(), c.measured, c.bound, c.passed ? "pass" : "FAIL");
        }
        report["suites"].push_back(js);
        all_passed = all_passed && res.passed();
    }
    fs::create_directories(out_dir);
    write_json(fs::path(out_dir) / "verify.json", report);
    return all_passed ? exit_ok : exit_verify_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral solver and verification harness for coupled "
                 "wave/Klein-Gordon systems"};
    app.require_subcommand(1);

    std::string config_path, out_override, suite = "all", masses_csv;
    unsigned jobs = 1;

    auto* solve = app.add_subcommand("solve", "run one configured solve");
    solve->add_option("--config", config_path, "config file")->required();
    solve->add_option("--out", out_override, "output directory (overrides config)");

    auto* sweep = app.add_subcommand("sweep", "run the mass sweep of a config");
    sweep->add_option("--config", config_path, "config file")->required();
    sweep->add_option("--out", out_override, "output directory (overrides config)");
    sweep->add_option("--masses", masses_csv, "comma-separated mass list (overrides config)");
    sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", suite, "suite name, or 'all'");
    verify->add_option("--out", out_override, "output directory for the verdict");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_bad_config;
    }

    try {
        if (verify->parsed())
            return cmd_verify(suite, out_override.empty() ? "out" : out_override);

        RunConfig cfg = parse_config_file(config_path);
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (solve->parsed()) return cmd_solve(cfg);

        std::vector<double> masses = cfg.masses;
        if (!masses_csv.empty()) {
            masses = kgd::detail::to_list("--masses", masses_csv);
            for (double m : masses) check_mass(m);
        }
        return cmd_sweep(cfg, masses, jobs);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_bad_config;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_io;
    }
}
