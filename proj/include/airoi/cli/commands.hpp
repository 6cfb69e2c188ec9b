#pragma once

// Subcommand implementations. Each returns a process exit code:
// 0 success, 2 validation or usage error, 3 I/O error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "airoi/cli/config.hpp"
#include "airoi/cli/report.hpp"
#include "airoi/cli/track.hpp"
#include "airoi/engine.hpp"

namespace airoi::cli {

namespace fs = std::filesystem;

enum ExitCode : int { exit_ok = 0, exit_invalid = 2, exit_io = 3 };

inline void print_diagnostics(std::ostream& err, const Diagnostics& d) {
    for (const auto& item : d) err << to_string(item) << '\n';
}

namespace detail {

inline std::optional<PortfolioConfig> load_checked(const fs::path& path, std::ostream& err, int& code) {
    auto res = load_config(path);
    print_diagnostics(err, res.diagnostics);
    switch (res.failure) {
        case LoadFailure::none: return std::move(res.config);
        case LoadFailure::io: code = exit_io; break;
        case LoadFailure::parse:
        case LoadFailure::invalid: code = exit_invalid; break;
    }
    return std::nullopt;
}

// Writes through `fn` to `path`, or to `out` when no path is given.
inline int emit(const std::optional<fs::path>& path, std::ostream& out, std::ostream& err,
                const std::function<void(std::ostream&)>& fn) {
    if (!path) {
        fn(out);
        return out ? exit_ok : exit_io;
    }
    std::ofstream file(*path, std::ios::binary);
    if (!file) {
        err << "error: cannot open " << path->string() << " for writing\n";
        return exit_io;
    }
    fn(file);
    file.close();
    if (!file) {
        err << "error: failed writing " << path->string() << '\n';
        return exit_io;
    }
    return exit_ok;
}

inline engine::SimulationConfig simulation_config(const PortfolioConfig& cfg, std::optional<std::size_t> iterations,
                                                  std::optional<std::uint64_t> seed,
                                                  std::optional<unsigned> workers) {
    engine::SimulationConfig sim;
    sim.iterations = iterations.value_or(cfg.simulation.iterations);
    sim.master_seed = seed.value_or(cfg.simulation.seed);
    sim.worker_count = workers.value_or(cfg.simulation.workers);
    sim.target_relative_se = cfg.simulation.target_relative_se;
    return sim;
}

}  // namespace detail

// Unreadable and unparseable files are validation failures here (exit 2).
inline int cmd_validate(const fs::path& config, std::ostream& out, std::ostream& err) {
    auto res = load_config(config);
    print_diagnostics(err, res.diagnostics);
    if (!res.ok()) {
        err << "invalid: " << res.diagnostics.error_count() << " error(s)\n";
        return exit_invalid;
    }
    out << "valid: " << config.string();
    const std::size_t warnings = res.diagnostics.size();
    if (warnings) out << " (" << warnings << " warning(s))";
    out << '\n';
    return exit_ok;
}

struct EvaluateOptions {
    fs::path config;
    std::optional<fs::path> out_path;
};

inline int cmd_evaluate(const EvaluateOptions& opt, std::ostream& out, std::ostream& err) {
    int code = exit_ok;
    auto cfg = detail::load_checked(opt.config, err, code);
    if (!cfg) return code;
    const auto start = std::chrono::steady_clock::now();
    const auto outcome = engine::analytic_evaluate(cfg->model);
    const auto value = valuation::value(outcome, cfg->model.discount_rate);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    const json report = wrap_report(analytic_body(*cfg, outcome, value), elapsed.count());
    return detail::emit(opt.out_path, out, err, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
}

struct SimulateOptions {
    fs::path config;
    std::optional<std::size_t> iterations;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<fs::path> out_path;
    std::optional<fs::path> dump_iterations;
    std::optional<fs::path> summary_csv;
};

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
    int code = exit_ok;
    auto cfg = detail::load_checked(opt.config, err, code);
    if (!cfg) return code;
    if (opt.iterations && *opt.iterations < 1) {
        err << "error: --iterations must be at least 1\n";
        return exit_invalid;
    }
    const auto sim = detail::simulation_config(*cfg, opt.iterations, opt.seed, opt.workers);
    const auto start = std::chrono::steady_clock::now();
    const auto result = engine::run_simulation(cfg->model, sim);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    if (opt.dump_iterations) {
        code = detail::emit(opt.dump_iterations, out, err,
                            [&](std::ostream& os) { write_iterations_csv(os, result.valuations); });
        if (code != exit_ok) return code;
    }
    if (opt.summary_csv) {
        code = detail::emit(opt.summary_csv, out, err, [&](std::ostream& os) { write_summary_csv(os, result.report); });
        if (code != exit_ok) return code;
    }
    const json report = wrap_report(simulation_body(*cfg, sim, result), elapsed.count());
    return detail::emit(opt.out_path, out, err, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
}

inline int cmd_delta(const fs::path& config, std::ostream& out, std::ostream& err) {
    int code = exit_ok;
    auto cfg = detail::load_checked(config, err, code);
    if (!cfg) return code;
    return detail::emit(std::nullopt, out, err, [&](std::ostream& os) { write_delta_csv(os, cfg->model.risks); });
}

inline int cmd_costs(const fs::path& config, cost::CapexBasis basis, std::ostream& out, std::ostream& err) {
    int code = exit_ok;
    auto cfg = detail::load_checked(config, err, code);
    if (!cfg) return code;
    const auto& m = cfg->model;
    const auto schedule = cost::tco(m.capex, m.opex, m.rules, m.horizon_years, dist::AnalyticDraws{}, basis);
    return detail::emit(std::nullopt, out, err, [&](std::ostream& os) { write_cost_csv(os, schedule); });
}

inline int cmd_track(const fs::path& config, const fs::path& actuals, std::ostream& out, std::ostream& err) {
    int code = exit_ok;
    auto cfg = detail::load_checked(config, err, code);
    if (!cfg) return code;
    std::string text;
    if (!read_file(actuals, text)) {
        err << "error: cannot read actuals file " << actuals.string() << '\n';
        return exit_io;
    }
    const auto loaded = parse_actuals(text, *cfg);
    print_diagnostics(err, loaded.diagnostics);
    if (!loaded.record) return exit_invalid;
    const auto rows = track(*cfg, *loaded.record);
    return detail::emit(std::nullopt, out, err, [&](std::ostream& os) { write_track_csv(os, *loaded.record, rows); });
}

struct PlotOptions {
    fs::path config;
    std::string metric;
    std::optional<std::size_t> iterations;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
};

inline std::string valid_metric_list() {
    std::string list;
    for (auto m : valuation::all_metrics) list += (list.empty() ? "" : ", ") + std::string(valuation::to_string(m));
    return list;
}

inline int cmd_plotdata(const PlotOptions& opt, std::ostream& out, std::ostream& err) {
    const auto metric = valuation::parse_metric(opt.metric);
    if (!metric) {
        err << "error: unknown metric '" << opt.metric << "'; valid metrics: " << valid_metric_list() << '\n';
        return exit_invalid;
    }
    int code = exit_ok;
    auto cfg = detail::load_checked(opt.config, err, code);
    if (!cfg) return code;
    if (opt.iterations && *opt.iterations < 1) {
        err << "error: --iterations must be at least 1\n";
        return exit_invalid;
    }
    const auto sim = detail::simulation_config(*cfg, opt.iterations, opt.seed, opt.workers);
    const auto result = engine::run_simulation(cfg->model, sim);
    return detail::emit(std::nullopt, out, err, [&](std::ostream& os) {
        write_plot_csv(os, *metric, valuation::metric_samples(result.valuations, *metric));
    });
}

}  // namespace airoi::cli
