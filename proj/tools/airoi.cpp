// airoi: risk-adjusted ROI evaluation for AI investment portfolios.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "airoi/cli/commands.hpp"

namespace {

template <class T>
std::optional<T> if_set(const CLI::Option* opt, const T& value) {
    return opt->count() ? std::optional<T>(value) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace airoi::cli;

    CLI::App app{"Risk-adjusted ROI for AI investments: Monte Carlo valuation of benefits, TCO and risk deltas"};
    app.require_subcommand(1);

    std::string config, actuals, out_path, dump_path, summary_path, metric, basis = "amortized";
    std::size_t iterations = 0;
    std::uint64_t seed = 0;
    unsigned workers = 0;

    auto* validate = app.add_subcommand("validate", "Check a portfolio config; warnings do not fail");
    validate->add_option("config", config, "Portfolio config (JSON)")->required();

    auto* evaluate = app.add_subcommand("evaluate", "Mean-based (analytic) evaluation as a JSON report");
    evaluate->add_option("config", config, "Portfolio config (JSON)")->required();
    auto* evaluate_out = evaluate->add_option("--out", out_path, "Write the report to a file instead of stdout");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo evaluation as a JSON percentile report");
    simulate->add_option("config", config, "Portfolio config (JSON)")->required();
    auto* sim_iter = simulate->add_option("--iterations", iterations, "Iteration count (config default if absent)");
    auto* sim_seed = simulate->add_option("--seed", seed, "Master seed (config default if absent)");
    auto* sim_workers = simulate->add_option("--workers", workers, "Worker threads; results do not depend on it")
                            ->check(CLI::PositiveNumber);
    auto* sim_out = simulate->add_option("--out", out_path, "Write the report to a file instead of stdout");
    auto* sim_dump = simulate->add_option("--dump-iterations", dump_path, "Write per-iteration outcomes as CSV");
    auto* sim_summary = simulate->add_option("--summary-csv", summary_path, "Write the per-metric summary as CSV");

    auto* delta = app.add_subcommand("delta", "Risk-delta table (CSV) with a TOTAL row");
    delta->add_option("config", config, "Portfolio config (JSON)")->required();

    auto* costs = app.add_subcommand("costs", "Analytic per-year cost schedule (CSV)");
    costs->add_option("config", config, "Portfolio config (JSON)")->required();
    costs->add_option("--basis", basis, "Capex basis")->check(CLI::IsMember({"amortized", "cash"}));

    auto* trackc = app.add_subcommand("track", "Quarterly actuals versus projections (CSV)");
    trackc->add_option("config", config, "Portfolio config (JSON)")->required();
    trackc->add_option("actuals", actuals, "Actuals record (JSON)")->required();

    auto* plot = app.add_subcommand("plotdata", "Histogram and CDF of one simulated metric (CSV)");
    plot->add_option("config", config, "Portfolio config (JSON)")->required();
    plot->add_option("--metric", metric, "Metric name")->required();
    auto* plot_iter = plot->add_option("--iterations", iterations, "Iteration count");
    auto* plot_seed = plot->add_option("--seed", seed, "Master seed");
    auto* plot_workers = plot->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_invalid;
    }

    try {
        if (validate->parsed()) return cmd_validate(config, std::cout, std::cerr);
        if (evaluate->parsed())
            return cmd_evaluate({config, if_set<std::filesystem::path>(evaluate_out, out_path)}, std::cout, std::cerr);
        if (simulate->parsed()) {
            SimulateOptions opt;
            opt.config = config;
            opt.iterations = if_set(sim_iter, iterations);
            opt.seed = if_set(sim_seed, seed);
            opt.workers = if_set(sim_workers, workers);
            opt.out_path = if_set<std::filesystem::path>(sim_out, out_path);
            opt.dump_iterations = if_set<std::filesystem::path>(sim_dump, dump_path);
            opt.summary_csv = if_set<std::filesystem::path>(sim_summary, summary_path);
            return cmd_simulate(opt, std::cout, std::cerr);
        }
        if (delta->parsed()) return cmd_delta(config, std::cout, std::cerr);
        if (costs->parsed())
            return cmd_costs(config, basis == "cash" ? airoi::cost::CapexBasis::cash : airoi::cost::CapexBasis::amortized,
                             std::cout, std::cerr);
        if (trackc->parsed()) return cmd_track(config, actuals, std::cout, std::cerr);
        if (plot->parsed()) {
            PlotOptions opt;
            opt.config = config;
            opt.metric = metric;
            opt.iterations = if_set(plot_iter, iterations);
            opt.seed = if_set(plot_seed, seed);
            opt.workers = if_set(plot_workers, workers);
            return cmd_plotdata(opt, std::cout, std::cerr);
        }
    } catch (const airoi::ValidationError& e) {
        print_diagnostics(std::cerr, e.diagnostics());
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_invalid;
    }
    return exit_invalid;
}
