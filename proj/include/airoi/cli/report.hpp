#pragma once

// JSON report documents and CSV tables.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "airoi/cli/config.hpp"
#include "airoi/cli/hash.hpp"
#include "airoi/engine.hpp"

namespace airoi::cli {

using nlohmann::json;
using valuation::Metric;

inline double round_cents(double v) {
    const double r = std::round(v * 100.0) / 100.0;
    return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

inline std::string format_currency(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", round_cents(v));
    return buf;
}

inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_metric(Metric m, double v) {
    return valuation::is_currency(m) ? format_currency(v) : format_real(v);
}

inline json optional_json(const std::optional<double>& v, bool currency) {
    if (!v) return nullptr;
    return currency ? round_cents(*v) : *v;
}

inline json definitions_json() {
    return {
        {"net_benefit", "gross benefits + risk reduction - risk increase - TCO, each discounted to year 0"},
        {"roi_ratio", "net_benefit / discounted TCO over the horizon"},
        {"npv", "net present value of yearly flows with amortized capex"},
        {"irr", "internal rate of return of cash-basis flows; smallest root in (-0.999, 10]"},
        {"payback_years", "first crossing of cumulative cash-basis flow, interpolated within the year"},
        {"risk_delta", "sum over scenarios of ALE_current - ALE_AI, per year"},
    };
}

inline json summary_json(const valuation::MetricReport& mr) {
    const bool currency = valuation::is_currency(mr.metric);
    auto c = [currency](double v) -> json { return currency ? round_cents(v) : v; };
    json j;
    j["excluded"] = mr.excluded;
    if (!mr.summary) {
        j["defined"] = false;
        return j;
    }
    const auto& s = *mr.summary;
    j["defined"] = true;
    j["n"] = s.n;
    j["mean"] = c(s.mean);
    j["standard_error"] = s.standard_error ? c(*s.standard_error) : json(nullptr);
    j["p10"] = c(s.p10);
    j["p50"] = c(s.p50);
    j["p90"] = c(s.p90);
    j["min"] = c(s.min);
    j["max"] = c(s.max);
    return j;
}

inline json header_json(const PortfolioConfig& cfg, const char* kind) {
    return {
        {"schema_version", schema_version},
        {"report", kind},
        {"portfolio", cfg.name},
        {"currency", cfg.currency},
        {"config_sha256", sha256_hex(cfg.raw_text)},
        {"horizon_years", cfg.model.horizon_years},
        {"discount_rate", cfg.model.discount_rate},
        {"deployment_year", cfg.model.deployment_year},
    };
}

inline json simulation_body(const PortfolioConfig& cfg, const engine::SimulationConfig& sim,
                            const engine::SimulationResult& result) {
    json body = header_json(cfg, "simulation");
    body["seed"] = sim.master_seed;
    body["iterations"] = result.valuations.size();
    body["iterations_requested"] = sim.iterations;
    if (sim.target_relative_se) body["target_relative_se"] = *sim.target_relative_se;
    body["definitions"] = definitions_json();
    json metrics = json::object();
    for (const auto& mr : result.report.metrics) metrics[valuation::to_string(mr.metric)] = summary_json(mr);
    body["metrics"] = std::move(metrics);
    body["irr_multiple_sign_change_iterations"] = result.report.irr_ambiguous;
    return body;
}

inline json outcome_json(const valuation::IterationOutcome& o, const valuation::ValuationOutcome& v) {
    return {
        {"gross_benefits", round_cents(v.gross_benefits)},
        {"risk_reduction", round_cents(v.risk_reduction)},
        {"risk_increase", round_cents(v.risk_increase)},
        {"tco", round_cents(v.tco)},
        {"tco_undiscounted", round_cents(o.tco_undiscounted)},
        {"net_benefit", round_cents(v.net_risk_adjusted_benefit)},
        {"roi_ratio", optional_json(v.roi_ratio, false)},
        {"npv", round_cents(v.npv)},
        {"irr", optional_json(v.irr, false)},
        {"irr_multiple_sign_changes", v.irr_ambiguous},
        {"payback_years", optional_json(v.payback_years, false)},
        {"risk_delta", round_cents(v.risk_delta)},
        {"ale_current", round_cents(o.ale_current_total)},
        {"ale_ai", round_cents(o.ale_ai_total)},
    };
}

inline json analytic_body(const PortfolioConfig& cfg, const valuation::IterationOutcome& o,
                          const valuation::ValuationOutcome& v) {
    json body = header_json(cfg, "analytic");
    body["definitions"] = definitions_json();
    body["outcome"] = outcome_json(o, v);
    json flows = json::array();
    for (std::size_t t = 0; t < o.net_cash_flows.size(); ++t)
        flows.push_back({{"year", t},
                         {"net_amortized", round_cents(o.net_cash_flows[t])},
                         {"net_cash_basis", round_cents(o.cash_basis_flows[t])}});
    body["cash_flows"] = std::move(flows);
    return body;
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// The body is covered by its SHA-256; timing metadata sits outside it.
inline json wrap_report(json body, double elapsed_seconds) {
    const std::string digest = sha256_hex(body.dump());
    return {{"body", std::move(body)},
            {"body_sha256", digest},
            {"generated_at", utc_timestamp()},
            {"elapsed_seconds", elapsed_seconds}};
}

//---------------------------------------------------------------------------//
// CSV tables
//---------------------------------------------------------------------------//

inline void write_delta_csv(std::ostream& out, const risk::RiskRegister& reg) {
    const auto result = risk::risk_delta_analytic(reg);
    out << "scenario_id,classification,ale_current,ale_ai,delta\n";
    for (std::size_t i = 0; i < reg.scenarios.size(); ++i) {
        const auto& s = reg.scenarios[i];
        const auto& d = result.per_scenario[i];
        out << s.id << ',' << risk::to_string(risk::classify_scenario(s)) << ',' << format_currency(d.ale_current)
            << ',' << format_currency(d.ale_ai) << ',' << format_currency(d.delta) << '\n';
    }
    const auto total_class = result.total > 0.0   ? risk::Classification::reduction
                             : result.total < 0.0 ? risk::Classification::introduction
                                                  : risk::Classification::neutral;
    out << "TOTAL," << risk::to_string(total_class) << ',' << format_currency(result.ale_current_total) << ','
        << format_currency(result.ale_ai_total) << ',' << format_currency(result.total) << '\n';
}

inline void write_cost_csv(std::ostream& out, const cost::CostSchedule& s) {
    out << "year,capex,opex,maintenance,reserve,total\n";
    for (std::size_t t = 0; t < s.per_year.size(); ++t)
        out << t << ',' << format_currency(s.capex[t]) << ',' << format_currency(s.opex[t]) << ','
            << format_currency(s.maintenance[t]) << ',' << format_currency(s.reserve[t]) << ','
            << format_currency(s.per_year[t]) << '\n';
}

inline void write_iterations_csv(std::ostream& out, std::span<const valuation::ValuationOutcome> outcomes) {
    out << "iteration";
    for (Metric m : valuation::all_metrics) out << ',' << valuation::to_string(m);
    out << '\n';
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        out << i;
        for (Metric m : valuation::all_metrics) {
            out << ',';
            if (auto v = valuation::metric_value(outcomes[i], m)) out << format_metric(m, *v);
        }
        out << '\n';
    }
}

inline void write_summary_csv(std::ostream& out, const valuation::Report& report) {
    out << "metric,n,excluded,mean,standard_error,p10,p50,p90,min,max\n";
    for (const auto& mr : report.metrics) {
        out << valuation::to_string(mr.metric) << ',';
        if (!mr.summary) {
            out << "0," << mr.excluded << ",,,,,,,\n";
            continue;
        }
        const auto& s = *mr.summary;
        auto f = [&](double v) { return format_metric(mr.metric, v); };
        out << s.n << ',' << mr.excluded << ',' << f(s.mean) << ','
            << (s.standard_error ? f(*s.standard_error) : std::string()) << ',' << f(s.p10) << ',' << f(s.p50)
            << ',' << f(s.p90) << ',' << f(s.min) << ',' << f(s.max) << '\n';
    }
}

inline constexpr std::size_t plot_bins = 50;

// Equal-width histogram over [min, max] with the empirical CDF at each bin's
// upper edge. A constant sample lands entirely in the first bin.
inline void write_plot_csv(std::ostream& out, Metric m, std::vector<double> samples) {
    out << "bin,lo,hi,count,cdf\n";
    if (samples.empty()) return;
    std::sort(samples.begin(), samples.end());
    const double lo = samples.front();
    const double hi = samples.back();
    const double width = (hi - lo) / static_cast<double>(plot_bins);
    std::vector<std::size_t> counts(plot_bins, 0);
    for (double x : samples) {
        std::size_t b = 0;
        if (width > 0.0) b = std::min(plot_bins - 1, static_cast<std::size_t>((x - lo) / width));
        ++counts[b];
    }
    std::size_t cumulative = 0;
    for (std::size_t b = 0; b < plot_bins; ++b) {
        cumulative += counts[b];
        const double edge_lo = lo + width * static_cast<double>(b);
        const double edge_hi = b + 1 == plot_bins ? hi : lo + width * static_cast<double>(b + 1);
        const double cdf = static_cast<double>(cumulative) / static_cast<double>(samples.size());
        out << b << ',' << format_metric(m, edge_lo) << ',' << format_metric(m, edge_hi) << ',' << counts[b] << ','
            << format_real(cdf) << '\n';
    }
}

}  // namespace airoi::cli
