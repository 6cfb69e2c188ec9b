#pragma once

// Portfolio model, per-iteration evaluation and the parallel Monte Carlo
// driver.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "airoi/benefitmodel.hpp"
#include "airoi/costmodel.hpp"
#include "airoi/diagnostics.hpp"
#include "airoi/riskmodel.hpp"
#include "airoi/summary.hpp"
#include "airoi/valuation.hpp"

namespace airoi::engine {

using valuation::IterationOutcome;
using valuation::ValuationOutcome;

struct PortfolioModel {
    int horizon_years = 1;
    double discount_rate = 0.0;
    // First year in which the risk delta applies.
    int deployment_year = 1;
    std::vector<benefit::BenefitItem> benefits;
    std::vector<cost::CapexItem> capex;
    std::vector<cost::OpexItem> opex;
    cost::CostRules rules;
    risk::RiskRegister risks;
};

inline Diagnostics validate(const PortfolioModel& m) {
    Diagnostics d;
    if (m.horizon_years < 1) {
        d.error("/horizon_years", "horizon_years ≥ 1 required");
        return d;
    }
    if (!(m.discount_rate >= 0.0)) d.error("/discount_rate", "discount rate ≥ 0 required");
    if (m.deployment_year < 0 || m.deployment_year >= m.horizon_years)
        d.error("/deployment_year", "deployment_year must lie within the horizon");
    d.append(benefit::validate(m.benefits, m.horizon_years), "/benefits");
    d.append(cost::validate(m.capex, m.opex, m.rules, m.horizon_years), "/costs");
    d.append(risk::validate(m.risks), "/risks");
    return d;
}

inline void require_valid(const PortfolioModel& m) {
    auto d = validate(m);
    if (d.has_errors()) throw ValidationError(std::move(d));
}

// Sum of discount factors over the years in which the risk delta applies.
inline double risk_annuity_factor(const PortfolioModel& m) {
    double a = 0.0;
    for (int t = m.deployment_year; t < m.horizon_years; ++t) a += valuation::discount_factor(t, m.discount_rate);
    return a;
}

// Assembles one outcome. `draw` supplies benefit and cost amounts; `risk` is
// the already-evaluated risk delta for the same pass.
template <class Draws>
IterationOutcome assemble(const PortfolioModel& m, const Draws& draw, const risk::RiskDeltaResult& risk,
                          std::size_t iteration) {
    const int h = m.horizon_years;
    const auto n = static_cast<std::size_t>(h);
    const auto benefits = benefit::benefit_schedule(m.benefits, h, draw);
    const auto amortized = cost::tco(m.capex, m.opex, m.rules, h, draw, cost::CapexBasis::amortized);
    const auto cash = cost::tco(m.capex, m.opex, m.rules, h, draw, cost::CapexBasis::cash);

    IterationOutcome o;
    o.iteration = iteration;
    o.risk_delta = risk.total;
    o.ale_current_total = risk.ale_current_total;
    o.ale_ai_total = risk.ale_ai_total;
    o.risk_annuity_factor = risk_annuity_factor(m);
    o.tco_undiscounted = amortized.total;
    o.net_cash_flows.resize(n);
    o.cash_basis_flows.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double df = valuation::discount_factor(static_cast<int>(t), m.discount_rate);
        const double delta = static_cast<int>(t) >= m.deployment_year ? risk.total : 0.0;
        o.gross_benefits += benefits[t] * df;
        o.tco_total += amortized.per_year[t] * df;
        o.net_cash_flows[t] = benefits[t] + delta - amortized.per_year[t];
        o.cash_basis_flows[t] = benefits[t] + delta - cash.per_year[t];
    }
    // Split so that reduction - increase is exactly delta x annuity.
    o.risk_reduction = std::max(risk.total, 0.0) * o.risk_annuity_factor;
    o.risk_increase = std::max(-risk.total, 0.0) * o.risk_annuity_factor;
    return o;
}

// Mean-based evaluation: every draw replaced by its closed-form mean.
inline IterationOutcome analytic_evaluate(const PortfolioModel& m) {
    require_valid(m);
    return assemble(m, dist::AnalyticDraws{}, risk::risk_delta_analytic(m.risks), 0);
}

inline IterationOutcome simulate_iteration(const PortfolioModel& m, std::uint64_t master_seed,
                                           std::uint64_t iteration) {
    const dist::IterationDraws draw{master_seed, iteration};
    return assemble(m, draw, risk::risk_delta_simulated(m.risks, master_seed, iteration),
                    static_cast<std::size_t>(iteration));
}

//---------------------------------------------------------------------------//
// Monte Carlo driver
//---------------------------------------------------------------------------//

inline constexpr std::size_t default_iterations = 10000;
// Early stopping is evaluated only at multiples of this batch size so the
// stopping point is independent of the worker count.
inline constexpr std::size_t early_stop_batch = 1000;

struct SimulationConfig {
    std::size_t iterations = default_iterations;
    std::uint64_t master_seed = 0;
    unsigned worker_count = 0;  // 0 = hardware concurrency
    std::optional<double> target_relative_se;
};

struct SimulationResult {
    std::vector<IterationOutcome> outcomes;
    std::vector<ValuationOutcome> valuations;
    valuation::Report report;
};

inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {
// Evaluates iterations [begin, end) on `workers` threads; slot i only ever
// holds iteration i.
inline void run_range(const PortfolioModel& m, const SimulationConfig& cfg, std::size_t begin, std::size_t end,
                      unsigned workers, std::vector<IterationOutcome>& outcomes,
                      std::vector<ValuationOutcome>& valuations) {
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < end; i += stride) {
            outcomes[i] = simulate_iteration(m, cfg.master_seed, i);
            valuations[i] = valuation::value(outcomes[i], m.discount_rate);
        }
    };
    if (workers <= 1 || end - begin < 2) {
        work(begin, 1);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    work(begin + w, workers);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

inline bool converged(std::span<const ValuationOutcome> done, double target) {
    const auto net = valuation::metric_samples(done, valuation::Metric::net_benefit);
    if (net.size() < 2) return false;
    const auto s = summarize(net);
    if (s.mean == 0.0) return *s.standard_error == 0.0;
    return *s.standard_error / std::abs(s.mean) <= target;
}
}  // namespace detail

// Outcome i depends only on (model, master_seed, i). Results are stored and
// aggregated in iteration order, so they do not depend on worker_count.
inline SimulationResult run_simulation(const PortfolioModel& m, const SimulationConfig& cfg) {
    require_valid(m);
    if (cfg.iterations < 1) throw std::invalid_argument("iterations must be at least 1");
    const unsigned workers = resolve_workers(cfg.worker_count);

    SimulationResult r;
    r.outcomes.resize(cfg.iterations);
    r.valuations.resize(cfg.iterations);

    std::size_t done = 0;
    if (!cfg.target_relative_se) {
        detail::run_range(m, cfg, 0, cfg.iterations, workers, r.outcomes, r.valuations);
        done = cfg.iterations;
    } else {
        while (done < cfg.iterations) {
            const std::size_t next = std::min(cfg.iterations, done + early_stop_batch);
            detail::run_range(m, cfg, done, next, workers, r.outcomes, r.valuations);
            done = next;
            if (detail::converged(std::span(r.valuations).first(done), *cfg.target_relative_se)) break;
        }
        r.outcomes.resize(done);
        r.valuations.resize(done);
    }
    r.report = valuation::build_report(r.valuations);
    return r;
}

}  // namespace airoi::engine
