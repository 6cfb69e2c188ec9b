// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "airoi/cli/commands.hpp"

using namespace airoi;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

const std::filesystem::path source_dir = AIROI_SOURCE_DIR;
const std::filesystem::path reference = source_dir / "portfolios/reference_portfolio.json";

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) detail = what;
        ok = ok && cond;
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

engine::PortfolioModel load_model(const std::filesystem::path& p) {
    auto res = cli::load_config(p);
    if (!res.ok()) throw std::runtime_error("cannot load " + p.string());
    return res.config->model;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Check net_identity() {
    Check c;
    const auto m = load_model(reference);
    const auto start = Clock::now();
    const auto r = engine::run_simulation(m, {10000, 42, 0, std::nullopt});
    const double elapsed = seconds_since(start);
    double worst = 0.0;
    for (const auto& v : r.valuations) {
        const double terms = v.gross_benefits + v.risk_reduction - v.risk_increase - v.tco;
        const double scale = std::max({std::abs(v.gross_benefits), std::abs(v.risk_reduction),
                                       std::abs(v.risk_increase), std::abs(v.tco), 1.0});
        worst = std::max(worst, std::abs(v.net_risk_adjusted_benefit - terms) / scale);
        worst = std::max(worst, valuation::identity_residual(v));
    }
    for (const char* other : {"portfolios/all_point.json", "portfolios/recommender_ab.json"}) {
        const auto rr = engine::run_simulation(load_model(source_dir / other), {2000, 7, 0, std::nullopt});
        for (const auto& v : rr.valuations) worst = std::max(worst, valuation::identity_residual(v));
    }
    c.require(worst <= 1e-9, "max relative residual " + fmt(worst));
    c.require(elapsed < 1.0, "10^4 iterations took " + fmt(elapsed) + " s");
    if (c.ok) c.detail = "max relative residual " + fmt(worst) + ", 10^4 iterations in " + fmt(elapsed) + " s";
    return c;
}

Check delta_symmetry() {
    Check c;
    std::vector<risk::RiskRegister> registers{load_model(reference).risks};
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> money(1e2, 1e7), rate(0.0, 5.0);
    for (int k = 0; k < 500; ++k) {
        risk::RiskRegister reg;
        const int n = static_cast<int>(gen() % 12);
        for (int i = 0; i < n; ++i) {
            risk::RiskScenario s;
            s.id = "s" + std::to_string(i);
            const double a = money(gen);
            s.sle = (gen() % 2) ? dist::UncertainQuantity{dist::Lognormal{a, 0.9}}
                                : dist::UncertainQuantity{dist::Triangular{0.5 * a, a, 3 * a}};
            s.applies_to = static_cast<risk::AppliesTo>(gen() % 3);
            s.frequency_current = dist::PoissonRate{rate(gen)};
            s.frequency_ai = dist::PointRate{rate(gen)};
            reg.scenarios.push_back(s);
        }
        registers.push_back(reg);
    }
    for (const auto& reg : registers) {
        const double total = risk::risk_delta_analytic(reg).total;
        auto swapped = reg;
        for (auto& s : swapped.scenarios) s = risk::swap_roles(s);
        c.require(risk::risk_delta_analytic(swapped).total == -total, "role swap does not negate exactly");
        double sum = 0.0;
        for (const auto& s : reg.scenarios) sum += risk::risk_delta_analytic(risk::RiskRegister{{s}}).total;
        c.require(sum == total, "singleton sum differs from register delta");
    }
    if (c.ok) c.detail = std::to_string(registers.size()) + " registers, exact";
    return c;
}

Check ale_convergence() {
    Check c;
    struct Case {
        risk::RiskScenario scenario;
        double expected;  // mean(ARO) x mean(SLE), written out by hand
    };
    auto make = [](std::string id, dist::UncertainQuantity sle, dist::FrequencyModel f) {
        risk::RiskScenario s;
        s.id = std::move(id);
        s.sle = sle;
        s.applies_to = risk::AppliesTo::current_only;
        s.frequency_current = f;
        return s;
    };
    const std::vector<Case> cases{
        {make("tri_point", dist::Triangular{50e3, 100e3, 150e3}, dist::PointRate{2}), 2 * 100e3},
        {make("tri_poisson", dist::Triangular{1e3, 4e3, 13e3}, dist::PoissonRate{3.5}), 3.5 * 6e3},
        {make("logn_poisson", dist::Lognormal{20e3, 0.5}, dist::PoissonRate{1.5}), 1.5 * 20e3 * std::exp(0.125)},
        {make("logn_point", dist::Lognormal{5e4, 1.1}, dist::PointRate{0.3}), 0.3 * 5e4 * std::exp(0.605)},
        {make("tri_fraction", dist::Triangular{0, 2e5, 2e5}, dist::PointRate{1.25}), 1.25 * 4e5 / 3},
    };
    const auto start = Clock::now();
    const std::size_t n = 100000;
    std::string worst;
    double worst_z = 0.0;
    for (const auto& k : cases) {
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i)
            xs[i] = risk::ale_simulate(k.scenario, risk::ProcessState::current, 42, i);
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(n);
        const double se = engine::standard_error(xs);
        const double z = std::abs(mean - k.expected) / se;
        if (z > worst_z) {
            worst_z = z;
            worst = k.scenario.id;
        }
        c.require(z <= 4.0, k.scenario.id + " off by " + fmt(z) + " SE");
    }
    const double elapsed = seconds_since(start);
    c.require(elapsed < 10.0, "took " + fmt(elapsed) + " s");
    if (c.ok) c.detail = "worst " + worst + " at " + fmt(worst_z) + " SE, " + fmt(elapsed) + " s";
    return c;
}

Check determinism() {
    Check c;
    std::vector<std::string> bodies;
    for (unsigned w : {1u, 2u, 8u}) {
        cli::SimulateOptions opt;
        opt.config = reference;
        opt.seed = 42;
        opt.workers = w;
        std::ostringstream out, err;
        c.require(cli::cmd_simulate(opt, out, err) == cli::exit_ok, "simulate failed");
        bodies.push_back(json::parse(out.str())["body"].dump());
    }
    c.require(bodies[0] == bodies[1] && bodies[1] == bodies[2], "bodies differ across worker counts");

    const auto base = load_model(reference);
    auto grown = base;
    risk::RiskScenario extra;
    extra.id = "appended_scenario";
    extra.sle = dist::Lognormal{1e5, 1.0};
    extra.frequency_current = dist::PoissonRate{4};
    extra.frequency_ai = dist::PoissonRate{2};
    grown.risks.scenarios.push_back(extra);
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const auto a = risk::risk_delta_simulated(base.risks, 42, i);
        const auto b = risk::risk_delta_simulated(grown.risks, 42, i);
        for (std::size_t k = 0; k < a.per_scenario.size(); ++k)
            c.require(a.per_scenario[k].ale_current == b.per_scenario[k].ale_current &&
                          a.per_scenario[k].ale_ai == b.per_scenario[k].ale_ai,
                      "scenario sample changed at iteration " + std::to_string(i));
    }
    if (c.ok) c.detail = "W=1,2,8 identical; appended scenario leaves 10^4 iterations unchanged";
    return c;
}

Check irr_correctness() {
    Check c;
    int count = 0;
    double worst_err = 0.0, worst_npv = 0.0;
    for (double r : {-0.25, -0.05, 0.0, 0.03, 0.08, 0.10, 0.15, 0.35, 0.9, 2.5}) {
        // Level annuity priced at r, and a single balloon repayment.
        const int n = 6;
        const double annuity = r == 0.0 ? n : (1.0 - std::pow(1.0 + r, -n)) / r;
        std::vector<double> level(n + 1, 100.0 / annuity);
        level[0] = -100.0;
        const std::vector<double> balloon{-100.0, 0.0, 0.0, 100.0 * std::pow(1.0 + r, 3)};
        for (const auto& flows : {level, balloon}) {
            ++count;
            const auto got = valuation::irr(flows);
            c.require(got.has_value(), "undefined for root " + fmt(r));
            if (!got) continue;
            worst_err = std::max(worst_err, std::abs(*got - r));
            worst_npv = std::max(worst_npv, std::abs(valuation::npv(flows, *got)));
        }
    }
    const auto example = valuation::irr(std::vector<double>{-100, 0, 121});
    c.require(example && std::abs(*example - 0.10) <= 1e-7, "[-100, 0, 121] does not give 0.10");
    c.require(count == 20, "expected 20 profiles");
    c.require(worst_err <= 1e-7, "root error " + fmt(worst_err));
    c.require(worst_npv <= 1e-6, "npv at root " + fmt(worst_npv));
    if (c.ok) c.detail = "20 profiles, max |err| " + fmt(worst_err) + ", max |npv| " + fmt(worst_npv);
    return c;
}

Check payback() {
    Check c;
    const auto half = valuation::payback_period(std::vector<double>{-100, 40, 40, 40});
    c.require(half && *half == 2.5, "[-100, 40, 40, 40] is not 2.5");
    const auto two = valuation::payback_period(std::vector<double>{-100, 50, 50});
    c.require(two && *two == 2.0, "[-100, 50, 50] is not 2.0");
    c.require(!valuation::payback_period(std::vector<double>{-100, 10, 10}), "never-recovered flow is defined");
    if (c.ok) c.detail = "2.5 exactly; never-recovered undefined";
    return c;
}

Check penalty_tiers() {
    Check c;
    using risk::PenaltyTierName;
    const auto& p = risk::penalty_tier(PenaltyTierName::prohibited_practice);
    const auto& h = risk::penalty_tier(PenaltyTierName::high_risk_violation);
    const auto& i = risk::penalty_tier(PenaltyTierName::information_failure);
    c.require(p.fixed_cap == 35e6 && p.turnover_rate == 0.07, "prohibited tier constants");
    c.require(h.fixed_cap == 15e6 && h.turnover_rate == 0.03, "high-risk tier constants");
    c.require(i.fixed_cap == 7.5e6 && i.turnover_rate == 0.01, "information tier constants");
    c.require(risk::penalty_magnitude(p, 1e9) == 7e7, "penalty_magnitude(prohibited, 1e9) != 7e7");
    if (c.ok) c.detail = "(35e6, 0.07), (15e6, 0.03), (7.5e6, 0.01); 7e7 at turnover 1e9";
    return c;
}

Check reference_portfolio() {
    Check c;
    const auto m = load_model(reference);
    const auto v = valuation::value(engine::analytic_evaluate(m), m.discount_rate);
    c.require(v.roi_ratio && *v.roi_ratio >= 0.08 && *v.roi_ratio <= 0.12,
              "roi_ratio " + (v.roi_ratio ? fmt(*v.roi_ratio) : std::string("undefined")));
    c.require(v.payback_years && *v.payback_years >= 2.0 && *v.payback_years <= 4.0,
              "payback " + (v.payback_years ? fmt(*v.payback_years) : std::string("undefined")));

    cli::SimulateOptions opt;
    opt.config = reference;
    opt.seed = 42;
    opt.iterations = 10000;
    std::ostringstream out, err;
    c.require(cli::cmd_simulate(opt, out, err) == cli::exit_ok, "simulate failed");
    std::ifstream golden_in(source_dir / "tests/golden/reference_simulate_seed42.json");
    const auto golden = json::parse(golden_in);
    const auto report = json::parse(out.str());
    c.require(report["body"].dump() == golden["body"].dump(), "simulated body differs from golden");
    c.require(report["body_sha256"] == golden["body_sha256"], "body hash differs from golden");
    if (c.ok)
        c.detail = "roi_ratio " + fmt(*v.roi_ratio) + ", payback " + fmt(*v.payback_years) +
                   " years, golden body matches";
    return c;
}

Check percentiles_and_margin() {
    Check c;
    for (const char* cfg : {"portfolios/reference_portfolio.json", "portfolios/recommender_ab.json"}) {
        const auto r = engine::run_simulation(load_model(source_dir / cfg), {10000, 42, 0, std::nullopt});
        for (const auto& mr : r.report.metrics) {
            if (!mr.summary) continue;
            const auto& s = *mr.summary;
            c.require(s.p10 <= s.p50 && s.p50 <= s.p90, std::string("percentile order for ") +
                                                            valuation::to_string(mr.metric));
        }
    }

    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> point(-1e9, 1e9), margin(0.0, 0.99);
    for (int k = 0; k < 100000; ++k) {
        const double p = point(gen);
        c.require(dist::mean(benefit::apply_projection_margin(p, margin(gen))) == p, "margin shifts the mean");
    }

    std::binomial_distribution<std::uint64_t> treat(2000, 0.13), ctrl(2000, 0.10);
    const double truth = 0.03 * 50000 * 20;
    int covered = 0;
    const int trials = 10000;
    for (int k = 0; k < trials; ++k) {
        const auto e = benefit::uplift_estimate({2000, treat(gen), 2000, ctrl(gen), 20, 50000});
        covered += e.lower <= truth && truth <= e.upper;
    }
    const double coverage = static_cast<double>(covered) / trials;
    c.require(coverage >= 0.93, "coverage " + fmt(coverage));
    if (c.ok) c.detail = "ordered percentiles, exact margin means, coverage " + fmt(coverage);
    return c;
}

Check cost_conservation() {
    Check c;
    std::mt19937_64 gen(10);
    std::uniform_real_distribution<double> amount(0.0, 1e8);
    for (int k = 0; k < 10000; ++k) {
        const double a = amount(gen);
        const int life = 1 + static_cast<int>(gen() % 20);
        const int start = static_cast<int>(gen() % 5);
        const auto years = cost::amortize_capex(a, life, start, start + life + static_cast<int>(gen() % 5));
        double sum = 0.0;
        for (double y : years) sum += y;
        c.require(sum == a, "amortized sum differs from amount");
    }
    using V = std::vector<double>;
    c.require(cost::amortize_capex(300000, 3, 0, 5) == V{100000, 100000, 100000, 0, 0}, "straight line");
    c.require(cost::maintenance_opex(1000000, 0.20, 4) == V{0, 200000, 200000, 200000}, "maintenance");
    c.require(cost::reserve_requirement(500000, 0.10) == 50000, "reserve requirement");
    c.require(cost::reserve_charge(50000, cost::CarryingCost{0.05}) == 2500, "carrying cost");
    const cost::OpexItem team{"t", dist::Point{100000}, 0, 0, cost::OpexCategory::personnel, true};
    c.require(dist::mean(cost::effective_amount(team, cost::CostRules{0, 0, 0.40, cost::CashCost{}})) == 140000,
              "talent premium");
    const auto s = cost::tco({cost::CapexItem{"c", dist::Point{300000}, 3, 0, true}},
                             {cost::OpexItem{"o", dist::Point{50000}, 0, 2}}, cost::CostRules{}, 3,
                             dist::AnalyticDraws{});
    c.require(s.per_year == V{150000, 150000, 150000} && s.total == 450000, "combined schedule");
    if (c.ok) c.detail = "10^4 schedules conserve exactly; rule examples exact";
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Check()>>> criteria{
        {"net-benefit identity per iteration", net_identity},
        {"risk delta antisymmetry and additivity", delta_symmetry},
        {"ALE convergence within 4 SE at 10^5", ale_convergence},
        {"determinism across workers and stream stability", determinism},
        {"IRR on 20 constructed profiles", irr_correctness},
        {"payback interpolation", payback},
        {"penalty tier constants", penalty_tiers},
        {"reference portfolio and golden report", reference_portfolio},
        {"percentile order, margin mean, uplift coverage", percentiles_and_margin},
        {"cost conservation and rule arithmetic", cost_conservation},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        failures += !c.ok;
        std::printf("%s AC%zu %s: %s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, c.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
