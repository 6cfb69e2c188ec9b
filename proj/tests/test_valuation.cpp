#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "airoi/valuation.hpp"

using namespace airoi::valuation;
using Vec = std::vector<double>;

namespace {

// Conventional profiles with a known root: a level annuity priced at r, or a
// single balloon repayment of 100(1+r)^n.
struct Constructed {
    Vec flows;
    double root;
};

std::vector<Constructed> constructed_profiles() {
    std::vector<Constructed> out;
    const double rates[] = {-0.25, -0.05, 0.0, 0.03, 0.08, 0.10, 0.15, 0.35, 0.9, 2.5};
    for (double r : rates) {
        const int n = 6;
        const double annuity = r == 0.0 ? 1.0 * n : (1.0 - std::pow(1.0 + r, -n)) / r;
        Vec level(n + 1, 100.0 / annuity);
        level[0] = -100.0;
        out.push_back({level, r});
        Vec balloon(4, 0.0);
        balloon[0] = -100.0;
        balloon[3] = 100.0 * std::pow(1.0 + r, 3);
        out.push_back({balloon, r});
    }
    return out;
}

}  // namespace

TEST_CASE("risk-adjusted net arithmetic", "[valuation][net]") {
    CHECK(risk_adjusted_net(0, 0, 0, 0) == 0);
    CHECK(risk_adjusted_net(500000, 40000, 30000, 450000) == 60000);
    CHECK(risk_adjusted_net(100, 0, 0, 100) == 0);
}

TEST_CASE("npv", "[valuation][npv]") {
    CHECK(npv(Vec{-100, 110}, 0.10) == Catch::Approx(0).margin(1e-12));
    CHECK(npv(Vec{-100, 60, 60}, 0.05) == Catch::Approx(11.565).margin(0.001));
    const Vec flows{-5, 3, 9, -2, 7};
    CHECK(npv(flows, 0.0) == 12.0);
    CHECK_THROWS_AS(npv(flows, -1.0), std::domain_error);
    CHECK_THROWS_AS(npv(flows, -2.0), std::domain_error);
}

TEST_CASE("npv is strictly decreasing for conventional profiles", "[valuation][npv][property]") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> amount(0.0, 100.0), rate(-0.5, 3.0);
    for (int k = 0; k < 500; ++k) {
        Vec flows(2 + gen() % 8);
        flows[0] = -amount(gen) - 1.0;
        for (std::size_t t = 1; t < flows.size(); ++t) flows[t] = amount(gen);
        flows.back() += 1.0;
        double r1 = rate(gen), r2 = rate(gen);
        if (r1 == r2) continue;
        if (r1 > r2) std::swap(r1, r2);
        CHECK(npv(flows, r1) > npv(flows, r2));
    }
}

TEST_CASE("irr examples", "[valuation][irr]") {
    CHECK(*irr(Vec{-100, 110}) == Catch::Approx(0.10).margin(1e-9));
    CHECK(*irr(Vec{-100, 0, 121}) == Catch::Approx(0.10).margin(1e-9));
    CHECK_FALSE(irr(Vec{100, 110}));
    CHECK_FALSE(irr(Vec{0, 0, 0}));
}

TEST_CASE("irr recovers constructed roots", "[valuation][irr]") {
    const auto cases = constructed_profiles();
    REQUIRE(cases.size() == 20);
    for (const auto& c : cases) {
        const auto r = irr(c.flows);
        INFO("root " << c.root);
        REQUIRE(r);
        CHECK(std::abs(*r - c.root) <= 1e-7);
        CHECK(std::abs(npv(c.flows, *r)) <= 1e-6);
    }
}

TEST_CASE("irr with several sign changes returns the smallest root", "[valuation][irr]") {
    // Roots at 0.10 and 0.20: (1+r)^2 - 2.3(1+r) + 1.32.
    const Vec flows{1.0, -2.3, 1.32};
    CHECK(sign_changes(flows) == 2);
    const auto r = irr(flows);
    REQUIRE(r);
    CHECK(*r == Catch::Approx(0.10).margin(1e-9));
}

TEST_CASE("irr residual stays within tolerance", "[valuation][irr][property]") {
    std::mt19937_64 gen(6);
    std::normal_distribution<double> flow(0.0, 100.0);
    for (int k = 0; k < 2000; ++k) {
        Vec flows(2 + gen() % 10);
        for (auto& f : flows) f = flow(gen);
        if (auto r = irr(flows)) CHECK(std::abs(npv(flows, *r)) <= irr_tolerance(flows));
    }
}

TEST_CASE("payback", "[valuation][payback]") {
    CHECK(*payback_period(Vec{-100, 50, 50}) == 2.0);
    CHECK(*payback_period(Vec{-100, 40, 40, 40}) == 2.5);
    CHECK_FALSE(payback_period(Vec{-100, 10, 10}));
    CHECK(*payback_period(Vec{10, 10}) == 0.0);
    CHECK(*payback_period(Vec{0, -100, 200}) == 1.5);
}

TEST_CASE("payback ignores trailing zero years", "[valuation][payback][property]") {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> amount(0.0, 100.0);
    for (int k = 0; k < 500; ++k) {
        Vec flows(2 + gen() % 6);
        flows[0] = -amount(gen);
        for (std::size_t t = 1; t < flows.size(); ++t) flows[t] = amount(gen) * 0.5;
        auto padded = flows;
        padded.resize(flows.size() + 1 + gen() % 4, 0.0);
        CHECK(payback_period(flows) == payback_period(padded));
    }
}

TEST_CASE("scaling flows leaves irr and payback unchanged", "[valuation][property]") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> amount(1.0, 100.0), factor(0.01, 1000.0);
    for (int trial = 0; trial < 500; ++trial) {
        Vec flows(3 + gen() % 5);
        flows[0] = -amount(gen) * 3;
        for (std::size_t t = 1; t < flows.size(); ++t) flows[t] = amount(gen);
        // Powers of two keep the scaled arithmetic exact.
        const double kexact = std::ldexp(1.0, static_cast<int>(gen() % 20) - 10);
        auto scaled = flows;
        for (auto& f : scaled) f *= kexact;
        CHECK(payback_period(scaled) == payback_period(flows));
        CHECK(npv(scaled, 0.07) == kexact * npv(flows, 0.07));
        const auto r1 = irr(flows), r2 = irr(scaled);
        REQUIRE(r1.has_value() == r2.has_value());
        if (r1) CHECK(*r2 == Catch::Approx(*r1).margin(1e-9));

        const double k = factor(gen);
        for (std::size_t t = 0; t < flows.size(); ++t) scaled[t] = flows[t] * k;
        CHECK(npv(scaled, 0.07) == Catch::Approx(k * npv(flows, 0.07)).epsilon(1e-12));
        if (r1) CHECK(*irr(scaled) == Catch::Approx(*r1).margin(1e-9));
        if (auto p = payback_period(flows)) CHECK(*payback_period(scaled) == Catch::Approx(*p).epsilon(1e-12));
    }
}

TEST_CASE("value applies the identity and the ratio rule", "[valuation][value]") {
    IterationOutcome o;
    o.gross_benefits = 0;
    o.tco_total = 0;
    o.net_cash_flows = {0, 0};
    o.cash_basis_flows = {0, 0};
    auto v = value(o, 0.05);
    CHECK_FALSE(v.roi_ratio);
    CHECK_FALSE(v.irr);

    o.gross_benefits = 500000;
    o.risk_reduction = 40000;
    o.risk_increase = 30000;
    o.tco_total = 450000;
    o.net_cash_flows = {60000};
    o.cash_basis_flows = {60000};
    v = value(o, 0.0);
    CHECK(v.net_risk_adjusted_benefit == 60000);
    CHECK(*v.roi_ratio == Catch::Approx(60000.0 / 450000.0));
    CHECK(identity_residual(v) == 0.0);
}

TEST_CASE("report summaries", "[valuation][report]") {
    ValuationOutcome single;
    single.net_risk_adjusted_benefit = 42;
    single.payback_years = 2.5;
    const auto one = build_report(std::vector<ValuationOutcome>{single});
    const auto& net = *one.at(Metric::net_benefit).summary;
    CHECK(net.p10 == 42);
    CHECK(net.p50 == 42);
    CHECK(net.p90 == 42);
    CHECK_FALSE(net.standard_error);

    std::vector<ValuationOutcome> many(10, single);
    const auto r = build_report(many);
    CHECK_FALSE(r.at(Metric::irr).summary);
    CHECK(r.at(Metric::irr).excluded == 10);
    CHECK(r.at(Metric::payback_years).excluded == 0);
    CHECK(*r.at(Metric::net_benefit).summary->standard_error == 0.0);
    CHECK_THROWS_AS(build_report(std::vector<ValuationOutcome>{}), airoi::dist::NoSamplesError);
}

TEST_CASE("metric names round-trip", "[valuation][report]") {
    for (Metric m : all_metrics) CHECK(parse_metric(to_string(m)) == m);
    CHECK_FALSE(parse_metric("nope"));
}
