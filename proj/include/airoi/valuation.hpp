#pragma once

// Risk-adjusted net benefit, capital budgeting metrics and the percentile
// report.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "airoi/summary.hpp"

namespace airoi::valuation {

// Gross + risk reduction - risk increase - TCO. Both risk terms are
// nonnegative parts of the signed risk delta.
inline double risk_adjusted_net(double gross, double risk_reduction, double risk_increase, double tco) {
    return gross + risk_reduction - risk_increase - tco;
}

// End-of-year convention: cf[0] is undiscounted.
inline double npv(std::span<const double> cashflows, double rate) {
    if (!(rate > -1.0)) throw std::domain_error("discount rate must exceed -1");
    if (cashflows.empty()) throw std::invalid_argument("npv needs at least one cash flow");
    // Horner in 1/(1+rate).
    const double x = 1.0 / (1.0 + rate);
    double acc = 0.0;
    for (std::size_t i = cashflows.size(); i-- > 0;) acc = acc * x + cashflows[i];
    return acc;
}

inline double discount_factor(int year, double rate) { return std::pow(1.0 + rate, -year); }

inline int sign_changes(std::span<const double> cashflows) {
    int changes = 0;
    int last = 0;
    for (double cf : cashflows) {
        const int s = (cf > 0.0) - (cf < 0.0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

inline constexpr double irr_rate_min = -0.999;
inline constexpr double irr_rate_max = 10.0;

inline double irr_tolerance(std::span<const double> cashflows) {
    double scale = 0.0;
    for (double cf : cashflows) scale += std::abs(cf);
    return std::max(1e-6, 1e-9 * scale);
}

// Bracketed bisection on (-0.999, 10]. Profiles with more than one sign change
// are scanned on a fixed grid first and the smallest bracketed root is
// returned; two roots inside one grid cell are not resolved.
inline std::optional<double> irr(std::span<const double> cashflows) {
    if (cashflows.empty()) throw std::invalid_argument("irr needs at least one cash flow");
    const int changes = sign_changes(cashflows);
    if (changes == 0) return std::nullopt;
    auto f = [&](double r) { return npv(cashflows, r); };

    double lo = irr_rate_min;
    double hi = irr_rate_max;
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;

    if (changes > 1) {
        constexpr int cells = 2000;
        const double step = (irr_rate_max - irr_rate_min) / cells;
        bool found = false;
        for (int k = 1; k <= cells; ++k) {
            const double r = k == cells ? irr_rate_max : irr_rate_min + k * step;
            const double fr = f(r);
            if (fr == 0.0) return r;
            if ((fr > 0.0) != (flo > 0.0)) {
                hi = r;
                fhi = fr;
                found = true;
                break;
            }
            lo = r;
            flo = fr;
        }
        if (!found) return std::nullopt;
    } else {
        if (fhi == 0.0) return hi;
        if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;
    }

    for (int it = 0; it < 200; ++it) {
        const double mid = lo + (hi - lo) / 2.0;
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    const double root = std::abs(flo) <= std::abs(fhi) ? lo : hi;
    if (std::abs(f(root)) > irr_tolerance(cashflows)) return std::nullopt;
    return root;
}

// First time the cumulative flow climbs back to zero after a deficit,
// interpolating linearly inside the crossing year. A profile that is never
// in deficit pays back at 0.
inline std::optional<double> payback_period(std::span<const double> cashflows) {
    if (cashflows.empty()) throw std::invalid_argument("payback needs at least one cash flow");
    double cumulative = 0.0;
    bool in_deficit = false;
    for (std::size_t t = 0; t < cashflows.size(); ++t) {
        const double before = cumulative;
        cumulative += cashflows[t];
        if (cumulative < 0.0) {
            in_deficit = true;
        } else if (in_deficit) {
            return static_cast<double>(t - 1) + (-before) / cashflows[t];
        }
    }
    if (!in_deficit) return 0.0;
    return std::nullopt;
}

//---------------------------------------------------------------------------//
// Outcomes
//---------------------------------------------------------------------------//

// One evaluation of the portfolio (a Monte Carlo iteration or the analytic
// pass). Monetary terms are present values over the horizon; risk fields
// are annual.
struct IterationOutcome {
    std::size_t iteration = 0;
    double gross_benefits = 0.0;
    double risk_reduction = 0.0;
    double risk_increase = 0.0;
    double tco_total = 0.0;        // discounted, amortized capex
    double tco_undiscounted = 0.0;
    double risk_delta = 0.0;       // per year
    double ale_current_total = 0.0;
    double ale_ai_total = 0.0;
    double risk_annuity_factor = 0.0;
    std::vector<double> net_cash_flows;    // amortized capex
    std::vector<double> cash_basis_flows;  // capex booked when incurred
};

struct ValuationOutcome {
    double gross_benefits = 0.0;
    double risk_reduction = 0.0;
    double risk_increase = 0.0;
    double tco = 0.0;
    double net_risk_adjusted_benefit = 0.0;
    std::optional<double> roi_ratio;  // net / discounted TCO
    double npv = 0.0;
    std::optional<double> irr;
    bool irr_ambiguous = false;  // cash-basis profile has several sign changes
    std::optional<double> payback_years;
    double risk_delta = 0.0;
};

// NPV and ROI use amortized flows; IRR and payback use cash-basis flows.
inline ValuationOutcome value(const IterationOutcome& o, double discount_rate) {
    ValuationOutcome v;
    v.gross_benefits = o.gross_benefits;
    v.risk_reduction = o.risk_reduction;
    v.risk_increase = o.risk_increase;
    v.tco = o.tco_total;
    v.net_risk_adjusted_benefit = risk_adjusted_net(o.gross_benefits, o.risk_reduction, o.risk_increase, o.tco_total);
    if (o.tco_total > 0.0) v.roi_ratio = v.net_risk_adjusted_benefit / o.tco_total;
    v.npv = npv(o.net_cash_flows, discount_rate);
    v.irr = irr(o.cash_basis_flows);
    v.irr_ambiguous = sign_changes(o.cash_basis_flows) > 1;
    v.payback_years = payback_period(o.cash_basis_flows);
    v.risk_delta = o.risk_delta;
    return v;
}

// Relative residual of the net-benefit identity, scaled by the magnitude of
// its terms.
inline double identity_residual(const ValuationOutcome& v) {
    const double scale = std::abs(v.gross_benefits) + std::abs(v.risk_reduction) +
                         std::abs(v.risk_increase) + std::abs(v.tco);
    const double diff = v.npv - (v.gross_benefits + v.risk_reduction - v.risk_increase - v.tco);
    return scale > 0.0 ? std::abs(diff) / scale : std::abs(diff);
}

//---------------------------------------------------------------------------//
// Report
//---------------------------------------------------------------------------//

enum class Metric {
    net_benefit,
    roi_ratio,
    npv,
    irr,
    payback_years,
    risk_delta,
    gross_benefits,
    risk_reduction,
    risk_increase,
    tco
};

inline constexpr Metric all_metrics[] = {Metric::net_benefit,   Metric::roi_ratio,      Metric::npv,
                                         Metric::irr,           Metric::payback_years,  Metric::risk_delta,
                                         Metric::gross_benefits, Metric::risk_reduction, Metric::risk_increase,
                                         Metric::tco};

inline const char* to_string(Metric m) {
    switch (m) {
        case Metric::net_benefit: return "net_benefit";
        case Metric::roi_ratio: return "roi_ratio";
        case Metric::npv: return "npv";
        case Metric::irr: return "irr";
        case Metric::payback_years: return "payback_years";
        case Metric::risk_delta: return "risk_delta";
        case Metric::gross_benefits: return "gross_benefits";
        case Metric::risk_reduction: return "risk_reduction";
        case Metric::risk_increase: return "risk_increase";
        case Metric::tco: return "tco";
    }
    return "";
}

inline std::optional<Metric> parse_metric(std::string_view name) {
    for (Metric m : all_metrics)
        if (name == to_string(m)) return m;
    return std::nullopt;
}

// Metrics carried in currency units (rounded to cents on output).
inline bool is_currency(Metric m) {
    return m != Metric::roi_ratio && m != Metric::irr && m != Metric::payback_years;
}

inline std::optional<double> metric_value(const ValuationOutcome& v, Metric m) {
    switch (m) {
        case Metric::net_benefit: return v.net_risk_adjusted_benefit;
        case Metric::roi_ratio: return v.roi_ratio;
        case Metric::npv: return v.npv;
        case Metric::irr: return v.irr;
        case Metric::payback_years: return v.payback_years;
        case Metric::risk_delta: return v.risk_delta;
        case Metric::gross_benefits: return v.gross_benefits;
        case Metric::risk_reduction: return v.risk_reduction;
        case Metric::risk_increase: return v.risk_increase;
        case Metric::tco: return v.tco;
    }
    return std::nullopt;
}

// Defined values of one metric, in outcome order.
inline std::vector<double> metric_samples(std::span<const ValuationOutcome> outcomes, Metric m) {
    std::vector<double> out;
    out.reserve(outcomes.size());
    for (const auto& v : outcomes)
        if (auto x = metric_value(v, m)) out.push_back(*x);
    return out;
}

struct MetricReport {
    Metric metric;
    std::optional<engine::SampleSummary> summary;  // absent when every value is undefined
    std::size_t excluded = 0;                      // iterations where the metric is undefined
};

struct Report {
    std::size_t n = 0;
    std::vector<MetricReport> metrics;
    std::size_t irr_ambiguous = 0;

    const MetricReport& at(Metric m) const {
        for (const auto& r : metrics)
            if (r.metric == m) return r;
        throw std::out_of_range("metric not in report");
    }
};

// Undefined IRR/payback/ROI values are excluded and counted, never imputed.
inline Report build_report(std::span<const ValuationOutcome> outcomes) {
    if (outcomes.empty()) throw dist::NoSamplesError();
    Report r;
    r.n = outcomes.size();
    for (Metric m : all_metrics) {
        MetricReport mr{m, std::nullopt, 0};
        const auto samples = metric_samples(outcomes, m);
        mr.excluded = outcomes.size() - samples.size();
        if (!samples.empty()) mr.summary = engine::summarize(samples);
        r.metrics.push_back(std::move(mr));
    }
    for (const auto& v : outcomes) r.irr_ambiguous += v.irr_ambiguous;
    return r;
}

}  // namespace airoi::valuation
