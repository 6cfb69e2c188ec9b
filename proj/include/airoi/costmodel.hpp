#pragma once

// Per-year total cost of ownership: amortized capex, operating streams,
// maintenance, risk reserves and the specialist talent premium.

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "airoi/diagnostics.hpp"
#include "airoi/dist.hpp"

namespace airoi::cost {

using dist::UncertainQuantity;

enum class OpexCategory {
    compute,
    data_pipeline,
    monitoring,
    retraining,
    personnel,
    compliance,
    security,
    insurance,
    other
};

inline constexpr const char* opex_category_names[] = {
    "compute", "data_pipeline", "monitoring", "retraining", "personnel",
    "compliance", "security", "insurance", "other"};

inline const char* to_string(OpexCategory c) { return opex_category_names[static_cast<int>(c)]; }

struct CapexItem {
    std::string id;
    UncertainQuantity amount = dist::Point{0.0};
    int useful_life_years = 1;
    int incurred_year = 0;
    // Counts toward the base of the maintenance rule.
    bool development = true;
};

struct OpexItem {
    std::string id;
    UncertainQuantity annual_amount = dist::Point{0.0};
    int start_year = 0;
    int end_year = 0;  // inclusive
    OpexCategory category = OpexCategory::other;
    bool specialist = false;

    bool active(int year) const { return year >= start_year && year <= end_year; }
};

struct CashCost {};
// Reserve held as allocated but unavailable capital; only its carrying
// cost (reserve x rate) is charged.
struct CarryingCost {
    double rate = 0.0;
};
using ReserveTreatment = std::variant<CashCost, CarryingCost>;

// A rate of 0 disables the rule.
struct CostRules {
    double maintenance_rate = 0.0;
    double reserve_rate = 0.0;
    double talent_premium_rate = 0.0;
    ReserveTreatment reserve_treatment = CashCost{};
};

struct RateRange {
    double lo;
    double hi;
};
inline constexpr RateRange maintenance_range{0.15, 0.25};
inline constexpr RateRange reserve_range{0.10, 0.15};
inline constexpr RateRange talent_premium_range{0.30, 0.50};

enum class CapexBasis { amortized, cash };

struct CostSchedule {
    std::vector<double> capex;
    std::vector<double> opex;
    std::vector<double> maintenance;
    std::vector<double> reserve;
    std::vector<double> per_year;
    double total = 0.0;
};

//---------------------------------------------------------------------------//
// Rules
//---------------------------------------------------------------------------//

// Straight-line amortization over the useful life starting at the incurred
// year, truncated at the horizon. The final year carries the remainder so an
// untruncated schedule sums to the amount exactly. Cash basis books the
// whole amount in the incurred year.
inline std::vector<double> amortize_capex(double amount, int useful_life_years, int incurred_year,
                                          int horizon, CapexBasis basis = CapexBasis::amortized) {
    if (horizon < 1) throw std::invalid_argument("horizon must be at least one year");
    if (useful_life_years < 1) throw std::invalid_argument("useful life must be at least one year");
    std::vector<double> out(static_cast<std::size_t>(horizon), 0.0);
    if (incurred_year < 0 || incurred_year >= horizon) return out;

    if (basis == CapexBasis::cash) {
        out[static_cast<std::size_t>(incurred_year)] = amount;
        return out;
    }
    const double share = amount / useful_life_years;
    double booked = 0.0;
    for (int k = 0; k < useful_life_years; ++k) {
        const double v = (k + 1 == useful_life_years) ? amount - booked : share;
        booked += share;
        const int year = incurred_year + k;
        if (year < horizon) out[static_cast<std::size_t>(year)] = v;
    }
    return out;
}

inline std::vector<double> amortize_capex(const CapexItem& item, int horizon,
                                          CapexBasis basis = CapexBasis::amortized) {
    return amortize_capex(dist::mean(item.amount), item.useful_life_years, item.incurred_year,
                          horizon, basis);
}

// rate x development capex in every post-build year (1 .. horizon-1).
inline std::vector<double> maintenance_opex(double dev_capex_total, double rate, int horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be at least one year");
    std::vector<double> out(static_cast<std::size_t>(horizon), 0.0);
    const double annual = rate * dev_capex_total;
    for (int t = 1; t < horizon; ++t) out[static_cast<std::size_t>(t)] = annual;
    return out;
}

inline double reserve_requirement(double annual_opex, double rate) { return rate * annual_opex; }

// Amount of a reserve that is charged to TCO under the chosen treatment.
inline double reserve_charge(double reserve, const ReserveTreatment& treatment) {
    if (const auto* c = std::get_if<CarryingCost>(&treatment)) return reserve * c->rate;
    return reserve;
}

inline bool premium_applies(const OpexItem& item) {
    return item.category == OpexCategory::personnel && item.specialist;
}

inline std::vector<OpexItem> apply_talent_premium(std::vector<OpexItem> items, double premium_rate) {
    for (auto& item : items)
        if (premium_applies(item)) item.annual_amount = dist::scale(item.annual_amount, 1.0 + premium_rate);
    return items;
}

// Annual amount of an opex item after the talent premium rule.
inline UncertainQuantity effective_amount(const OpexItem& item, const CostRules& rules) {
    if (premium_applies(item) && rules.talent_premium_rate != 0.0)
        return dist::scale(item.annual_amount, 1.0 + rules.talent_premium_rate);
    return item.annual_amount;
}

//---------------------------------------------------------------------------//
// Schedule
//---------------------------------------------------------------------------//

inline dist::StreamKey stream_for(const CapexItem& c) { return dist::stream_key("capex", c.id); }
inline dist::StreamKey stream_for(const OpexItem& o) { return dist::stream_key("opex", o.id); }

// Undiscounted per-year TCO. Each uncertain amount is drawn once per
// evaluation and held across the horizon.
template <class Draws>
CostSchedule tco(const std::vector<CapexItem>& capex, const std::vector<OpexItem>& opex,
                 const CostRules& rules, int horizon, const Draws& draw,
                 CapexBasis basis = CapexBasis::amortized) {
    if (horizon < 1) throw std::invalid_argument("horizon must be at least one year");
    const auto n = static_cast<std::size_t>(horizon);
    CostSchedule s;
    s.capex.assign(n, 0.0);
    s.opex.assign(n, 0.0);
    s.reserve.assign(n, 0.0);
    s.per_year.assign(n, 0.0);

    double dev_total = 0.0;
    for (const auto& item : capex) {
        const double amount = draw(item.amount, stream_for(item));
        if (item.development) dev_total += amount;
        const auto years = amortize_capex(amount, item.useful_life_years, item.incurred_year, horizon, basis);
        for (std::size_t t = 0; t < n; ++t) s.capex[t] += years[t];
    }

    for (const auto& item : opex) {
        const double amount = draw(effective_amount(item, rules), stream_for(item));
        for (int t = std::max(item.start_year, 0); t <= item.end_year && t < horizon; ++t)
            s.opex[static_cast<std::size_t>(t)] += amount;
    }

    s.maintenance = maintenance_opex(dev_total, rules.maintenance_rate, horizon);

    for (std::size_t t = 0; t < n; ++t) {
        const double reserve = reserve_requirement(s.opex[t] + s.maintenance[t], rules.reserve_rate);
        s.reserve[t] = reserve_charge(reserve, rules.reserve_treatment);
        s.per_year[t] = s.capex[t] + s.opex[t] + s.maintenance[t] + s.reserve[t];
        s.total += s.per_year[t];
    }
    return s;
}

//---------------------------------------------------------------------------//
// Validation
//---------------------------------------------------------------------------//

inline Diagnostics validate(const CapexItem& c, int horizon) {
    Diagnostics d;
    if (c.id.empty()) d.error("/id", "capex id must be nonempty");
    d.append(dist::validate_nonnegative(c.amount), "/amount");
    if (c.useful_life_years < 1) d.error("/useful_life_years", "useful_life_years ≥ 1 required");
    if (c.incurred_year < 0) d.error("/incurred_year", "incurred_year ≥ 0 required");
    else if (c.incurred_year >= horizon)
        d.warning("/incurred_year", "incurred_year " + std::to_string(c.incurred_year) +
                                        " is beyond the horizon; item contributes nothing");
    return d;
}

inline Diagnostics validate(const OpexItem& o, int horizon) {
    Diagnostics d;
    if (o.id.empty()) d.error("/id", "opex id must be nonempty");
    d.append(dist::validate_nonnegative(o.annual_amount), "/annual_amount");
    if (o.start_year < 0) d.error("/start_year", "start_year ≥ 0 required");
    if (o.start_year > o.end_year) d.error("/end_year", "start_year ≤ end_year violated");
    else if (o.start_year >= horizon)
        d.warning("/start_year", "item starts beyond the horizon; contributes nothing");
    if (o.specialist && o.category != OpexCategory::personnel)
        d.warning("/specialist", "specialist flag only affects personnel items");
    return d;
}

namespace detail {
inline void check_rate(Diagnostics& d, const char* field, double rate, const RateRange* typical) {
    const std::string path = std::string("/") + field;
    if (!(rate >= 0.0 && rate <= 1.0)) {
        d.error(path, std::string(field) + " must lie in [0, 1]");
        return;
    }
    if (typical && rate != 0.0 && (rate < typical->lo || rate > typical->hi))
        d.warning(path, std::string(field) + " " + format_number(rate) + " outside typical range " +
                            format_number(typical->lo) + "–" + format_number(typical->hi));
}
}  // namespace detail

// Out-of-range rates only warn; they never change the arithmetic.
inline Diagnostics validate(const CostRules& r) {
    Diagnostics d;
    detail::check_rate(d, "maintenance_rate", r.maintenance_rate, &maintenance_range);
    detail::check_rate(d, "reserve_rate", r.reserve_rate, &reserve_range);
    detail::check_rate(d, "talent_premium_rate", r.talent_premium_rate, &talent_premium_range);
    if (const auto* c = std::get_if<CarryingCost>(&r.reserve_treatment))
        detail::check_rate(d, "carrying_rate", c->rate, nullptr);
    return d;
}

inline Diagnostics validate(const std::vector<CapexItem>& capex, const std::vector<OpexItem>& opex,
                            const CostRules& rules, int horizon) {
    Diagnostics d;
    std::set<std::string, std::less<>> seen;
    for (std::size_t i = 0; i < capex.size(); ++i) {
        const std::string path = "/capex/" + std::to_string(i);
        if (!capex[i].id.empty() && !seen.insert(capex[i].id).second)
            d.error(path + "/id", "duplicate cost item id '" + capex[i].id + "'");
        d.append(validate(capex[i], horizon), path);
    }
    for (std::size_t i = 0; i < opex.size(); ++i) {
        const std::string path = "/opex/" + std::to_string(i);
        if (!opex[i].id.empty() && !seen.insert(opex[i].id).second)
            d.error(path + "/id", "duplicate cost item id '" + opex[i].id + "'");
        d.append(validate(opex[i], horizon), path);
    }
    d.append(validate(rules), "/rules");
    return d;
}

}  // namespace airoi::cost
