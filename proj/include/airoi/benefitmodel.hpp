#pragma once

// Gross benefits: productivity, error reduction and revenue uplift, with
// attribution, projection margins and optional technical-debt erosion.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "airoi/diagnostics.hpp"
#include "airoi/dist.hpp"

namespace airoi::benefit {

using dist::UncertainQuantity;

enum class BenefitKind { productivity, error_reduction, revenue_uplift, risk_reduction_external };
enum class Phase { early, mature };

inline const char* to_string(BenefitKind k) {
    switch (k) {
        case BenefitKind::productivity: return "productivity";
        case BenefitKind::error_reduction: return "error_reduction";
        case BenefitKind::revenue_uplift: return "revenue_uplift";
        case BenefitKind::risk_reduction_external: return "risk_reduction_external";
    }
    return "";
}

inline const char* to_string(Phase p) { return p == Phase::early ? "early" : "mature"; }

inline constexpr double early_phase_margin = 0.25;
inline constexpr double default_mature_margin = 0.10;

// Freed hours x fully-loaded hourly cost.
struct HoursDriver {
    UncertainQuantity freed_hours_per_year = dist::Point{0.0};
    double loaded_cost_per_hour = 0.0;
};
// Errors avoided x cost per error.
struct ErrorsDriver {
    UncertainQuantity errors_avoided_per_year = dist::Point{0.0};
    double cost_per_error = 0.0;
};
// Directly stated annual value. May be negative (cannibalization).
struct ValueDriver {
    UncertainQuantity annual_value = dist::Point{0.0};
};
using Magnitude = std::variant<HoursDriver, ErrorsDriver, ValueDriver>;

struct BenefitItem {
    std::string id;
    BenefitKind kind = BenefitKind::productivity;
    Magnitude magnitude = ValueDriver{};
    double attribution_factor = 1.0;
    std::optional<Phase> phase;
    // Symmetric relative margin applied as a multiplicative triangular factor.
    double projection_margin = 0.0;
    int start_year = 0;
    int end_year = 0;  // inclusive
    double erosion_rate = 0.0;  // geometric decay per year after start_year
};

//---------------------------------------------------------------------------//
// Magnitude rules
//---------------------------------------------------------------------------//

inline double productivity_benefit(const UncertainQuantity& freed_hours, double loaded_cost_per_hour) {
    return dist::mean(freed_hours) * loaded_cost_per_hour;
}

template <class Draws>
double productivity_benefit(const UncertainQuantity& freed_hours, double loaded_cost_per_hour,
                            const Draws& draw, const dist::StreamKey& key) {
    return draw(freed_hours, key) * loaded_cost_per_hour;
}

inline double error_reduction_benefit(const UncertainQuantity& errors_avoided, double cost_per_error) {
    return dist::mean(errors_avoided) * cost_per_error;
}

template <class Draws>
double error_reduction_benefit(const UncertainQuantity& errors_avoided, double cost_per_error,
                               const Draws& draw, const dist::StreamKey& key) {
    return draw(errors_avoided, key) * cost_per_error;
}

// Triangular(point(1-m), point, point(1+m)). The half-width is snapped to a
// multiple of 2 ulp(point) so both bounds are exact offsets of the mode and
// the closed-form mean reproduces `point` bit for bit.
inline UncertainQuantity apply_projection_margin(double point, double margin) {
    if (!(margin >= 0.0 && margin < 1.0)) throw std::invalid_argument("projection margin must lie in [0, 1)");
    if (margin == 0.0 || point == 0.0) return dist::Point{point};
    const double mag = std::abs(point);
    const double step = 2.0 * (std::nextafter(mag, std::numeric_limits<double>::infinity()) - mag);
    const double half_width = std::round(mag * margin / step) * step;
    return dist::Triangular{point - half_width, point, point + half_width};
}

//---------------------------------------------------------------------------//
// A/B uplift
//---------------------------------------------------------------------------//

struct AbTestResult {
    std::uint64_t treatment_trials = 0;
    std::uint64_t treatment_successes = 0;
    std::uint64_t control_trials = 0;
    std::uint64_t control_successes = 0;
    double value_per_success = 0.0;
    double annual_volume = 0.0;
};

struct UpliftEstimate {
    double point = 0.0;  // currency per year
    double lower = 0.0;
    double upper = 0.0;
};

class UnusableExperiment : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline Diagnostics validate(const AbTestResult& ab) {
    Diagnostics d;
    if (ab.treatment_trials == 0) d.error("/treatment_trials", "treatment arm has zero trials");
    if (ab.control_trials == 0) d.error("/control_trials", "control arm has zero trials");
    if (ab.treatment_successes > ab.treatment_trials)
        d.error("/treatment_successes", "successes ≤ trials violated");
    if (ab.control_successes > ab.control_trials)
        d.error("/control_successes", "successes ≤ trials violated");
    if (!(ab.value_per_success >= 0.0)) d.error("/value_per_success", "must be nonnegative");
    if (!(ab.annual_volume >= 0.0)) d.error("/annual_volume", "must be nonnegative");
    return d;
}

// Two-proportion normal approximation, scaled to annual currency.
inline UpliftEstimate uplift_estimate(const AbTestResult& ab, double confidence = 0.95) {
    if (ab.treatment_trials == 0 || ab.control_trials == 0)
        throw UnusableExperiment("A/B experiment unusable: an arm has zero trials");
    if (ab.treatment_successes > ab.treatment_trials || ab.control_successes > ab.control_trials)
        throw UnusableExperiment("A/B experiment unusable: successes exceed trials");
    if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");

    const double nt = static_cast<double>(ab.treatment_trials);
    const double nc = static_cast<double>(ab.control_trials);
    const double pt = static_cast<double>(ab.treatment_successes) / nt;
    const double pc = static_cast<double>(ab.control_successes) / nc;
    const double se = std::sqrt(pt * (1.0 - pt) / nt + pc * (1.0 - pc) / nc);
    const double z = boost::math::quantile(boost::math::normal(), 1.0 - (1.0 - confidence) / 2.0);
    const double scale = ab.annual_volume * ab.value_per_success;

    UpliftEstimate e;
    e.point = (pt - pc) * scale;
    e.lower = (pt - pc - z * se) * scale;
    e.upper = (pt - pc + z * se) * scale;
    return e;
}

//---------------------------------------------------------------------------//
// Schedule
//---------------------------------------------------------------------------//

inline dist::StreamKey stream_for(const BenefitItem& b) { return dist::stream_key("benefit", b.id); }

// Annual magnitude after the margin factor and attribution, before erosion.
template <class Draws>
double annual_magnitude(const BenefitItem& item, const Draws& draw) {
    const auto key = stream_for(item);
    const double base = std::visit(
        dist::overloaded{
            [&](const HoursDriver& h) {
                return productivity_benefit(h.freed_hours_per_year, h.loaded_cost_per_hour, draw,
                                            key.child("driver"));
            },
            [&](const ErrorsDriver& e) {
                return error_reduction_benefit(e.errors_avoided_per_year, e.cost_per_error, draw,
                                               key.child("driver"));
            },
            [&](const ValueDriver& v) { return draw(v.annual_value, key.child("driver")); },
        },
        item.magnitude);
    double factor = 1.0;
    if (item.projection_margin > 0.0)
        factor = draw(apply_projection_margin(1.0, item.projection_margin), key.child("margin"));
    return base * factor * item.attribution_factor;
}

inline double erosion_multiplier(const BenefitItem& item, int year) {
    if (item.erosion_rate == 0.0) return 1.0;
    return std::pow(1.0 - item.erosion_rate, year - item.start_year);
}

inline bool active(const BenefitItem& item, int year) {
    return year >= item.start_year && year <= item.end_year;
}

template <class Draws>
std::vector<double> item_schedule(const BenefitItem& item, int horizon, const Draws& draw) {
    std::vector<double> out(static_cast<std::size_t>(horizon), 0.0);
    const double magnitude = annual_magnitude(item, draw);
    for (int t = std::max(item.start_year, 0); t <= item.end_year && t < horizon; ++t)
        out[static_cast<std::size_t>(t)] = magnitude * erosion_multiplier(item, t);
    return out;
}

template <class Draws>
std::vector<double> benefit_schedule(const std::vector<BenefitItem>& items, int horizon, const Draws& draw) {
    if (horizon < 1) throw std::invalid_argument("horizon must be at least one year");
    std::vector<double> total(static_cast<std::size_t>(horizon), 0.0);
    for (const auto& item : items) {
        const auto one = item_schedule(item, horizon, draw);
        for (std::size_t t = 0; t < total.size(); ++t) total[t] += one[t];
    }
    return total;
}

//---------------------------------------------------------------------------//
// Validation
//---------------------------------------------------------------------------//

inline Diagnostics validate(const BenefitItem& b, int horizon) {
    Diagnostics d;
    if (b.id.empty()) d.error("/id", "benefit id must be nonempty");
    std::visit(dist::overloaded{
                   [&](const HoursDriver& h) {
                       d.append(dist::validate_nonnegative(h.freed_hours_per_year), "/freed_hours_per_year");
                       if (!(h.loaded_cost_per_hour >= 0.0))
                           d.error("/loaded_cost_per_hour", "loaded_cost_per_hour must be nonnegative");
                   },
                   [&](const ErrorsDriver& e) {
                       d.append(dist::validate_nonnegative(e.errors_avoided_per_year),
                                "/errors_avoided_per_year");
                       if (!(e.cost_per_error >= 0.0))
                           d.error("/cost_per_error", "cost_per_error must be nonnegative");
                   },
                   [&](const ValueDriver& v) { d.append(dist::validate(v.annual_value), "/annual_value"); },
               },
               b.magnitude);
    if (!(b.attribution_factor >= 0.0 && b.attribution_factor <= 1.0))
        d.error("/attribution_factor", "attribution_factor must lie in [0, 1]");
    if (!(b.erosion_rate >= 0.0 && b.erosion_rate < 1.0))
        d.error("/erosion_rate", "erosion_rate must lie in [0, 1)");
    if (!(b.projection_margin >= 0.0 && b.projection_margin < 1.0))
        d.error("/margin", "projection margin must lie in [0, 1)");
    if (b.start_year < 0) d.error("/start_year", "start_year ≥ 0 required");
    if (b.start_year > b.end_year) d.error("/end_year", "start_year ≤ end_year violated");
    if (b.end_year >= horizon)
        d.error("/end_year", "end_year " + std::to_string(b.end_year) + " lies beyond the horizon of " +
                                 std::to_string(horizon) + " years");
    return d;
}

inline Diagnostics validate(const std::vector<BenefitItem>& items, int horizon) {
    Diagnostics d;
    std::set<std::string, std::less<>> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const std::string path = "/" + std::to_string(i);
        if (!items[i].id.empty() && !seen.insert(items[i].id).second)
            d.error(path + "/id", "duplicate benefit id '" + items[i].id + "'");
        d.append(validate(items[i], horizon), path);
    }
    return d;
}

}  // namespace airoi::benefit
