#pragma once

// Risk-scenario register, annual loss expectancy and the aggregate risk delta
// between the pre-AI and AI-enabled processes.

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "airoi/diagnostics.hpp"
#include "airoi/dist.hpp"

namespace airoi::risk {

using dist::FrequencyModel;
using dist::UncertainQuantity;

enum class ProcessState { current, ai };
enum class AppliesTo { current_only, ai_only, both };
enum class Classification { reduction, introduction, neutral };

inline const char* to_string(ProcessState s) { return s == ProcessState::current ? "current" : "ai"; }

inline const char* to_string(AppliesTo a) {
    switch (a) {
        case AppliesTo::current_only: return "current_only";
        case AppliesTo::ai_only: return "ai_only";
        case AppliesTo::both: return "both";
    }
    return "both";
}

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::reduction: return "reduction";
        case Classification::introduction: return "introduction";
        case Classification::neutral: return "neutral";
    }
    return "neutral";
}

struct RiskScenario {
    std::string id;
    std::string description;
    UncertainQuantity sle = dist::Point{0.0};  // currency per event
    AppliesTo applies_to = AppliesTo::both;
    FrequencyModel frequency_current = dist::PointRate{0.0};
    FrequencyModel frequency_ai = dist::PointRate{0.0};
    std::vector<std::string> tags;

    bool applies(ProcessState s) const {
        switch (applies_to) {
            case AppliesTo::current_only: return s == ProcessState::current;
            case AppliesTo::ai_only: return s == ProcessState::ai;
            case AppliesTo::both: return true;
        }
        return false;
    }

    const FrequencyModel& frequency(ProcessState s) const {
        return s == ProcessState::current ? frequency_current : frequency_ai;
    }
};

// The same threat with the current and AI-enabled roles exchanged.
inline RiskScenario swap_roles(RiskScenario s) {
    if (s.applies_to == AppliesTo::current_only)
        s.applies_to = AppliesTo::ai_only;
    else if (s.applies_to == AppliesTo::ai_only)
        s.applies_to = AppliesTo::current_only;
    std::swap(s.frequency_current, s.frequency_ai);
    return s;
}

inline Diagnostics validate(const RiskScenario& s) {
    Diagnostics d;
    if (s.id.empty()) d.error("/id", "scenario id must be nonempty");
    d.append(dist::validate_nonnegative(s.sle), "/sle");
    if (s.applies(ProcessState::current)) d.append(dist::validate(s.frequency_current), "/frequency_current");
    if (s.applies(ProcessState::ai)) d.append(dist::validate(s.frequency_ai), "/frequency_ai");
    return d;
}

//---------------------------------------------------------------------------//
// Annual loss expectancy
//---------------------------------------------------------------------------//

// mean(SLE) x mean(ARO); severity and frequency are independent.
inline double ale_analytic(const RiskScenario& s, ProcessState state) {
    if (!s.applies(state)) return 0.0;
    return dist::mean(s.sle) * dist::mean(s.frequency(state));
}

inline dist::StreamKey stream_for(const RiskScenario& s, ProcessState state) {
    return dist::stream_key("risk", s.id, to_string(state));
}

// One simulated year of compound loss: an event count, then one independent
// severity draw per event.
inline double ale_simulate(const RiskScenario& s, ProcessState state, dist::RngStream& rng) {
    if (!s.applies(state)) return 0.0;
    const std::uint64_t events = dist::sample_count(s.frequency(state), rng);
    double total = 0.0;
    for (std::uint64_t i = 0; i < events; ++i) total += dist::sample(s.sle, rng);
    return total;
}

inline double ale_simulate(const RiskScenario& s, ProcessState state, std::uint64_t master_seed,
                           std::uint64_t iteration) {
    dist::RngStream rng(master_seed, stream_for(s, state), iteration);
    return ale_simulate(s, state, rng);
}

inline Classification classify_scenario(const RiskScenario& s) {
    const double delta = ale_analytic(s, ProcessState::current) - ale_analytic(s, ProcessState::ai);
    if (delta > 0.0) return Classification::reduction;
    if (delta < 0.0) return Classification::introduction;
    return Classification::neutral;
}

//---------------------------------------------------------------------------//
// Register and risk delta
//---------------------------------------------------------------------------//

struct RiskRegister {
    std::vector<RiskScenario> scenarios;
};

inline Diagnostics validate(const RiskRegister& reg) {
    Diagnostics d;
    std::set<std::string, std::less<>> seen;
    for (std::size_t i = 0; i < reg.scenarios.size(); ++i) {
        const auto& s = reg.scenarios[i];
        const std::string path = "/" + std::to_string(i);
        if (!s.id.empty() && !seen.insert(s.id).second)
            d.error(path + "/id", "duplicate scenario id '" + s.id + "'");
        d.append(validate(s), path);
    }
    return d;
}

struct ScenarioDelta {
    double ale_current = 0.0;
    double ale_ai = 0.0;
    double delta = 0.0;  // ale_current - ale_ai
};

// Positive totals mean the AI implementation reduces net risk; negative totals
// are an ongoing cost.
struct RiskDeltaResult {
    std::vector<ScenarioDelta> per_scenario;
    double total = 0.0;
    double ale_current_total = 0.0;
    double ale_ai_total = 0.0;
};

namespace detail {
template <class AleFn>
RiskDeltaResult accumulate_delta(const RiskRegister& reg, AleFn&& ale) {
    RiskDeltaResult r;
    r.per_scenario.reserve(reg.scenarios.size());
    for (const auto& s : reg.scenarios) {
        ScenarioDelta sd;
        sd.ale_current = ale(s, ProcessState::current);
        sd.ale_ai = ale(s, ProcessState::ai);
        sd.delta = sd.ale_current - sd.ale_ai;
        r.total += sd.delta;
        r.ale_current_total += sd.ale_current;
        r.ale_ai_total += sd.ale_ai;
        r.per_scenario.push_back(sd);
    }
    return r;
}
}  // namespace detail

inline RiskDeltaResult risk_delta_analytic(const RiskRegister& reg) {
    return detail::accumulate_delta(reg, [](const RiskScenario& s, ProcessState st) {
        return ale_analytic(s, st);
    });
}

// Both states of every scenario are drawn within the same iteration.
inline RiskDeltaResult risk_delta_simulated(const RiskRegister& reg, std::uint64_t master_seed,
                                            std::uint64_t iteration) {
    return detail::accumulate_delta(reg, [&](const RiskScenario& s, ProcessState st) {
        return ale_simulate(s, st, master_seed, iteration);
    });
}

//---------------------------------------------------------------------------//
// EU AI Act penalty exposure
//---------------------------------------------------------------------------//

enum class PenaltyTierName { prohibited_practice, high_risk_violation, information_failure };

struct PenaltyTier {
    PenaltyTierName name;
    double fixed_cap;      // EUR
    double turnover_rate;  // fraction of global annual turnover
};

inline constexpr std::array<PenaltyTier, 3> penalty_tiers{{
    {PenaltyTierName::prohibited_practice, 35e6, 0.07},
    {PenaltyTierName::high_risk_violation, 15e6, 0.03},
    {PenaltyTierName::information_failure, 7.5e6, 0.01},
}};

inline constexpr const PenaltyTier& penalty_tier(PenaltyTierName name) {
    return penalty_tiers[static_cast<std::size_t>(name)];
}

inline const char* to_string(PenaltyTierName n) {
    switch (n) {
        case PenaltyTierName::prohibited_practice: return "prohibited_practice";
        case PenaltyTierName::high_risk_violation: return "high_risk_violation";
        case PenaltyTierName::information_failure: return "information_failure";
    }
    return "";
}

// Statutory maximum: whichever of the fixed cap and the turnover share is higher.
inline double penalty_magnitude(const PenaltyTier& tier, double global_turnover) {
    if (!(global_turnover >= 0.0)) throw std::invalid_argument("global turnover must be nonnegative");
    return std::max(tier.fixed_cap, tier.turnover_rate * global_turnover);
}

// An ai_only scenario whose severity is a fraction of the statutory maximum.
inline RiskScenario penalty_scenario(std::string id, const PenaltyTier& tier, double global_turnover,
                                     const UncertainQuantity& severity_fraction,
                                     const FrequencyModel& violation_rate) {
    Diagnostics d;
    d.append(dist::validate_fraction(severity_fraction), "/severity_fraction");
    d.append(dist::validate(violation_rate), "/violation_rate");
    if (d.has_errors()) throw ValidationError(std::move(d));

    RiskScenario s;
    s.id = std::move(id);
    s.description = std::string("regulatory penalty exposure: ") + to_string(tier.name);
    s.sle = dist::scale(severity_fraction, penalty_magnitude(tier, global_turnover));
    s.applies_to = AppliesTo::ai_only;
    s.frequency_ai = violation_rate;
    s.tags = {"penalty", to_string(tier.name)};
    return s;
}

}  // namespace airoi::risk
