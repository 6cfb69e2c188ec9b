#pragma once

// Portfolio configuration: JSON schema version 1 -> PortfolioModel.

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "airoi/engine.hpp"

namespace airoi::cli {

using nlohmann::json;

inline constexpr int schema_version = 1;

struct SimulationDefaults {
    std::size_t iterations = engine::default_iterations;
    std::uint64_t seed = 42;
    unsigned workers = 0;  // 0 = auto
    std::optional<double> target_relative_se;
};

struct PortfolioConfig {
    std::string name;
    std::string currency;
    engine::PortfolioModel model;
    SimulationDefaults simulation;
    std::optional<double> global_turnover;
    std::string raw_text;  // exact file bytes, hashed for audit
};

enum class LoadFailure { none, io, parse, invalid };

struct LoadResult {
    std::optional<PortfolioConfig> config;  // set unless failure is io or parse
    Diagnostics diagnostics;
    LoadFailure failure = LoadFailure::none;

    bool ok() const { return failure == LoadFailure::none; }
};

inline bool read_file(const std::filesystem::path& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) return false;
    out = ss.str();
    return true;
}

// "line L, column C" for a byte offset.
inline std::string text_location(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

namespace detail {

// Field reader that records diagnostics against JSON-pointer paths instead of
// throwing, so one pass reports every problem in the file.
class Reader {
public:
    explicit Reader(Diagnostics& d) : diags_(d) {}

    Diagnostics& diags() { return diags_; }

    void known_fields(const json& obj, const std::string& path, std::initializer_list<const char*> names) {
        if (!obj.is_object()) return;
        for (const auto& [key, _] : obj.items()) {
            bool known = false;
            for (const char* n : names) known = known || key == n;
            if (!known) diags_.warning(path + "/" + key, "unknown field ignored");
        }
    }

    const json* field(const json& obj, const std::string& path, const char* name, bool required) {
        if (!obj.is_object()) return nullptr;
        auto it = obj.find(name);
        if (it == obj.end()) {
            if (required) diags_.error(path + "/" + name, "required field missing");
            return nullptr;
        }
        return &*it;
    }

    std::optional<double> number(const json& obj, const std::string& path, const char* name, bool required) {
        const json* v = field(obj, path, name, required);
        if (!v) return std::nullopt;
        if (!v->is_number()) {
            diags_.error(path + "/" + name, "expected a number");
            return std::nullopt;
        }
        return v->get<double>();
    }

    std::optional<long long> integer(const json& obj, const std::string& path, const char* name, bool required) {
        const json* v = field(obj, path, name, required);
        if (!v) return std::nullopt;
        if (!v->is_number_integer()) {
            diags_.error(path + "/" + name, "expected an integer");
            return std::nullopt;
        }
        return v->get<long long>();
    }

    std::optional<std::string> string(const json& obj, const std::string& path, const char* name, bool required) {
        const json* v = field(obj, path, name, required);
        if (!v) return std::nullopt;
        if (!v->is_string()) {
            diags_.error(path + "/" + name, "expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    std::optional<bool> boolean(const json& obj, const std::string& path, const char* name) {
        const json* v = field(obj, path, name, false);
        if (!v) return std::nullopt;
        if (!v->is_boolean()) {
            diags_.error(path + "/" + name, "expected true or false");
            return std::nullopt;
        }
        return v->get<bool>();
    }

    // Distribution literal: a bare number is a point value.
    std::optional<dist::UncertainQuantity> quantity(const json& v, const std::string& path) {
        if (v.is_number()) return dist::Point{v.get<double>()};
        if (!v.is_object()) {
            diags_.error(path, "expected a number or a distribution object");
            return std::nullopt;
        }
        const auto kind = string(v, path, "kind", true);
        if (!kind) return std::nullopt;
        const std::size_t before = diags_.error_count();
        std::optional<dist::UncertainQuantity> q;
        if (*kind == "point") {
            known_fields(v, path, {"kind", "value"});
            auto x = number(v, path, "value", true);
            if (x) q = dist::Point{*x};
        } else if (*kind == "uniform") {
            known_fields(v, path, {"kind", "lo", "hi"});
            auto lo = number(v, path, "lo", true);
            auto hi = number(v, path, "hi", true);
            if (lo && hi) q = dist::Uniform{*lo, *hi};
        } else if (*kind == "triangular" || *kind == "pert") {
            known_fields(v, path, {"kind", "lo", "mode", "hi"});
            auto lo = number(v, path, "lo", true);
            auto mode = number(v, path, "mode", true);
            auto hi = number(v, path, "hi", true);
            if (lo && mode && hi) {
                if (*kind == "triangular")
                    q = dist::Triangular{*lo, *mode, *hi};
                else
                    q = dist::Pert{*lo, *mode, *hi};
            }
        } else if (*kind == "lognormal") {
            known_fields(v, path, {"kind", "median", "sigma"});
            auto median = number(v, path, "median", true);
            auto sigma = number(v, path, "sigma", true);
            if (median && sigma) q = dist::Lognormal{*median, *sigma};
        } else {
            diags_.error(path + "/kind", "unknown distribution kind '" + *kind +
                                             "' (expected point, uniform, triangular, pert or lognormal)");
        }
        if (diags_.error_count() != before) return std::nullopt;
        return q;
    }

    std::optional<dist::UncertainQuantity> quantity(const json& obj, const std::string& path, const char* name,
                                                    bool required) {
        const json* v = field(obj, path, name, required);
        if (!v) return std::nullopt;
        return quantity(*v, path + "/" + name);
    }

    // Frequency literal: a bare number is a point rate.
    std::optional<dist::FrequencyModel> frequency(const json& v, const std::string& path) {
        if (v.is_number()) return dist::PointRate{v.get<double>()};
        if (!v.is_object()) {
            diags_.error(path, "expected a number or a frequency object");
            return std::nullopt;
        }
        const auto kind = string(v, path, "kind", true);
        if (!kind) return std::nullopt;
        if (*kind == "point_rate") {
            known_fields(v, path, {"kind", "rate"});
            if (auto r = number(v, path, "rate", true)) return dist::PointRate{*r};
        } else if (*kind == "poisson") {
            known_fields(v, path, {"kind", "mean"});
            if (auto r = number(v, path, "mean", true)) return dist::PoissonRate{*r};
        } else {
            diags_.error(path + "/kind", "unknown frequency kind '" + *kind + "' (expected point_rate or poisson)");
        }
        return std::nullopt;
    }

    std::optional<dist::FrequencyModel> frequency(const json& obj, const std::string& path, const char* name,
                                                  bool required) {
        const json* v = field(obj, path, name, required);
        if (!v) return std::nullopt;
        return frequency(*v, path + "/" + name);
    }

    const json* array(const json& obj, const std::string& path, const char* name) {
        const json* v = field(obj, path, name, false);
        if (!v) return nullptr;
        if (!v->is_array()) {
            diags_.error(path + "/" + name, "expected an array");
            return nullptr;
        }
        return v;
    }

    template <std::size_t N>
    std::optional<std::size_t> choice(const json& obj, const std::string& path, const char* name,
                                      const char* const (&options)[N], bool required) {
        auto s = string(obj, path, name, required);
        if (!s) return std::nullopt;
        for (std::size_t i = 0; i < N; ++i)
            if (*s == options[i]) return i;
        std::string list;
        for (std::size_t i = 0; i < N; ++i) list += (i ? ", " : "") + std::string(options[i]);
        diags_.error(path + "/" + name, "unknown value '" + *s + "' (expected one of: " + list + ")");
        return std::nullopt;
    }

private:
    Diagnostics& diags_;
};

inline void check_currency(Reader& rd, const json& obj, const std::string& path, const std::string& currency) {
    if (auto c = rd.string(obj, path, "currency", false); c && *c != currency)
        rd.diags().error(path + "/currency", "item currency " + *c + " differs from portfolio currency " + currency +
                                                 "; multi-currency portfolios are not supported");
}

inline int year_or(Reader& rd, const json& obj, const std::string& path, const char* name, int fallback) {
    auto v = rd.integer(obj, path, name, false);
    return v ? static_cast<int>(*v) : fallback;
}

inline std::optional<benefit::AbTestResult> read_ab_csv(Reader& rd, const std::filesystem::path& file,
                                                       const std::string& path) {
    std::string text;
    if (!read_file(file, text)) {
        rd.diags().error(path, "cannot read A/B arm-count file " + file.string());
        return std::nullopt;
    }
    // arm,trials,successes with one treatment and one control row.
    std::istringstream in(text);
    std::string line;
    benefit::AbTestResult ab;
    bool treatment = false, control = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.rfind("arm,", 0) == 0) continue;
        std::istringstream row(line);
        std::string arm, trials, successes;
        std::getline(row, arm, ',');
        std::getline(row, trials, ',');
        std::getline(row, successes, ',');
        try {
            const auto t = std::stoull(trials);
            const auto s = std::stoull(successes);
            if (arm == "treatment") {
                ab.treatment_trials = t;
                ab.treatment_successes = s;
                treatment = true;
            } else if (arm == "control") {
                ab.control_trials = t;
                ab.control_successes = s;
                control = true;
            } else {
                rd.diags().error(path, file.string() + ":" + std::to_string(line_no) + ": unknown arm '" + arm + "'");
            }
        } catch (const std::exception&) {
            rd.diags().error(path, file.string() + ":" + std::to_string(line_no) + ": expected arm,trials,successes");
        }
    }
    if (!treatment || !control) {
        rd.diags().error(path, file.string() + ": needs one treatment row and one control row");
        return std::nullopt;
    }
    return ab;
}

inline std::optional<benefit::BenefitItem> read_benefit(Reader& rd, const json& v, const std::string& path,
                                                        const std::string& currency, double mature_margin,
                                                        const std::filesystem::path& base_dir) {
    using namespace benefit;
    if (!v.is_object()) {
        rd.diags().error(path, "expected an object");
        return std::nullopt;
    }
    rd.known_fields(v, path, {"id", "kind", "description", "currency", "attribution_factor", "phase", "margin",
                              "start_year", "end_year", "erosion_rate", "freed_hours_per_year",
                              "loaded_cost_per_hour", "errors_avoided_per_year", "cost_per_error", "annual_value",
                              "ab_test"});
    static constexpr const char* kinds[] = {"productivity", "error_reduction", "revenue_uplift",
                                            "risk_reduction_external"};
    static constexpr const char* phases[] = {"early", "mature"};
    const std::size_t before = rd.diags().error_count();
    check_currency(rd, v, path, currency);

    BenefitItem b;
    b.id = rd.string(v, path, "id", true).value_or("");
    const auto kind = rd.choice(v, path, "kind", kinds, true);
    if (kind) b.kind = static_cast<BenefitKind>(*kind);
    b.attribution_factor = rd.number(v, path, "attribution_factor", false).value_or(1.0);
    b.erosion_rate = rd.number(v, path, "erosion_rate", false).value_or(0.0);
    b.start_year = year_or(rd, v, path, "start_year", 0);
    b.end_year = year_or(rd, v, path, "end_year", 0);
    if (!rd.field(v, path, "end_year", false)) rd.diags().error(path + "/end_year", "required field missing");

    if (auto ph = rd.choice(v, path, "phase", phases, false)) {
        b.phase = static_cast<Phase>(*ph);
        b.projection_margin = *b.phase == Phase::early ? early_phase_margin : mature_margin;
    }
    if (auto m = rd.number(v, path, "margin", false)) b.projection_margin = *m;

    if (kind) {
        switch (b.kind) {
            case BenefitKind::productivity: {
                auto hours = rd.quantity(v, path, "freed_hours_per_year", true);
                auto cost = rd.number(v, path, "loaded_cost_per_hour", true);
                if (hours && cost) b.magnitude = HoursDriver{*hours, *cost};
                break;
            }
            case BenefitKind::error_reduction: {
                auto errors = rd.quantity(v, path, "errors_avoided_per_year", true);
                auto cost = rd.number(v, path, "cost_per_error", true);
                if (errors && cost) b.magnitude = ErrorsDriver{*errors, *cost};
                break;
            }
            case BenefitKind::revenue_uplift: {
                if (const json* ab = rd.field(v, path, "ab_test", false)) {
                    const std::string ap = path + "/ab_test";
                    rd.known_fields(*ab, ap, {"treatment_trials", "treatment_successes", "control_trials",
                                              "control_successes", "csv", "value_per_success", "annual_volume",
                                              "confidence"});
                    std::optional<AbTestResult> result;
                    if (auto csv = rd.string(*ab, ap, "csv", false)) {
                        std::filesystem::path file(*csv);
                        if (file.is_relative()) file = base_dir / file;
                        result = read_ab_csv(rd, file, ap + "/csv");
                    } else {
                        auto count = [&](const char* name) {
                            auto x = rd.integer(*ab, ap, name, true);
                            if (x && *x < 0) rd.diags().error(ap + "/" + name, "must be nonnegative");
                            return static_cast<std::uint64_t>(std::max<long long>(x.value_or(0), 0));
                        };
                        AbTestResult r;
                        r.treatment_trials = count("treatment_trials");
                        r.treatment_successes = count("treatment_successes");
                        r.control_trials = count("control_trials");
                        r.control_successes = count("control_successes");
                        result = r;
                    }
                    auto value = rd.number(*ab, ap, "value_per_success", true);
                    auto volume = rd.number(*ab, ap, "annual_volume", true);
                    if (result && value && volume) {
                        result->value_per_success = *value;
                        result->annual_volume = *volume;
                        auto d = validate(*result);
                        rd.diags().append(d, ap);
                        if (!d.has_errors()) {
                            const double conf = rd.number(*ab, ap, "confidence", false).value_or(0.95);
                            if (!(conf > 0.0 && conf < 1.0))
                                rd.diags().error(ap + "/confidence", "confidence must lie in (0, 1)");
                            else
                                b.magnitude = ValueDriver{dist::Point{uplift_estimate(*result, conf).point}};
                        }
                    }
                    if (rd.field(v, path, "annual_value", false))
                        rd.diags().error(path, "give either annual_value or ab_test, not both");
                    break;
                }
                [[fallthrough]];
            }
            case BenefitKind::risk_reduction_external: {
                auto value = rd.quantity(v, path, "annual_value", true);
                if (value) b.magnitude = ValueDriver{*value};
                break;
            }
        }
    }
    if (rd.diags().error_count() != before) return std::nullopt;
    return b;
}

inline void read_costs(Reader& rd, const json& costs, const std::string& path, const std::string& currency,
                       engine::PortfolioModel& model) {
    if (!costs.is_object()) {
        rd.diags().error(path, "expected an object");
        return;
    }
    rd.known_fields(costs, path, {"capex", "opex", "rules"});
    if (const json* capex = rd.array(costs, path, "capex")) {
        for (std::size_t i = 0; i < capex->size(); ++i) {
            const json& v = (*capex)[i];
            const std::string p = path + "/capex/" + std::to_string(i);
            rd.known_fields(v, p, {"id", "description", "currency", "amount", "useful_life_years",
                                   "incurred_year", "development"});
            check_currency(rd, v, p, currency);
            cost::CapexItem c;
            c.id = rd.string(v, p, "id", true).value_or("");
            if (auto a = rd.quantity(v, p, "amount", true)) c.amount = *a;
            c.useful_life_years = static_cast<int>(rd.integer(v, p, "useful_life_years", true).value_or(1));
            c.incurred_year = year_or(rd, v, p, "incurred_year", 0);
            c.development = rd.boolean(v, p, "development").value_or(true);
            model.capex.push_back(std::move(c));
        }
    }
    if (const json* opex = rd.array(costs, path, "opex")) {
        for (std::size_t i = 0; i < opex->size(); ++i) {
            const json& v = (*opex)[i];
            const std::string p = path + "/opex/" + std::to_string(i);
            rd.known_fields(v, p, {"id", "description", "currency", "annual_amount", "start_year", "end_year",
                                   "category", "specialist"});
            check_currency(rd, v, p, currency);
            cost::OpexItem o;
            o.id = rd.string(v, p, "id", true).value_or("");
            if (auto a = rd.quantity(v, p, "annual_amount", true)) o.annual_amount = *a;
            o.start_year = year_or(rd, v, p, "start_year", 0);
            o.end_year = year_or(rd, v, p, "end_year", model.horizon_years - 1);
            if (auto c = rd.choice(v, p, "category", cost::opex_category_names, false))
                o.category = static_cast<cost::OpexCategory>(*c);
            o.specialist = rd.boolean(v, p, "specialist").value_or(false);
            model.opex.push_back(std::move(o));
        }
    }
    if (const json* rules = rd.field(costs, path, "rules", false)) {
        const std::string p = path + "/rules";
        rd.known_fields(*rules, p, {"maintenance_rate", "reserve_rate", "talent_premium_rate", "reserve_treatment"});
        model.rules.maintenance_rate = rd.number(*rules, p, "maintenance_rate", false).value_or(0.0);
        model.rules.reserve_rate = rd.number(*rules, p, "reserve_rate", false).value_or(0.0);
        model.rules.talent_premium_rate = rd.number(*rules, p, "talent_premium_rate", false).value_or(0.0);
        if (const json* t = rd.field(*rules, p, "reserve_treatment", false)) {
            const std::string tp = p + "/reserve_treatment";
            if (t->is_string() && *t == "cash_cost") {
                model.rules.reserve_treatment = cost::CashCost{};
            } else if (t->is_object()) {
                rd.known_fields(*t, tp, {"kind", "rate"});
                auto kind = rd.string(*t, tp, "kind", true);
                if (kind == "cash_cost") {
                    model.rules.reserve_treatment = cost::CashCost{};
                } else if (kind == "carrying_cost") {
                    if (auto r = rd.number(*t, tp, "rate", true)) model.rules.reserve_treatment = cost::CarryingCost{*r};
                } else if (kind) {
                    rd.diags().error(tp + "/kind", "expected cash_cost or carrying_cost");
                }
            } else {
                rd.diags().error(tp, "expected \"cash_cost\" or {\"kind\": \"carrying_cost\", \"rate\": r}");
            }
        }
    }
}

inline void read_risks(Reader& rd, const json& risks, const std::string& path, const std::string& currency,
                       engine::PortfolioModel& model) {
    static constexpr const char* applies[] = {"current_only", "ai_only", "both"};
    for (std::size_t i = 0; i < risks.size(); ++i) {
        const json& v = risks[i];
        const std::string p = path + "/" + std::to_string(i);
        if (!v.is_object()) {
            rd.diags().error(p, "expected an object");
            continue;
        }
        rd.known_fields(v, p, {"id", "description", "currency", "sle", "applies_to", "frequency",
                               "frequency_current", "frequency_ai", "tags"});
        check_currency(rd, v, p, currency);
        risk::RiskScenario s;
        s.id = rd.string(v, p, "id", true).value_or("");
        s.description = rd.string(v, p, "description", false).value_or("");
        if (auto q = rd.quantity(v, p, "sle", true)) s.sle = *q;
        if (auto a = rd.choice(v, p, "applies_to", applies, true)) s.applies_to = static_cast<risk::AppliesTo>(*a);

        const json* shared = rd.field(v, p, "frequency", false);
        const json* cur = rd.field(v, p, "frequency_current", false);
        const json* ai = rd.field(v, p, "frequency_ai", false);
        if (shared && (cur || ai))
            rd.diags().error(p + "/frequency", "give either frequency or frequency_current/frequency_ai");
        auto pick = [&](const json* specific, const char* name, dist::FrequencyModel& out) {
            if (specific) {
                if (auto f = rd.frequency(*specific, p + "/" + name)) out = *f;
            } else if (shared) {
                if (auto f = rd.frequency(*shared, p + "/frequency")) out = *f;
            } else {
                rd.diags().error(p + "/" + name, "frequency missing for this state");
            }
        };
        if (s.applies(risk::ProcessState::current)) pick(cur, "frequency_current", s.frequency_current);
        if (s.applies(risk::ProcessState::ai)) pick(ai, "frequency_ai", s.frequency_ai);

        if (const json* tags = rd.array(v, p, "tags")) {
            for (const auto& t : *tags) {
                if (t.is_string())
                    s.tags.push_back(t.get<std::string>());
                else
                    rd.diags().error(p + "/tags", "tags must be strings");
            }
        }
        model.risks.scenarios.push_back(std::move(s));
    }
}

inline void read_penalties(Reader& rd, const json& pen, const std::string& path, PortfolioConfig& cfg) {
    static constexpr const char* tiers[] = {"prohibited_practice", "high_risk_violation", "information_failure"};
    rd.known_fields(pen, path, {"global_turnover", "scenarios"});
    const auto turnover = rd.number(pen, path, "global_turnover", true);
    if (turnover && *turnover < 0.0) rd.diags().error(path + "/global_turnover", "global_turnover ≥ 0 required");
    cfg.global_turnover = turnover;
    const json* list = rd.array(pen, path, "scenarios");
    if (!list) return;
    if (cfg.currency != "EUR" && !list->empty())
        rd.diags().warning(path, "penalty tiers are denominated in EUR but the portfolio currency is " +
                                     cfg.currency + "; no conversion is applied");
    for (std::size_t i = 0; i < list->size(); ++i) {
        const json& v = (*list)[i];
        const std::string p = path + "/scenarios/" + std::to_string(i);
        rd.known_fields(v, p, {"id", "tier", "severity_fraction", "violation_rate"});
        const std::size_t before = rd.diags().error_count();
        auto id = rd.string(v, p, "id", true);
        auto tier = rd.choice(v, p, "tier", tiers, true);
        auto sev = rd.quantity(v, p, "severity_fraction", true);
        auto rate = rd.frequency(v, p, "violation_rate", true);
        if (sev) rd.diags().append(dist::validate_fraction(*sev), p + "/severity_fraction");
        if (rate) rd.diags().append(dist::validate(*rate), p + "/violation_rate");
        if (rd.diags().error_count() != before || !turnover || *turnover < 0.0) continue;
        cfg.model.risks.scenarios.push_back(risk::penalty_scenario(
            *id, risk::penalty_tiers[*tier], *turnover, *sev, *rate));
    }
}

}  // namespace detail

// Parses and validates. Parse failures carry a line/column location.
inline LoadResult parse_config(const std::string& text, const std::filesystem::path& base_dir = {}) {
    LoadResult res;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        res.failure = LoadFailure::parse;
        res.diagnostics.error("", "JSON parse error at " + text_location(text, e.byte) + ": " + e.what());
        return res;
    }

    PortfolioConfig cfg;
    cfg.raw_text = text;
    detail::Reader rd(res.diagnostics);
    if (!root.is_object()) {
        res.diagnostics.error("", "top level must be a JSON object");
        res.failure = LoadFailure::invalid;
        return res;
    }
    rd.known_fields(root, "", {"schema_version", "metadata", "simulation", "benefits", "costs", "risks", "penalties"});

    if (auto v = rd.integer(root, "", "schema_version", true); v && *v != schema_version)
        res.diagnostics.error("/schema_version", "unsupported schema_version " + std::to_string(*v) +
                                                     " (expected " + std::to_string(schema_version) + ")");

    double mature_margin = benefit::default_mature_margin;
    if (const json* meta = rd.field(root, "", "metadata", true)) {
        rd.known_fields(*meta, "/metadata", {"name", "currency", "horizon_years", "discount_rate", "deployment_year",
                                             "mature_phase_margin"});
        cfg.name = rd.string(*meta, "/metadata", "name", true).value_or("");
        cfg.currency = rd.string(*meta, "/metadata", "currency", true).value_or("");
        if (!cfg.currency.empty() && cfg.currency.size() != 3)
            res.diagnostics.error("/metadata/currency", "currency must be a three-letter code");
        cfg.model.horizon_years = static_cast<int>(rd.integer(*meta, "/metadata", "horizon_years", true).value_or(0));
        cfg.model.discount_rate = rd.number(*meta, "/metadata", "discount_rate", true).value_or(0.0);
        cfg.model.deployment_year = static_cast<int>(rd.integer(*meta, "/metadata", "deployment_year", false)
                                                         .value_or(std::min(1, cfg.model.horizon_years - 1)));
        mature_margin = rd.number(*meta, "/metadata", "mature_phase_margin", false).value_or(mature_margin);
        if (!(mature_margin >= 0.0 && mature_margin < 1.0))
            res.diagnostics.error("/metadata/mature_phase_margin", "margin must lie in [0, 1)");
    }
    if (cfg.model.horizon_years < 1) {
        if (rd.field(root.value("metadata", json::object()), "/metadata", "horizon_years", false))
            res.diagnostics.error("/metadata/horizon_years", "horizon_years ≥ 1 required");
        res.failure = LoadFailure::invalid;
        return res;
    }

    if (const json* sim = rd.field(root, "", "simulation", false)) {
        rd.known_fields(*sim, "/simulation", {"iterations", "seed", "workers", "target_relative_se"});
        if (auto n = rd.integer(*sim, "/simulation", "iterations", false)) {
            if (*n < 1)
                res.diagnostics.error("/simulation/iterations", "iterations ≥ 1 required");
            else
                cfg.simulation.iterations = static_cast<std::size_t>(*n);
        }
        if (const json* s = rd.field(*sim, "/simulation", "seed", false)) {
            if (s->is_number_unsigned())
                cfg.simulation.seed = s->get<std::uint64_t>();
            else
                res.diagnostics.error("/simulation/seed", "seed must be a nonnegative integer");
        }
        if (const json* w = rd.field(*sim, "/simulation", "workers", false)) {
            if (w->is_string() && *w == "auto")
                cfg.simulation.workers = 0;
            else if (w->is_number_unsigned() && w->get<std::uint64_t>() >= 1)
                cfg.simulation.workers = w->get<unsigned>();
            else
                res.diagnostics.error("/simulation/workers", "workers must be a positive integer or \"auto\"");
        }
        cfg.simulation.target_relative_se = rd.number(*sim, "/simulation", "target_relative_se", false);
        if (cfg.simulation.target_relative_se && !(*cfg.simulation.target_relative_se > 0.0))
            res.diagnostics.error("/simulation/target_relative_se", "target_relative_se must be positive");
    }

    if (const json* benefits = rd.array(root, "", "benefits")) {
        for (std::size_t i = 0; i < benefits->size(); ++i) {
            if (auto b = detail::read_benefit(rd, (*benefits)[i], "/benefits/" + std::to_string(i), cfg.currency,
                                              mature_margin, base_dir))
                cfg.model.benefits.push_back(std::move(*b));
        }
    }
    if (const json* costs = rd.field(root, "", "costs", false)) detail::read_costs(rd, *costs, "/costs", cfg.currency, cfg.model);
    if (const json* risks = rd.array(root, "", "risks")) detail::read_risks(rd, *risks, "/risks", cfg.currency, cfg.model);
    if (const json* pen = rd.field(root, "", "penalties", false)) detail::read_penalties(rd, *pen, "/penalties", cfg);

    // Structural validation of the assembled model. Item paths are rebuilt
    // from the model's own ordering, which mirrors the file.
    if (!res.diagnostics.has_errors()) res.diagnostics.append(engine::validate(cfg.model));

    // Reduction scenarios plus an external risk-reduction benefit may count
    // the same avoided loss twice.
    bool external = false;
    for (const auto& b : cfg.model.benefits) external = external || b.kind == benefit::BenefitKind::risk_reduction_external;
    if (external && !res.diagnostics.has_errors()) {
        for (const auto& s : cfg.model.risks.scenarios) {
            if (risk::classify_scenario(s) == risk::Classification::reduction) {
                res.diagnostics.warning("/benefits", "risk_reduction_external benefit alongside reduction scenario '" +
                                                         s.id + "': check the same loss is not counted twice");
                break;
            }
        }
    }

    res.failure = res.diagnostics.has_errors() ? LoadFailure::invalid : LoadFailure::none;
    res.config = std::move(cfg);
    return res;
}

inline LoadResult load_config(const std::filesystem::path& path) {
    std::string text;
    if (!read_file(path, text)) {
        LoadResult res;
        res.failure = LoadFailure::io;
        res.diagnostics.error("", "cannot read config file " + path.string());
        return res;
    }
    return parse_config(text, path.parent_path());
}

}  // namespace airoi::cli
