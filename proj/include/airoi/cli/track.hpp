#pragma once

// Quarterly variance review: realized benefits, costs and losses against the
// prorated analytic projection and the simulated [p10, p90] band.

#include <array>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "airoi/cli/config.hpp"
#include "airoi/cli/report.hpp"
#include "airoi/engine.hpp"

namespace airoi::cli {

struct LossActual {
    double events = 0.0;
    double total_loss = 0.0;
};

struct ActualsRecord {
    int year = 0;
    int quarter = 1;
    std::map<std::string, double> benefits;
    std::map<std::string, double> costs;
    std::map<std::string, LossActual> losses;

    bool empty() const { return benefits.empty() && costs.empty() && losses.empty(); }
};

// Uniform proration of an annual amount.
inline std::array<double, 4> prorate_quarterly(double annual) {
    const double q = annual / 4.0;
    return {q, q, q, q};
}

struct ActualsLoad {
    std::optional<ActualsRecord> record;
    Diagnostics diagnostics;
};

inline ActualsLoad parse_actuals(const std::string& text, const PortfolioConfig& cfg) {
    ActualsLoad res;
    Diagnostics& d = res.diagnostics;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        d.error("", "JSON parse error at " + text_location(text, e.byte) + ": " + e.what());
        return res;
    }
    if (!root.is_object()) {
        d.error("", "top level must be a JSON object");
        return res;
    }
    detail::Reader rd(d);
    rd.known_fields(root, "", {"schema_version", "period", "benefits", "costs", "losses"});
    if (auto v = rd.integer(root, "", "schema_version", true); v && *v != schema_version)
        d.error("/schema_version", "unsupported schema_version " + std::to_string(*v));

    ActualsRecord rec;
    if (const json* period = rd.field(root, "", "period", true)) {
        rd.known_fields(*period, "/period", {"year", "quarter"});
        rec.year = static_cast<int>(rd.integer(*period, "/period", "year", true).value_or(-1));
        rec.quarter = static_cast<int>(rd.integer(*period, "/period", "quarter", true).value_or(0));
        if (rec.year < 0 || rec.year >= cfg.model.horizon_years)
            d.error("/period/year", "year must lie within the horizon (0.." +
                                        std::to_string(cfg.model.horizon_years - 1) + ")");
        if (rec.quarter < 1 || rec.quarter > 4) d.error("/period/quarter", "quarter must be 1..4");
    }

    std::set<std::string> benefit_ids, cost_ids, risk_ids;
    for (const auto& b : cfg.model.benefits) benefit_ids.insert(b.id);
    for (const auto& c : cfg.model.capex) cost_ids.insert(c.id);
    for (const auto& o : cfg.model.opex) cost_ids.insert(o.id);
    for (const auto& s : cfg.model.risks.scenarios) risk_ids.insert(s.id);

    std::vector<std::string> unknown;
    auto amounts = [&](const char* section, const std::set<std::string>& known, std::map<std::string, double>& out) {
        const json* obj = rd.field(root, "", section, false);
        if (!obj) return;
        if (!obj->is_object()) {
            d.error(std::string("/") + section, "expected an object of id -> amount");
            return;
        }
        for (const auto& [id, v] : obj->items()) {
            if (!known.count(id)) unknown.push_back(id);
            if (!v.is_number())
                d.error(std::string("/") + section + "/" + id, "expected a number");
            else
                out[id] = v.get<double>();
        }
    };
    amounts("benefits", benefit_ids, rec.benefits);
    amounts("costs", cost_ids, rec.costs);
    if (const json* losses = rd.field(root, "", "losses", false)) {
        if (!losses->is_object()) {
            d.error("/losses", "expected an object of scenario id -> {events, total_loss}");
        } else {
            for (const auto& [id, v] : losses->items()) {
                const std::string p = "/losses/" + id;
                if (!risk_ids.count(id)) unknown.push_back(id);
                rd.known_fields(v, p, {"events", "total_loss"});
                LossActual la;
                la.events = rd.number(v, p, "events", true).value_or(0.0);
                la.total_loss = rd.number(v, p, "total_loss", true).value_or(0.0);
                rec.losses[id] = la;
            }
        }
    }
    if (!unknown.empty()) {
        std::string list;
        for (const auto& id : unknown) list += (list.empty() ? "" : ", ") + id;
        d.error("", "unknown ids not present in the config: " + list);
    }
    if (rec.empty() && !d.has_errors()) d.error("", "actuals record contains no benefits, costs or losses");
    if (!d.has_errors()) res.record = std::move(rec);
    return res;
}

struct TrackRow {
    std::string kind;  // benefit | cost | loss | loss_events
    std::string id;
    double projected = 0.0;
    double actual = 0.0;
    double variance = 0.0;
    double band_p10 = 0.0;
    double band_p90 = 0.0;
    bool flagged = false;
};

namespace detail {
// Analytic projection and quarterly [p10, p90] band for one annual quantity.
template <class AnnualFn>
TrackRow track_row(std::string kind, std::string id, double actual, const SimulationDefaults& sim,
                   AnnualFn&& annual) {
    TrackRow r;
    r.kind = std::move(kind);
    r.id = std::move(id);
    r.projected = prorate_quarterly(annual(dist::AnalyticDraws{}, std::uint64_t{0}))[0];
    std::vector<double> band(sim.iterations);
    for (std::size_t i = 0; i < sim.iterations; ++i)
        band[i] = prorate_quarterly(annual(dist::IterationDraws{sim.seed, i}, std::uint64_t{i}))[0];
    std::sort(band.begin(), band.end());
    r.band_p10 = dist::percentile(band, 0.10);
    r.band_p90 = dist::percentile(band, 0.90);
    r.actual = actual;
    r.variance = actual - r.projected;
    r.flagged = actual < r.band_p10 || actual > r.band_p90;
    return r;
}
}  // namespace detail

inline std::vector<TrackRow> track(const PortfolioConfig& cfg, const ActualsRecord& rec) {
    const auto& m = cfg.model;
    const auto& sim = cfg.simulation;
    const int h = m.horizon_years;
    const auto y = static_cast<std::size_t>(rec.year);
    std::vector<TrackRow> rows;

    for (const auto& [id, actual] : rec.benefits) {
        const auto& item = *std::find_if(m.benefits.begin(), m.benefits.end(), [&](auto& b) { return b.id == id; });
        rows.push_back(detail::track_row("benefit", id, actual, sim, [&](const auto& draw, std::uint64_t) {
            return benefit::item_schedule(item, h, draw)[y];
        }));
    }
    for (const auto& [id, actual] : rec.costs) {
        auto capex = std::find_if(m.capex.begin(), m.capex.end(), [&](auto& c) { return c.id == id; });
        if (capex != m.capex.end()) {
            rows.push_back(detail::track_row("cost", id, actual, sim, [&](const auto& draw, std::uint64_t) {
                const double amount = draw(capex->amount, cost::stream_for(*capex));
                return cost::amortize_capex(amount, capex->useful_life_years, capex->incurred_year, h)[y];
            }));
            continue;
        }
        const auto& opex = *std::find_if(m.opex.begin(), m.opex.end(), [&](auto& o) { return o.id == id; });
        rows.push_back(detail::track_row("cost", id, actual, sim, [&](const auto& draw, std::uint64_t) {
            if (!opex.active(rec.year)) return 0.0;
            return draw(cost::effective_amount(opex, m.rules), cost::stream_for(opex));
        }));
    }
    for (const auto& [id, actual] : rec.losses) {
        const auto& s = *std::find_if(m.risks.scenarios.begin(), m.risks.scenarios.end(),
                                      [&](auto& sc) { return sc.id == id; });
        const auto ai = risk::ProcessState::ai;
        rows.push_back(detail::track_row("loss", id, actual.total_loss, sim, [&](const auto& draw, std::uint64_t i) {
            if constexpr (std::decay_t<decltype(draw)>::simulated)
                return risk::ale_simulate(s, ai, sim.seed, i);
            else
                return risk::ale_analytic(s, ai);
        }));
        rows.push_back(detail::track_row("loss_events", id, actual.events, sim, [&](const auto& draw, std::uint64_t i) {
            if (!s.applies(ai)) return 0.0;
            if constexpr (std::decay_t<decltype(draw)>::simulated) {
                dist::RngStream rng(sim.seed, risk::stream_for(s, ai), i);
                return static_cast<double>(dist::sample_count(s.frequency(ai), rng));
            } else {
                return dist::mean(s.frequency(ai));
            }
        }));
    }
    return rows;
}

inline void write_track_csv(std::ostream& out, const ActualsRecord& rec, const std::vector<TrackRow>& rows) {
    out << "period,kind,id,projected,actual,variance,band_p10,band_p90,flag\n";
    const std::string period = "Y" + std::to_string(rec.year) + "Q" + std::to_string(rec.quarter);
    for (const auto& r : rows) {
        auto f = [&](double v) { return r.kind == "loss_events" ? format_number(v) : format_currency(v); };
        out << period << ',' << r.kind << ',' << r.id << ',' << f(r.projected) << ',' << f(r.actual) << ','
            << f(r.variance) << ',' << f(r.band_p10) << ',' << f(r.band_p90) << ','
            << (r.flagged ? "outside_band" : "ok") << '\n';
    }
}

}  // namespace airoi::cli
