#pragma once

// Uncertain inputs: the distribution menu, closed-form means, deterministic
// counter-based sampling and empirical percentiles.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include "airoi/diagnostics.hpp"

namespace airoi::dist {

//---------------------------------------------------------------------------//
// Distribution menu
//---------------------------------------------------------------------------//

struct Point {
    double value = 0.0;
};
struct Uniform {
    double lo = 0.0;
    double hi = 0.0;
};
struct Triangular {
    double lo = 0.0;
    double mode = 0.0;
    double hi = 0.0;
};
struct Pert {
    double lo = 0.0;
    double mode = 0.0;
    double hi = 0.0;
};
struct Lognormal {
    double median = 1.0;
    double sigma = 0.0;
};

using UncertainQuantity = std::variant<Point, Uniform, Triangular, Pert, Lognormal>;

// Annualized event frequency.
struct PointRate {
    double events_per_year = 0.0;
};
struct PoissonRate {
    double mean_events_per_year = 0.0;
};

using FrequencyModel = std::variant<PointRate, PoissonRate>;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline const char* kind_name(const UncertainQuantity& q) {
    static constexpr const char* names[] = {"point", "uniform", "triangular", "pert", "lognormal"};
    return names[q.index()];
}

inline const char* kind_name(const FrequencyModel& f) {
    return std::holds_alternative<PointRate>(f) ? "point_rate" : "poisson";
}

//---------------------------------------------------------------------------//
// Counter-based random streams
//---------------------------------------------------------------------------//

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a_offset = 0xCBF29CE484222325ull;

constexpr std::uint64_t fnv1a(std::string_view s, std::uint64_t h = fnv1a_offset) noexcept {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

// Stable identifier of a random stream, e.g. "risk/fraud/current".
// Keys are hashed from their text so that results never depend on the
// position of an item in the model.
struct StreamKey {
    std::uint64_t hash = fnv1a_offset;

    StreamKey() = default;
    explicit StreamKey(std::string_view text) : hash(fnv1a(text)) {}

    // Appends "/part".
    StreamKey child(std::string_view part) const {
        StreamKey k;
        k.hash = fnv1a(part, fnv1a("/", hash));
        return k;
    }

    friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

template <class... Parts>
StreamKey stream_key(std::string_view first, const Parts&... rest) {
    StreamKey k(first);
    ((k = k.child(rest)), ...);
    return k;
}

// The generator for one (master_seed, stream_key, iteration_index) triple.
// Construction is O(1) and needs no shared state, so any iteration can be
// evaluated on any worker in any order. Satisfies UniformRandomBitGenerator.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, StreamKey key, std::uint64_t iteration) noexcept
        : state_(mix64(mix64(mix64(master_seed ^ 0x6A09E667F3BCC909ull) ^ key.hash) +
                       mix64(iteration ^ 0xBB67AE8584CAA73Bull))) {}

    RngStream(std::uint64_t master_seed, std::string_view key, std::uint64_t iteration) noexcept
        : RngStream(master_seed, StreamKey(key), iteration) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

//---------------------------------------------------------------------------//
// Moments and support
//---------------------------------------------------------------------------//

// Closed-form mean. The bounded families are evaluated as offsets from the
// mode so symmetric supports return the mode exactly.
inline double mean(const UncertainQuantity& q) {
    return std::visit(overloaded{
                          [](const Point& p) { return p.value; },
                          [](const Uniform& u) { return u.lo + (u.hi - u.lo) / 2.0; },
                          [](const Triangular& t) {
                              return t.mode + ((t.lo - t.mode) + (t.hi - t.mode)) / 3.0;
                          },
                          [](const Pert& t) {
                              return t.mode + ((t.lo - t.mode) + (t.hi - t.mode)) / 6.0;
                          },
                          [](const Lognormal& l) {
                              return l.median * std::exp(l.sigma * l.sigma / 2.0);
                          },
                      },
                      q);
}

inline double mean(const FrequencyModel& f) {
    return std::visit(overloaded{
                          [](const PointRate& r) { return r.events_per_year; },
                          [](const PoissonRate& r) { return r.mean_events_per_year; },
                      },
                      f);
}

inline double support_min(const UncertainQuantity& q) {
    return std::visit(overloaded{
                          [](const Point& p) { return p.value; },
                          [](const Uniform& u) { return u.lo; },
                          [](const Triangular& t) { return t.lo; },
                          [](const Pert& t) { return t.lo; },
                          [](const Lognormal&) { return 0.0; },
                      },
                      q);
}

inline double support_max(const UncertainQuantity& q) {
    return std::visit(overloaded{
                          [](const Point& p) { return p.value; },
                          [](const Uniform& u) { return u.hi; },
                          [](const Triangular& t) { return t.hi; },
                          [](const Pert& t) { return t.hi; },
                          [](const Lognormal& l) {
                              return l.sigma == 0.0 ? l.median
                                                    : std::numeric_limits<double>::infinity();
                          },
                      },
                      q);
}

// q scaled by k >= 0, staying inside the same family.
inline UncertainQuantity scale(const UncertainQuantity& q, double k) {
    if (!(k >= 0.0)) throw std::invalid_argument("scale factor must be nonnegative");
    return std::visit(overloaded{
                          [k](const Point& p) -> UncertainQuantity { return Point{p.value * k}; },
                          [k](const Uniform& u) -> UncertainQuantity {
                              return Uniform{u.lo * k, u.hi * k};
                          },
                          [k](const Triangular& t) -> UncertainQuantity {
                              return Triangular{t.lo * k, t.mode * k, t.hi * k};
                          },
                          [k](const Pert& t) -> UncertainQuantity {
                              return Pert{t.lo * k, t.mode * k, t.hi * k};
                          },
                          [k](const Lognormal& l) -> UncertainQuantity {
                              if (k == 0.0) return Point{0.0};
                              return Lognormal{l.median * k, l.sigma};
                          },
                      },
                      q);
}

inline bool is_point(const UncertainQuantity& q) { return std::holds_alternative<Point>(q); }

//---------------------------------------------------------------------------//
// Validation
//---------------------------------------------------------------------------//

inline Diagnostics validate(const UncertainQuantity& q) {
    Diagnostics d;
    auto finite = [&d](const char* field, double v) {
        if (!std::isfinite(v)) d.error(std::string("/") + field, std::string(field) + " must be finite");
        return std::isfinite(v);
    };
    std::visit(overloaded{
                   [&](const Point& p) { finite("value", p.value); },
                   [&](const Uniform& u) {
                       if (finite("lo", u.lo) & finite("hi", u.hi) && !(u.lo <= u.hi))
                           d.error("/hi", "lo ≤ hi violated");
                   },
                   [&](const auto& t) requires(std::is_same_v<std::decay_t<decltype(t)>, Triangular> ||
                                               std::is_same_v<std::decay_t<decltype(t)>, Pert>) {
                       if (finite("lo", t.lo) & finite("mode", t.mode) & finite("hi", t.hi) &&
                           !(t.lo <= t.mode && t.mode <= t.hi))
                           d.error("/mode", "lo ≤ mode ≤ hi violated");
                   },
                   [&](const Lognormal& l) {
                       if (finite("median", l.median) && !(l.median > 0.0))
                           d.error("/median", "median > 0 required");
                       if (finite("sigma", l.sigma) && !(l.sigma >= 0.0))
                           d.error("/sigma", "sigma ≥ 0 required");
                   },
               },
               q);
    return d;
}

// Validation for fields that declare a nonnegative quantity.
inline Diagnostics validate_nonnegative(const UncertainQuantity& q) {
    Diagnostics d = validate(q);
    if (!d.has_errors() && support_min(q) < 0.0)
        d.error("", "quantity must be nonnegative but its support reaches " +
                        std::to_string(support_min(q)));
    return d;
}

// Validation for fields that declare a fraction in [0, 1].
inline Diagnostics validate_fraction(const UncertainQuantity& q) {
    Diagnostics d = validate(q);
    if (!d.has_errors() && (support_min(q) < 0.0 || support_max(q) > 1.0))
        d.error("", "fraction support must lie within [0, 1]");
    return d;
}

inline Diagnostics validate(const FrequencyModel& f) {
    Diagnostics d;
    const double rate = mean(f);
    if (!std::isfinite(rate) || rate < 0.0) d.error("/rate", "rate ≥ 0 required");
    return d;
}

//---------------------------------------------------------------------------//
// Sampling
//---------------------------------------------------------------------------//

inline double sample(const UncertainQuantity& q, RngStream& rng) {
    return std::visit(
        overloaded{
            [](const Point& p) { return p.value; },
            [&rng](const Uniform& u) { return u.lo + (u.hi - u.lo) * rng.uniform01(); },
            [&rng](const Triangular& t) {
                const double width = t.hi - t.lo;
                if (width <= 0.0) return t.lo;
                const double u = rng.uniform01();
                const double split = (t.mode - t.lo) / width;
                if (u < split) return t.lo + std::sqrt(u * width * (t.mode - t.lo));
                return t.hi - std::sqrt((1.0 - u) * width * (t.hi - t.mode));
            },
            [&rng](const Pert& t) {
                const double width = t.hi - t.lo;
                if (width <= 0.0) return t.lo;
                const double alpha = 1.0 + 4.0 * (t.mode - t.lo) / width;
                const double beta = 1.0 + 4.0 * (t.hi - t.mode) / width;
                const double x = boost::random::gamma_distribution<double>(alpha, 1.0)(rng);
                const double y = boost::random::gamma_distribution<double>(beta, 1.0)(rng);
                return t.lo + width * (x / (x + y));
            },
            [&rng](const Lognormal& l) {
                if (l.sigma == 0.0) return l.median;
                const double z = boost::random::normal_distribution<double>(0.0, 1.0)(rng);
                return l.median * std::exp(l.sigma * z);
            },
        },
        q);
}

// Number of events in one simulated year. Fractional point rates are
// realized by thinning: floor(rate) events plus one more with probability
// frac(rate), so the expected count equals the rate exactly.
inline std::uint64_t sample_count(const FrequencyModel& f, RngStream& rng) {
    return std::visit(
        overloaded{
            [&rng](const PointRate& r) -> std::uint64_t {
                const double whole = std::floor(r.events_per_year);
                const double frac = r.events_per_year - whole;
                auto n = static_cast<std::uint64_t>(whole);
                if (frac > 0.0 && rng.uniform01() < frac) ++n;
                return n;
            },
            [&rng](const PoissonRate& r) -> std::uint64_t {
                if (r.mean_events_per_year <= 0.0) return 0;
                return boost::random::poisson_distribution<std::uint64_t, double>(
                    r.mean_events_per_year)(rng);
            },
        },
        f);
}

// Draw policies. Every evaluator in the pipeline is written once against
// this pair: AnalyticDraws replaces each draw with the closed-form mean,
// IterationDraws samples from the stream of one Monte Carlo iteration.
struct AnalyticDraws {
    static constexpr bool simulated = false;
    double operator()(const UncertainQuantity& q, const StreamKey&) const { return mean(q); }
};

struct IterationDraws {
    static constexpr bool simulated = true;
    std::uint64_t master_seed = 0;
    std::uint64_t iteration = 0;

    double operator()(const UncertainQuantity& q, const StreamKey& key) const {
        if (const auto* p = std::get_if<Point>(&q)) return p->value;
        RngStream rng(master_seed, key, iteration);
        return sample(q, rng);
    }
};

//---------------------------------------------------------------------------//
// Empirical percentiles
//---------------------------------------------------------------------------//

class NoSamplesError : public std::runtime_error {
public:
    NoSamplesError() : std::runtime_error("no simulation output: sample set is empty") {}
};

// Linear interpolation at zero-indexed rank p*(n-1) of an ascending sample.
inline double percentile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw NoSamplesError();
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("percentile fraction must lie in [0, 1]");
    assert(std::is_sorted(sorted.begin(), sorted.end()));
    const double rank = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

inline double percentile_unsorted(std::vector<double> samples, double p) {
    std::sort(samples.begin(), samples.end());
    return percentile(samples, p);
}

}  // namespace airoi::dist
