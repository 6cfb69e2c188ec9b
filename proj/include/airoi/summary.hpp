#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "airoi/dist.hpp"

namespace airoi::engine {

// Sample standard deviation (n-1) over sqrt(n).
inline double standard_error(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("standard error needs at least two samples");
    double sum = 0.0;
    for (double x : samples) sum += x;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

struct SampleSummary {
    std::size_t n = 0;
    double mean = 0.0;
    std::optional<double> standard_error;  // absent for a single sample
    double p10 = 0.0;
    double p50 = 0.0;
    double p90 = 0.0;
    double min = 0.0;
    double max = 0.0;

    friend bool operator==(const SampleSummary&, const SampleSummary&) = default;
};

inline SampleSummary summarize(std::span<const double> samples) {
    if (samples.empty()) throw dist::NoSamplesError();
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    SampleSummary s;
    s.n = sorted.size();
    s.min = sorted.front();
    s.max = sorted.back();
    s.p10 = dist::percentile(sorted, 0.10);
    s.p50 = dist::percentile(sorted, 0.50);
    s.p90 = dist::percentile(sorted, 0.90);
    if (s.min == s.max) {
        // Degenerate sample: report the value itself rather than a rounded mean.
        s.mean = s.min;
        if (s.n >= 2) s.standard_error = 0.0;
        return s;
    }
    double sum = 0.0;
    for (double x : samples) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n >= 2) s.standard_error = standard_error(samples);
    return s;
}

}  // namespace airoi::engine
