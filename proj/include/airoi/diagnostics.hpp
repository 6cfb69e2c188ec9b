#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace airoi {

// Compact human-readable number for messages ("0.3", "1.5e+06").
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

enum class Severity { error, warning };

// One finding from validation. `path` locates the offending field
// (JSON-pointer style when produced by the config loader).
struct Diagnostic {
    Severity severity = Severity::error;
    std::string path;
    std::string message;
};

class Diagnostics {
public:
    void error(std::string path, std::string message) {
        items_.push_back({Severity::error, std::move(path), std::move(message)});
    }
    void warning(std::string path, std::string message) {
        items_.push_back({Severity::warning, std::move(path), std::move(message)});
    }
    void append(const Diagnostics& other) {
        items_.insert(items_.end(), other.items_.begin(), other.items_.end());
    }
    // Re-roots every entry under `prefix`.
    void append(const Diagnostics& other, const std::string& prefix) {
        for (auto d : other.items_) {
            d.path = prefix + d.path;
            items_.push_back(std::move(d));
        }
    }

    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    bool has_errors() const {
        for (const auto& d : items_)
            if (d.severity == Severity::error) return true;
        return false;
    }
    std::size_t error_count() const {
        std::size_t n = 0;
        for (const auto& d : items_) n += d.severity == Severity::error;
        return n;
    }

    const std::vector<Diagnostic>& items() const { return items_; }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

private:
    std::vector<Diagnostic> items_;
};

inline std::string to_string(const Diagnostic& d) {
    std::string s = d.severity == Severity::error ? "error" : "warning";
    s += ": ";
    if (!d.path.empty()) s += d.path + ": ";
    s += d.message;
    return s;
}

// Thrown when a model that failed validation is handed to an evaluator.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(Diagnostics diags)
        : std::runtime_error(summarize(diags)), diagnostics_(std::move(diags)) {}

    const Diagnostics& diagnostics() const { return diagnostics_; }

private:
    static std::string summarize(const Diagnostics& diags) {
        for (const auto& d : diags)
            if (d.severity == Severity::error) return to_string(d);
        return "validation failed";
    }

    Diagnostics diagnostics_;
};

}  // namespace airoi
