#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gl3lab/voronoi.hpp"

namespace gl3lab {

inline constexpr const char* kVersion = "0.1.0";

// stade, kloosterman, sieve, kuznetsov, voronoi, families, moment
const std::vector<std::string>& known_suites();

struct RunConfig {
    std::vector<std::string> suites;
    double epsilon = 0.1;
    std::uint64_t seed = 1;
    std::map<std::string, std::string> params;  // "suite.param" -> value; keys ending in "tol" are tolerances
    std::vector<std::filesystem::path> data_paths;
    std::string output;  // empty: stdout
    bool emit_machine_readable = false;
    PrecisionMode precision = PrecisionMode::binary64;

    // UsageError on an unknown suite, epsilon outside (0, 0.5) or a tolerance that is not a positive number
    void validate() const;
    double param(const std::string& key, double fallback) const;
    long param(const std::string& key, long fallback) const;
    std::filesystem::path data_dir() const;  // first data path, else the installed data directory
};

// Flat `key = value` lines, '#' comments. Top-level keys: suites, epsilon, seed, data, output, json;
// anything else must be namespaced `suite.param` with a known suite. ParseError on a malformed line.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

// GL3LAB_PRECISION in {double, extended}; unset means double. UsageError otherwise.
PrecisionMode precision_from_env();
std::string precision_name(PrecisionMode m);

enum class CheckStatus { pass, fail, warn };
std::string status_name(CheckStatus s);

struct Check {
    std::string name;  // "suite.check"
    CheckStatus status = CheckStatus::pass;
    double lhs = 0.0;
    double rhs = 0.0;
    double err = 0.0;
    double tolerance = 0.0;
    std::string tolerance_source;  // "default", "config:<key>" or "golden:<key>"
    std::map<std::string, double> fitted_constants;
    double runtime_s = 0.0;
    std::string note;

    bool operator==(const Check&) const = default;
};

struct Environment {
    std::string version = kVersion;
    std::string precision_mode = "double";
    std::uint64_t seed = 1;

    bool operator==(const Environment&) const = default;
};

struct VerificationReport {
    std::string suite;  // comma-joined suite names
    std::vector<Check> checks;
    Environment environment;

    int exit_code() const;  // 0 when no check failed, 1 otherwise
    bool operator==(const VerificationReport&) const = default;
};

// Fitted constants keyed "suite.check.constant". A constant regresses when it exceeds its golden by more than 10%.
class GoldenStore {
public:
    static constexpr double kRegressionFactor = 1.1;

    GoldenStore() = default;
    static GoldenStore load(const std::filesystem::path& path);  // a missing file gives an empty store
    void save(const std::filesystem::path& path) const;

    std::optional<double> get(const std::string& key) const;
    void set(const std::string& key, double value, const std::string& note);
    void merge(const GoldenStore& other);  // other's entries win
    size_t size() const { return values_.size(); }

private:
    std::map<std::string, std::pair<double, std::string>> values_;
};

// Runs the selected suites in a worker pool and merges the checks in suite order. With `record`
// set, fitted constants are written to it instead of being compared against `goldens`.
VerificationReport run_suites(const RunConfig& cfg, const GoldenStore& goldens, GoldenStore* record = nullptr);

enum class ReportFormat { human, machine };
// machine: JSON with sorted keys; runtimes are included only when `timings` is set
std::string emit_report(const VerificationReport& rep, ReportFormat format, bool timings = false);
VerificationReport parse_machine_report(const std::string& json);

}  // namespace gl3lab
