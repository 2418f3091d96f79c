#pragma once

// scenario.hpp -- JSON scenario documents: one file describes a platform,
// a workload, and what to do with them (retention policy, pattern request,
// sweep, simulation settings).  Loading is strict: unknown keys are
// rejected by name (JSON pointer path) so typos cannot silently fall back
// to defaults, and every duration must carry a unit suffix.

#include <cstdint>
#include <optional>
#include <string>

#include "sdcplan/model.hpp"
#include "sdcplan/patterns.hpp"

namespace sdcplan {

/// Bounded-storage retention policy plus the (optional) period to run at.
/// When period is absent, commands fall back to the first-order optimum.
struct PolicySpec {
    std::int64_t checkpoints_kept = 1;
    double risk_threshold = 0.0;        ///< epsilon for solve_t_min; 0 = none
    std::optional<double> period;       ///< T [s]

    bool operator==(const PolicySpec&) const = default;
};

/// A pattern request: either fully specified (k and period given) or a
/// search ("find the best k <= k_max, each at its optimal period").
struct PatternRequest {
    PatternMode mode = PatternMode::CheckpointHeavy;
    std::optional<std::int64_t> k;
    std::optional<double> period;       ///< S [s]
    std::int64_t k_max = 50;            ///< search bound when k is absent

    bool fully_specified() const { return k.has_value() && period.has_value(); }
    bool operator==(const PatternRequest&) const = default;
};

/// Shape of a sampling law; the scale is always matched to the platform
/// mean (mu_e or mu_d), so only the family and shape are configurable.
struct DistributionChoice {
    DistributionSpec::Family family = DistributionSpec::Family::Exponential;
    double shape = 1.0;                 ///< Weibull only

    bool operator==(const DistributionChoice&) const = default;
};

struct SweepSpec {
    std::string variable;               ///< "T", "k", "V" or "S"
    double from = 0.0;
    double to = 0.0;
    std::int64_t points = 0;
    bool log_spacing = false;

    bool operator==(const SweepSpec&) const = default;
};

struct SimulationSpec {
    std::int64_t trials = 20000;
    std::uint64_t seed = 42;
    double max_sim_time = 0.0;          ///< 0 = simulator default

    bool operator==(const SimulationSpec&) const = default;
};

/// Tolerances for the validate command.
struct ToleranceSpec {
    double waste_abs = 0.01;            ///< absolute waste tolerance floor
    double sigma = 3.0;                 ///< statistical band in stderr units

    bool operator==(const ToleranceSpec&) const = default;
};

struct Scenario {
    std::string name;
    std::string notes;
    PlatformParams params;
    WorkloadSpec workload;
    std::optional<PolicySpec> policy;
    std::optional<PatternRequest> pattern;
    DistributionChoice error_dist;
    DistributionChoice detection_dist;
    std::optional<SweepSpec> sweep;
    SimulationSpec simulation;
    ToleranceSpec tolerances;

    /// Error-arrival law with the platform's mean.
    DistributionSpec error_law() const;
    /// Detection-latency law with the platform's mean latency; throws
    /// ParameterError when the platform has no detection model.
    DistributionSpec detection_law() const;

    bool operator==(const Scenario&) const = default;
};

/// Parse a scenario document.  `origin` names the source in error messages
/// (a path, or "<string>" for inline text).  Throws ScenarioError with the
/// offending JSON pointer for unknown/invalid fields and with the byte
/// position for syntax errors.
Scenario parse_scenario(const std::string& text, const std::string& origin);

/// Read and parse a scenario file.
Scenario load_scenario(const std::string& path);

/// Serialize in canonical form (durations in seconds, defaults omitted).
/// parse_scenario(emit_scenario(s)) reproduces s exactly.
std::string emit_scenario(const Scenario& scenario);

} // namespace sdcplan
