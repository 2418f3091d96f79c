#pragma once

// risk.hpp -- irrecoverable-failure risk when only the last k checkpoints
// are kept.  An error whose detection latency outlives all k stored
// checkpoints leaves nothing valid to restore, forcing a restart from
// scratch.  This module bounds the probability of that event per run and
// finds the smallest period keeping it under a threshold.

#include <cstdint>
#include <optional>
#include <string>

#include "sdcplan/model.hpp"

namespace sdcplan {

struct BoundedStoragePolicy {
    std::int64_t checkpoints_kept = 1;  ///< k: ring-buffer depth
    double risk_threshold = 0.0;        ///< epsilon in (0, 1), for solve_t_min

    /// The period-to-chunk rule is fixed: a period T holds work T - C, so a
    /// workload W spans n = W / (T - C) periods (kept fractional downstream).
};

struct RiskReport {
    double period = 0.0;                ///< T [s]
    double p_fail = 0.0;                ///< P(an error strikes within one period)
    double p_lat = 0.0;                 ///< P(latency outlives the k-1 later periods); upper bound
    double p_irrec = 0.0;               ///< per-period irrecoverable probability
    double p_risk = 0.0;                ///< P(at least one irrecoverable failure in a run)
    double expected_executions = 1.0;   ///< geometric mean attempts: 1/(1 - p_risk)
    double period_count = 0.0;          ///< fractional n = W/(T-C)
    std::optional<std::string> note;    ///< caveat when non-Exponential laws are used
};

/// Probability that at least one error occurs within a span T, under the
/// given arrival law (or the platform's Exponential law).
double p_fail(double period, const DistributionSpec& error_law);
double p_fail(double period, const PlatformParams& p);

/// Probability that a detection latency exceeds the k-1 periods during
/// which the affected checkpoint is still retrievable.  This is an upper
/// bound on the true irrecoverability condition, which also includes the
/// in-period time already elapsed before the error.
double p_lat(double period, std::int64_t checkpoints_kept, const DistributionSpec& detection_law);
double p_lat(double period, std::int64_t checkpoints_kept, const PlatformParams& p);

/// Full risk assessment of running the workload at period T under the
/// given retention policy.  Exponential laws are taken from the platform
/// parameters; the law-taking overload accepts arbitrary distributions
/// (flagged in the note: the analysis is exact only in the memoryless case).
RiskReport risk_report(double period, const BoundedStoragePolicy& policy,
                       const WorkloadSpec& workload, const PlatformParams& p);
RiskReport risk_report(double period, const BoundedStoragePolicy& policy,
                       const WorkloadSpec& workload, const PlatformParams& p,
                       const DistributionSpec& error_law,
                       const DistributionSpec& detection_law);

/// Smallest period (1-second resolution) whose p_risk stays at or below
/// policy.risk_threshold.  Scans upward from max(C+1, T_opt/4) in coarse
/// steps, then bisects the first bracketing interval: p_risk need not be
/// monotone near T -> C, so no global monotonicity is assumed.  The search
/// ceiling is 10 * mu_e; an unattainable threshold raises RegimeError
/// reporting the smallest risk seen.  Schedules should use
/// max(solve_t_min(...), waste-optimal T): the threshold is a floor, not a
/// recommendation.
double solve_t_min(const BoundedStoragePolicy& policy, const WorkloadSpec& workload,
                   const PlatformParams& p);
double solve_t_min(const BoundedStoragePolicy& policy, const WorkloadSpec& workload,
                   const PlatformParams& p, const DistributionSpec& error_law,
                   const DistributionSpec& detection_law);

} // namespace sdcplan
