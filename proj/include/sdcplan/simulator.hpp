#pragma once

// simulator.hpp -- Monte Carlo discrete-event replay of checkpointed
// executions under sampled error arrivals and detection latencies.
//
// Two execution models:
//   BoundedStorageSim: periodic checkpoints (period T = work + C) with only
//     the k most recent checkpoints kept.  Errors surface after a sampled
//     latency; on detection the run rolls back to the newest stored
//     checkpoint written before the earliest undetected error, or restarts
//     from scratch (an irrecoverable failure) when no stored checkpoint
//     qualifies.
//   PatternSim: the verification patterns of patterns.hpp.  Errors are
//     found only by verifications; rollback follows the pattern's walk and
//     can never pass the previous pattern's final checkpoint, so no trial
//     ever records an irrecoverable failure.
//
// Determinism: every trial draws from its own generator derived from
// (seed, trial index), and aggregation runs in trial order, so results are
// bitwise identical for a fixed seed regardless of thread count.

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "sdcplan/model.hpp"
#include "sdcplan/patterns.hpp"

namespace sdcplan {

struct BoundedStorageSim {
    double period = 0.0;                ///< T [s]; work per period is T - C
    std::int64_t checkpoints_kept = 1;  ///< k: ring-buffer depth
};

struct PatternSim {
    PatternSpec pattern;
};

struct SimConfig {
    std::variant<BoundedStorageSim, PatternSim> model;
    WorkloadSpec workload;
    PlatformParams params;
    DistributionSpec error_law =
        DistributionSpec::exponential(DistributionSpec::Role::ErrorArrival, 1.0);
    /// Ignored in pattern mode (detection happens only at verifications).
    DistributionSpec detection_law =
        DistributionSpec::exponential(DistributionSpec::Role::DetectionLatency, 1.0);
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    /// Per-trial wall-clock cap; 0 selects 10^4 x the failure-free
    /// makespan.  Explicit values below 10x failure-free are rejected.
    double max_sim_time = 0.0;
    /// Keep the per-trial records in the result (needed for stderr
    /// consumers and determinism checks; costs 24 bytes per trial).
    bool keep_trials = true;
};

struct TrialRecord {
    double makespan = 0.0;
    std::int32_t attempts = 1;      ///< 1 + number of from-scratch restarts
    bool irrecoverable = false;     ///< any irrecoverable failure in this trial
};

struct SimResult {
    double mean_makespan = 0.0;
    double makespan_stddev = 0.0;   ///< per-trial sample standard deviation
    double waste_mean = 0.0;        ///< 1 - effective_work / mean_makespan
    double waste_stderr = 0.0;      ///< first-order error propagated from the makespan mean
    double effective_work = 0.0;    ///< failure-free compute the waste is measured against
    std::int64_t irrecoverable_count = 0;
    std::int64_t attempts_total = 0;
    std::int64_t trials = 0;
    std::vector<TrialRecord> records;  ///< per trial, in index order (may be empty)
};

/// Deterministic per-trial generator: the same (seed, trial_index) yields
/// the same stream no matter which thread runs the trial or in what order.
std::mt19937_64 rng_stream(std::uint64_t seed, std::uint64_t trial_index);

/// Run the Monte Carlo simulation.  Trials execute in parallel when OpenMP
/// is available; results are deterministic for a fixed seed regardless of
/// thread count.  Throws RunawayError (naming the lowest offending trial
/// index and the seed) when any trial exceeds max_sim_time.
SimResult simulate(const SimConfig& config);

/// Same computation driven by a plain serial loop.  Kept as the reference
/// for arbitration tests and benchmarks against the parallel driver; must
/// produce bitwise-identical results.
SimResult simulate_reference(const SimConfig& config);

/// Failure-free makespan of the configured schedule (work plus scheduled
/// checkpoints/verifications, no errors); the basis for max_sim_time.
double failure_free_makespan(const SimConfig& config);

} // namespace sdcplan
