#pragma once

// exact_model.hpp -- exact expectations for exponential errors with
// exponential detection latency, plus the closed-form chunking optimum.
//
// The execution model: total work W is split into n equal chunks of work
// w = W/n, each followed by a checkpoint of cost C.  Errors arrive at rate
// lambda_e and are detected after an exponential latency with mean mu_d;
// recovery from the last checkpoint costs D (downtime) + R (restore), and
// because the platform stays error-prone during recovery, the recovery
// itself may have to be retried.

#include <cstdint>

#include "sdcplan/model.hpp"

namespace sdcplan {

/// Expected useful time thrown away per error, i.e. time since the last
/// committed checkpoint when an error strikes within a span of w + C:
///   E(T_lost) = 1/lambda_e - (w+C)/(e^{lambda_e (w+C)} - 1).
/// Evaluated by a series for small lambda_e*(w+C) to avoid cancellation.
double expected_tlost(double work, const PlatformParams& p);

/// Expected cost of one recovery, counting repeated attempts when errors
/// hit during the restore itself (restores are error-prone, downtime is not):
///   E(T_rec) = D e^{lambda_e R} + (e^{lambda_e R} - 1)(mu_e + mu_d).
double expected_trec(const PlatformParams& p);

/// Expected wall-clock time to push one chunk of work `work` through to a
/// committed, certified checkpoint, including all error/recovery loops:
///   E(T) = e^{lambda_e R} (D + mu_e + mu_d) (e^{lambda_e (work+C)} - 1).
double expected_makespan_chunk(double work, const PlatformParams& p);

struct ChunkingSolution {
    double n_star_real = 0.0;        ///< unconstrained real optimum n*
    std::int64_t n_opt = 0;          ///< integer count actually chosen
    double period = 0.0;             ///< T = W/n_opt + C [s]
    double expected_makespan = 0.0;  ///< n_opt * expected_makespan_chunk(W/n_opt) [s]
    double lambert_y = 0.0;          ///< y = W0(-e^{-lambda_e C - 1}) in [-1, 0)
    bool degenerate = false;         ///< C = 0 or lambda_e*W below resolution
};

/// Optimal equal-chunk plan for the workload.  The continuous optimum is
///   n* = lambda_e W / (1 + y),  y = W0(-e^{-lambda_e C - 1}),
/// and the returned integer count is whichever of max(1, floor(n*)),
/// ceil(n*) gives the smaller expected makespan (ties go to the smaller
/// count: fewer checkpoints, less storage).  The result does not depend on
/// mu_d.  Degenerate inputs (C = 0, where n* diverges, or lambda_e*W below
/// double resolution) return n_opt = 1 with the degenerate flag set.  When
/// workload.chunk_count is set it is used verbatim instead of optimizing,
/// with the analytics fields still filled in for reference.
ChunkingSolution optimal_chunks(const WorkloadSpec& workload, const PlatformParams& p);

/// Expected makespan of total_work forced into n equal chunks.
double makespan_for_chunks(double total_work, std::int64_t n, const PlatformParams& p);

/// First-order checkpoint period (Young's formula): T = sqrt(2 C mu_e) + C,
/// where the period covers work plus checkpoint.  Independent of mu_d, D, R.
double period_young(const PlatformParams& p);

} // namespace sdcplan
