#include "sdcplan/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "sdcplan/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sdcplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct Sampler {
    std::mt19937_64 engine;

    explicit Sampler(std::mt19937_64 eng) : engine(eng) {}

    // 53-bit uniform in [0, 1); quantile() maps it through the law.
    double uniform() {
        return static_cast<double>(engine() >> 11) * 0x1.0p-53;
    }

    double draw(const DistributionSpec& law) { return law.quantile(uniform()); }
};

struct TrialOutcome {
    TrialRecord record;
    bool runaway = false;
};

// ---------------------------------------------------------------------
// Bounded-storage engine
// ---------------------------------------------------------------------

struct BoundedEngine {
    const BoundedStorageSim& model;
    const PlatformParams& params;
    const DistributionSpec& error_law;
    const DistributionSpec& detection_law;
    double total_work;
    double max_sim_time;

    std::int64_t chunk_count() const {
        const double work_per_period = model.period - params.checkpoint_cost;
        return static_cast<std::int64_t>(std::ceil(total_work / work_per_period));
    }

    double chunk_work(std::int64_t index, std::int64_t n) const {
        const double work_per_period = model.period - params.checkpoint_cost;
        if (index + 1 < n) return work_per_period;
        // Last chunk absorbs the remainder so committed work sums to the
        // full workload.
        return total_work - static_cast<double>(n - 1) * work_per_period;
    }

    TrialOutcome run(Sampler& rng) const {
        struct Entry {
            double completion;       // wall time the checkpoint finished
            std::int64_t next_chunk; // first chunk still to execute after restore
        };

        const double C = params.checkpoint_cost;
        const double R = params.recovery_cost;
        const double D = params.downtime;
        const std::int64_t n = chunk_count();
        const std::size_t slots =
            static_cast<std::size_t>(model.checkpoints_kept);

        double t = 0.0;      // wall clock
        double risky = 0.0;  // accumulated error-prone time
        double next_error = rng.draw(error_law);

        // Undetected errors since the last rollback.  Every rollback
        // discards all of them, so two scalars suffice: the occurrence
        // time of the first one (the rollback target selector) and the
        // earliest pending detection.
        std::int64_t latent = 0;
        double earliest_occurrence = kInf;
        double next_detection = kInf;

        // The initial state acts as a permanent-looking checkpoint until
        // real ones evict it; completion -1 sorts before any occurrence.
        std::vector<Entry> ring;
        ring.reserve(slots + 1);
        ring.push_back(Entry{-1.0, 0});

        std::int64_t next_chunk = 0;
        std::int32_t attempts = 1;
        bool irrecoverable = false;

        auto on_error = [&] {
            const double latency = rng.draw(detection_law);
            if (latent == 0) earliest_occurrence = t;
            next_detection = std::min(next_detection, t + latency);
            ++latent;
            next_error += rng.draw(error_law);
        };

        // Advance the clocks through an error-prone phase.  Returns true
        // when the phase completes, false when a detection fires first
        // (wall clock left at the detection instant).
        auto advance_risky = [&](double duration) -> bool {
            double remaining = duration;
            for (;;) {
                const double to_detection = next_detection - t;
                const double to_error = next_error - risky;
                if (to_detection <= remaining && to_detection <= to_error) {
                    t += to_detection;
                    risky += to_detection;
                    return false;
                }
                if (to_error <= remaining) {
                    t += to_error;
                    risky += to_error;
                    remaining -= to_error;
                    on_error();
                    continue;
                }
                t += remaining;
                risky += remaining;
                return true;
            }
        };

        // Handle a fired detection: pick the restore target, pay downtime
        // and an error-prone recovery.  Errors during recovery detected
        // mid-recovery restart it against the same target.
        auto rollback = [&] {
            for (;;) {
                const double occurrence = earliest_occurrence;
                latent = 0;
                earliest_occurrence = kInf;
                next_detection = kInf;

                std::size_t keep = ring.size();
                while (keep > 0 && ring[keep - 1].completion >= occurrence) --keep;
                if (keep == 0) {
                    // Every stored checkpoint postdates the earliest
                    // undetected error: restart from scratch.
                    ++attempts;
                    irrecoverable = true;
                    ring.assign(1, Entry{-1.0, 0});
                    next_chunk = 0;
                } else {
                    ring.resize(keep);
                    next_chunk = ring[keep - 1].next_chunk;
                }

                t += D;  // downtime is error-free
                if (advance_risky(R)) return;
            }
        };

        for (;;) {
            if (t > max_sim_time) {
                return TrialOutcome{TrialRecord{t, attempts, irrecoverable}, true};
            }
            if (next_chunk == n) {
                if (latent == 0) break;  // all work committed and certified
                // Wait out the pending detections; the platform stays
                // error-prone while the result sits unverified.
                advance_risky(kInf);
                rollback();
                continue;
            }
            if (!advance_risky(chunk_work(next_chunk, n))) {
                rollback();
                continue;
            }
            if (!advance_risky(C)) {
                rollback();
                continue;
            }
            if (ring.size() == slots) ring.erase(ring.begin());
            ring.push_back(Entry{t, next_chunk + 1});
            ++next_chunk;
        }

        return TrialOutcome{TrialRecord{t, attempts, irrecoverable}, false};
    }
};

// ---------------------------------------------------------------------
// Pattern engine
// ---------------------------------------------------------------------

struct PatternEngine {
    const PatternSpec& spec;
    const PlatformParams& params;
    const DistributionSpec& error_law;
    double total_work;
    double max_sim_time;

    std::int64_t pattern_count() const {
        const double per_pattern =
            static_cast<double>(spec.k) * spec.segment_work(params);
        return std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::llround(total_work / per_pattern)));
    }

    TrialOutcome run(Sampler& rng) const {
        const double w = spec.segment_work(params);
        const double C = params.checkpoint_cost;
        const double R = params.recovery_cost;
        const double D = params.downtime;
        const double V = params.verification();
        const std::int64_t k = spec.k;
        const std::int64_t patterns = pattern_count();

        double t = 0.0;
        double risky = 0.0;
        double next_error = rng.draw(error_law);

        // Whether the live state is free of (undetected) corruption, and
        // the same flag for each intermediate checkpoint image.  The
        // anchor (previous pattern's final checkpoint) is clean by
        // construction and needs no flag.
        bool live_clean = true;
        std::vector<char> images(k > 1 ? static_cast<std::size_t>(k - 1) : 0, 0);

        // No detection latency here: errors corrupt silently and only
        // verifications observe the flag.
        auto advance = [&](double duration) {
            double remaining = duration;
            for (;;) {
                const double to_error = next_error - risky;
                if (to_error <= remaining) {
                    t += to_error;
                    risky += to_error;
                    remaining -= to_error;
                    live_clean = false;
                    next_error += rng.draw(error_law);
                    continue;
                }
                t += remaining;
                risky += remaining;
                return;
            }
        };

        std::int64_t done = 0;
        std::int64_t restart_segment = 1;
        bool runaway = false;

        while (done < patterns) {
            if (t > max_sim_time) {
                runaway = true;
                break;
            }
            if (spec.mode == PatternMode::CheckpointHeavy) {
                for (std::int64_t s = restart_segment; s <= k; ++s) {
                    advance(w);
                    if (s < k) {
                        // The image captures the state as of the write's
                        // start; errors during the write corrupt only the
                        // live state.
                        images[static_cast<std::size_t>(s - 1)] = live_clean ? 1 : 0;
                        advance(C);
                    }
                }
                advance(V);
                if (live_clean) {
                    advance(C);  // final checkpoint; an error here leaks
                                 // into the next pattern, not the image
                    ++done;
                    restart_segment = 1;
                    continue;
                }
                // Failed end-of-pattern verification: walk the stored
                // checkpoints newest-first, re-verifying each restore.
                t += D;
                std::int64_t found = 0;
                for (std::int64_t j = k - 1; j >= 1; --j) {
                    live_clean = images[static_cast<std::size_t>(j - 1)] != 0;
                    advance(R);  // errors during the restore corrupt it
                    advance(V);
                    if (live_clean) {
                        found = j;
                        break;
                    }
                }
                if (found == 0) {
                    // Anchor restore: clean by construction, so no
                    // verification follows (an error during this restore
                    // goes unnoticed until the next verification).
                    live_clean = true;
                    advance(R);
                    restart_segment = 1;
                } else {
                    restart_segment = found + 1;
                }
            } else {
                bool failed = false;
                for (std::int64_t s = restart_segment; s <= k; ++s) {
                    advance(w);
                    advance(V);
                    if (!live_clean) {
                        t += D;
                        live_clean = true;  // anchor image is clean
                        advance(R);
                        failed = true;
                        break;
                    }
                }
                if (failed) {
                    restart_segment = 1;
                    continue;
                }
                advance(C);  // sole checkpoint; errors here leak forward
                ++done;
                restart_segment = 1;
            }
        }

        return TrialOutcome{TrialRecord{t, 1, false}, runaway};
    }
};

// ---------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------

struct Validated {
    double effective_work;
    double failure_free;
    double max_sim_time;
};

Validated validate_config(const SimConfig& config) {
    if (config.trials < 1) {
        throw ParameterError("trials must be >= 1");
    }
    if (config.error_law.role != DistributionSpec::Role::ErrorArrival) {
        throw ParameterError("error_law must carry the error-arrival role");
    }

    double effective_work = 0.0;
    double failure_free = 0.0;
    if (const auto* bounded = std::get_if<BoundedStorageSim>(&config.model)) {
        validated(config.params, ModelNeeds{});
        if (config.detection_law.role != DistributionSpec::Role::DetectionLatency) {
            throw ParameterError("detection_law must carry the detection-latency role");
        }
        if (bounded->checkpoints_kept < 1) {
            throw ParameterError("checkpoints_kept must be >= 1");
        }
        if (!(bounded->period > config.params.checkpoint_cost)) {
            throw ParameterError("period must exceed the checkpoint cost");
        }
        if (!(config.workload.total_work > 0.0)) {
            throw ParameterError("total_work must be > 0");
        }
        const double work_per_period =
            bounded->period - config.params.checkpoint_cost;
        const auto chunks = static_cast<std::int64_t>(
            std::ceil(config.workload.total_work / work_per_period));
        effective_work = config.workload.total_work;
        failure_free = config.workload.total_work +
                       static_cast<double>(chunks) * config.params.checkpoint_cost;
    } else {
        const auto& pattern = std::get<PatternSim>(config.model).pattern;
        ModelNeeds needs;
        needs.verification = true;
        validated(config.params, needs);
        if (pattern.k < 1) {
            throw ParameterError("pattern k must be >= 1");
        }
        const double w = pattern.segment_work(config.params);
        if (!(w > 0.0)) {
            throw ParameterError("pattern period leaves no work per segment");
        }
        if (!(config.workload.total_work > 0.0)) {
            throw ParameterError("total_work must be > 0");
        }
        const double per_pattern = static_cast<double>(pattern.k) * w;
        const auto patterns = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(
                   std::llround(config.workload.total_work / per_pattern)));
        effective_work = static_cast<double>(patterns) * per_pattern;
        failure_free = static_cast<double>(patterns) * pattern.period;
    }

    double cap = config.max_sim_time;
    if (cap == 0.0) {
        cap = 1e4 * failure_free;
    } else if (cap < 10.0 * failure_free) {
        throw ParameterError(
            "max_sim_time must be at least 10x the failure-free makespan (" +
            std::to_string(failure_free) + " s)");
    }
    return Validated{effective_work, failure_free, cap};
}

TrialOutcome run_trial(const SimConfig& config, const Validated& bounds,
                       std::int64_t trial) {
    Sampler rng(rng_stream(config.seed, static_cast<std::uint64_t>(trial)));
    if (const auto* bounded = std::get_if<BoundedStorageSim>(&config.model)) {
        BoundedEngine engine{*bounded,          config.params,
                             config.error_law,  config.detection_law,
                             config.workload.total_work, bounds.max_sim_time};
        return engine.run(rng);
    }
    const auto& pattern = std::get<PatternSim>(config.model).pattern;
    PatternEngine engine{pattern, config.params, config.error_law,
                         config.workload.total_work, bounds.max_sim_time};
    return engine.run(rng);
}

SimResult run_trials(const SimConfig& config, bool parallel) {
    const Validated bounds = validate_config(config);
    const std::int64_t trials = config.trials;

    std::vector<TrialRecord> records(static_cast<std::size_t>(trials));
    std::vector<char> runaway(static_cast<std::size_t>(trials), 0);

#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < trials; ++i) {
            TrialOutcome outcome = run_trial(config, bounds, i);
            records[static_cast<std::size_t>(i)] = outcome.record;
            runaway[static_cast<std::size_t>(i)] = outcome.runaway ? 1 : 0;
        }
    } else
#else
    (void)parallel;
#endif
    {
        for (std::int64_t i = 0; i < trials; ++i) {
            TrialOutcome outcome = run_trial(config, bounds, i);
            records[static_cast<std::size_t>(i)] = outcome.record;
            runaway[static_cast<std::size_t>(i)] = outcome.runaway ? 1 : 0;
        }
    }

    for (std::int64_t i = 0; i < trials; ++i) {
        if (runaway[static_cast<std::size_t>(i)]) {
            std::ostringstream msg;
            msg << "trial " << i << " (seed " << config.seed
                << ") exceeded max_sim_time = " << bounds.max_sim_time << " s";
            throw RunawayError(msg.str());
        }
    }

    // Ordered reduction keeps the aggregates bitwise stable across thread
    // counts.
    double sum = 0.0;
    std::int64_t attempts_total = 0;
    for (const auto& rec : records) {
        sum += rec.makespan;
        attempts_total += rec.attempts;
    }
    const double mean = sum / static_cast<double>(trials);
    double sq = 0.0;
    for (const auto& rec : records) {
        const double d = rec.makespan - mean;
        sq += d * d;
    }
    const double stddev =
        trials > 1 ? std::sqrt(sq / static_cast<double>(trials - 1)) : 0.0;
    const double stderr_mean = stddev / std::sqrt(static_cast<double>(trials));

    SimResult result;
    result.mean_makespan = mean;
    result.makespan_stddev = stddev;
    result.effective_work = bounds.effective_work;
    result.waste_mean = 1.0 - bounds.effective_work / mean;
    // waste = 1 - W/mean, so d(waste)/d(mean) = W/mean^2.
    result.waste_stderr = bounds.effective_work * stderr_mean / (mean * mean);
    result.attempts_total = attempts_total;
    result.irrecoverable_count = attempts_total - trials;
    result.trials = trials;
    if (config.keep_trials) result.records = std::move(records);
    return result;
}

} // namespace

std::mt19937_64 rng_stream(std::uint64_t seed, std::uint64_t trial_index) {
    // SplitMix64 over the pair gives well-separated, reproducible streams;
    // distinct trials of one run can never collide.
    std::uint64_t state = seed;
    std::uint64_t mixed = splitmix64(state);
    state ^= trial_index * 0xBF58476D1CE4E5B9ull;
    mixed ^= splitmix64(state);
    return std::mt19937_64(mixed);
}

SimResult simulate(const SimConfig& config) { return run_trials(config, true); }

SimResult simulate_reference(const SimConfig& config) {
    return run_trials(config, false);
}

double failure_free_makespan(const SimConfig& config) {
    return validate_config(config).failure_free;
}

} // namespace sdcplan
