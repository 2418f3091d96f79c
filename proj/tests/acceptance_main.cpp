// Acceptance gate: seven end-to-end criteria covering the closed-form
// models, the pattern selector, and model/simulator agreement.  One
// [PASS]/[FAIL] line per criterion with the sub-checks indented under it;
// exit status is nonzero when any criterion fails.  The tolerances and
// windows are pinned here on purpose: loosening them is a behavior change,
// not a test fix.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sdcplan/exact_model.hpp"
#include "sdcplan/firstorder.hpp"
#include "sdcplan/lambert.hpp"
#include "sdcplan/model.hpp"
#include "sdcplan/patterns.hpp"
#include "sdcplan/risk.hpp"
#include "sdcplan/simulator.hpp"

using namespace sdcplan;

namespace {

struct Criterion {
    bool passed = true;
    std::vector<std::string> details;

    void expect(bool ok, const std::string& what) {
        passed = passed && ok;
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(uniform_in(rng, std::log(lo), std::log(hi)));
}

std::int64_t int_in(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// The two reference platforms: 10^5 components at a 100-year MTBF
// (mu_e = 31536 s), mean detection latency 1051.2 s, 10-day runs.
PlatformParams exa_platform(double checkpoint_cost) {
    PlatformParams p;
    p.checkpoint_cost = checkpoint_cost;
    p.recovery_cost = checkpoint_cost;
    p.error_rate = 1.0 / 31536.0;
    p.detection_rate = 1.0 / 1051.2;
    return p;
}

// The smaller verification-capable fleet (mu_e = 3153.6 s) the pattern
// studies use.
PlatformParams fleet_platform(double checkpoint_cost, double verification_cost) {
    PlatformParams p;
    p.checkpoint_cost = checkpoint_cost;
    p.recovery_cost = checkpoint_cost;
    p.verification_cost = verification_cost;
    p.error_rate = 1.0 / 3153.6;
    return p;
}

SimConfig make_config(const PlatformParams& p, double total_work,
                      std::int64_t trials, std::uint64_t seed) {
    SimConfig config;
    config.workload.total_work = total_work;
    config.params = p;
    config.error_law = DistributionSpec::exponential(
        DistributionSpec::Role::ErrorArrival, p.error_rate);
    if (p.detection_rate) {
        config.detection_law = DistributionSpec::exponential(
            DistributionSpec::Role::DetectionLatency, *p.detection_rate);
    }
    config.trials = trials;
    config.seed = seed;
    config.keep_trials = false;
    return config;
}

// --------------------------------------------------------------- criterion 1

// Heavy-checkpoint baseline (C = R = 600 s): the first-order optimum sits
// near 100 min, wastes roughly a quarter of the machine, and carries a few
// 1e-4 of run-loss risk with three checkpoints kept; stretching the period
// to 8000 s buys the 1e-4 risk target for about one waste point.
void criterion_heavy_baseline(Criterion& c) {
    const PlatformParams p = exa_platform(600.0);
    WorkloadSpec work;
    work.total_work = 864000.0;  // 10 days
    const BoundedStoragePolicy policy{3, 1e-4};

    const double t_opt = period_firstorder(p);
    c.expect(t_opt >= 95.0 * 60.0 && t_opt <= 105.0 * 60.0,
             "first-order optimum = " + num(t_opt / 60.0) + " min, window [95, 105]");

    const double waste_opt = waste_general(t_opt, p).breakdown.waste_total;
    c.expect(waste_opt >= 0.22 && waste_opt <= 0.25,
             "waste at the optimum = " + num(waste_opt) + ", window [0.22, 0.25]");

    const double risk_opt = risk_report(t_opt, policy, work, p).p_risk;
    c.expect(risk_opt >= 3.0e-4 && risk_opt <= 4.6e-4,
             "p_risk at the optimum = " + num(risk_opt) + ", window [3.0e-4, 4.6e-4]");

    const double risk_8000 = risk_report(8000.0, policy, work, p).p_risk;
    c.expect(risk_8000 <= 1e-4,
             "p_risk at T = 8000 s = " + num(risk_8000) + " <= 1e-4");

    const double t_min = solve_t_min(policy, work, p);
    c.expect(t_min <= 8000.0,
             "smallest period meeting 1e-4 = " + num(t_min) + " s <= 8000 s");

    const double waste_8000 = waste_general(8000.0, p).breakdown.waste_total;
    c.expect(waste_8000 - waste_opt <= 0.012,
             "waste cost of stretching to 8000 s = " + num(waste_8000 - waste_opt) +
                 " <= 0.012");
}

// --------------------------------------------------------------- criterion 2

// Light-checkpoint baseline (C = R = 60 s): the waste optimum drops under
// 35 min but becomes genuinely dangerous (roughly even odds of losing a
// 10-day run), and meeting the 1e-4 risk target forces the period back up
// to ~110 min at ~15% waste.
void criterion_light_baseline(Criterion& c) {
    const PlatformParams p = exa_platform(60.0);
    WorkloadSpec work;
    work.total_work = 864000.0;
    const BoundedStoragePolicy policy{3, 1e-4};

    const double t_opt = period_firstorder(p);
    c.expect(t_opt < 35.0 * 60.0,
             "first-order optimum = " + num(t_opt / 60.0) + " min < 35 min");

    const double waste_opt = waste_general(t_opt, p).breakdown.waste_total;
    c.expect(waste_opt >= 0.09 && waste_opt <= 0.105,
             "waste at the optimum = " + num(waste_opt) + ", window [0.09, 0.105]");

    const double risk_opt = risk_report(t_opt, policy, work, p).p_risk;
    c.expect(risk_opt >= 0.4 && risk_opt <= 0.6,
             "p_risk at the optimum = " + num(risk_opt) + ", window [0.4, 0.6]");

    const double t_min = solve_t_min(policy, work, p);
    c.expect(t_min >= 6000.0 && t_min <= 7300.0,
             "smallest period meeting 1e-4 = " + num(t_min) + " s, window [6000, 7300]");

    const double waste_safe = waste_general(t_min, p).breakdown.waste_total;
    c.expect(waste_safe >= 0.14 && waste_safe <= 0.16,
             "waste at that period = " + num(waste_safe) + ", window [0.14, 0.16]");
}

// --------------------------------------------------------------- criterion 3

// Pattern selection on the verification-capable fleet: cheap verification
// favors several verifications per checkpoint, costly verification pushes
// the split down to one or two, and every selected pattern keeps the
// machine better than one-third useful.
void criterion_pattern_selection(Criterion& c) {
    const PatternOptimum cheap_verif =
        optimize_pattern(PatternMode::VerificationHeavy, fleet_platform(60.0, 2.0), 20);
    c.expect(cheap_verif.k_opt > 1,
             "cheap verification (V = 2, C = 60): k = " +
                 std::to_string(cheap_verif.k_opt) + " > 1");

    const PatternOptimum costly_verif =
        optimize_pattern(PatternMode::CheckpointHeavy, fleet_platform(6.0, 100.0), 20);
    c.expect(costly_verif.k_opt >= 2 && costly_verif.k_opt <= 4,
             "costly verification, fast checkpoints (V = 100, C = 6): k = " +
                 std::to_string(costly_verif.k_opt) + ", window {2, 3, 4}");

    const PatternOptimum costly_both =
        optimize_pattern(PatternMode::CheckpointHeavy, fleet_platform(60.0, 300.0), 20);
    c.expect(costly_both.k_opt <= 2,
             "costly verification and checkpoints (V = 300, C = 60): k = " +
                 std::to_string(costly_both.k_opt) + " <= 2");

    const PatternOptimum slow_fleet =
        optimize_pattern(PatternMode::VerificationHeavy, fleet_platform(600.0, 20.0), 20);

    const PatternOptimum* optima[] = {&cheap_verif, &costly_verif, &costly_both,
                                      &slow_fleet};
    double worst = 0.0;
    for (const PatternOptimum* opt : optima) worst = std::max(worst, opt->waste);
    c.expect(worst < 0.66,
             "worst optimized waste across the four configurations = " + num(worst) +
                 " < 0.66");
}

// --------------------------------------------------------------- criterion 4

// Single-chunk makespan: 20 random platforms, rare errors (MTBF at least
// 50x the chunk span), one chunk of work.  The simulated mean makespan at
// 1e6 trials must sit within 3 standard errors of the closed-form
// expectation.
void criterion_chunk_agreement(Criterion& c) {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 20; ++i) {
        PlatformParams p;
        const double period = uniform_in(rng, 300.0, 5000.0);
        p.checkpoint_cost = uniform_in(rng, 0.01, 0.3) * period;
        p.recovery_cost = uniform_in(rng, 0.02, 0.5) * period;
        p.downtime = uniform_in(rng, 0.0, 0.1) * period;
        const double mu_d = uniform_in(rng, 0.05, 2.0) * period;
        p.detection_rate = 1.0 / mu_d;
        const double mu_e =
            uniform_in(rng, 50.0, 200.0) * (period + mu_d + p.downtime + p.recovery_cost);
        p.error_rate = 1.0 / mu_e;

        const double work = period - p.checkpoint_cost;
        SimConfig config = make_config(p, work, 1000000, 900 + i);
        config.model = BoundedStorageSim{period, 2};

        const SimResult sim = simulate(config);
        const double model = expected_makespan_chunk(work, p);
        const double sigma =
            sim.makespan_stddev / std::sqrt(static_cast<double>(sim.trials));
        const double z = std::abs(sim.mean_makespan - model) / sigma;
        c.expect(z <= 3.0, "draw " + std::to_string(i) + ": sim " +
                               num(sim.mean_makespan) + " s vs model " + num(model) +
                               " s, z = " + num(z));
    }
}

// --------------------------------------------------------------- criterion 5

// Steady-state waste agreement: ten bounded-storage runs against the
// first-order waste model (risk kept negligible so nothing is lost to
// irrecoverable restarts) and ten pattern runs against the pattern waste
// model, each within max(floor, 3 standard errors).
void criterion_waste_agreement(Criterion& c) {
    std::mt19937_64 rng(51);

    for (int i = 0; i < 10; ++i) {
        // costs well under the MTBF so the first-order truncation stays far
        // below the 0.005 tolerance floor, and detection fast enough that
        // k in [3, 6] makes irrecoverable loss essentially impossible
        PlatformParams p;
        WorkloadSpec work;
        double period = 0.0;
        std::int64_t k = 0;
        for (int guard = 0; guard < 200; ++guard) {
            const double mu_e = log_uniform_in(rng, 5e4, 5e5);
            p.error_rate = 1.0 / mu_e;
            p.checkpoint_cost = uniform_in(rng, 2e-5, 2e-4) * mu_e;
            p.recovery_cost = uniform_in(rng, 1.0, 3.0) * p.checkpoint_cost;
            p.downtime = uniform_in(rng, 0.0, 5e-4) * mu_e;
            p.detection_rate = 1.0 / (uniform_in(rng, 5e-4, 5e-3) * mu_e);
            period = period_firstorder(p) * uniform_in(rng, 0.8, 1.4);
            k = int_in(rng, 3, 6);
            work.total_work = static_cast<double>(int_in(rng, 20, 100)) *
                              (period - p.checkpoint_cost);
            if (risk_report(period, {k, 0.0}, work, p).p_risk < 1e-6) break;
        }

        SimConfig config = make_config(p, work.total_work, 40000, 1500 + i);
        config.model = BoundedStorageSim{period, k};

        const SimResult sim = simulate(config);
        const double model = waste_general(period, p).breakdown.waste_total;
        const double tol = std::max(0.005, 3.0 * sim.waste_stderr);
        const double diff = std::abs(sim.waste_mean - model);
        c.expect(diff <= tol, "bounded draw " + std::to_string(i) + ": sim waste " +
                                  num(sim.waste_mean) + " vs model " + num(model) +
                                  ", |diff| = " + num(diff) + " <= " + num(tol));
    }

    for (int i = 0; i < 10; ++i) {
        // patterns short against the MTBF (S <= mu_e / 20); alternate modes
        PlatformParams p;
        const double mu_e = log_uniform_in(rng, 2e3, 5e4);
        p.error_rate = 1.0 / mu_e;
        const bool checkpoint_heavy = (i % 2 == 0);
        const double repeated = uniform_in(rng, 2e-4, 1e-3) * mu_e;
        const double single = uniform_in(rng, 5e-4, 3e-3) * mu_e;
        p.checkpoint_cost = checkpoint_heavy ? repeated : single;
        p.verification_cost = checkpoint_heavy ? single : repeated;
        p.recovery_cost = uniform_in(rng, 0.5, 2.0) * p.checkpoint_cost;
        p.downtime = uniform_in(rng, 0.0, 5e-4) * mu_e;

        PatternSpec spec;
        spec.mode = checkpoint_heavy ? PatternMode::CheckpointHeavy
                                     : PatternMode::VerificationHeavy;
        spec.k = int_in(rng, 2, 6);
        const double floor = spec.fixed_cost(p);
        spec.period = uniform_in(rng, std::max(3.0 * floor, 0.02 * mu_e), 0.05 * mu_e);

        const double patterns = static_cast<double>(int_in(rng, 5, 20));
        const double total_work =
            patterns * static_cast<double>(spec.k) * spec.segment_work(p);

        SimConfig config = make_config(p, total_work, 40000, 1600 + i);
        config.model = PatternSim{spec};

        const SimResult sim = simulate(config);
        // DirectAverage is the per-error expectation the simulator measures
        const double model = pattern_waste(spec, p, Kv1cForm::DirectAverage);
        const double tol = std::max(0.01, 3.0 * sim.waste_stderr);
        const double diff = std::abs(sim.waste_mean - model);
        c.expect(diff <= tol,
                 std::string(checkpoint_heavy ? "checkpoint" : "verification") +
                     "-heavy draw " + std::to_string(i) + ": sim waste " +
                     num(sim.waste_mean) + " vs model " + num(model) + ", |diff| = " +
                     num(diff) + " <= " + num(tol));
    }
}

// --------------------------------------------------------------- criterion 6

// Irrecoverable-failure frequency: on ten risky bounded-storage setups the
// per-attempt frequency of irrecoverable runs must not exceed the
// analytical p_risk by more than 3 binomial standard deviations.  (The
// analysis upper-bounds the latency tail, so the simulator normally lands
// below it.)
void criterion_irrecoverable_bound(Criterion& c) {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 10; ++i) {
        const std::int64_t k = 1 + (i % 3);
        PlatformParams p;
        WorkloadSpec work;
        double period = 0.0;
        double p_risk = 0.0;
        for (int guard = 0; guard < 500; ++guard) {
            period = uniform_in(rng, 500.0, 5000.0);
            p.checkpoint_cost = uniform_in(rng, 0.02, 0.1) * period;
            p.recovery_cost = uniform_in(rng, 0.02, 0.3) * period;
            p.downtime = uniform_in(rng, 0.0, 0.05) * period;
            const double mu_e = (k == 1 ? uniform_in(rng, 30.0, 100.0)
                                        : uniform_in(rng, 5.0, 50.0)) *
                                period;
            p.error_rate = 1.0 / mu_e;
            const double mu_d =
                (k == 1 ? uniform_in(rng, 0.1, 2.0)
                        : uniform_in(rng, 0.3, 3.0) * static_cast<double>(k - 1)) *
                period;
            p.detection_rate = 1.0 / mu_d;
            const std::int64_t m = k == 1 ? int_in(rng, 20, 40) : int_in(rng, 20, 100);
            work.total_work =
                static_cast<double>(m) * (period - p.checkpoint_cost);
            p_risk = risk_report(period, {k, 0.0}, work, p).p_risk;
            if (p_risk >= 1e-4 && p_risk <= 0.5) break;
        }

        SimConfig config = make_config(p, work.total_work, 30000, 2500 + i);
        config.model = BoundedStorageSim{period, k};

        const SimResult sim = simulate(config);
        const double attempts = static_cast<double>(sim.attempts_total);
        const double freq =
            static_cast<double>(sim.irrecoverable_count) / attempts;
        const double sigma = std::sqrt(p_risk * (1.0 - p_risk) / attempts);
        c.expect(freq <= p_risk + 3.0 * sigma,
                 "draw " + std::to_string(i) + " (k = " + std::to_string(k) +
                     "): frequency " + num(freq) + " vs p_risk " + num(p_risk) +
                     " + 3 sigma = " + num(p_risk + 3.0 * sigma));
    }
}

// --------------------------------------------------------------- criterion 7

// Internal consistency: the numerical pieces agree with their independent
// definitions, and the simulator is bitwise deterministic regardless of
// how many threads run it.
void criterion_consistency(Criterion& c) {
    {
        double worst = 0.0;
        for (int i = 0; i <= 10000; ++i) {
            const double w = -1.0 + 21.0 * static_cast<double>(i) / 10000.0;
            const double back = lambert_w0(w * std::exp(w)).value;
            worst = std::max(worst,
                             std::abs(back - w) / std::max(1.0, std::abs(w)));
        }
        c.expect(worst <= 1e-10,
                 "lambert round-trip over 10001 points in [-1, 20]: worst relative "
                 "error " + num(worst) + " <= 1e-10");
    }
    {
        std::mt19937_64 rng(71);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            PlatformParams p;
            p.error_rate = 1.0 / log_uniform_in(rng, 1e3, 1e6);
            p.checkpoint_cost = log_uniform_in(rng, 0.1, 50.0);
            p.recovery_cost = log_uniform_in(rng, 0.1, 50.0);
            p.verification_cost = log_uniform_in(rng, 0.1, 50.0);
            p.downtime = uniform_in(rng, 0.0, 20.0);
            PatternSpec spec;
            spec.mode = PatternMode::CheckpointHeavy;
            spec.k = int_in(rng, 2, 20);
            spec.period = spec.fixed_cost(p) + log_uniform_in(rng, 1.0, 1e4);
            const double averaged = waste_fail_kc1v(spec, p, true);
            const double closed = waste_fail_kc1v(spec, p, false);
            worst = std::max(worst, std::abs(averaged - closed) / averaged);
        }
        c.expect(worst <= 1e-10,
                 "rollback-walk average vs closed form, 100 draws at k <= 20: worst "
                 "relative gap " + num(worst) + " <= 1e-10");
    }
    {
        std::mt19937_64 rng(72);
        int mismatches = 0;
        for (int i = 0; i < 200; ++i) {
            PlatformParams p;
            p.checkpoint_cost = log_uniform_in(rng, 1.0, 1e4);
            p.recovery_cost = uniform_in(rng, 0.0, p.checkpoint_cost);
            p.error_rate = 1.0 / log_uniform_in(rng, 1e3, 1e6);
            p.detection_rate = 50.0 * p.error_rate;
            WorkloadSpec work;
            work.total_work = log_uniform_in(rng, 1e3, 1e7);
            const ChunkingSolution plan = optimal_chunks(work, p);
            const std::int64_t limit = std::max<std::int64_t>(
                10, 2 * static_cast<std::int64_t>(std::ceil(plan.n_star_real)) + 2);
            std::int64_t best_n = 1;
            double best = makespan_for_chunks(work.total_work, 1, p);
            for (std::int64_t n = 2; n <= limit; ++n) {
                const double m = makespan_for_chunks(work.total_work, n, p);
                if (m < best) {
                    best = m;
                    best_n = n;
                }
            }
            if (best_n != plan.n_opt) ++mismatches;
        }
        c.expect(mismatches == 0,
                 "integer chunk count vs exhaustive scan, 200 draws: " +
                     std::to_string(mismatches) + " mismatches");
    }
    {
        std::mt19937_64 rng(73);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            PlatformParams p;
            const double mu_e = log_uniform_in(rng, 1e4, 1e7);
            p.error_rate = 1.0 / mu_e;
            p.checkpoint_cost = log_uniform_in(rng, 1.0, 1e3);
            p.recovery_cost = uniform_in(rng, 0.0, mu_e / 50.0);
            p.downtime = uniform_in(rng, 0.0, mu_e / 100.0);
            p.detection_rate = 50.0 / mu_e;
            const double period =
                uniform_in(rng, p.checkpoint_cost * 1.5 + 1.0, mu_e / 5.0);
            const FirstOrderReport rep = waste_general(period, p);
            const double ff = p.checkpoint_cost / period;
            const double lost =
                period / 2.0 + p.detection_mean() + p.downtime + p.recovery_cost;
            const double fail = lost / mu_e;
            worst = std::max(worst, std::abs(rep.breakdown.waste_ff - ff));
            worst = std::max(worst, std::abs(rep.breakdown.waste_fail - fail));
            worst = std::max(
                worst, std::abs(rep.breakdown.waste_total -
                                (1.0 - (1.0 - ff) * (1.0 - fail))));
        }
        c.expect(worst <= 1e-12,
                 "first-order waste recomposition, 100 draws: worst absolute gap " +
                     num(worst) + " <= 1e-12");
    }
    {
        std::mt19937_64 rng(74);
        int mismatches = 0;
        for (int i = 0; i < 50; ++i) {
            PlatformParams p;
            const double mu_e = log_uniform_in(rng, 1e3, 1e6);
            p.error_rate = 1.0 / mu_e;
            p.checkpoint_cost = log_uniform_in(rng, 1.0, 1e3);
            p.recovery_cost = uniform_in(rng, 0.0, p.checkpoint_cost);
            WorkloadSpec work;
            work.total_work = log_uniform_in(rng, 1e4, 1e7);
            std::int64_t chosen[3] = {0, 0, 0};
            const double factors[3] = {0.1, 1.0, 10.0};
            for (int j = 0; j < 3; ++j) {
                p.detection_rate = 1.0 / (factors[j] * mu_e);
                chosen[j] = optimal_chunks(work, p).n_opt;
            }
            if (chosen[0] != chosen[1] || chosen[1] != chosen[2]) ++mismatches;
        }
        c.expect(mismatches == 0,
                 "chunk count invariant to detection latency, 50 draws: " +
                     std::to_string(mismatches) + " mismatches");
    }
    {
        PlatformParams p;
        p.checkpoint_cost = 60.0;
        p.recovery_cost = 60.0;
        p.downtime = 10.0;
        p.error_rate = 1.0 / 3000.0;
        p.detection_rate = 1.0 / 200.0;
        SimConfig config = make_config(p, 5400.0, 20000, 7777);
        config.model = BoundedStorageSim{600.0, 3};
        config.keep_trials = true;

        const SimResult reference = simulate_reference(config);
        auto same = [&](const SimResult& r) {
            if (r.mean_makespan != reference.mean_makespan) return false;
            if (r.makespan_stddev != reference.makespan_stddev) return false;
            if (r.waste_mean != reference.waste_mean) return false;
            if (r.waste_stderr != reference.waste_stderr) return false;
            if (r.irrecoverable_count != reference.irrecoverable_count) return false;
            if (r.attempts_total != reference.attempts_total) return false;
            if (r.records.size() != reference.records.size()) return false;
            for (std::size_t t = 0; t < r.records.size(); ++t) {
                if (r.records[t].makespan != reference.records[t].makespan) return false;
            }
            return true;
        };

        bool deterministic = same(simulate(config));
#ifdef _OPENMP
        const int previous = omp_get_max_threads();
        for (int threads : {1, 2, 4}) {
            omp_set_num_threads(threads);
            deterministic = deterministic && same(simulate(config));
        }
        omp_set_num_threads(previous);
#endif
        c.expect(deterministic,
                 "parallel simulation bitwise equal to the serial reference at "
                 "1, 2 and 4 threads");
    }
}

} // namespace

int main() {
    struct Spec {
        const char* name;
        double budget_s;
        void (*run)(Criterion&);
    };
    const Spec specs[] = {
        {"heavy-checkpoint baseline operating point", 1.0, criterion_heavy_baseline},
        {"light-checkpoint baseline operating point", 1.0, criterion_light_baseline},
        {"pattern selection on the reference fleet", 1.0, criterion_pattern_selection},
        {"single-chunk makespan: simulator vs closed form", 300.0,
         criterion_chunk_agreement},
        {"steady-state waste: simulator vs models", 600.0, criterion_waste_agreement},
        {"irrecoverable frequency vs analytical risk", 600.0,
         criterion_irrecoverable_bound},
        {"numerical consistency and determinism", 120.0, criterion_consistency},
    };

    bool all_passed = true;
    int index = 0;
    for (const Spec& spec : specs) {
        ++index;
        Criterion criterion;
        const auto start = std::chrono::steady_clock::now();
        try {
            spec.run(criterion);
        } catch (const std::exception& e) {
            criterion.expect(false, std::string("unexpected exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        criterion.expect(elapsed < spec.budget_s,
                         "completed in " + num(elapsed) + " s (budget " +
                             num(spec.budget_s) + " s)");

        std::printf("[%s] criterion %d: %s\n", criterion.passed ? "PASS" : "FAIL",
                    index, spec.name);
        for (const std::string& line : criterion.details) {
            std::printf("       %s\n", line.c_str());
        }
        std::fflush(stdout);
        all_passed = all_passed && criterion.passed;
    }

    std::printf("%s\n", all_passed ? "acceptance: all criteria passed"
                                   : "acceptance: FAILURES above");
    return all_passed ? 0 : 1;
}
