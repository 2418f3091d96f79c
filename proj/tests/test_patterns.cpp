#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sdcplan/errors.hpp"
#include "sdcplan/patterns.hpp"

using namespace sdcplan;

namespace {

// All reference curves use a 100k-component fleet with a 10-year component
// MTBF: mu_e = 3153.6s.
PlatformParams fleet(double c, double v) {
    PlatformParams p;
    p.checkpoint_cost = c;
    p.recovery_cost = c;
    p.downtime = 0.0;
    p.verification_cost = v;
    p.error_rate = 1.0 / 3153.6;
    return p;
}

// Replay of the CheckpointHeavy rollback walk, coded from the procedure
// rather than the closed forms: try intermediate checkpoints newest to
// oldest at R + V each; if none is clean, fall back to the pattern-start
// checkpoint at R alone (clean by construction, no verification needed);
// then redo the remaining segments, their interior checkpoints, and the
// end-of-pattern verification.
double replay_tlost(std::int64_t restart, std::int64_t k, double w,
                    const PlatformParams& p) {
    const double r = p.recovery_cost, c = p.checkpoint_cost, v = p.verification();
    double cost = 0.0;
    if (restart == 1 && k > 1) {
        cost += static_cast<double>(k - 1) * (r + v);  // every probe came up dirty
        cost += r;                                     // restore the start checkpoint
    } else {
        cost += static_cast<double>(k - restart + 1) * (r + v);
    }
    const double redo = static_cast<double>(k - restart + 1);
    cost += redo * w + (redo - 1.0) * c + v;
    return cost;
}

} // namespace

TEST_CASE("CheckpointHeavy per-case losses match the walk replay") {
    std::mt19937_64 rng(701);
    for (int draw = 0; draw < 50; ++draw) {
        PlatformParams p = fleet(oracles::log_uniform_in(rng, 1.0, 600.0),
                                 oracles::log_uniform_in(rng, 1.0, 600.0));
        p.downtime = oracles::uniform_in(rng, 0.0, 30.0);
        PatternSpec spec;
        spec.mode = PatternMode::CheckpointHeavy;
        spec.k = oracles::int_in(rng, 1, 12);
        spec.period = spec.fixed_cost(p) * oracles::uniform_in(rng, 1.2, 8.0);
        const double w = spec.segment_work(p);
        for (std::int64_t i = 1; i <= spec.k; ++i) {
            CHECK(tlost_kc1v(i, spec, p) ==
                  doctest::Approx(replay_tlost(i, spec.k, w, p)).epsilon(1e-12));
        }
    }
}

TEST_CASE("a single-segment pattern restarts from its own fresh image") {
    // k = 1: the boundary cases collide and the newest-image convention
    // wins: R + 2V + w, not the exhausted-walk R + V + w.
    const PlatformParams p = fleet(6.0, 100.0);
    PatternSpec spec;
    spec.mode = PatternMode::CheckpointHeavy;
    spec.k = 1;
    spec.period = 700.0;
    const double w = 700.0 - 6.0 - 100.0;
    CHECK(tlost_kc1v(1, spec, p) ==
          doctest::Approx(6.0 + 200.0 + w).epsilon(1e-15));
    CHECK(waste_fail_kc1v(spec, p, true) ==
          doctest::Approx((6.0 + 200.0 + w) / 3153.6).epsilon(1e-14));
    CHECK(waste_fail_kc1v(spec, p, false) ==
          doctest::Approx(waste_fail_kc1v(spec, p, true)).epsilon(1e-14));
    CHECK(waste_fail_kc1v_bsearch(spec, p) ==
          doctest::Approx(waste_fail_kc1v(spec, p, true)).epsilon(1e-14));
}

TEST_CASE("averaged and closed-form CheckpointHeavy waste agree") {
    std::mt19937_64 rng(702);
    for (int draw = 0; draw < 100; ++draw) {
        PlatformParams p = fleet(oracles::log_uniform_in(rng, 1.0, 600.0),
                                 oracles::log_uniform_in(rng, 1.0, 600.0));
        p.downtime = oracles::uniform_in(rng, 0.0, 30.0);
        p.error_rate = 1.0 / oracles::log_uniform_in(rng, 1e3, 1e6);
        PatternSpec spec;
        spec.mode = PatternMode::CheckpointHeavy;
        spec.k = oracles::int_in(rng, 2, 20);
        spec.period = spec.fixed_cost(p) * oracles::uniform_in(rng, 1.1, 10.0);
        CHECK(waste_fail_kc1v(spec, p, true) ==
              doctest::Approx(waste_fail_kc1v(spec, p, false)).epsilon(1e-10));
    }
}

TEST_CASE("binary-search rollback strictly beats the linear walk for k >= 2") {
    const PlatformParams p = fleet(60.0, 300.0);
    for (std::int64_t k = 2; k <= 20; ++k) {
        PatternSpec spec;
        spec.mode = PatternMode::CheckpointHeavy;
        spec.k = k;
        spec.period = spec.fixed_cost(p) + 2000.0;
        CHECK(waste_fail_kc1v_bsearch(spec, p) < waste_fail_kc1v(spec, p, false));
    }
}

TEST_CASE("VerificationHeavy losses and the two waste forms") {
    std::mt19937_64 rng(703);
    for (int draw = 0; draw < 50; ++draw) {
        PlatformParams p = fleet(oracles::log_uniform_in(rng, 1.0, 600.0),
                                 oracles::log_uniform_in(rng, 1.0, 100.0));
        p.downtime = oracles::uniform_in(rng, 0.0, 30.0);
        PatternSpec spec;
        spec.mode = PatternMode::VerificationHeavy;
        spec.k = oracles::int_in(rng, 1, 12);
        spec.period = spec.fixed_cost(p) * oracles::uniform_in(rng, 1.2, 8.0);
        const double w = spec.segment_work(p);

        double sum = 0.0;
        for (std::int64_t i = 1; i <= spec.k; ++i) {
            const double expect =
                p.recovery_cost + static_cast<double>(i) * (p.verification() + w);
            CHECK(tlost_kv1c(i, spec, p) == doctest::Approx(expect).epsilon(1e-13));
            sum += expect;
        }
        // DirectAverage is literally (D + mean per-segment loss) / mu_e;
        // Published carries an extra factor 1/2.
        const double direct =
            (p.downtime + sum / static_cast<double>(spec.k)) / p.error_mean();
        CHECK(waste_fail_kv1c(spec, p, Kv1cForm::DirectAverage) ==
              doctest::Approx(direct).epsilon(1e-12));
        CHECK(waste_fail_kv1c(spec, p, Kv1cForm::Published) ==
              doctest::Approx(direct / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("the coefficient triple reproduces the combined waste pointwise") {
    std::mt19937_64 rng(704);
    for (int draw = 0; draw < 50; ++draw) {
        const bool ch = (rng() & 1) != 0;
        PlatformParams p = fleet(oracles::log_uniform_in(rng, 1.0, 100.0),
                                 oracles::log_uniform_in(rng, 1.0, 100.0));
        p.error_rate = 1.0 / oracles::log_uniform_in(rng, 1e4, 1e6);
        const PatternMode mode =
            ch ? PatternMode::CheckpointHeavy : PatternMode::VerificationHeavy;
        const std::int64_t k = oracles::int_in(rng, 1, 10);
        const PatternCoefficients pc = pattern_coefficients(mode, k, p);
        PatternSpec spec;
        spec.mode = mode;
        spec.k = k;
        // stay where waste_fail < 1 so the combined form is defined
        const double hi = pc.floor * 1.02 + 0.05 * p.error_mean();
        for (int j = 0; j < 50; ++j) {
            spec.period = oracles::log_uniform_in(rng, pc.floor * 1.01, hi);
            const double assembled = pc.a * spec.period + pc.b + pc.c / spec.period;
            CHECK(pattern_waste(spec, p) ==
                  doctest::Approx(assembled).epsilon(1e-10));
        }
    }
}

TEST_CASE("the optimal period is stationary and matches a numeric argmin") {
    std::mt19937_64 rng(705);
    for (int draw = 0; draw < 25; ++draw) {
        PlatformParams p = fleet(oracles::log_uniform_in(rng, 1.0, 100.0),
                                 oracles::log_uniform_in(rng, 1.0, 100.0));
        p.error_rate = 1.0 / oracles::log_uniform_in(rng, 1e4, 1e6);
        const std::int64_t k = oracles::int_in(rng, 1, 8);
        const PatternCoefficients pc =
            pattern_coefficients(PatternMode::VerificationHeavy, k, p);
        if (pc.clamped) continue;
        CHECK(pc.a == doctest::Approx(pc.c / (pc.s_opt * pc.s_opt)).epsilon(1e-12));
        PatternSpec spec;
        spec.mode = PatternMode::VerificationHeavy;
        spec.k = k;
        // bracket where waste_fail stays below 0.9, so the combined waste
        // is defined on the whole interval
        const double alpha = pc.b + pc.a * pc.floor;
        const double numeric = oracles::golden_section_min(
            [&](double s) {
                spec.period = s;
                return pattern_waste(spec, p);
            },
            pc.floor * 1.000001, (0.9 - alpha) / pc.a, 1e-12);
        CHECK(pc.s_opt == doctest::Approx(numeric).epsilon(1e-2));
    }
}

TEST_CASE("verification-heavy reference curve, cheap verifications") {
    // V = 2s, C = R = 60s
    const PlatformParams p = fleet(60.0, 2.0);
    const PatternOptimum best = optimize_pattern(PatternMode::VerificationHeavy, p);
    CHECK(best.k_opt == 5);
    CHECK(best.s_opt == doctest::Approx(856.1775516795568).epsilon(1e-12));
    CHECK(best.waste == doctest::Approx(0.16004139111102678).epsilon(1e-12));
}

TEST_CASE("verification-heavy reference curve, heavy checkpoints") {
    // V = 20s, C = R = 600s; frozen alongside the full k = 1..6 sweep
    const PlatformParams p = fleet(600.0, 20.0);
    const PatternOptimum best =
        optimize_pattern(PatternMode::VerificationHeavy, p, 6);
    CHECK(best.k_opt == 5);
    CHECK(best.s_opt == doctest::Approx(2660.5262637305427).epsilon(1e-12));
    CHECK(best.waste == doctest::Approx(0.4776495935560392).epsilon(1e-12));
    REQUIRE(best.table.size() == 6);
    const double frozen[6] = {0.5287573938644703, 0.4928158209755318,
                              0.4817536684732845, 0.4781117785755451,
                              0.4776495935560392, 0.47881775955109884};
    for (int i = 0; i < 6; ++i) {
        CHECK(best.table[i].k == i + 1);
        CHECK_FALSE(best.table[i].clamped);
        CHECK(best.table[i].waste == doctest::Approx(frozen[i]).epsilon(1e-12));
    }
}

TEST_CASE("checkpoint-heavy reference curves") {
    // V = 100s, C = R = 6s
    const PlatformParams cheap_ckpt = fleet(6.0, 100.0);
    PatternOptimum best = optimize_pattern(PatternMode::CheckpointHeavy, cheap_ckpt);
    CHECK(best.k_opt == 2);
    CHECK(best.s_opt == doctest::Approx(672.1777542684177).epsilon(1e-12));
    CHECK(best.waste == doctest::Approx(0.3336715599323397).epsilon(1e-12));
    CHECK(best.table[0].waste ==
          doctest::Approx(0.35891059372954004).epsilon(1e-12));

    // V = 300s, C = R = 60s
    const PlatformParams heavy_verif = fleet(60.0, 300.0);
    best = optimize_pattern(PatternMode::CheckpointHeavy, heavy_verif);
    CHECK(best.k_opt == 2);
    CHECK(best.s_opt == doctest::Approx(1240.6514417837107).epsilon(1e-12));
    CHECK(best.waste == doctest::Approx(0.6186507999351744).epsilon(1e-12));
}

TEST_CASE("waste as a function of k is unimodal on the reference curves") {
    const PlatformParams configs[4] = {fleet(600.0, 20.0), fleet(60.0, 2.0),
                                       fleet(6.0, 100.0), fleet(60.0, 300.0)};
    const PatternMode modes[4] = {
        PatternMode::VerificationHeavy, PatternMode::VerificationHeavy,
        PatternMode::CheckpointHeavy, PatternMode::CheckpointHeavy};
    for (int s = 0; s < 4; ++s) {
        const PatternOptimum best = optimize_pattern(modes[s], configs[s], 10);
        int direction_changes = 0;
        double prev_delta = 0.0;
        double prev = -1.0;
        for (const auto& row : best.table) {
            if (row.clamped) break;
            if (prev >= 0.0) {
                const double delta = row.waste - prev;
                if (prev_delta < 0.0 && delta > 0.0) ++direction_changes;
                prev_delta = delta;
            }
            prev = row.waste;
        }
        CHECK(direction_changes <= 1);
        CHECK(best.waste <= best.table.front().waste);
    }
}

TEST_CASE("short periods clamp to the floor instead of optimizing into it") {
    // Heavy verification at k = 16 pushes the unconstrained optimum below
    // the fixed costs; the row must clamp and be reported as infeasible.
    const PlatformParams p = fleet(60.0, 300.0);
    const PatternCoefficients pc =
        pattern_coefficients(PatternMode::CheckpointHeavy, 16, p);
    CHECK(pc.clamped);
    CHECK(pc.s_opt == doctest::Approx(pc.floor).epsilon(1e-15));
    // one segment more and the first-order fail fraction passes 1
    CHECK_THROWS_AS(pattern_coefficients(PatternMode::CheckpointHeavy, 17, p),
                    RegimeError);
    const PatternOptimum best =
        optimize_pattern(PatternMode::CheckpointHeavy, p, 20);
    REQUIRE(best.table.size() == 16);
    CHECK(best.table.back().clamped);
    CHECK(best.table.back().waste == 1.0);
}

TEST_CASE("a platform too failure-prone for any pattern raises RegimeError") {
    PlatformParams p = fleet(60.0, 300.0);
    p.error_rate = 1.0 / 500.0;
    CHECK_THROWS_AS(optimize_pattern(PatternMode::CheckpointHeavy, p, 20),
                    RegimeError);
}

TEST_CASE("mode and index misuse is rejected") {
    const PlatformParams p = fleet(60.0, 300.0);
    PatternSpec vh;
    vh.mode = PatternMode::VerificationHeavy;
    vh.k = 4;
    vh.period = 5000.0;
    CHECK_THROWS_AS(tlost_kc1v(2, vh, p), ParameterError);
    CHECK_THROWS_AS(waste_fail_kc1v(vh, p), ParameterError);
    PatternSpec ch;
    ch.mode = PatternMode::CheckpointHeavy;
    ch.k = 4;
    ch.period = 5000.0;
    CHECK_THROWS_AS(tlost_kv1c(2, ch, p), ParameterError);
    CHECK_THROWS_AS(tlost_kc1v(0, ch, p), ParameterError);
    CHECK_THROWS_AS(tlost_kc1v(5, ch, p), ParameterError);
    ch.period = ch.fixed_cost(p);  // no room for work
    CHECK_THROWS_AS(ch.segment_work(p), ParameterError);
    ch.k = 0;
    CHECK_THROWS_AS(ch.fixed_cost(p), ParameterError);
    CHECK_THROWS_AS(optimize_pattern(PatternMode::CheckpointHeavy, p, 0),
                    ParameterError);
}
