#pragma once

// patterns.hpp -- waste models for periodic verification/checkpoint
// patterns, where silent errors are caught only by explicit verifications.
//
// Two pattern shapes, both of period S ending in a verification directly
// followed by the final checkpoint:
//   CheckpointHeavy:   k segments of (work w, checkpoint C), with one
//                      verification V before the last checkpoint;
//                      S = k w + k C + V.  On a failed verification the
//                      rollback walks the intermediate checkpoints newest
//                      to oldest, re-verifying each, until a clean one is
//                      found (worst case: the previous pattern's final
//                      checkpoint, which is clean by construction).
//   VerificationHeavy: k segments of (work w, verification V) and a single
//                      checkpoint C at the end; S = k w + k V + C.  Any
//                      failed verification rolls back to the pattern's
//                      starting checkpoint.
//
// waste_fail is affine in S for fixed k, so the combined waste has the
// exact form a*S + b + c/S and a closed-form optimal period.

#include <cstdint>
#include <vector>

#include "sdcplan/model.hpp"

namespace sdcplan {

enum class PatternMode { CheckpointHeavy, VerificationHeavy };

struct PatternSpec {
    PatternMode mode = PatternMode::CheckpointHeavy;
    std::int64_t k = 1;       ///< segment count
    double period = 0.0;      ///< S [s]; must exceed the fixed costs below

    /// Fixed (non-work) cost of one pattern: kC + V or kV + C.
    double fixed_cost(const PlatformParams& p) const;
    /// Segment work w = (S - fixed_cost)/k; throws ParameterError when <= 0.
    double segment_work(const PlatformParams& p) const;
};

/// Expected time lost when the failed end-of-pattern verification walk ends
/// at checkpoint i (1-based; i = k means the newest intermediate checkpoint
/// was already clean, i = 1 means the walk fell through to the previous
/// pattern's final checkpoint).  CheckpointHeavy only.
///   i = k:          R + V + w + V
///   2 <= i <= k-1:  (k-i+1)(R+V+w) + (k-i)C + V
///   i = 1:          k(R+w) + (k-1)(C+V) + V
/// The i = k rule takes precedence at k = 1 (both boundary formulas collide
/// there): tlost_kc1v(1, k=1) = R + 2V + w, which is what keeps the average
/// consistent with waste_fail_kc1v's closed form.
double tlost_kc1v(std::int64_t i, const PatternSpec& spec, const PlatformParams& p);

/// Failure-induced waste of a CheckpointHeavy pattern: the average of
/// tlost_kc1v over i = 1..k, plus one downtime, per error:
///   (D + mean_i tlost) / mu_e.
/// For k >= 2 this equals the closed form
///   (1/(2 k mu_e)) ((R+V)k^2 + (2D+R+2V+S-2C)k + S - 3V)
/// exactly; at k = 1 the closed form does not apply and the average is the
/// definition.  `averaged` selects the explicit average (the normative
/// path, always available) over the closed form; both are exposed so they
/// can be checked against each other.
double waste_fail_kc1v(const PatternSpec& spec, const PlatformParams& p,
                       bool averaged = true);

/// CheckpointHeavy variant where the rollback walk binary-searches the
/// intermediate checkpoints instead of scanning linearly: the k^2 walk term
/// becomes 2 k log(k) (natural log).  k = 1 is defined by continuity and
/// equals waste_fail_kc1v there.
double waste_fail_kc1v_bsearch(const PatternSpec& spec, const PlatformParams& p);

/// Failure-induced waste of a VerificationHeavy pattern.  Per-segment loss
/// is tlost(i) = R + i(V+w) for a failure caught by verification i.  Two
/// forms are exposed:
///   Published:     (1/(2 mu_e)) (D + R + ((k+1)/(2k))(S - C))
///   DirectAverage: (D + R + ((k+1)/(2k))(S - C)) / mu_e
/// The direct average of (D + tlost(i)) over i gives the DirectAverage
/// form; the Published form carries an extra 1/2 whose provenance is
/// unclear.  Both are kept: Published reproduces the reference curves and
/// is the default; DirectAverage is what the simulator measures, so it is
/// the form used when arbitrating against simulation.
enum class Kv1cForm { Published, DirectAverage };
double waste_fail_kv1c(const PatternSpec& spec, const PlatformParams& p,
                       Kv1cForm form = Kv1cForm::Published);

/// Expected time lost for VerificationHeavy when verification i fails:
/// R + i(V + w).
double tlost_kv1c(std::int64_t i, const PatternSpec& spec, const PlatformParams& p);

/// Fault-free overhead of a pattern: fixed_cost / S.
double pattern_waste_ff(const PatternSpec& spec, const PlatformParams& p);

/// Total waste of a fully specified pattern (combine of ff and fail).
double pattern_waste(const PatternSpec& spec, const PlatformParams& p,
                     Kv1cForm vh_form = Kv1cForm::Published);

struct PatternCoefficients {
    double a = 0.0;           ///< waste_total(S) = a S + b + c/S
    double b = 0.0;
    double c = 0.0;
    double s_opt = 0.0;       ///< sqrt(c/a), clamped up to the feasibility floor
    double floor = 0.0;       ///< kC + V or kV + C
    bool clamped = false;     ///< true when sqrt(c/a) <= floor (waste -> 1 there)
};

/// Exact coefficients of waste_total(S) = a S + b + c/S for a fixed k, with
/// the closed-form optimal period.  Throws RegimeError when a <= 0 or
/// c <= 0 (mu_e too small for the first-order pattern model).
PatternCoefficients pattern_coefficients(PatternMode mode, std::int64_t k,
                                         const PlatformParams& p,
                                         Kv1cForm vh_form = Kv1cForm::Published);

struct PatternOptimum {
    struct Entry {
        std::int64_t k = 0;
        double s_opt = 0.0;
        double waste = 0.0;   ///< 1.0 for clamped (infeasible) k
        bool clamped = false;
    };
    std::int64_t k_opt = 0;
    double s_opt = 0.0;
    double waste = 0.0;
    std::vector<Entry> table; ///< one row per scanned k, ascending
};

/// Scan k = 1..k_max, optimize S for each, and return the best (ties to
/// the smaller k).  Throws RegimeError when no k admits a feasible period.
PatternOptimum optimize_pattern(PatternMode mode, const PlatformParams& p,
                                std::int64_t k_max = 50,
                                Kv1cForm vh_form = Kv1cForm::Published);

} // namespace sdcplan
