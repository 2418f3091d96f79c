#pragma once

// firstorder.hpp -- first-order waste model for a periodic schedule of
// period T (work T-C followed by a checkpoint C), valid for arbitrary error
// laws as long as the platform MTBF dominates every other time scale.
//
// The per-error loss is F = T/2 + mu_d + D + R: half a period of work on
// average, the detection latency, and the recovery.  Fault-free overhead is
// C/T.  The two fractions combine multiplicatively (see model.hpp) into a
// total of the exact form
//   T/(2 mu_e) + C(1 - (D+R+mu_d)/mu_e)/T + (D+R+mu_d - C/2)/mu_e,
// whose argmin is T_opt = sqrt(2 C (mu_e - D - R - mu_d)).

#include <optional>

#include "sdcplan/model.hpp"

namespace sdcplan {

struct FirstOrderReport {
    double period = 0.0;             ///< T [s] the report was evaluated at
    WasteBreakdown breakdown;        ///< ff = C/T, fail = F/mu_e, combined total
    std::optional<double> t_opt;     ///< argmin period; absent out of regime
    bool regime_costs_ok = false;    ///< mu_d + D + R <= mu_e / 10
    bool regime_period_ok = false;   ///< T <= mu_e / 10
};

/// Evaluate the first-order waste of period T.  Throws ParameterError for
/// T <= C (the period must hold some work).  The regime flags report
/// whether the first-order assumptions plausibly hold; values are still
/// returned when they do not.
FirstOrderReport waste_general(double period, const PlatformParams& p);

/// The same total waste evaluated through the expanded polynomial form.
/// Agrees with waste_general's assembled total to roundoff; kept separate
/// so the two derivations can be checked against each other.
double waste_polynomial(double period, const PlatformParams& p);

/// Waste-minimizing period T_opt = sqrt(2 C (mu_e - D - R - mu_d)).
/// Throws RegimeError when mu_e <= D + R + mu_d (use the exact exponential
/// model instead: the first-order expansion has no valid optimum there).
double period_firstorder(const PlatformParams& p);

} // namespace sdcplan
