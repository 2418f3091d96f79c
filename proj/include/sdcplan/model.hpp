#pragma once

// model.hpp -- shared parameter types for the checkpoint planning models.
//
// Conventions used across the library:
//   * durations are double seconds, rates are 1/s;
//   * C = checkpoint cost, R = recovery cost, D = downtime, V = verification
//     cost, lambda_e = error rate (mean mu_e = 1/lambda_e), lambda_d =
//     detection rate (mean latency mu_d = 1/lambda_d);
//   * V and lambda_d are optional: "absent" means the platform has no
//     verification mechanism / no latency model, which is different from a
//     zero cost.  Models that need them refuse to run when they are missing.
//   * waste values are dimensionless fractions in [0, 1] and are always
//     combined multiplicatively (combine_waste), never by plain addition.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdcplan {

struct PlatformParams {
    double checkpoint_cost = 0.0;              ///< C [s]
    double recovery_cost = 0.0;                ///< R [s]
    double downtime = 0.0;                     ///< D [s]; defaults to zero
    std::optional<double> verification_cost;   ///< V [s]; absent when the platform cannot verify
    double error_rate = 0.0;                   ///< lambda_e [1/s]; must be > 0
    std::optional<double> detection_rate;      ///< lambda_d [1/s]; absent when latency is unmodeled

    /// mu_e = 1/lambda_e [s].
    double error_mean() const;
    /// mu_d = 1/lambda_d [s]; throws ParameterError when detection_rate is absent.
    double detection_mean() const;
    /// V [s]; throws ParameterError when verification_cost is absent.
    double verification() const;

    bool operator==(const PlatformParams&) const = default;
};

/// Which optional platform fields the requested model family requires.
struct ModelNeeds {
    bool verification = false;
    bool detection = false;
};

/// Collect every violated invariant, one human-readable message per field.
/// An empty result means the parameters are usable for the given needs.
/// Zero costs (even C=0) are degenerate but legal; downstream models flag
/// them rather than rejecting here.
std::vector<std::string> validate_params(const PlatformParams& p, ModelNeeds needs = {});

/// validate_params() and throw ParameterError listing all violations at once.
PlatformParams validated(PlatformParams p, ModelNeeds needs = {});

/// Platform-level error rate from per-component MTBF and component count:
/// lambda_e = count / mtbf; the reciprocal of the result is the platform
/// MTBF mu_e.  (100 years across 10^5 components -> mu_e = 8.76 h.)
double platform_mtbf(double component_mtbf, std::uint64_t component_count);

struct WorkloadSpec {
    double total_work = 0.0;                   ///< W [s] of failure-free compute
    std::optional<std::int64_t> chunk_count;   ///< pin n instead of optimizing it

    bool operator==(const WorkloadSpec&) const = default;
};

/// A sampling/probability law for error arrivals or detection latency.
struct DistributionSpec {
    enum class Family { Exponential, Weibull };
    enum class Role { ErrorArrival, DetectionLatency };

    Family family = Family::Exponential;
    Role role = Role::ErrorArrival;
    double rate = 0.0;    ///< Exponential: events per second
    double shape = 1.0;   ///< Weibull k
    double scale = 0.0;   ///< Weibull lambda [s]

    static DistributionSpec exponential(Role role, double rate);
    static DistributionSpec weibull(Role role, double shape, double scale);
    /// Weibull with the scale chosen so that the mean comes out as given.
    static DistributionSpec weibull_with_mean(Role role, double shape, double mean);

    double mean() const;
    double cdf(double x) const;
    double survival(double x) const;
    /// Inverse CDF; u must lie in [0, 1).
    double quantile(double u) const;

    bool is_exponential() const { return family == Family::Exponential; }
};

/// First-order waste split of one schedule.
struct WasteBreakdown {
    double waste_ff = 0.0;            ///< fault-free overhead fraction
    double waste_fail = 0.0;          ///< failure-induced fraction
    double waste_total = 0.0;         ///< combine_waste(waste_ff, waste_fail)
    double time_lost_per_error = 0.0; ///< F [s]: expected time lost per error
};

/// Compose two waste fractions: total = ff + fail - ff*fail.  Both inputs
/// must lie in [0, 1] (throws ParameterError otherwise); the result then
/// lies in [0, 1] as well.
double combine_waste(double waste_ff, double waste_fail);

/// Build a breakdown whose total satisfies the composition identity exactly.
/// Unlike combine_waste this does not restrict the domain: out-of-regime
/// schedules can legitimately produce waste_fail > 1, and the identity is
/// kept exact rather than clamped so the recomposition invariant holds for
/// every breakdown the library emits.
WasteBreakdown make_waste_breakdown(double waste_ff, double waste_fail,
                                    double time_lost_per_error);

} // namespace sdcplan
