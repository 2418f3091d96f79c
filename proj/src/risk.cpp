#include "sdcplan/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sdcplan/errors.hpp"
#include "sdcplan/firstorder.hpp"

namespace sdcplan {

namespace {

void check_policy(const BoundedStoragePolicy& policy) {
    if (policy.checkpoints_kept < 1) {
        throw ParameterError("bounded storage: checkpoints_kept must be >= 1");
    }
}

void check_period(double period, const PlatformParams& p) {
    if (!std::isfinite(period) || period <= p.checkpoint_cost) {
        std::ostringstream os;
        os << "risk model: period " << period << "s must exceed checkpoint cost "
           << p.checkpoint_cost << "s";
        throw ParameterError(os.str());
    }
}

} // namespace

double p_fail(double period, const DistributionSpec& error_law) {
    if (!std::isfinite(period) || period < 0.0) {
        throw ParameterError("p_fail: period must be finite and >= 0");
    }
    return error_law.cdf(period);
}

double p_fail(double period, const PlatformParams& p) {
    return p_fail(period, DistributionSpec::exponential(
        DistributionSpec::Role::ErrorArrival, p.error_rate));
}

double p_lat(double period, std::int64_t checkpoints_kept, const DistributionSpec& detection_law) {
    if (!std::isfinite(period) || period < 0.0) {
        throw ParameterError("p_lat: period must be finite and >= 0");
    }
    if (checkpoints_kept < 1) {
        throw ParameterError("p_lat: checkpoints_kept must be >= 1");
    }
    return detection_law.survival(static_cast<double>(checkpoints_kept - 1) * period);
}

double p_lat(double period, std::int64_t checkpoints_kept, const PlatformParams& p) {
    return p_lat(period, checkpoints_kept, DistributionSpec::exponential(
        DistributionSpec::Role::DetectionLatency, 1.0 / p.detection_mean()));
}

RiskReport risk_report(double period, const BoundedStoragePolicy& policy,
                       const WorkloadSpec& workload, const PlatformParams& p,
                       const DistributionSpec& error_law,
                       const DistributionSpec& detection_law) {
    check_policy(policy);
    check_period(period, p);
    if (!std::isfinite(workload.total_work) || workload.total_work <= 0.0) {
        throw ParameterError("risk_report: total_work must be finite and > 0");
    }

    RiskReport rep;
    rep.period = period;
    rep.p_fail = p_fail(period, error_law);
    rep.p_lat = p_lat(period, policy.checkpoints_kept, detection_law);
    rep.period_count = workload.total_work / (period - p.checkpoint_cost);

    // p_irrec = Pf*Pl / (1 - Pf*(1-Pl)); the denominator rewritten as
    // survival_f + Pf*Pl avoids the 1-Pf cancellation when Pf is near 1.
    double survival_f = error_law.survival(period);
    double denom = survival_f + rep.p_fail * rep.p_lat;
    rep.p_irrec = denom > 0.0 ? rep.p_fail * rep.p_lat / denom : 1.0;

    if (rep.p_irrec >= 1.0) {
        rep.p_risk = 1.0;
        rep.expected_executions = std::numeric_limits<double>::infinity();
    } else {
        double log_surv = rep.period_count * std::log1p(-rep.p_irrec);
        rep.p_risk = -std::expm1(log_surv);
        rep.expected_executions = std::exp(-log_surv);
    }

    if (!error_law.is_exponential() || !detection_law.is_exponential()) {
        rep.note = "risk formulas are exact only for Exponential laws "
                   "(memoryless property); treat these values as an approximation";
    }
    return rep;
}

RiskReport risk_report(double period, const BoundedStoragePolicy& policy,
                       const WorkloadSpec& workload, const PlatformParams& p) {
    return risk_report(period, policy, workload, p,
        DistributionSpec::exponential(DistributionSpec::Role::ErrorArrival, p.error_rate),
        DistributionSpec::exponential(DistributionSpec::Role::DetectionLatency,
                                      1.0 / p.detection_mean()));
}

double solve_t_min(const BoundedStoragePolicy& policy, const WorkloadSpec& workload,
                   const PlatformParams& p, const DistributionSpec& error_law,
                   const DistributionSpec& detection_law) {
    check_policy(policy);
    double eps = policy.risk_threshold;
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ParameterError("solve_t_min: risk_threshold must lie in (0, 1)");
    }

    auto risk_at = [&](double t) {
        return risk_report(t, policy, workload, p, error_law, detection_law).p_risk;
    };

    // Start the coarse scan at a quarter of the waste-optimal period when
    // that exists; p_risk blows up as T -> C (period count diverges), so
    // anything below that is of no practical interest anyway.
    double start = p.checkpoint_cost + 1.0;
    try {
        start = std::max(start, period_firstorder(p) / 4.0);
    } catch (const RegimeError&) {
        // No first-order optimum: scan from just above the checkpoint cost.
    }
    const double ceiling = 10.0 * p.error_mean();
    if (start >= ceiling) start = p.checkpoint_cost + 1.0;

    double prev = start;
    double prev_risk = risk_at(prev);
    double best_risk = prev_risk;
    double lo = p.checkpoint_cost;  // p_risk -> 1 at the left edge
    double hi = 0.0;
    bool found = prev_risk <= eps;
    if (found) {
        hi = prev;
    } else {
        for (double t = prev * 1.25; t <= ceiling; t *= 1.25) {
            double r = risk_at(t);
            best_risk = std::min(best_risk, r);
            if (r <= eps) {
                lo = prev;
                hi = t;
                found = true;
                break;
            }
            prev = t;
        }
    }
    if (!found) {
        std::ostringstream os;
        os << "solve_t_min: no period up to " << ceiling << "s meets risk threshold "
           << eps << "; smallest risk seen was " << best_risk;
        throw RegimeError(os.str());
    }

    // Bisect the bracketing interval down to 1-second resolution.  The
    // feasible set's lower boundary is a single crossing inside (lo, hi]:
    // risk exceeds eps at lo and meets it at hi.
    while (hi - lo > 1.0) {
        double mid = 0.5 * (lo + hi);
        if (risk_at(mid) <= eps) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

double solve_t_min(const BoundedStoragePolicy& policy, const WorkloadSpec& workload,
                   const PlatformParams& p) {
    return solve_t_min(policy, workload, p,
        DistributionSpec::exponential(DistributionSpec::Role::ErrorArrival, p.error_rate),
        DistributionSpec::exponential(DistributionSpec::Role::DetectionLatency,
                                      1.0 / p.detection_mean()));
}

} // namespace sdcplan
