#include "sdcplan/exact_model.hpp"

#include <cmath>
#include <limits>

#include "sdcplan/errors.hpp"
#include "sdcplan/lambert.hpp"

namespace sdcplan {

namespace {

// E(T_lost) over a span tau = w + C, as a function of x = lambda*tau:
//   (1/lambda) * (1 - x/(e^x - 1)).
// The direct form cancels badly for small x, so switch to the Bernoulli
// series tau * (1/2 - x/12 + x^3/720 - ...) there; the omitted x^5 term is
// below double resolution for x <= 1e-3.
double time_lost_over_span(double lambda, double span) {
    double x = lambda * span;
    if (x <= 1e-3) {
        return span * (0.5 - x / 12.0 + x * x * x / 720.0);
    }
    if (x < 500.0) {
        double em = std::expm1(x);
        return span * (em - x) / (x * em);
    }
    // The e^{-x} tail is far below double resolution: saturate at the mean.
    return 1.0 / lambda;
}

} // namespace

double expected_tlost(double work, const PlatformParams& p) {
    if (!std::isfinite(work) || work < 0.0) {
        throw ParameterError("expected_tlost: work must be finite and >= 0");
    }
    return time_lost_over_span(p.error_rate, work + p.checkpoint_cost);
}

double expected_trec(const PlatformParams& p) {
    double lambda = p.error_rate;
    return p.downtime * std::exp(lambda * p.recovery_cost)
         + std::expm1(lambda * p.recovery_cost) * (p.error_mean() + p.detection_mean());
}

double expected_makespan_chunk(double work, const PlatformParams& p) {
    if (!std::isfinite(work) || work < 0.0) {
        throw ParameterError("expected_makespan_chunk: work must be finite and >= 0");
    }
    double lambda = p.error_rate;
    double per_error = p.downtime + p.error_mean() + p.detection_mean();
    return std::exp(lambda * p.recovery_cost) * per_error
         * std::expm1(lambda * (work + p.checkpoint_cost));
}

double makespan_for_chunks(double total_work, std::int64_t n, const PlatformParams& p) {
    if (n < 1) {
        throw ParameterError("makespan_for_chunks: chunk count must be >= 1");
    }
    if (!std::isfinite(total_work) || total_work <= 0.0) {
        throw ParameterError("makespan_for_chunks: total_work must be finite and > 0");
    }
    double dn = static_cast<double>(n);
    return dn * expected_makespan_chunk(total_work / dn, p);
}

ChunkingSolution optimal_chunks(const WorkloadSpec& workload, const PlatformParams& p) {
    if (!std::isfinite(workload.total_work) || workload.total_work <= 0.0) {
        throw ParameterError("optimal_chunks: total_work must be finite and > 0");
    }
    double lambda = p.error_rate;
    double y = lambert_w0(-std::exp(-lambda * p.checkpoint_cost - 1.0)).value;

    ChunkingSolution sol;
    sol.lambert_y = y;

    // 1 + y > 0 whenever lambda*C > 0; C = 0 lands exactly on the branch
    // point (y = -1) where n* diverges: infinitely many free checkpoints.
    double denom = 1.0 + y;
    double lw = lambda * workload.total_work;
    if (denom <= 1e-15 || !(lw > 1e-12)) {
        sol.degenerate = true;
        sol.n_star_real = denom <= 1e-15
            ? std::numeric_limits<double>::infinity()
            : lw / denom;
        sol.n_opt = 1;
    } else {
        sol.n_star_real = lw / denom;
        std::int64_t lo = static_cast<std::int64_t>(std::floor(sol.n_star_real));
        if (lo < 1) lo = 1;
        std::int64_t hi = static_cast<std::int64_t>(std::ceil(sol.n_star_real));
        if (hi < 1) hi = 1;
        sol.n_opt = lo;
        if (hi != lo) {
            double t_lo = makespan_for_chunks(workload.total_work, lo, p);
            double t_hi = makespan_for_chunks(workload.total_work, hi, p);
            if (t_hi < t_lo) sol.n_opt = hi;
        }
    }

    if (workload.chunk_count) {
        if (*workload.chunk_count < 1) {
            throw ParameterError("optimal_chunks: pinned chunk_count must be >= 1");
        }
        sol.n_opt = *workload.chunk_count;
    }

    sol.period = workload.total_work / static_cast<double>(sol.n_opt) + p.checkpoint_cost;
    sol.expected_makespan = makespan_for_chunks(workload.total_work, sol.n_opt, p);
    return sol;
}

double period_young(const PlatformParams& p) {
    return std::sqrt(2.0 * p.checkpoint_cost * p.error_mean()) + p.checkpoint_cost;
}

} // namespace sdcplan
