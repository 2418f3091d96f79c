#include "sdcplan/lambert.hpp"

#include <cmath>
#include <sstream>

#include "sdcplan/errors.hpp"

namespace sdcplan {

namespace {

// Series around the branch point x = -1/e in p = sqrt(2*(e*x + 1)):
// W0(x) = -1 + p - p^2/3 + 11 p^3/72 - 43 p^4/540 + 769 p^5/17280 - ...
// Used both as a seed and, very close to the branch point, as the answer:
// Halley loses digits there because W'(x) blows up like 1/p.
double branch_point_series(double p) {
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0
            + p * (-43.0 / 540.0 + p * (769.0 / 17280.0)))));
}

double initial_guess(double x) {
    if (x < 0.25) {
        double p2 = 2.0 * (std::exp(1.0) * x + 1.0);
        if (p2 < 0.0) p2 = 0.0;
        return branch_point_series(std::sqrt(p2));
    }
    if (x < 3.0) {
        // One fixed-point style estimate is plenty for Halley to take over.
        return x / (1.0 + x);
    }
    // Asymptotic seed for large x: L1 - L2 + L2/L1.
    double l1 = std::log(x);
    double l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
}

} // namespace

LambertResult lambert_w0(double x) {
    if (!std::isfinite(x)) {
        throw ParameterError("lambert_w0: argument must be finite");
    }
    const double branch = -std::exp(-1.0);
    if (x < branch) {
        // Allow roundoff-level undershoot of -1/e, reject anything real.
        if (x < branch * (1.0 + 1e-12) - 1e-300) {
            std::ostringstream os;
            os << "lambert_w0: x = " << x << " is below the branch point -1/e";
            throw ParameterError(os.str());
        }
        x = branch;
    }

    LambertResult out;
    if (x == 0.0) {
        out.value = 0.0;
        out.residual = 0.0;
        return out;
    }

    // Within ~1e-5 of the branch point the series is accurate to ~1e-13 and
    // strictly better conditioned than the iteration, so return it directly.
    double ex1 = std::exp(1.0) * x + 1.0;
    if (ex1 <= 1e-5) {
        double p = std::sqrt(std::fmax(2.0 * ex1, 0.0));
        out.value = branch_point_series(p);
        out.residual = std::fabs(out.value * std::exp(out.value) - x);
        return out;
    }

    double w = initial_guess(x);
    const double tol = 1e-12 * std::fmax(1.0, std::fabs(x));
    for (std::int32_t iter = 1; iter <= 50; ++iter) {
        double ew = std::exp(w);
        double f = w * ew - x;
        out.iterations = iter;
        if (std::fabs(f) <= tol) {
            out.value = w;
            out.residual = std::fabs(f);
            return out;
        }
        // Halley step: f' = e^w (w+1), f'' = e^w (w+2).
        double wp1 = w + 1.0;
        double denom = ew * wp1 - f * (w + 2.0) / (2.0 * wp1);
        w -= f / denom;
        if (w < -1.0) w = -1.0; // stay on the principal branch
    }
    double f = w * std::exp(w) - x;
    if (std::fabs(f) <= 1e-9 * std::fmax(1.0, std::fabs(x))) {
        // Converged to slightly worse than the target; accept with the true
        // residual recorded so callers can see it.
        out.value = w;
        out.residual = std::fabs(f);
        return out;
    }
    std::ostringstream os;
    os << "lambert_w0: no convergence for x = " << x;
    throw Error(os.str());
}

} // namespace sdcplan
