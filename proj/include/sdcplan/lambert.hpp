#pragma once

// lambert.hpp -- principal branch W0 of the Lambert W function.
//
// Only W0 on [-1/e, +inf) is needed here: the closed form for the optimal
// chunk count evaluates W0 at -exp(-lambda_e*C - 1), which always lands in
// (-1/e, 0).  The solver still handles the whole branch so it can be tested
// against the defining identity on a wide grid.

#include <cstdint>

namespace sdcplan {

struct LambertResult {
    double value = 0.0;      ///< w with w*exp(w) = x, w >= -1
    std::int32_t iterations = 0;
    double residual = 0.0;   ///< |w*exp(w) - x| at the returned point
};

/// Principal branch W0(x) for x >= -1/e (a tiny slack below -1/e is
/// tolerated and clamped to the branch point, anything further throws
/// ParameterError).  Accuracy target: residual <= 1e-12 * max(1, |x|).
LambertResult lambert_w0(double x);

} // namespace sdcplan
