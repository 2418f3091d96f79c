#include "sdcplan/firstorder.hpp"

#include <cmath>
#include <sstream>

#include "sdcplan/errors.hpp"

namespace sdcplan {

FirstOrderReport waste_general(double period, const PlatformParams& p) {
    if (!std::isfinite(period) || period <= p.checkpoint_cost) {
        std::ostringstream os;
        os << "waste_general: period must exceed checkpoint cost ("
           << period << " <= " << p.checkpoint_cost << ")";
        throw ParameterError(os.str());
    }
    double mu_e = p.error_mean();
    double mu_d = p.detection_mean();
    double f = period / 2.0 + mu_d + p.downtime + p.recovery_cost;

    FirstOrderReport rep;
    rep.period = period;
    rep.breakdown = make_waste_breakdown(p.checkpoint_cost / period, f / mu_e, f);
    double radicand = 2.0 * p.checkpoint_cost * (mu_e - p.downtime - p.recovery_cost - mu_d);
    if (radicand > 0.0) rep.t_opt = std::sqrt(radicand);
    rep.regime_costs_ok = mu_d + p.downtime + p.recovery_cost <= mu_e / 10.0;
    rep.regime_period_ok = period <= mu_e / 10.0;
    return rep;
}

double waste_polynomial(double period, const PlatformParams& p) {
    if (!std::isfinite(period) || period <= p.checkpoint_cost) {
        throw ParameterError("waste_polynomial: period must exceed checkpoint cost");
    }
    double mu_e = p.error_mean();
    double fixed = p.downtime + p.recovery_cost + p.detection_mean();
    return period / (2.0 * mu_e)
         + p.checkpoint_cost * (1.0 - fixed / mu_e) / period
         + (fixed - p.checkpoint_cost / 2.0) / mu_e;
}

double period_firstorder(const PlatformParams& p) {
    double mu_e = p.error_mean();
    double slack = mu_e - p.downtime - p.recovery_cost - p.detection_mean();
    double radicand = 2.0 * p.checkpoint_cost * slack;
    if (!(radicand > 0.0)) {
        std::ostringstream os;
        os << "period_firstorder: platform MTBF " << mu_e
           << "s does not dominate D + R + mu_d = "
           << (p.downtime + p.recovery_cost + p.detection_mean())
           << "s (or C = 0); the first-order model has no optimum here, "
              "use the exact exponential model";
        throw RegimeError(os.str());
    }
    return std::sqrt(radicand);
}

} // namespace sdcplan
