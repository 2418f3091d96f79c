#include "sdcplan/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sdcplan/errors.hpp"

namespace sdcplan {

double PlatformParams::error_mean() const {
    return 1.0 / error_rate;
}

double PlatformParams::detection_mean() const {
    if (!detection_rate) {
        throw ParameterError("detection_rate is required here but the platform does not model detection latency");
    }
    return 1.0 / *detection_rate;
}

double PlatformParams::verification() const {
    if (!verification_cost) {
        throw ParameterError("verification_cost is required here but the platform has no verification mechanism");
    }
    return *verification_cost;
}

std::vector<std::string> validate_params(const PlatformParams& p, ModelNeeds needs) {
    std::vector<std::string> bad;
    auto check_finite_nonneg = [&](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0) {
            std::ostringstream os;
            os << name << " must be finite and >= 0, got " << v;
            bad.push_back(os.str());
        }
    };
    check_finite_nonneg(p.checkpoint_cost, "checkpoint_cost");
    check_finite_nonneg(p.recovery_cost, "recovery_cost");
    check_finite_nonneg(p.downtime, "downtime");
    if (!std::isfinite(p.error_rate) || p.error_rate <= 0.0) {
        std::ostringstream os;
        os << "error_rate must be finite and > 0, got " << p.error_rate;
        bad.push_back(os.str());
    }
    if (p.verification_cost) {
        if (!std::isfinite(*p.verification_cost) || *p.verification_cost < 0.0) {
            std::ostringstream os;
            os << "verification_cost must be finite and >= 0, got " << *p.verification_cost;
            bad.push_back(os.str());
        }
    } else if (needs.verification) {
        bad.push_back("verification_cost is required by the requested model but is absent");
    }
    if (p.detection_rate) {
        if (!std::isfinite(*p.detection_rate) || *p.detection_rate <= 0.0) {
            std::ostringstream os;
            os << "detection_rate must be finite and > 0, got " << *p.detection_rate;
            bad.push_back(os.str());
        }
    } else if (needs.detection) {
        bad.push_back("detection_rate is required by the requested model but is absent");
    }
    return bad;
}

PlatformParams validated(PlatformParams p, ModelNeeds needs) {
    auto bad = validate_params(p, needs);
    if (!bad.empty()) {
        std::ostringstream os;
        os << "invalid platform parameters:";
        for (const auto& msg : bad) os << "\n  - " << msg;
        throw ParameterError(os.str());
    }
    return p;
}

double platform_mtbf(double component_mtbf, std::uint64_t component_count) {
    if (!std::isfinite(component_mtbf) || component_mtbf <= 0.0) {
        throw ParameterError("component_mtbf must be finite and > 0");
    }
    if (component_count == 0) {
        throw ParameterError("component_count must be >= 1");
    }
    return static_cast<double>(component_count) / component_mtbf;
}

DistributionSpec DistributionSpec::exponential(Role role, double rate) {
    if (!std::isfinite(rate) || rate <= 0.0) {
        throw ParameterError("exponential rate must be finite and > 0");
    }
    DistributionSpec d;
    d.family = Family::Exponential;
    d.role = role;
    d.rate = rate;
    return d;
}

DistributionSpec DistributionSpec::weibull(Role role, double shape, double scale) {
    if (!std::isfinite(shape) || shape <= 0.0) {
        throw ParameterError("weibull shape must be finite and > 0");
    }
    if (!std::isfinite(scale) || scale <= 0.0) {
        throw ParameterError("weibull scale must be finite and > 0");
    }
    DistributionSpec d;
    d.family = Family::Weibull;
    d.role = role;
    d.shape = shape;
    d.scale = scale;
    return d;
}

DistributionSpec DistributionSpec::weibull_with_mean(Role role, double shape, double mean) {
    if (!std::isfinite(mean) || mean <= 0.0) {
        throw ParameterError("weibull mean must be finite and > 0");
    }
    // mean = scale * Gamma(1 + 1/shape)  =>  scale = mean / Gamma(1 + 1/shape)
    if (!std::isfinite(shape) || shape <= 0.0) {
        throw ParameterError("weibull shape must be finite and > 0");
    }
    double scale = mean / std::tgamma(1.0 + 1.0 / shape);
    return weibull(role, shape, scale);
}

double DistributionSpec::mean() const {
    if (family == Family::Exponential) return 1.0 / rate;
    return scale * std::tgamma(1.0 + 1.0 / shape);
}

double DistributionSpec::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (family == Family::Exponential) return -std::expm1(-rate * x);
    return -std::expm1(-std::pow(x / scale, shape));
}

double DistributionSpec::survival(double x) const {
    if (x <= 0.0) return 1.0;
    if (family == Family::Exponential) return std::exp(-rate * x);
    return std::exp(-std::pow(x / scale, shape));
}

double DistributionSpec::quantile(double u) const {
    if (!(u >= 0.0 && u < 1.0)) {
        throw ParameterError("quantile argument must lie in [0, 1)");
    }
    // -log1p(-u) is -log(1-u) evaluated without cancellation near u = 0.
    double t = -std::log1p(-u);
    if (family == Family::Exponential) return t / rate;
    return scale * std::pow(t, 1.0 / shape);
}

double combine_waste(double waste_ff, double waste_fail) {
    auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    if (!in_unit(waste_ff) || !in_unit(waste_fail)) {
        std::ostringstream os;
        os << "combine_waste: fractions must lie in [0, 1], got ff=" << waste_ff
           << " fail=" << waste_fail;
        throw ParameterError(os.str());
    }
    double total = waste_ff + waste_fail - waste_ff * waste_fail;
    // Guard the last-ulp rounding of the three-term expression only.
    return std::clamp(total, 0.0, 1.0);
}

WasteBreakdown make_waste_breakdown(double waste_ff, double waste_fail,
                                    double time_lost_per_error) {
    WasteBreakdown b;
    b.waste_ff = waste_ff;
    b.waste_fail = waste_fail;
    b.waste_total = waste_ff + waste_fail - waste_ff * waste_fail;
    b.time_lost_per_error = time_lost_per_error;
    return b;
}

} // namespace sdcplan
