#include "sdcplan/patterns.hpp"

#include <cmath>
#include <sstream>

#include "sdcplan/errors.hpp"

namespace sdcplan {

namespace {

void check_mode(const PatternSpec& spec, PatternMode expected, const char* fn) {
    if (spec.mode != expected) {
        std::ostringstream os;
        os << fn << ": wrong pattern mode for this formula";
        throw ParameterError(os.str());
    }
}

void check_index(std::int64_t i, std::int64_t k, const char* fn) {
    if (i < 1 || i > k) {
        std::ostringstream os;
        os << fn << ": segment index " << i << " out of range 1.." << k;
        throw ParameterError(os.str());
    }
}

// waste_fail(S) = alpha + beta*S for a fixed k; shared by the closed-form
// evaluation and the aS + b + c/S assembly so the two can never drift.
struct Affine {
    double alpha = 0.0;
    double beta = 0.0;
};

Affine kc1v_affine(std::int64_t k, const PlatformParams& p) {
    double mu_e = p.error_mean();
    double c = p.checkpoint_cost, r = p.recovery_cost, d = p.downtime;
    double v = p.verification();
    Affine af;
    if (k == 1) {
        // Single-segment boundary: the average over i degenerates to the
        // newest-checkpoint case (R + 2V + w); with S = w + C + V that is
        // affine with the coefficients below.  The k >= 2 polynomial does
        // not extend here.
        af.alpha = (d + r + v - c) / mu_e;
        af.beta = 1.0 / mu_e;
        return af;
    }
    double dk = static_cast<double>(k);
    af.alpha = ((r + v) * dk * dk + (2.0 * d + r + 2.0 * v - 2.0 * c) * dk - 3.0 * v)
             / (2.0 * dk * mu_e);
    af.beta = (dk + 1.0) / (2.0 * dk * mu_e);
    return af;
}

Affine kc1v_bsearch_affine(std::int64_t k, const PlatformParams& p) {
    if (k == 1) return kc1v_affine(1, p);
    double mu_e = p.error_mean();
    double c = p.checkpoint_cost, r = p.recovery_cost, d = p.downtime;
    double v = p.verification();
    double dk = static_cast<double>(k);
    Affine af;
    af.alpha = ((r + v) * 2.0 * dk * std::log(dk)
                + (2.0 * d + r + 2.0 * v - 2.0 * c) * dk - 3.0 * v)
             / (2.0 * dk * mu_e);
    af.beta = (dk + 1.0) / (2.0 * dk * mu_e);
    return af;
}

Affine kv1c_affine(std::int64_t k, const PlatformParams& p, Kv1cForm form) {
    double mu_e = p.error_mean();
    double dk = static_cast<double>(k);
    double ratio = (dk + 1.0) / (2.0 * dk);
    Affine af;
    af.alpha = (p.downtime + p.recovery_cost - ratio * p.checkpoint_cost) / (2.0 * mu_e);
    af.beta = ratio / (2.0 * mu_e);
    if (form == Kv1cForm::DirectAverage) {
        af.alpha *= 2.0;
        af.beta *= 2.0;
    }
    return af;
}

} // namespace

double PatternSpec::fixed_cost(const PlatformParams& p) const {
    if (k < 1) throw ParameterError("pattern: k must be >= 1");
    double dk = static_cast<double>(k);
    return mode == PatternMode::CheckpointHeavy
        ? dk * p.checkpoint_cost + p.verification()
        : dk * p.verification() + p.checkpoint_cost;
}

double PatternSpec::segment_work(const PlatformParams& p) const {
    double fixed = fixed_cost(p);
    if (!std::isfinite(period) || period <= fixed) {
        std::ostringstream os;
        os << "pattern: period " << period << "s must exceed the fixed costs "
           << fixed << "s to leave room for work";
        throw ParameterError(os.str());
    }
    return (period - fixed) / static_cast<double>(k);
}

double tlost_kc1v(std::int64_t i, const PatternSpec& spec, const PlatformParams& p) {
    check_mode(spec, PatternMode::CheckpointHeavy, "tlost_kc1v");
    check_index(i, spec.k, "tlost_kc1v");
    double w = spec.segment_work(p);
    double c = p.checkpoint_cost, r = p.recovery_cost, v = p.verification();
    double dk = static_cast<double>(spec.k);
    // The i == k branch is checked first on purpose: at k = 1 both boundary
    // formulas apply and the newest-checkpoint one is the convention that
    // keeps the i-average equal to the closed-form waste.
    if (i == spec.k) {
        return r + 2.0 * v + w;
    }
    if (i == 1) {
        return dk * (r + w) + (dk - 1.0) * (c + v) + v;
    }
    double steps = dk - static_cast<double>(i) + 1.0;
    return steps * (r + v + w) + (steps - 1.0) * c + v;
}

double waste_fail_kc1v(const PatternSpec& spec, const PlatformParams& p, bool averaged) {
    check_mode(spec, PatternMode::CheckpointHeavy, "waste_fail_kc1v");
    if (averaged) {
        double sum = 0.0;
        for (std::int64_t i = 1; i <= spec.k; ++i) {
            sum += tlost_kc1v(i, spec, p);
        }
        return (p.downtime + sum / static_cast<double>(spec.k)) / p.error_mean();
    }
    Affine af = kc1v_affine(spec.k, p);
    spec.segment_work(p); // feasibility check
    return af.alpha + af.beta * spec.period;
}

double waste_fail_kc1v_bsearch(const PatternSpec& spec, const PlatformParams& p) {
    check_mode(spec, PatternMode::CheckpointHeavy, "waste_fail_kc1v_bsearch");
    Affine af = kc1v_bsearch_affine(spec.k, p);
    spec.segment_work(p); // feasibility check
    return af.alpha + af.beta * spec.period;
}

double tlost_kv1c(std::int64_t i, const PatternSpec& spec, const PlatformParams& p) {
    check_mode(spec, PatternMode::VerificationHeavy, "tlost_kv1c");
    check_index(i, spec.k, "tlost_kv1c");
    double w = spec.segment_work(p);
    return p.recovery_cost + static_cast<double>(i) * (p.verification() + w);
}

double waste_fail_kv1c(const PatternSpec& spec, const PlatformParams& p, Kv1cForm form) {
    check_mode(spec, PatternMode::VerificationHeavy, "waste_fail_kv1c");
    Affine af = kv1c_affine(spec.k, p, form);
    spec.segment_work(p); // feasibility check
    return af.alpha + af.beta * spec.period;
}

double pattern_waste_ff(const PatternSpec& spec, const PlatformParams& p) {
    spec.segment_work(p); // feasibility check
    return spec.fixed_cost(p) / spec.period;
}

double pattern_waste(const PatternSpec& spec, const PlatformParams& p, Kv1cForm vh_form) {
    double ff = pattern_waste_ff(spec, p);
    double fail = spec.mode == PatternMode::CheckpointHeavy
        ? waste_fail_kc1v(spec, p)
        : waste_fail_kv1c(spec, p, vh_form);
    return combine_waste(ff, fail);
}

PatternCoefficients pattern_coefficients(PatternMode mode, std::int64_t k,
                                         const PlatformParams& p, Kv1cForm vh_form) {
    if (k < 1) throw ParameterError("pattern_coefficients: k must be >= 1");
    Affine af = mode == PatternMode::CheckpointHeavy
        ? kc1v_affine(k, p)
        : kv1c_affine(k, p, vh_form);
    PatternSpec probe{mode, k, 0.0};
    double phi = probe.fixed_cost(p);

    // combine(phi/S, alpha + beta S) expands exactly: the affine waste_fail
    // times the 1/S overhead contributes only constant and 1/S terms.
    PatternCoefficients pc;
    pc.a = af.beta;
    pc.b = af.alpha - af.beta * phi;
    pc.c = phi * (1.0 - af.alpha);
    pc.floor = phi;
    if (!(pc.a > 0.0) || !(pc.c > 0.0)) {
        std::ostringstream os;
        os << "pattern_coefficients: no feasible period for k = " << k
           << " (platform MTBF " << p.error_mean()
           << "s is too small for the first-order pattern model)";
        throw RegimeError(os.str());
    }
    pc.s_opt = std::sqrt(pc.c / pc.a);
    if (pc.s_opt <= phi) {
        pc.s_opt = phi;
        pc.clamped = true;
    }
    return pc;
}

PatternOptimum optimize_pattern(PatternMode mode, const PlatformParams& p,
                                std::int64_t k_max, Kv1cForm vh_form) {
    if (k_max < 1) throw ParameterError("optimize_pattern: k_max must be >= 1");
    PatternOptimum best;
    for (std::int64_t k = 1; k <= k_max; ++k) {
        PatternCoefficients pc;
        try {
            pc = pattern_coefficients(mode, k, p, vh_form);
        } catch (const RegimeError&) {
            continue; // this k has no first-order optimum; larger k only get worse
        }
        PatternOptimum::Entry row;
        row.k = k;
        row.s_opt = pc.s_opt;
        row.clamped = pc.clamped;
        // At the floor the pattern holds no work and waste degenerates to 1.
        row.waste = pc.clamped ? 1.0 : pc.a * pc.s_opt + pc.b + pc.c / pc.s_opt;
        best.table.push_back(row);
        if (!row.clamped && (best.k_opt == 0 || row.waste < best.waste)) {
            best.k_opt = k;
            best.s_opt = row.s_opt;
            best.waste = row.waste;
        }
    }
    if (best.k_opt == 0) {
        std::ostringstream os;
        os << "optimize_pattern: no k in 1.." << k_max << " admits a feasible period";
        throw RegimeError(os.str());
    }
    return best;
}

} // namespace sdcplan
