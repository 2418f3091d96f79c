#include "sdcplan/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sdcplan/errors.hpp"
#include "sdcplan/units.hpp"

namespace sdcplan {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ScenarioError(path + ": " + what);
}

// Strict schema: every object lists its legal keys, anything else is an
// error naming the offending pointer.
void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const bool known =
            std::any_of(allowed.begin(), allowed.end(),
                        [&](const char* key) { return it.key() == key; });
        if (!known) fail(path + "/" + it.key(), "unknown field");
    }
}

const json& object_at(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "/" + key, "missing required field");
    if (!it->is_object()) fail(path + "/" + key, "expected an object");
    return *it;
}

const json* maybe(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double duration_field(const json& value, const std::string& path) {
    if (!value.is_string()) {
        fail(path, "expected a duration string with a unit suffix (e.g. \"600s\")");
    }
    try {
        return parse_duration(value.get<std::string>());
    } catch (const ScenarioError& e) {
        fail(path, e.what());
    }
}

double number_field(const json& value, const std::string& path) {
    if (!value.is_number()) fail(path, "expected a number");
    return value.get<double>();
}

std::int64_t integer_field(const json& value, const std::string& path) {
    if (!value.is_number_integer()) fail(path, "expected an integer");
    return value.get<std::int64_t>();
}

std::string string_field(const json& value, const std::string& path) {
    if (!value.is_string()) fail(path, "expected a string");
    return value.get<std::string>();
}

PlatformParams parse_platform(const json& block, const std::string& path) {
    check_keys(block, path,
               {"checkpoint_cost", "recovery_cost", "downtime",
                "verification_cost", "error_mean", "error_rate_from",
                "detection_mean"});
    PlatformParams p;
    if (const json* v = maybe(block, "checkpoint_cost")) {
        p.checkpoint_cost = duration_field(*v, path + "/checkpoint_cost");
    } else {
        fail(path + "/checkpoint_cost", "missing required field");
    }
    if (const json* v = maybe(block, "recovery_cost")) {
        p.recovery_cost = duration_field(*v, path + "/recovery_cost");
    } else {
        fail(path + "/recovery_cost", "missing required field");
    }
    if (const json* v = maybe(block, "downtime")) {
        p.downtime = duration_field(*v, path + "/downtime");
    }
    if (const json* v = maybe(block, "verification_cost")) {
        p.verification_cost = duration_field(*v, path + "/verification_cost");
    }

    const json* mean = maybe(block, "error_mean");
    const json* from = maybe(block, "error_rate_from");
    if ((mean != nullptr) == (from != nullptr)) {
        fail(path, "exactly one of error_mean / error_rate_from is required");
    }
    if (mean != nullptr) {
        const double mu = duration_field(*mean, path + "/error_mean");
        if (!(mu > 0.0)) fail(path + "/error_mean", "must be > 0");
        p.error_rate = 1.0 / mu;
    } else {
        const std::string sub = path + "/error_rate_from";
        if (!from->is_object()) fail(sub, "expected an object");
        check_keys(*from, sub, {"component_mtbf", "component_count"});
        const json* mtbf = maybe(*from, "component_mtbf");
        const json* count = maybe(*from, "component_count");
        if (mtbf == nullptr) fail(sub + "/component_mtbf", "missing required field");
        if (count == nullptr) fail(sub + "/component_count", "missing required field");
        const double m = duration_field(*mtbf, sub + "/component_mtbf");
        const std::int64_t n = integer_field(*count, sub + "/component_count");
        if (!(m > 0.0)) fail(sub + "/component_mtbf", "must be > 0");
        if (n < 1) fail(sub + "/component_count", "must be >= 1");
        p.error_rate = platform_mtbf(m, static_cast<std::uint64_t>(n));
    }

    if (const json* v = maybe(block, "detection_mean")) {
        const double mu = duration_field(*v, path + "/detection_mean");
        if (!(mu > 0.0)) fail(path + "/detection_mean", "must be > 0");
        p.detection_rate = 1.0 / mu;
    }
    return p;
}

WorkloadSpec parse_workload(const json& block, const std::string& path) {
    check_keys(block, path, {"total_work", "chunk_count"});
    WorkloadSpec w;
    if (const json* v = maybe(block, "total_work")) {
        w.total_work = duration_field(*v, path + "/total_work");
    } else {
        fail(path + "/total_work", "missing required field");
    }
    if (!(w.total_work > 0.0)) fail(path + "/total_work", "must be > 0");
    if (const json* v = maybe(block, "chunk_count")) {
        const std::int64_t n = integer_field(*v, path + "/chunk_count");
        if (n < 1) fail(path + "/chunk_count", "must be >= 1");
        w.chunk_count = n;
    }
    return w;
}

PolicySpec parse_policy(const json& block, const std::string& path) {
    check_keys(block, path, {"checkpoints_kept", "risk_threshold", "period"});
    PolicySpec policy;
    if (const json* v = maybe(block, "checkpoints_kept")) {
        policy.checkpoints_kept = integer_field(*v, path + "/checkpoints_kept");
    } else {
        fail(path + "/checkpoints_kept", "missing required field");
    }
    if (policy.checkpoints_kept < 1) {
        fail(path + "/checkpoints_kept", "must be >= 1");
    }
    if (const json* v = maybe(block, "risk_threshold")) {
        policy.risk_threshold = number_field(*v, path + "/risk_threshold");
        if (policy.risk_threshold < 0.0 || policy.risk_threshold >= 1.0) {
            fail(path + "/risk_threshold", "must lie in [0, 1)");
        }
    }
    if (const json* v = maybe(block, "period")) {
        policy.period = duration_field(*v, path + "/period");
    }
    return policy;
}

PatternMode parse_mode(const json& value, const std::string& path) {
    const std::string text = string_field(value, path);
    if (text == "checkpoint-heavy") return PatternMode::CheckpointHeavy;
    if (text == "verification-heavy") return PatternMode::VerificationHeavy;
    fail(path, "expected \"checkpoint-heavy\" or \"verification-heavy\"");
}

PatternRequest parse_pattern(const json& block, const std::string& path) {
    check_keys(block, path, {"mode", "k", "period", "k_max"});
    PatternRequest request;
    if (const json* v = maybe(block, "mode")) {
        request.mode = parse_mode(*v, path + "/mode");
    } else {
        fail(path + "/mode", "missing required field");
    }
    if (const json* v = maybe(block, "k")) {
        const std::int64_t k = integer_field(*v, path + "/k");
        if (k < 1) fail(path + "/k", "must be >= 1");
        request.k = k;
    }
    if (const json* v = maybe(block, "period")) {
        request.period = duration_field(*v, path + "/period");
        if (!request.k.has_value()) {
            fail(path + "/period", "a fixed period also needs k");
        }
    }
    if (const json* v = maybe(block, "k_max")) {
        request.k_max = integer_field(*v, path + "/k_max");
        if (request.k_max < 1) fail(path + "/k_max", "must be >= 1");
    }
    return request;
}

DistributionChoice parse_distribution(const json& block, const std::string& path) {
    check_keys(block, path, {"family", "shape"});
    DistributionChoice choice;
    const json* family = maybe(block, "family");
    if (family == nullptr) fail(path + "/family", "missing required field");
    const std::string text = string_field(*family, path + "/family");
    if (text == "exponential") {
        choice.family = DistributionSpec::Family::Exponential;
        if (maybe(block, "shape") != nullptr) {
            fail(path + "/shape", "shape only applies to the weibull family");
        }
    } else if (text == "weibull") {
        choice.family = DistributionSpec::Family::Weibull;
        const json* shape = maybe(block, "shape");
        if (shape == nullptr) fail(path + "/shape", "missing required field");
        choice.shape = number_field(*shape, path + "/shape");
        if (!(choice.shape > 0.0)) fail(path + "/shape", "must be > 0");
    } else {
        fail(path + "/family", "expected \"exponential\" or \"weibull\"");
    }
    return choice;
}

SweepSpec parse_sweep(const json& block, const std::string& path) {
    check_keys(block, path, {"variable", "from", "to", "points", "spacing"});
    SweepSpec sweep;
    const json* variable = maybe(block, "variable");
    if (variable == nullptr) fail(path + "/variable", "missing required field");
    sweep.variable = string_field(*variable, path + "/variable");
    if (sweep.variable != "T" && sweep.variable != "k" && sweep.variable != "V" &&
        sweep.variable != "S") {
        fail(path + "/variable", "expected one of \"T\", \"k\", \"V\", \"S\"");
    }
    const bool counts = sweep.variable == "k";
    const json* from = maybe(block, "from");
    const json* to = maybe(block, "to");
    if (from == nullptr) fail(path + "/from", "missing required field");
    if (to == nullptr) fail(path + "/to", "missing required field");
    sweep.from = counts ? number_field(*from, path + "/from")
                        : duration_field(*from, path + "/from");
    sweep.to = counts ? number_field(*to, path + "/to")
                      : duration_field(*to, path + "/to");
    if (!(sweep.to >= sweep.from)) fail(path + "/to", "must be >= from");
    if (const json* v = maybe(block, "points")) {
        sweep.points = integer_field(*v, path + "/points");
        if (sweep.points < 1) fail(path + "/points", "must be >= 1");
    } else if (counts) {
        sweep.points = static_cast<std::int64_t>(sweep.to - sweep.from) + 1;
    } else {
        fail(path + "/points", "missing required field");
    }
    if (const json* v = maybe(block, "spacing")) {
        const std::string text = string_field(*v, path + "/spacing");
        if (text == "log") {
            sweep.log_spacing = true;
            if (!(sweep.from > 0.0)) fail(path + "/from", "log spacing needs from > 0");
        } else if (text == "linear") {
            sweep.log_spacing = false;
        } else {
            fail(path + "/spacing", "expected \"log\" or \"linear\"");
        }
    }
    return sweep;
}

SimulationSpec parse_simulation(const json& block, const std::string& path) {
    check_keys(block, path, {"trials", "seed", "max_sim_time"});
    SimulationSpec sim;
    if (const json* v = maybe(block, "trials")) {
        sim.trials = integer_field(*v, path + "/trials");
        if (sim.trials < 1) fail(path + "/trials", "must be >= 1");
    }
    if (const json* v = maybe(block, "seed")) {
        if (v->is_number_unsigned()) {
            sim.seed = v->get<std::uint64_t>();
        } else if (v->is_number_integer()) {
            const auto seed = v->get<std::int64_t>();
            if (seed < 0) fail(path + "/seed", "must be >= 0");
            sim.seed = static_cast<std::uint64_t>(seed);
        } else {
            fail(path + "/seed", "expected a non-negative integer");
        }
    }
    if (const json* v = maybe(block, "max_sim_time")) {
        sim.max_sim_time = duration_field(*v, path + "/max_sim_time");
    }
    return sim;
}

ToleranceSpec parse_tolerances(const json& block, const std::string& path) {
    check_keys(block, path, {"waste_abs", "sigma"});
    ToleranceSpec tol;
    if (const json* v = maybe(block, "waste_abs")) {
        tol.waste_abs = number_field(*v, path + "/waste_abs");
        if (!(tol.waste_abs > 0.0)) fail(path + "/waste_abs", "must be > 0");
    }
    if (const json* v = maybe(block, "sigma")) {
        tol.sigma = number_field(*v, path + "/sigma");
        if (!(tol.sigma > 0.0)) fail(path + "/sigma", "must be > 0");
    }
    return tol;
}

} // namespace

DistributionSpec Scenario::error_law() const {
    if (error_dist.family == DistributionSpec::Family::Exponential) {
        return DistributionSpec::exponential(DistributionSpec::Role::ErrorArrival,
                                             params.error_rate);
    }
    return DistributionSpec::weibull_with_mean(DistributionSpec::Role::ErrorArrival,
                                               error_dist.shape, params.error_mean());
}

DistributionSpec Scenario::detection_law() const {
    const double mu = params.detection_mean();  // throws when unmodeled
    if (detection_dist.family == DistributionSpec::Family::Exponential) {
        return DistributionSpec::exponential(
            DistributionSpec::Role::DetectionLatency, 1.0 / mu);
    }
    return DistributionSpec::weibull_with_mean(
        DistributionSpec::Role::DetectionLatency, detection_dist.shape, mu);
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(origin + ": " + e.what());
    }
    if (!doc.is_object()) throw ScenarioError(origin + ": top level must be an object");

    check_keys(doc, origin,
               {"name", "notes", "platform", "workload", "policy", "pattern",
                "distributions", "sweep", "simulation", "tolerances"});

    Scenario s;
    if (const json* v = maybe(doc, "name")) {
        s.name = string_field(*v, origin + "/name");
        if (s.name.empty()) fail(origin + "/name", "must not be empty");
    } else {
        fail(origin + "/name", "missing required field");
    }
    if (const json* v = maybe(doc, "notes")) {
        s.notes = string_field(*v, origin + "/notes");
    }
    s.params = parse_platform(object_at(doc, origin, "platform"), origin + "/platform");
    s.workload = parse_workload(object_at(doc, origin, "workload"), origin + "/workload");
    if (const json* v = maybe(doc, "policy")) {
        if (!v->is_object()) fail(origin + "/policy", "expected an object");
        s.policy = parse_policy(*v, origin + "/policy");
    }
    if (const json* v = maybe(doc, "pattern")) {
        if (!v->is_object()) fail(origin + "/pattern", "expected an object");
        s.pattern = parse_pattern(*v, origin + "/pattern");
    }
    if (const json* v = maybe(doc, "distributions")) {
        if (!v->is_object()) fail(origin + "/distributions", "expected an object");
        check_keys(*v, origin + "/distributions", {"error", "detection"});
        if (const json* e = maybe(*v, "error")) {
            if (!e->is_object()) fail(origin + "/distributions/error", "expected an object");
            s.error_dist = parse_distribution(*e, origin + "/distributions/error");
        }
        if (const json* d = maybe(*v, "detection")) {
            if (!d->is_object()) fail(origin + "/distributions/detection", "expected an object");
            s.detection_dist = parse_distribution(*d, origin + "/distributions/detection");
        }
    }
    if (const json* v = maybe(doc, "sweep")) {
        if (!v->is_object()) fail(origin + "/sweep", "expected an object");
        s.sweep = parse_sweep(*v, origin + "/sweep");
    }
    if (const json* v = maybe(doc, "simulation")) {
        if (!v->is_object()) fail(origin + "/simulation", "expected an object");
        s.simulation = parse_simulation(*v, origin + "/simulation");
    }
    if (const json* v = maybe(doc, "tolerances")) {
        if (!v->is_object()) fail(origin + "/tolerances", "expected an object");
        s.tolerances = parse_tolerances(*v, origin + "/tolerances");
    }

    // A fixed pattern period must leave room for its fixed costs; check
    // here so the error names the file rather than surfacing later.
    if (s.pattern && s.pattern->fully_specified()) {
        PatternSpec spec{s.pattern->mode, *s.pattern->k, *s.pattern->period};
        if (!s.params.verification_cost.has_value()) {
            fail(origin + "/platform/verification_cost",
                 "required when a pattern block is present");
        }
        if (spec.fixed_cost(s.params) >= *s.pattern->period) {
            fail(origin + "/pattern/period",
                 "must exceed the pattern's fixed cost of " +
                     format_duration(spec.fixed_cost(s.params)));
        }
    } else if (s.pattern && !s.params.verification_cost.has_value()) {
        fail(origin + "/platform/verification_cost",
             "required when a pattern block is present");
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot read scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path);
}

std::string emit_scenario(const Scenario& s) {
    json doc;
    doc["name"] = s.name;
    if (!s.notes.empty()) doc["notes"] = s.notes;

    json platform;
    platform["checkpoint_cost"] = format_duration(s.params.checkpoint_cost);
    platform["recovery_cost"] = format_duration(s.params.recovery_cost);
    if (s.params.downtime != 0.0) platform["downtime"] = format_duration(s.params.downtime);
    if (s.params.verification_cost) {
        platform["verification_cost"] = format_duration(*s.params.verification_cost);
    }
    platform["error_mean"] = format_duration(1.0 / s.params.error_rate);
    if (s.params.detection_rate) {
        platform["detection_mean"] = format_duration(1.0 / *s.params.detection_rate);
    }
    doc["platform"] = platform;

    json workload;
    workload["total_work"] = format_duration(s.workload.total_work);
    if (s.workload.chunk_count) workload["chunk_count"] = *s.workload.chunk_count;
    doc["workload"] = workload;

    if (s.policy) {
        json policy;
        policy["checkpoints_kept"] = s.policy->checkpoints_kept;
        if (s.policy->risk_threshold != 0.0) {
            policy["risk_threshold"] = s.policy->risk_threshold;
        }
        if (s.policy->period) policy["period"] = format_duration(*s.policy->period);
        doc["policy"] = policy;
    }

    if (s.pattern) {
        json pattern;
        pattern["mode"] = s.pattern->mode == PatternMode::CheckpointHeavy
                              ? "checkpoint-heavy"
                              : "verification-heavy";
        if (s.pattern->k) pattern["k"] = *s.pattern->k;
        if (s.pattern->period) pattern["period"] = format_duration(*s.pattern->period);
        if (s.pattern->k_max != 50) pattern["k_max"] = s.pattern->k_max;
        doc["pattern"] = pattern;
    }

    auto emit_dist = [](const DistributionChoice& choice) {
        json d;
        if (choice.family == DistributionSpec::Family::Exponential) {
            d["family"] = "exponential";
        } else {
            d["family"] = "weibull";
            d["shape"] = choice.shape;
        }
        return d;
    };
    const DistributionChoice default_dist;
    if (!(s.error_dist == default_dist) || !(s.detection_dist == default_dist)) {
        json dists;
        if (!(s.error_dist == default_dist)) dists["error"] = emit_dist(s.error_dist);
        if (!(s.detection_dist == default_dist)) {
            dists["detection"] = emit_dist(s.detection_dist);
        }
        doc["distributions"] = dists;
    }

    if (s.sweep) {
        json sweep;
        sweep["variable"] = s.sweep->variable;
        if (s.sweep->variable == "k") {
            sweep["from"] = s.sweep->from;
            sweep["to"] = s.sweep->to;
        } else {
            sweep["from"] = format_duration(s.sweep->from);
            sweep["to"] = format_duration(s.sweep->to);
        }
        sweep["points"] = s.sweep->points;
        sweep["spacing"] = s.sweep->log_spacing ? "log" : "linear";
        doc["sweep"] = sweep;
    }

    if (!(s.simulation == SimulationSpec{})) {
        json sim;
        sim["trials"] = s.simulation.trials;
        sim["seed"] = s.simulation.seed;
        if (s.simulation.max_sim_time != 0.0) {
            sim["max_sim_time"] = format_duration(s.simulation.max_sim_time);
        }
        doc["simulation"] = sim;
    }

    if (!(s.tolerances == ToleranceSpec{})) {
        json tol;
        tol["waste_abs"] = s.tolerances.waste_abs;
        tol["sigma"] = s.tolerances.sigma;
        doc["tolerances"] = tol;
    }

    return doc.dump(2) + "\n";
}

} // namespace sdcplan
