#include "sdcplan/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "sdcplan/errors.hpp"
#include "sdcplan/exact_model.hpp"
#include "sdcplan/firstorder.hpp"
#include "sdcplan/patterns.hpp"
#include "sdcplan/risk.hpp"
#include "sdcplan/simulator.hpp"
#include "sdcplan/units.hpp"

namespace sdcplan {

namespace {

using nlohmann::json;

// Result sink: a file when --out is given, stdout otherwise.  Summary lines
// that accompany a table go to the *other* stream so they never corrupt
// machine-readable output.
class Output {
  public:
    explicit Output(const std::string& path) : to_stdout_(path.empty()) {
        if (!to_stdout_) {
            file_.open(path, std::ios::binary);
            if (!file_) throw ScenarioError("cannot write output file: " + path);
        }
    }

    std::ostream& stream() { return to_stdout_ ? std::cout : file_; }
    std::ostream& summary() { return to_stdout_ ? std::cerr : std::cout; }

  private:
    std::ofstream file_;
    bool to_stdout_;
};

// Small column-typed table emitted as CSV (default) or a JSON array.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void emit(std::ostream& out, const std::string& format) const {
        if (format == "json") {
            json array = json::array();
            for (const auto& row : rows) {
                json obj;
                for (std::size_t c = 0; c < header.size(); ++c) obj[header[c]] = row[c];
                array.push_back(obj);
            }
            out << array.dump(2) << "\n";
            return;
        }
        for (std::size_t c = 0; c < header.size(); ++c) {
            out << (c ? "," : "") << header[c];
        }
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out << (c ? "," : "") << format_double(row[c]);
            }
            out << "\n";
        }
    }
};

void check_format(const std::string& format) {
    if (!format.empty() && format != "csv" && format != "json") {
        throw ScenarioError("unknown --format: " + format + " (expected csv or json)");
    }
}

std::vector<double> sweep_values(const SweepSpec& sweep) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(sweep.points));
    if (sweep.points == 1) {
        values.push_back(sweep.from);
        return values;
    }
    if (sweep.log_spacing) {
        const double ratio = std::log(sweep.to / sweep.from);
        for (std::int64_t i = 0; i < sweep.points; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(sweep.points - 1);
            values.push_back(sweep.from * std::exp(ratio * f));
        }
    } else {
        const double step = (sweep.to - sweep.from) / static_cast<double>(sweep.points - 1);
        for (std::int64_t i = 0; i < sweep.points; ++i) {
            values.push_back(sweep.from + step * static_cast<double>(i));
        }
    }
    values.back() = sweep.to;  // kill accumulated roundoff at the endpoint
    return values;
}

const SweepSpec* pick_sweep(const Scenario& scenario, const CommandOptions& options,
                            const std::string& variable) {
    if (options.sweep && options.sweep->variable == variable) return &*options.sweep;
    if (scenario.sweep && scenario.sweep->variable == variable) return &*scenario.sweep;
    return nullptr;
}

SimulationSpec effective_simulation(const Scenario& scenario,
                                    const CommandOptions& options) {
    SimulationSpec sim = scenario.simulation;
    if (options.trials) {
        if (*options.trials < 1) throw ScenarioError("--trials must be >= 1");
        sim.trials = *options.trials;
    }
    if (options.seed) sim.seed = *options.seed;
    return sim;
}

// The period the bounded-storage commands operate at: explicit in the
// policy, first-order optimum otherwise.
double bounded_period(const Scenario& scenario) {
    if (scenario.policy && scenario.policy->period) return *scenario.policy->period;
    return period_firstorder(scenario.params);
}

PatternSpec fixed_pattern(const Scenario& scenario) {
    const PatternRequest& request = *scenario.pattern;
    return PatternSpec{request.mode, *request.k, *request.period};
}

json chunking_json(const ChunkingSolution& plan) {
    json out;
    out["n_star"] = plan.n_star_real;
    out["n_opt"] = plan.n_opt;
    out["period"] = plan.period;
    out["expected_makespan"] = plan.expected_makespan;
    out["lambert_y"] = plan.lambert_y;
    out["degenerate"] = plan.degenerate;
    return out;
}

json risk_json(const RiskReport& report) {
    json out;
    out["period"] = report.period;
    out["p_fail"] = report.p_fail;
    out["p_lat"] = report.p_lat;
    out["p_irrec"] = report.p_irrec;
    out["p_risk"] = report.p_risk;
    out["expected_executions"] = report.expected_executions;
    out["period_count"] = report.period_count;
    if (report.note) out["note"] = *report.note;
    return out;
}

// ---------------------------------------------------------------- optimize

void cmd_optimize(const Scenario& scenario, const CommandOptions&, Output& output) {
    const PlatformParams& p = scenario.params;
    const bool has_detection = p.detection_rate.has_value();
    if (!has_detection && !scenario.pattern) {
        throw ScenarioError(
            "optimize needs platform/detection_mean (for the latent-error models) "
            "or a pattern block");
    }

    json out;
    out["scenario"] = scenario.name;
    out["period_young"] = period_young(p);

    if (has_detection) {
        out["optimal_chunks"] = chunking_json(optimal_chunks(scenario.workload, p));
        try {
            const double t_opt = period_firstorder(p);
            out["period_firstorder"] = t_opt;
            out["firstorder_degenerate"] = false;
            out["waste_at_optimum"] =
                waste_general(t_opt, p).breakdown.waste_total;

            if (scenario.policy) {
                const BoundedStoragePolicy policy{scenario.policy->checkpoints_kept,
                                                  scenario.policy->risk_threshold};
                const double period =
                    scenario.policy->period ? *scenario.policy->period : t_opt;
                json risk = risk_json(risk_report(period, policy, scenario.workload, p,
                                                  scenario.error_law(),
                                                  scenario.detection_law()));
                if (policy.risk_threshold > 0.0) {
                    try {
                        const double t_min =
                            solve_t_min(policy, scenario.workload, p,
                                        scenario.error_law(), scenario.detection_law());
                        risk["t_min"] = t_min;
                        risk["period_recommended"] = std::max(t_min, period);
                    } catch (const RegimeError& e) {
                        risk["t_min_error"] = e.what();
                    }
                }
                out["risk"] = risk;
            }
        } catch (const RegimeError&) {
            // mu_e <= D + R + mu_d: the first-order optimum does not exist.
            // Report the degenerate marker and leave the exact-model output
            // to carry the recommendation.
            out["period_firstorder"] = 0.0;
            out["firstorder_degenerate"] = true;
        }
    }

    if (scenario.pattern) {
        const PatternRequest& request = *scenario.pattern;
        json pattern;
        pattern["mode"] = request.mode == PatternMode::CheckpointHeavy
                              ? "checkpoint-heavy"
                              : "verification-heavy";
        if (request.fully_specified()) {
            pattern["k"] = *request.k;
            pattern["period"] = *request.period;
            pattern["waste"] = pattern_waste(fixed_pattern(scenario), p);
        } else if (request.k) {
            const PatternCoefficients co =
                pattern_coefficients(request.mode, *request.k, p);
            pattern["k"] = *request.k;
            pattern["s_opt"] = co.s_opt;
            pattern["clamped"] = co.clamped;
            pattern["waste"] = co.clamped
                                   ? 1.0
                                   : pattern_waste(PatternSpec{request.mode,
                                                               *request.k, co.s_opt},
                                                   p);
        } else {
            const PatternOptimum best = optimize_pattern(request.mode, p, request.k_max);
            pattern["k_opt"] = best.k_opt;
            pattern["s_opt"] = best.s_opt;
            pattern["waste"] = best.waste;
        }
        out["pattern"] = pattern;
    }

    output.stream() << out.dump(2) << "\n";
}

// -------------------------------------------------------------------- risk

SweepSpec default_risk_sweep(const PlatformParams& p) {
    const double mu_e = p.error_mean();
    double t_opt = 0.0;
    try {
        t_opt = period_firstorder(p);
    } catch (const RegimeError&) {
        t_opt = period_young(p);
    }
    SweepSpec sweep;
    sweep.variable = "T";
    if (t_opt > p.checkpoint_cost) {
        sweep.from = std::max(t_opt / 8.0, p.checkpoint_cost + 1.0);
        sweep.to = std::min(10.0 * mu_e, 50.0 * t_opt);
    } else {
        sweep.from = std::max(mu_e / 1000.0, p.checkpoint_cost + 1.0);
        sweep.to = 10.0 * mu_e;
    }
    sweep.points = 60;
    sweep.log_spacing = true;
    return sweep;
}

void cmd_risk(const Scenario& scenario, const CommandOptions& options, Output& output) {
    if (!scenario.policy) {
        throw ScenarioError("risk command needs a policy block (checkpoints_kept)");
    }
    const PlatformParams& p = scenario.params;
    const BoundedStoragePolicy policy{scenario.policy->checkpoints_kept,
                                      scenario.policy->risk_threshold};
    const DistributionSpec error_law = scenario.error_law();
    const DistributionSpec detection_law = scenario.detection_law();

    SweepSpec sweep;
    if (const SweepSpec* chosen = pick_sweep(scenario, options, "T")) {
        sweep = *chosen;
    } else {
        sweep = default_risk_sweep(p);
    }

    Table table;
    table.header = {"T", "p_fail", "p_lat", "p_irrec", "p_risk", "waste_total"};
    for (double period : sweep_values(sweep)) {
        if (period <= p.checkpoint_cost) {
            throw ScenarioError("sweep includes periods at or below the checkpoint cost (" +
                                format_duration(p.checkpoint_cost) + ")");
        }
        const RiskReport report =
            risk_report(period, policy, scenario.workload, p, error_law, detection_law);
        const double waste = waste_general(period, p).breakdown.waste_total;
        table.rows.push_back({period, report.p_fail, report.p_lat, report.p_irrec,
                              report.p_risk, waste});
    }
    table.emit(output.stream(), options.format);

    std::ostream& summary = output.summary();
    double t_opt = 0.0;
    bool have_t_opt = false;
    try {
        t_opt = period_firstorder(p);
        have_t_opt = true;
        summary << "period_waste_optimal = " << format_double(t_opt) << " s\n";
    } catch (const RegimeError& e) {
        summary << "period_waste_optimal: " << e.what() << "\n";
    }
    if (policy.risk_threshold > 0.0) {
        try {
            const double t_min =
                solve_t_min(policy, scenario.workload, p, error_law, detection_law);
            summary << "t_min = " << format_double(t_min)
                    << " s (risk_threshold = " << format_double(policy.risk_threshold)
                    << ")\n";
            const double recommended = have_t_opt ? std::max(t_min, t_opt) : t_min;
            summary << "period_recommended = " << format_double(recommended) << " s\n";
        } catch (const RegimeError& e) {
            summary << "t_min: " << e.what() << "\n";
        }
    }
}

// ----------------------------------------------------------------- pattern

void cmd_pattern(const Scenario& scenario, const CommandOptions& options,
                 Output& output) {
    if (!scenario.pattern) {
        throw ScenarioError("pattern command needs a pattern block");
    }
    const PatternRequest& request = *scenario.pattern;
    const PlatformParams& p = scenario.params;

    if (const SweepSpec* sweep = pick_sweep(scenario, options, "V")) {
        // Re-optimize for each verification cost: one row per V.
        Table table;
        table.header = {"V", "k_opt", "s_opt", "waste"};
        for (double v : sweep_values(*sweep)) {
            PlatformParams varied = p;
            varied.verification_cost = v;
            const PatternOptimum best =
                optimize_pattern(request.mode, varied, request.k_max);
            table.rows.push_back({v, static_cast<double>(best.k_opt), best.s_opt,
                                  best.waste});
        }
        table.emit(output.stream(), options.format);
        return;
    }

    if (const SweepSpec* sweep = pick_sweep(scenario, options, "S")) {
        if (!request.k) {
            throw ScenarioError("sweeping S needs a fixed pattern k");
        }
        Table table;
        table.header = {"S", "waste"};
        for (double s : sweep_values(*sweep)) {
            const PatternSpec spec{request.mode, *request.k, s};
            table.rows.push_back({s, pattern_waste(spec, p)});
        }
        table.emit(output.stream(), options.format);
        return;
    }

    std::int64_t k_lo = 1;
    std::int64_t k_hi = request.k_max;
    if (const SweepSpec* sweep = pick_sweep(scenario, options, "k")) {
        k_lo = static_cast<std::int64_t>(std::llround(sweep->from));
        k_hi = static_cast<std::int64_t>(std::llround(sweep->to));
        if (k_lo < 1 || k_hi < k_lo) throw ScenarioError("bad k sweep range");
    } else if (request.k) {
        k_lo = k_hi = *request.k;
    }

    Table table;
    table.header = {"k", "s_opt", "waste", "clamped"};
    std::optional<PatternOptimum::Entry> best;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        try {
            const PatternCoefficients co = pattern_coefficients(request.mode, k, p);
            const double waste =
                co.clamped ? 1.0
                           : pattern_waste(PatternSpec{request.mode, k, co.s_opt}, p);
            table.rows.push_back({static_cast<double>(k), co.s_opt, waste,
                                  co.clamped ? 1.0 : 0.0});
            if (!co.clamped && (!best || waste < best->waste)) {
                best = PatternOptimum::Entry{k, co.s_opt, waste, false};
            }
        } catch (const RegimeError&) {
            // This k admits no feasible period; skip the row.
        }
    }
    if (table.rows.empty()) {
        throw RegimeError("no pattern in k = [" + std::to_string(k_lo) + ", " +
                          std::to_string(k_hi) + "] admits a feasible period");
    }
    table.emit(output.stream(), options.format);
    if (best) {
        output.summary() << "k_opt = " << best->k
                         << ", s_opt = " << format_double(best->s_opt)
                         << " s, waste = " << format_double(best->waste) << "\n";
    }
}

// ---------------------------------------------------------------- simulate

SimConfig build_sim_config(const Scenario& scenario, const SimulationSpec& sim) {
    SimConfig config;
    config.workload.total_work = scenario.workload.total_work;
    config.params = scenario.params;
    config.error_law = scenario.error_law();
    config.trials = sim.trials;
    config.seed = sim.seed;
    config.max_sim_time = sim.max_sim_time;

    if (scenario.pattern && scenario.pattern->fully_specified()) {
        config.model = PatternSim{fixed_pattern(scenario)};
        return config;
    }
    if (!scenario.policy) {
        throw ScenarioError(
            "simulation needs a fully specified pattern (k and period) or a "
            "policy block");
    }
    BoundedStorageSim bounded;
    bounded.period = bounded_period(scenario);
    bounded.checkpoints_kept = scenario.policy->checkpoints_kept;
    config.model = bounded;
    config.detection_law = scenario.detection_law();
    return config;
}

void cmd_simulate(const Scenario& scenario, const CommandOptions& options,
                  Output& output) {
    const SimulationSpec sim = effective_simulation(scenario, options);
    SimConfig config = build_sim_config(scenario, sim);
    config.keep_trials = false;  // aggregates only; records stay internal
    const SimResult result = simulate(config);

    json out;
    out["scenario"] = scenario.name;
    if (const auto* bounded = std::get_if<BoundedStorageSim>(&config.model)) {
        out["model"] = "bounded-storage";
        out["period"] = bounded->period;
        out["checkpoints_kept"] = bounded->checkpoints_kept;
    } else {
        const auto& spec = std::get<PatternSim>(config.model).pattern;
        out["model"] = "pattern";
        out["mode"] = spec.mode == PatternMode::CheckpointHeavy ? "checkpoint-heavy"
                                                                : "verification-heavy";
        out["k"] = spec.k;
        out["period"] = spec.period;
    }
    out["trials"] = result.trials;
    out["seed"] = sim.seed;
    out["mean_makespan"] = result.mean_makespan;
    out["makespan_stddev"] = result.makespan_stddev;
    out["effective_work"] = result.effective_work;
    out["waste_mean"] = result.waste_mean;
    out["waste_stderr"] = result.waste_stderr;
    out["irrecoverable_count"] = result.irrecoverable_count;
    out["attempts_total"] = result.attempts_total;
    output.stream() << out.dump(2) << "\n";
}

// ---------------------------------------------------------------- validate

struct CheckRow {
    std::string quantity;
    double analytic;
    double simulated;
    double tolerance;
    bool one_sided;  // pass when simulated <= analytic + tolerance
    bool passed;
};

void cmd_validate(const Scenario& scenario, const CommandOptions& options,
                  Output& output) {
    const SimulationSpec sim_spec = effective_simulation(scenario, options);
    SimConfig config = build_sim_config(scenario, sim_spec);
    const SimResult result = simulate(config);
    const ToleranceSpec& tol = scenario.tolerances;

    std::vector<CheckRow> rows;
    if (const auto* bounded = std::get_if<BoundedStorageSim>(&config.model)) {
        const double analytic_waste =
            waste_general(bounded->period, scenario.params).breakdown.waste_total;
        const double waste_tol =
            std::max(tol.waste_abs, tol.sigma * result.waste_stderr);
        rows.push_back({"waste", analytic_waste, result.waste_mean, waste_tol, false,
                        std::abs(result.waste_mean - analytic_waste) <= waste_tol});

        const BoundedStoragePolicy policy{bounded->checkpoints_kept,
                                          scenario.policy ? scenario.policy->risk_threshold
                                                          : 0.0};
        const RiskReport risk =
            risk_report(bounded->period, policy, scenario.workload, scenario.params,
                        scenario.error_law(), scenario.detection_law());
        // Each attempt is an independent from-scratch execution, so the
        // per-attempt irrecoverable frequency estimates p_risk.  The
        // analytic value is an upper bound, hence the one-sided check.
        const double attempts = static_cast<double>(result.attempts_total);
        const double freq =
            static_cast<double>(result.irrecoverable_count) / attempts;
        const double freq_stderr = std::sqrt(std::max(0.0, freq * (1.0 - freq)) / attempts);
        const double band = tol.sigma * freq_stderr;
        rows.push_back({"irrecoverable_frequency", risk.p_risk, freq, band, true,
                        freq <= risk.p_risk + band});
    } else {
        const auto& spec = std::get<PatternSim>(config.model).pattern;
        // DirectAverage is the form the event-by-event replay measures; the
        // published variant is reported by the analytic commands.
        const double analytic_waste =
            pattern_waste(spec, scenario.params, Kv1cForm::DirectAverage);
        const double waste_tol =
            std::max(tol.waste_abs, tol.sigma * result.waste_stderr);
        rows.push_back({"waste", analytic_waste, result.waste_mean, waste_tol, false,
                        std::abs(result.waste_mean - analytic_waste) <= waste_tol});
        rows.push_back({"irrecoverable_count", 0.0,
                        static_cast<double>(result.irrecoverable_count), 0.0, true,
                        result.irrecoverable_count == 0});
    }

    std::ostream& out = output.stream();
    out << "scenario: " << scenario.name << " (trials = " << result.trials
        << ", seed = " << sim_spec.seed << ")\n";
    int failures = 0;
    for (const CheckRow& row : rows) {
        out << (row.passed ? "[pass] " : "[FAIL] ") << row.quantity
            << ": analytic = " << format_double(row.analytic)
            << ", simulated = " << format_double(row.simulated)
            << ", tolerance = " << (row.one_sided ? "+" : "+/-")
            << format_double(row.tolerance) << "\n";
        if (!row.passed) ++failures;
    }
    out << (failures == 0 ? "result: PASS" : "result: FAIL") << "\n";
    if (failures > 0) {
        throw ValidationError(std::to_string(failures) + " of " +
                              std::to_string(rows.size()) +
                              " checks outside tolerance for scenario " + scenario.name);
    }
}

} // namespace

SweepSpec parse_sweep_argument(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ScenarioError("--sweep expects var=lo:hi:points[:log|:linear]");
    }
    SweepSpec sweep;
    sweep.variable = text.substr(0, eq);
    if (sweep.variable != "T" && sweep.variable != "k" && sweep.variable != "V" &&
        sweep.variable != "S") {
        throw ScenarioError("--sweep variable must be one of T, k, V, S");
    }

    std::vector<std::string> parts;
    std::string rest = text.substr(eq + 1);
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = rest.find(':', start);
        if (colon == std::string::npos) {
            parts.push_back(rest.substr(start));
            break;
        }
        parts.push_back(rest.substr(start, colon - start));
        start = colon + 1;
    }
    if (parts.size() != 3 && parts.size() != 4) {
        throw ScenarioError("--sweep expects var=lo:hi:points[:log|:linear]");
    }

    auto parse_value = [&](const std::string& part) -> double {
        try {
            return parse_duration(part);  // suffixed duration
        } catch (const ScenarioError&) {
            char* end = nullptr;
            const double value = std::strtod(part.c_str(), &end);
            if (end == part.c_str() || *end != '\0') {
                throw ScenarioError("--sweep: cannot parse value '" + part + "'");
            }
            return value;  // bare number: seconds (or a count for k)
        }
    };
    sweep.from = parse_value(parts[0]);
    sweep.to = parse_value(parts[1]);
    if (!(sweep.to >= sweep.from)) throw ScenarioError("--sweep: hi must be >= lo");
    {
        char* end = nullptr;
        const long points = std::strtol(parts[2].c_str(), &end, 10);
        if (end == parts[2].c_str() || *end != '\0' || points < 1) {
            throw ScenarioError("--sweep: points must be a positive integer");
        }
        sweep.points = points;
    }
    if (parts.size() == 4) {
        if (parts[3] == "log") {
            sweep.log_spacing = true;
            if (!(sweep.from > 0.0)) {
                throw ScenarioError("--sweep: log spacing needs lo > 0");
            }
        } else if (parts[3] == "linear") {
            sweep.log_spacing = false;
        } else {
            throw ScenarioError("--sweep: spacing must be log or linear");
        }
    }
    return sweep;
}

int run_command(const std::string& command, const CommandOptions& options) {
    try {
        check_format(options.format);
        const Scenario scenario = load_scenario(options.scenario_path);
        Output output(options.out_path);
        if (command == "optimize") {
            cmd_optimize(scenario, options, output);
        } else if (command == "risk") {
            cmd_risk(scenario, options, output);
        } else if (command == "pattern") {
            cmd_pattern(scenario, options, output);
        } else if (command == "simulate") {
            cmd_simulate(scenario, options, output);
        } else if (command == "validate") {
            cmd_validate(scenario, options, output);
        } else {
            throw ScenarioError("unknown command: " + command);
        }
        return 0;
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RegimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const RunawayError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace sdcplan
