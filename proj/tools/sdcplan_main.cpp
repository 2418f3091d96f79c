#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sdcplan/commands.hpp"
#include "sdcplan/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "sdcplan: checkpoint/verification scheduling under silent data "
        "corruption"};
    app.require_subcommand(1);

    sdcplan::CommandOptions options;
    std::string sweep_text;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", options.scenario_path,
                        "scenario JSON file")
            ->required();
        cmd->add_option("--out", options.out_path,
                        "write results to this file instead of stdout");
    };
    auto add_table = [&](CLI::App* cmd) {
        cmd->add_option("--format", options.format,
                        "table format: csv (default) or json");
        cmd->add_option("--sweep", sweep_text,
                        "override the scenario sweep: var=lo:hi:points[:log|:linear]");
    };
    auto add_sim = [&](CLI::App* cmd) {
        cmd->add_option("--trials", options.trials, "Monte Carlo trial count")
            ->envname("SDCPLAN_TRIALS");
        cmd->add_option("--seed", options.seed, "RNG seed");
    };

    CLI::App* optimize = app.add_subcommand(
        "optimize", "chunking/period optima and risk summary (JSON)");
    add_common(optimize);

    CLI::App* risk = app.add_subcommand(
        "risk", "risk and waste across a period sweep (CSV)");
    add_common(risk);
    add_table(risk);

    CLI::App* pattern = app.add_subcommand(
        "pattern", "verification-pattern waste table (CSV)");
    add_common(pattern);
    add_table(pattern);

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Monte Carlo execution replay (JSON)");
    add_common(simulate);
    add_sim(simulate);

    CLI::App* validate = app.add_subcommand(
        "validate", "analytic model vs simulation, pass/fail per quantity");
    add_common(validate);
    add_sim(validate);

    CLI11_PARSE(app, argc, argv);

    if (!sweep_text.empty()) {
        try {
            options.sweep = sdcplan::parse_sweep_argument(sweep_text);
        } catch (const sdcplan::ScenarioError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }

    return sdcplan::run_command(app.get_subcommands().front()->get_name(), options);
}
