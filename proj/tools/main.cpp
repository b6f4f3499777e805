// gyrostat: simulate and verify the reduced dynamics of a rigid body with an
// internal rotor.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>

#include "gyrostat/io/commands.hpp"

namespace {

bool use_color() {
    return std::getenv("NO_COLOR") == nullptr && ::isatty(STDERR_FILENO) != 0;
}

void report_status(const std::string& name, int code) {
    if (code == gyrostat::io::kExitOk) return;
    const bool color = use_color();
    std::cerr << (color ? "\033[31m" : "") << name << ": FAILED (exit " << code << ")"
              << (color ? "\033[0m" : "") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduced spacecraft-rotor dynamics: simulation, bracket audits, "
                 "Hamilton-Jacobi residual checks"};
    app.require_subcommand(1);

    std::string config;
    std::string out_csv;
    std::string summary;
    long samples = gyrostat::io::kDefaultAuditSamples;
    std::uint64_t seed = 0;

    auto* simulate = app.add_subcommand("simulate", "Integrate a scenario and write CSV + summary");
    simulate->add_option("--config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", out_csv, "Trajectory CSV output")->required();
    simulate->add_option("--summary", summary, "Run summary JSON output")->required();

    auto* audit = app.add_subcommand("bracket-audit",
                                     "Compare the analytic vector field with the bracket oracle");
    audit->add_option("--config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    audit->add_option("--samples", samples, "Number of random states")->check(CLI::PositiveNumber);
    auto* seed_opt = audit->add_option("--seed", seed, "splitmix64 seed (default: scenario seed)");

    auto* hj = app.add_subcommand("hj-check", "Evaluate Hamilton-Jacobi residuals");
    hj->add_option("--config", config, "Scenario JSON with an hj block")
        ->required()
        ->check(CLI::ExistingFile);

    auto* eq = app.add_subcommand("equilibrium", "Find a relative equilibrium by damped Newton");
    eq->add_option("--config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : gyrostat::io::kExitBadInput;
    }

    int code = gyrostat::io::kExitOk;
    std::string name;
    if (simulate->parsed()) {
        name = "simulate";
        code = gyrostat::io::cmd_simulate(config, out_csv, summary, std::cout, std::cerr);
    } else if (audit->parsed()) {
        name = "bracket-audit";
        code = gyrostat::io::cmd_bracket_audit(
            config, samples, seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt,
            std::cout, std::cerr);
    } else if (hj->parsed()) {
        name = "hj-check";
        code = gyrostat::io::cmd_hj_check(config, std::cout, std::cerr);
    } else if (eq->parsed()) {
        name = "equilibrium";
        code = gyrostat::io::cmd_equilibrium(config, std::cout, std::cerr);
    }
    report_status(name, code);
    return code;
}
