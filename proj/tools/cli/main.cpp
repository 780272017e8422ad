#include "commands.hpp"

#include <fronttrack/types.hpp>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <functional>
#include <cstdlib>
#include <iostream>
#include <map>

using namespace fronttrack::cli;

int main(int argc, char** argv) {
    // Log to stderr so JSON on stdout stays clean; FRONTTRACK_LOG=debug|info|warn|... sets the level.
    spdlog::set_default_logger(spdlog::stderr_color_mt("fronttrack"));
    spdlog::set_level(spdlog::level::warn);
    if (const char* lvl = std::getenv("FRONTTRACK_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));

    CLI::App app{"Front tracking for 1D hyperbolic systems, with measure and genealogy diagnostics"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("-c,--config", o.config, "scenario or suite JSON file");
        if (needs_config) c->required()->check(CLI::ExistingFile);
        sub->add_option("-o,--out", o.out, "output directory");
        sub->add_option("-s,--scenario", o.scenario, "scenario name inside a suite");
        sub->add_flag("--pretty", o.pretty, "indent JSON on stdout");
    };
    auto with_calibration = [&](CLI::App* sub) {
        sub->add_option("--calibration", o.calibration, "calibrated constants (default: data/calibration.json)")
            ->check(CLI::ExistingFile);
    };

    std::map<CLI::App*, std::function<int(const Options&)>> handlers;

    auto* riemann = app.add_subcommand("riemann", "solve one Riemann problem");
    common(riemann, false);
    riemann->add_option("--system", o.system, "burgers or p_system")->check(CLI::IsMember({"burgers", "p_system"}));
    riemann->add_option("--gamma", o.gamma, "p-system exponent");
    riemann->add_option("--left", o.left, "left state")->delimiter(',');
    riemann->add_option("--right", o.right, "right state")->delimiter(',');
    handlers[riemann] = cmd_riemann;

    auto* run = app.add_subcommand("run", "run front tracking; write the log and snapshots");
    common(run, true);
    handlers[run] = cmd_run;

    auto* measures = app.add_subcommand("measures", "write interaction, balance and jump measures");
    common(measures, true);
    handlers[measures] = cmd_measures;

    auto* fronts = app.add_subcommand("fronts", "extract maximal shock fronts for every ladder level");
    common(fronts, true);
    handlers[fronts] = cmd_fronts;

    auto* chars = app.add_subcommand("characteristics", "trace the characteristics requested in the config");
    common(chars, true);
    handlers[chars] = cmd_characteristics;

    auto* check = app.add_subcommand("check", "run the scenario checks");
    common(check, true);
    with_calibration(check);
    check->add_option("--only", o.only, "restrict to these checks")->delimiter(',');
    handlers[check] = cmd_check;

    auto* oracle = app.add_subcommand("oracle", "compare Burgers runs against the exact solution");
    common(oracle, true);
    with_calibration(oracle);
    handlers[oracle] = cmd_oracle;

    auto* report = app.add_subcommand("report", "check every scenario of a suite and aggregate");
    common(report, true);
    with_calibration(report);
    report->add_option("--only", o.only, "restrict to these checks")->delimiter(',');
    report->add_option("-j,--jobs", o.jobs, "parallel scenarios")->check(CLI::PositiveNumber);
    handlers[report] = cmd_report;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kUsage;
    }
    for (auto& [sub, fn] : handlers) {
        if (!sub->parsed()) continue;
        try {
            return fn(o);
        } catch (const fronttrack::Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return e.code() == fronttrack::ErrorCode::InvalidArgument ? kUsage : kViolation;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kViolation;
        }
    }
    return kUsage;
}
