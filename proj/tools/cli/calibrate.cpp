// Runs the calibration suite with unbounded constants and freezes factor x (largest observed ratio).

#include <harness/calibration.hpp>
#include <harness/checks.hpp>
#include <harness/config.hpp>

#include <fronttrack/serialize.hpp>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

using namespace fronttrack;
using namespace fronttrack::harness;

int main(int argc, char** argv) {
    spdlog::set_level(spdlog::level::info);
    if (const char* lvl = std::getenv("FRONTTRACK_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));

    CLI::App app{"Calibrate the O(1) constants of the approximate balance checks"};
    std::string suite = std::string(FRONTTRACK_DATA_DIR) + "/calibration_suite.json";
    std::string out = std::string(FRONTTRACK_DATA_DIR) + "/calibration.json";
    double factor = 2.0;
    app.add_option("-c,--config", suite, "calibration suite")->check(CLI::ExistingFile);
    app.add_option("-o,--out", out, "where to write the constants");
    app.add_option("--factor", factor, "safety factor")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    std::vector<ScenarioConfig> cfgs;
    try {
        cfgs = load_scenarios(suite);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    Calibration cal;
    cal.factor = factor;
    for (const auto& key : calibration_keys()) cal.constants[key] = {};
    CheckOptions opt;
    opt.calibrating = true;
    int failures = 0;
    for (const auto& cfg : cfgs) {
        cal.scenarios.push_back(cfg.name);
        const ScenarioReport rep = run_checks(cfg, opt);
        if (!rep.error.empty()) {
            spdlog::error("{}: {}", cfg.name, rep.error);
            ++failures;
            continue;
        }
        for (const auto& c : rep.checks) {
            if (!c.pass) spdlog::warn("{}: {} fails without constants: {}", cfg.name, c.name, c.message);
            for (const auto& [key, obs] : c.observed) {
                auto& k = cal.constants[key];
                k.observations += obs.count;
                if (obs.count > 0 && obs.max_ratio > k.max_ratio) {
                    k.max_ratio = obs.max_ratio;
                    k.scenario = cfg.name;
                }
            }
        }
        spdlog::info("{}: {} checks, {:.2f} s", cfg.name, rep.checks.size(), rep.seconds);
    }
    for (auto& [key, k] : cal.constants) {
        // A ratio never seen above zero still gets a usable constant.
        k.value = factor * (k.max_ratio > 0.0 ? k.max_ratio : 1.0);
        std::cout << key << ": " << format_double(k.value) << " (max ratio " << format_double(k.max_ratio) << " over "
                  << k.observations << " observations)\n";
    }
    write_text_file(out, cal.to_json().dump(2) + "\n");
    std::cout << "wrote " << out << "\n";
    return failures == 0 ? 0 : 1;
}
