#pragma once

#include "harness/calibration.hpp"
#include "harness/config.hpp"
#include "harness/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace fronttrack::harness {

// Largest ratio lhs / (measure term) seen for one calibrated constant.
struct Observation {
    double max_ratio = 0.0;
    long count = 0;

    void add(double ratio);
};

struct CheckResult {
    std::string name;
    bool pass = true;
    bool skipped = false;
    std::string message;
    nlohmann::json detail = nlohmann::json::object();
    std::map<std::string, Observation> observed;

    void fail(const std::string& why);
};

struct ScenarioReport {
    std::string scenario;
    bool pass = true;
    std::string error;  // set when the run itself failed
    double seconds = 0.0;
    double engine_seconds = 0.0;
    std::size_t fronts = 0;
    std::size_t events = 0;
    std::vector<std::string> alarms;
    std::vector<CheckResult> checks;

    const CheckResult* find(const std::string& name) const;
    nlohmann::json to_json() const;
};

struct CheckOptions {
    const Calibration* calibration = nullptr;
    // Record ratios only; constants are taken as unbounded.
    bool calibrating = false;
    // Restrict to these checks (empty: the scenario's list).
    std::vector<std::string> only;
};


ScenarioReport run_checks(const ScenarioConfig& cfg, const CheckOptions& opt);
ScenarioReport run_checks(const Scenario& sc, const CheckOptions& opt);

} // namespace fronttrack::harness
