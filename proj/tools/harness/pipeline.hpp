#pragma once

#include "harness/config.hpp"

#include <fronttrack/engine.hpp>

#include <memory>
#include <optional>

namespace fronttrack::harness {

ModelPtr build_model(const SystemConfig& cfg);
StepDatum build_datum(const SystemModel& model, const DatumConfig& cfg);

struct Scenario {
    ScenarioConfig config;
    ModelPtr model;
    StepDatum datum;
    std::shared_ptr<const RunLog> log;
    std::shared_ptr<const Timeline> timeline;
    double seconds = 0.0;  // engine wall time
};

// Builds and runs one scenario. nu_override also resets a defaulted simplified-solver threshold.
Scenario execute(const ScenarioConfig& cfg, std::optional<double> nu_override = {});

// Snapshot times from the config, or 0, T/4, T/2, 3T/4, T.
std::vector<double> snapshot_times(const ScenarioConfig& cfg);

} // namespace fronttrack::harness
