#pragma once

#include <fronttrack/engine.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fronttrack::harness {

constexpr int kConfigSchema = 1;

struct SystemConfig {
    std::string type = "burgers";  // burgers | p_system | polynomial
    double gamma = 2.0;
    std::optional<Box> box;
    PolynomialFluxSpec polynomial;
};

struct DatumConfig {
    std::string type = "riemann";  // riemann | steps | sampled
    // riemann
    State left;
    State right;
    std::optional<State> strengths;  // right state built as Lambda(strengths)(left)
    double x0 = 0.0;
    // steps
    std::vector<double> breaks;
    std::vector<State> values;
    // sampled: one expression in x per component, on `cells` equal cells of [lo, hi]
    std::vector<std::string> expressions;
    int cells = 0;
    double lo = 0.0;
    double hi = 1.0;
    std::string sample = "left";  // left | midpoint
};

struct CharacteristicRequest {
    double t0 = 0.0;
    double x0 = 0.0;
    int family = 0;
    double tau = 0.0;
    std::string selection = "minimal";
};

struct PositiveDecayConfig {
    double s = 0.0;
    double t = 0.0;
    std::vector<std::vector<std::pair<double, double>>> sets;
    int random_sets = 0;
    std::vector<double> density_times;
    double density_tol = 0.1;
};

struct ContDecayConfig {
    double t0 = 0.0;
    double tau = 0.0;
    int sets = 50;
    int max_intervals = 3;
    double min_length = 0.01;
    double max_length = 0.5;
};

struct OracleConfig {
    double t = 1.0;
    std::vector<double> nus{0.1, 0.05, 0.025};
    int grid = 4096;
    int samples = 20000;
    double min_order = 0.8;
    double max_seconds = 10.0;
};

struct ExceptionalConfig {
    double threshold = 1e-3;
    std::optional<std::vector<double>> expect;
    double tol = 1e-9;
};

struct AnalysisConfig {
    std::vector<int> families;  // empty: every family
    double glimm_c0 = -1.0;     // negative: 16 / min k
    int regions = 100;
    int max_intervals = 3;
    double tv_growth = 0.1;
    std::optional<PositiveDecayConfig> positive;
    std::optional<ContDecayConfig> cont;
    std::optional<OracleConfig> oracle;
    ExceptionalConfig exceptional;
};

struct ScenarioConfig {
    int schema = kConfigSchema;
    std::string name;
    std::string description;
    SystemConfig system;
    DatumConfig datum;
    RunParams params;
    std::vector<std::string> checks;
    std::string output;
    std::uint64_t seed = 1;
    std::vector<double> snapshots;  // empty: 0, T/4, T/2, 3T/4, T
    std::vector<CharacteristicRequest> characteristics;
    std::string inject;  // test mode: "glimm_violation"
    AnalysisConfig analysis;
    nlohmann::json source;  // the object the config was read from
};

// Every check name the harness knows, in report order.
const std::vector<std::string>& known_checks();

// Throws Error(InvalidArgument) on schema violations, unknown keys included.
ScenarioConfig parse_scenario(const nlohmann::json& j);
// A file holds either one scenario or {"schema": 1, "scenarios": [...]}.
std::vector<ScenarioConfig> load_scenarios(const std::string& path);
std::vector<ScenarioConfig> parse_scenarios(const nlohmann::json& j);

} // namespace fronttrack::harness
