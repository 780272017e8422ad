#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

namespace fronttrack::harness {

// Frozen O(1) constants: twice the largest ratio seen on the calibration scenarios.
struct CalibratedConstant {
    double value = 0.0;
    double max_ratio = 0.0;
    long observations = 0;
    std::string scenario;  // where the max ratio was seen
};

struct Calibration {
    double factor = 2.0;
    std::map<std::string, CalibratedConstant> constants;
    std::vector<std::string> scenarios;

    bool has(const std::string& key) const { return constants.count(key) != 0; }
    // Throws Error(InvalidArgument) when the constant was never calibrated.
    double value(const std::string& key) const;

    nlohmann::json to_json() const;
    static Calibration from_json(const nlohmann::json& j);
    static Calibration load(const std::string& path);
};

// Keys of every calibrated constant.
const std::vector<std::string>& calibration_keys();

} // namespace fronttrack::harness
