#include "harness/calibration.hpp"

#include <fronttrack/serialize.hpp>
#include <fronttrack/types.hpp>

namespace fronttrack::harness {

const std::vector<std::string>& calibration_keys() {
    static const std::vector<std::string> keys{"wave_balance", "jump_positive", "terminal",      "ladder",
                                               "balance",      "positive_decay", "cont_decay"};
    return keys;
}

double Calibration::value(const std::string& key) const {
    auto it = constants.find(key);
    if (it == constants.end()) throw Error(ErrorCode::InvalidArgument, "constant '" + key + "' is not calibrated");
    return it->second.value;
}

nlohmann::json Calibration::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["factor"] = factor;
    j["scenarios"] = scenarios;
    nlohmann::json c = nlohmann::json::object();
    for (const auto& [k, v] : constants)
        c[k] = {{"value", v.value}, {"max_ratio", v.max_ratio}, {"observations", v.observations}, {"scenario", v.scenario}};
    j["constants"] = c;
    return j;
}

Calibration Calibration::from_json(const nlohmann::json& j) {
    Calibration cal;
    try {
        if (j.at("schema").get<int>() != 1) throw Error(ErrorCode::InvalidArgument, "calibration schema");
        cal.factor = j.at("factor").get<double>();
        cal.scenarios = j.at("scenarios").get<std::vector<std::string>>();
        for (const auto& [k, v] : j.at("constants").items()) {
            CalibratedConstant c;
            c.value = v.at("value").get<double>();
            c.max_ratio = v.at("max_ratio").get<double>();
            c.observations = v.at("observations").get<long>();
            c.scenario = v.at("scenario").get<std::string>();
            cal.constants[k] = c;
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("calibration file: ") + e.what());
    }
    return cal;
}

Calibration Calibration::load(const std::string& path) {
    try {
        return from_json(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, path + ": " + e.what());
    }
}

} // namespace fronttrack::harness
