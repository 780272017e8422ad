#pragma once

#include <string>
#include <vector>

namespace fronttrack::cli {

enum ExitCode { kPass = 0, kViolation = 1, kUsage = 2 };

struct Options {
    std::string config;
    std::string out;
    std::string scenario;     // pick one scenario of a suite by name
    std::string calibration;  // empty: the frozen file shipped in data/
    std::vector<std::string> only;
    int jobs = 1;
    bool pretty = false;
    // riemann
    std::string system = "burgers";
    double gamma = 2.0;
    std::vector<double> left;
    std::vector<double> right;
};

int cmd_riemann(const Options& o);
int cmd_run(const Options& o);
int cmd_measures(const Options& o);
int cmd_fronts(const Options& o);
int cmd_characteristics(const Options& o);
int cmd_check(const Options& o);
int cmd_oracle(const Options& o);
int cmd_report(const Options& o);

} // namespace fronttrack::cli
