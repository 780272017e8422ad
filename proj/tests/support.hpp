#pragma once

#include <fronttrack/engine.hpp>
#include <fronttrack/model.hpp>

#include <catch2/catch.hpp>

#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fttest {

using namespace fronttrack;

inline State st(std::initializer_list<double> v) {
    State s(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) s(k++) = x;
    return s;
}

// Runs `body` on `cases` generated inputs; a failing case reports its seed so it can be replayed.
template <class Gen, class Body>
void forall(int cases, std::uint64_t seed, Gen gen, Body body) {
    for (int k = 0; k < cases; ++k) {
        const std::uint64_t s = seed * 1000003ULL + static_cast<std::uint64_t>(k);
        std::mt19937_64 rng(s);
        auto input = gen(rng);
        INFO("case " << k << " seed " << s);
        body(input);
    }
}

inline double uniform(std::mt19937_64& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

inline StepDatum steps(std::vector<double> breaks, std::vector<State> values) {
    StepDatum d;
    d.breaks = std::move(breaks);
    d.values = std::move(values);
    return d;
}

inline StepDatum scalar_steps(std::vector<double> breaks, std::vector<double> values) {
    std::vector<State> v;
    for (double x : values) v.push_back(st({x}));
    return steps(std::move(breaks), std::move(v));
}

inline RunParams params(double nu, double horizon) {
    RunParams p;
    p.nu = nu;
    p.horizon = horizon;
    p.ladder = {{0.02, 0.1}, {0.01, 0.05}};
    return p;
}

inline RunLog run_datum(const SystemModel& m, const StepDatum& d, const RunParams& p) {
    return run(m, p, sample_initial_datum(m, d, p.nu, p.tv_guard));
}

// Random Burgers step datum: n pieces with values in [-amp, amp] on [0, 2].
inline StepDatum random_burgers_steps(std::mt19937_64& rng, int n, double amp) {
    std::vector<double> br;
    for (int k = 0; k + 1 < n; ++k) br.push_back(uniform(rng, 0.0, 2.0));
    std::sort(br.begin(), br.end());
    std::vector<double> v;
    for (int k = 0; k < n; ++k) v.push_back(uniform(rng, -amp, amp));
    return scalar_steps(br, v);
}

// Random small p-system step datum around (1, 0) with TV well inside the guard.
inline StepDatum random_psys_steps(std::mt19937_64& rng, int n, double amp) {
    std::vector<double> br;
    for (int k = 0; k + 1 < n; ++k) br.push_back(uniform(rng, -1.0, 1.0));
    std::sort(br.begin(), br.end());
    std::vector<State> v;
    for (int k = 0; k < n; ++k) v.push_back(st({1.0 + uniform(rng, -amp, amp), uniform(rng, -amp, amp)}));
    return steps(br, v);
}

} // namespace fttest
