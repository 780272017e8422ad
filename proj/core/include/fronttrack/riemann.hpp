#pragma once

#include "fronttrack/model.hpp"

#include <vector>

namespace fronttrack {

enum class WaveKind { Shock, RarefactionFan, Contact, NonPhysical };

const char* to_string(WaveKind kind);

struct SubJump {
    State left;
    State right;
    double strength = 0.0;
    double speed = 0.0;
};

struct Wave {
    int family = 0;  // 0-based; ignored for NonPhysical
    WaveKind kind = WaveKind::Shock;
    // Signed strength in lambda units for GN fields. For NonPhysical waves the Euclidean norm of
    // the state mismatch.
    double strength = 0.0;
    double speed = 0.0;  // for fans, the mean speed over the whole wave
    State left_state;
    State right_state;
    std::vector<SubJump> sub_jumps;  // RarefactionFan only, after discretization

    bool non_physical() const { return kind == WaveKind::NonPhysical; }
};

struct WaveFan {
    std::vector<Wave> waves;    // increasing family, non-physical last
    std::vector<State> states;  // omega_0 = u_l, ..., omega_N = u_r
    State strengths;            // sigma_1..sigma_N
    double residual = 0.0;      // |Lambda(sigma)(u_l) - u_r|_inf before the last state is pinned to u_r
    int iterations = 0;
};

// Psi_i(s)(u0): rarefaction curve for s >= 0 or linearly degenerate fields, Hugoniot locus otherwise.
State wave_curve_point(const SystemModel& model, const State& u0, int i, double s);

// Lambda(sigma)(u_l), with all intermediate states.
std::vector<State> lax_map(const SystemModel& model, const State& ul, const State& sigma);

WaveFan solve_riemann(const SystemModel& model, const State& ul, const State& ur);

std::vector<SubJump> discretize_rarefaction(const SystemModel& model, const Wave& wave, double nu);

struct IncomingWave {
    int family = 0;
    bool non_physical = false;
    double strength = 0.0;
};

// Keeps the sizes of the incoming physical waves (same-family waves are summed) and sends the
// remaining mismatch to u_r as one non-physical wave travelling at model.np_speed().
WaveFan solve_simplified(const SystemModel& model, const State& ul, const State& ur,
                         const std::vector<IncomingWave>& incoming);

struct LaxReport {
    double left_margin = 0.0;   // lambda_i(u-) - speed
    double right_margin = 0.0;  // speed - lambda_i(u+)
    bool admissible(double tol = 1e-10) const { return left_margin >= -tol && right_margin >= -tol; }
};

LaxReport lax_check(const SystemModel& model, const Wave& wave);

// Builds the physical wave of family i and strength s starting at ul.
Wave make_wave(const SystemModel& model, const State& ul, int i, double s);

} // namespace fronttrack
