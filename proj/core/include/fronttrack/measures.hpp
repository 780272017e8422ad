#pragma once

#include "fronttrack/engine.hpp"
#include "fronttrack/genealogy.hpp"

#include <string>
#include <vector>

namespace fronttrack {

struct SpaceTimeAtom {
    double t = 0.0;
    double x = 0.0;
    double weight = 0.0;
    int event_id = -1;  // -1 for atoms at t = 0
    std::string kind;
};

// Finite signed atomic measure on (t, x).
struct AtomicMeasure {
    std::string name;
    std::vector<SpaceTimeAtom> atoms;

    double total() const;
    double positive_mass() const;
    double negative_mass() const;  // <= 0
    double total_variation() const;
    // Mass on [t0, t1] x [x0, x1].
    double mass_in(double t0, double t1, double x0, double x1) const;
    // Weight carried by one event (0 when absent).
    double at_event(int event_id) const;
    // Weights summed per event id, indexed 0..n_events-1.
    std::vector<double> per_event(std::size_t n_events) const;
};

// Glimm functional with the interaction constant c0. Non-physical fronts count as the fastest
// family in the "_np" variant.
struct GlimmSnapshot {
    double t = 0.0;
    std::size_t epoch = 0;
    double V = 0.0;
    double Q = 0.0;
    double upsilon = 0.0;
    double V_np = 0.0;
    double Q_np = 0.0;
    double upsilon_np = 0.0;
};

struct GlimmViolation {
    int event_id = -1;
    double before = 0.0;
    double after = 0.0;
};

struct GlimmSeries {
    double c0 = 0.0;
    std::vector<GlimmSnapshot> snapshots;  // snapshots[k] holds on epoch k
    std::vector<GlimmViolation> violations;

    bool monotone() const { return violations.empty(); }
};

// 16 / (smallest GN constant); 16 when no field is genuinely nonlinear.
double default_glimm_c0(const SystemModel& model);

GlimmSnapshot glimm_snapshot(const RunLog& log, const std::vector<int>& ordered_fronts, double c0);
GlimmSeries glimm_series(const RunLog& log, const Timeline& timeline, double c0, double rel_tol = 1e-12);
double interaction_potential(const RunLog& log, const Timeline& timeline, double t);

struct InteractionMeasures {
    AtomicMeasure interaction;               // |s' s''| at events between two physical fronts
    AtomicMeasure interaction_cancellation;  // plus the same-family cancellation
};

InteractionMeasures interaction_measures(const RunLog& log);

struct WaveBalance {
    int family = 0;
    AtomicMeasure total;         // change of the i-th wave measure at every event
    AtomicMeasure physical;      // part carried by physical fronts
    AtomicMeasure non_physical;  // remainder carried by non-physical fronts
};

WaveBalance wave_balance_measure(const RunLog& log, int family);

// Atoms q at the nodes of the jump set (t = 0 starts included).
AtomicMeasure jump_balance_measure(const RunLog& log, const JumpSet& js);

// mu^IC + |mu_jump|, atom by atom.
AtomicMeasure icj_measure(const InteractionMeasures& im, const AtomicMeasure& jump);

} // namespace fronttrack
