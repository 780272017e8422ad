#pragma once

#include "fronttrack/model.hpp"
#include "fronttrack/riemann.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace fronttrack {

enum class FrontKind { Shock, Rarefaction, Contact, NonPhysical };

const char* to_string(FrontKind kind);

struct Front {
    int id = -1;
    int family = -1;  // 0-based, -1 for non-physical fronts
    FrontKind kind = FrontKind::Shock;
    double strength = 0.0;      // sigma; Euclidean mismatch norm for non-physical fronts
    double speed = 0.0;         // stated speed (Rankine-Hugoniot, mean, or the non-physical speed)
    double perturbation = 0.0;  // tie-breaking offset added to the stated speed
    double t_birth = 0.0;
    double x_birth = 0.0;
    double t_death = std::numeric_limits<double>::infinity();
    double x_death = std::numeric_limits<double>::quiet_NaN();
    State left;
    State right;
    int parent_event = -1;
    int child_event = -1;
    // Projection l~_i(u+, u-).(u+ - u-) for every family i: sigma e_family for physical fronts.
    State components;

    bool non_physical() const { return kind == FrontKind::NonPhysical; }
    bool is_shock_of(int i) const { return kind == FrontKind::Shock && family == i; }
    double track_speed() const { return speed + perturbation; }
    double x_at(double t) const { return x_birth + track_speed() * (t - t_birth); }
    bool alive_at(double t) const { return t_birth <= t && t < t_death; }
};

enum class SolverUsed { Accurate, Simplified };

const char* to_string(SolverUsed s);

struct InteractionEvent {
    int id = -1;
    double t = 0.0;
    double x = 0.0;
    std::vector<int> incoming;  // left to right, exactly two
    std::vector<int> outgoing;  // left to right
    SolverUsed solver = SolverUsed::Accurate;
    // Per-family strength components: left incoming, right incoming and the sum over outgoing
    // physical fronts; non-physical contributions are kept apart.
    std::vector<double> in_left;
    std::vector<double> in_right;
    std::vector<double> out;
    std::vector<double> np_in;
    std::vector<double> np_out;
    int cancelled = 0;  // outgoing waves dropped because |sigma| < 1e-14
};

struct RunParams {
    double nu = 0.1;
    double np_threshold = -1.0;  // rho_np; negative means nu^2
    double np_budget = -1.0;     // epsilon_nu; negative means 10 nu
    double speed_perturb = 1e-9; // delta
    double horizon = 1.0;
    std::vector<std::pair<double, double>> ladder;  // (eps0, eps1) per level k = 1, 2, ...
    double tv_guard = 0.5;
    std::size_t max_fronts = 1000000;
    std::size_t max_events = 10000000;

    double rho_np() const { return np_threshold >= 0.0 ? np_threshold : nu * nu; }
    double eps_nu() const { return np_budget >= 0.0 ? np_budget : 10.0 * nu; }
    void validate() const;
};

struct Alarm {
    std::string kind;
    double t = 0.0;
    double value = 0.0;
    std::string detail;
};

struct RunLog {
    RunParams params;
    std::string model_name;
    int n_eqs = 1;
    State far_left;                  // state left of every front
    std::vector<Front> fronts;       // indexed by id
    std::vector<int> initial;        // initial fronts, left to right
    std::vector<InteractionEvent> events;  // time order
    std::vector<int> final_fronts;   // fronts alive at the horizon, left to right
    std::vector<Alarm> alarms;
    double max_np_total = 0.0;

    const Front& front(int id) const { return fronts[static_cast<std::size_t>(id)]; }
};

// Piecewise constant initial datum: values[k] holds on (breaks[k-1], breaks[k]).
struct StepDatum {
    std::vector<double> breaks;
    std::vector<State> values;

    double total_variation() const;
};

struct InitialFronts {
    State far_left;
    std::vector<Front> fronts;  // left to right, ids 0..n-1, birth time 0
};

// Solves every Riemann problem of the step datum. The total-variation guard applies to systems
// (N > 1) only.
InitialFronts sample_initial_datum(const SystemModel& model, const StepDatum& datum, double nu,
                                   double tv_guard = 0.5);

RunLog run(const SystemModel& model, const RunParams& params, const InitialFronts& initial);

// Strength components of a front per family (see Front::components).
State front_components(const SystemModel& model, const Front& f);

// Fronts alive at t (right-continuous), left to right.
std::vector<int> fronts_at(const RunLog& log, double t);
State state_at(const RunLog& log, double t, double x);
double total_variation(const RunLog& log, double t);
double np_total_strength(const RunLog& log, double t);

struct ReplayResult {
    bool ok = true;
    std::string message;
};

// Rebuilds the ordered front list event by event and checks adjacency, positions and the final set.
ReplayResult replay(const RunLog& log);

// Ordered alive fronts between consecutive events; built once by replaying the log.
class Timeline {
public:
    explicit Timeline(const RunLog& log);

    const RunLog& log() const { return *log_; }
    // Epoch k covers [t_k, t_{k+1}) where t_0 = 0 and t_k is the time of event k-1.
    std::size_t epoch_of(double t) const;
    const std::vector<int>& epoch_fronts(std::size_t epoch) const { return epochs_[epoch]; }
    const std::vector<int>& fronts_at(double t) const { return epochs_[epoch_of(t)]; }
    std::size_t epoch_count() const { return epochs_.size(); }
    double epoch_start(std::size_t epoch) const;
    double epoch_end(std::size_t epoch) const;
    State state_at(double t, double x) const;
    // State just left of x at time t.
    State state_left_of(double t, double x) const;

private:
    const RunLog* log_;
    std::vector<double> event_times_;
    std::vector<std::vector<int>> epochs_;
};

// Deterministic value in (0, 1) used to de-synchronize collisions.
double id_hash(int id);

} // namespace fronttrack
