#pragma once

#include "fronttrack/engine.hpp"
#include "fronttrack/genealogy.hpp"
#include "fronttrack/measures.hpp"

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fronttrack {

using Interval = std::pair<double, double>;  // closed [first, second]

struct Atom1D {
    double x = 0.0;
    double weight = 0.0;
};

// Signed atomic measure on the line; atom positions strictly increase.
class SignedAtomicMeasure1D {
public:
    SignedAtomicMeasure1D() = default;
    // Atoms sharing a position are summed.
    static SignedAtomicMeasure1D from_atoms(std::vector<Atom1D> atoms);

    const std::vector<Atom1D>& atoms() const { return atoms_; }
    double total() const;
    double mass(const Interval& iv) const;
    double mass(const std::vector<Interval>& ivs) const;
    double positive_mass(const std::vector<Interval>& ivs) const;
    SignedAtomicMeasure1D restricted(const std::vector<Interval>& ivs) const;
    SignedAtomicMeasure1D complement(const std::vector<Interval>& ivs) const;

private:
    std::vector<Atom1D> atoms_;
};

struct WaveMeasures {
    SignedAtomicMeasure1D all;
    SignedAtomicMeasure1D jump;  // restriction to the jump set
    SignedAtomicMeasure1D cont;  // remainder
};

// i-th wave measure at time t: l~_i(u+, u-).(u+ - u-) at every front. Throws JumpSetMissing if js is
// null or tracks another family. physical_only drops non-physical fronts.
WaveMeasures wave_measure_at(const Timeline& tl, double t, int family, const JumpSet* js,
                             bool physical_only = false);

enum class CharSelection { Minimal, Maximal };

struct Polyline {
    std::vector<double> t;
    std::vector<double> x;

    double at(double time) const;
    double slope_after(double time) const;
};

// Generalized i-characteristic from (t0, x0) up to t1, with x' in [lambda_i(u+), lambda_i(u-)].
Polyline trace_characteristic(const Timeline& tl, const SystemModel& model, double t0, double x0, int family,
                              double t1, CharSelection sel = CharSelection::Minimal);
Polyline minimal_characteristic(const Timeline& tl, const SystemModel& model, double t0, double x0, int family,
                                double tau);

// Throws BoundaryNotCharacteristic if some piece of the polyline violates the differential inclusion.
void validate_characteristic(const Timeline& tl, const SystemModel& model, const Polyline& p, int family,
                             double tol = 1e-8);

// Region swept by the sections [a_m(t), b_m(t)], t0 <= t <= t0 + tau, of disjoint closed intervals
// moved by characteristics.
struct CharRegion {
    int family = 0;
    double t0 = 0.0;
    double tau = 0.0;
    std::vector<Interval> intervals;
    std::vector<Polyline> left;
    std::vector<Polyline> right;

    double t1() const { return t0 + tau; }
    std::vector<Interval> section(double t) const;
    bool contains(double t, double x, double tol = 1e-10) const;
    // Spatial region check only for t0 < t <= t0 + tau.
    bool contains_event(double t, double x, double tol = 1e-10) const;
    double section_length(double t) const;
};

CharRegion make_region(const Timeline& tl, const SystemModel& model, int family, double t0, double tau,
                       std::vector<Interval> intervals, CharSelection sel = CharSelection::Minimal);

// One status change of a front relative to the region.
struct FluxAtom {
    double t = 0.0;
    double x = 0.0;
    int front_id = -1;
    int event_id = -1;  // -1 away from events
    double weight = 0.0;  // +component when entering, -component when leaving
    bool physical = true;
    bool in_jump_set = false;
};

// Transitions grouped by boundary point, tagged by the boundary case table.
struct FluxNode {
    double t = 0.0;
    double x = 0.0;
    int event_id = -1;
    double full = 0.0;
    double physical = 0.0;
    double jump = 0.0;
    std::string case_tag;
    double mu_ic = 0.0;  // interaction-cancellation mass of the event at this node
};

struct FluxLedger {
    std::vector<FluxAtom> atoms;
    std::vector<FluxNode> nodes;

    double total() const;
    double physical_total() const;
    double jump_total() const;
};

FluxLedger boundary_flux(const Timeline& tl, const CharRegion& region, const JumpSet& js,
                         const InteractionMeasures& im, double tol = 1e-10);

struct BalanceTerms {
    double lhs = 0.0;      // v(t0 + tau)(J(t0 + tau)) - v(t0)(J)
    double events = 0.0;   // balance-measure mass on the region
    double flux = 0.0;
    double residual() const { return lhs - events - flux; }
};

struct BalanceReport {
    BalanceTerms full;      // all fronts, mu = physical + non-physical parts
    BalanceTerms physical;  // physical fronts and the physical part of mu
    BalanceTerms jump;      // jump-set fronts and mu_jump
    BalanceTerms cont;      // physical fronts off the jump set, physical mu - mu_jump
    double mu_ic = 0.0;
    double mu_icj = 0.0;
    double mu_jump = 0.0;
    double eps_nu = 0.0;
    double constant = 0.0;
    // Slack of the three approximate balances (>= 0 when they hold).
    double margin_total = 0.0;
    double margin_jump = 0.0;
    double margin_cont = 0.0;
    bool jump_flux_nonpositive = true;
    double worst_positive_flux_ratio = 0.0;  // max over nodes of flux+ / mu_ic
    int positive_flux_nodes = 0;
    int positive_flux_violations = 0;        // flux+ > 3 mu_ic (+ tol)
    FluxLedger ledger;

    bool identity_holds(double tol = 1e-12) const;
    bool inequalities_hold() const { return margin_total >= 0.0 && margin_jump >= 0.0 && margin_cont >= 0.0; }
};

BalanceReport region_balance_check(const Timeline& tl, const CharRegion& region, const JumpSet& js,
                                   const InteractionMeasures& im, double eps_nu, double constant);

struct PositiveDecayItem {
    std::vector<Interval> set;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = true;
};

struct PositiveDecayReport {
    double s = 0.0;
    double t = 0.0;
    double q_s = 0.0;
    double q_t = 0.0;
    double constant = 0.0;
    std::vector<PositiveDecayItem> items;
    bool pass() const;
};

PositiveDecayReport check_positive_decay(const Timeline& tl, int family, double s, double t,
                                         const std::vector<std::vector<Interval>>& sets, double constant);

// Largest ratio atom / gap over consecutive positive atoms of the i-th wave measure at t.
double positive_density(const Timeline& tl, int family, double t);

struct DecayTrace {
    Interval initial;
    std::vector<double> t;
    std::vector<double> z;
    std::vector<double> zdot;     // on (t[k], t[k+1])
    std::vector<double> xi;       // boundary speed correction on each piece
    std::vector<double> v_cont;   // v_cont(t)(I(t)) at t[k]
    std::vector<double> v_jump;
    double v_cont0 = 0.0;
    bool case2 = false;
    double t_bar = 0.0;
    double mu_icj = 0.0;  // mass of mu_ICJ in the region swept by this interval
};

struct ContDecayReport {
    double t0 = 0.0;
    double tau = 0.0;
    std::vector<Interval> intervals;
    double lhs = 0.0;  // -v_cont(t0)(J)
    double length = 0.0;
    double mu_icj = 0.0;
    double eps_nu = 0.0;
    double eps1 = 0.0;
    double constant = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    std::vector<DecayTrace> traces;

    bool pass() const { return margin >= 0.0; }
    bool case2_any() const;
    // Every Case-2 interval carries mu_ICJ mass.
    bool case2_explained() const;
};

ContDecayReport check_cont_decay(const Timeline& tl, const SystemModel& model, int family, double t0, double tau,
                                 const std::vector<Interval>& intervals, const JumpSet& js,
                                 const AtomicMeasure& icj, double eps_nu, double constant);

struct ExceptionalTime {
    double t = 0.0;
    double mass = 0.0;
    std::set<std::string> attribution;  // interaction, cancellation, jump-creation, jump
};

// Times t > 0 where the time marginal of some mu_ICJ has an atom of at least threshold.
std::vector<ExceptionalTime> exceptional_times(const RunLog& log, const std::vector<JumpSet>& sets,
                                               double threshold);

} // namespace fronttrack
