#pragma once

#include <fronttrack/engine.hpp>

#include <functional>
#include <vector>

namespace fronttrack::harness {

struct OracleSolution {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> shocks;  // located by bisection to 1e-12
    double grid_spacing = 0.0;   // of the minimization grid
};

// Entropy solution of u_t + (u^2/2)_x = 0 by the Lax-Oleinik formula
//   u(t, x) = (x - y*) / t,   y* = argmin_y { U0(y) + (x - y)^2 / (2t) },   U0' = u0.
// The minimization runs over a grid of `points` nodes covering the datum's support plus the
// speed cone; on every grid cell the datum is constant, so the cell minimizer is exact.
class BurgersOracle {
public:
    // Exact for step data: breaks are grid nodes.
    BurgersOracle(const StepDatum& datum, double t_max, int points = 4096);
    // u0 replaced by its Gauss cell averages on the grid over [lo, hi]; constant outside.
    BurgersOracle(const std::function<double(double)>& u0, double lo, double hi, double t_max, int points = 4096);

    double value(double t, double x) const;
    double minimizer(double t, double x) const;
    OracleSolution sample(double t, const std::vector<double>& xs, double shock_jump = 1e-2) const;
    double grid_spacing() const { return h_; }
    // Interval outside which u(t, .) equals the far-field constants for t <= t_max.
    std::pair<double, double> influence(double t) const;

private:
    void build(const StepDatum& datum, double t_max, int points);
    double objective(double t, double x, double y, std::size_t piece) const;

    // Pieces: u = vals_[k] on (nodes_[k-1], nodes_[k]); vals_ has one more entry than nodes_.
    std::vector<double> nodes_;
    std::vector<double> vals_;
    std::vector<double> prim_;  // U0 at nodes_
    double h_ = 0.0;
    double umax_ = 0.0;
};

// Throws NotScalar unless the model is scalar, and InvalidArgument unless it is Burgers.
void require_burgers(const SystemModel& model);

// L1 distance at time t between the front-tracking solution and the oracle, by the midpoint rule
// on `samples` cells of [lo, hi].
double l1_error(const Timeline& tl, const BurgersOracle& oracle, double t, double lo, double hi, int samples);

} // namespace fronttrack::harness
