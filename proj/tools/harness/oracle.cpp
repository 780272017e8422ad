#include "harness/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fronttrack::harness {

void require_burgers(const SystemModel& model) {
    if (model.n_eqs() != 1) throw Error(ErrorCode::NotScalar, "the oracle needs a scalar law");
    if (model.name().rfind("burgers", 0) != 0) throw Error(ErrorCode::InvalidArgument, "the oracle solves Burgers only");
}

namespace {

double datum_value(const StepDatum& d, double x) {
    const auto k = std::upper_bound(d.breaks.begin(), d.breaks.end(), x) - d.breaks.begin();
    return d.values[static_cast<std::size_t>(k)](0);
}

} // namespace

BurgersOracle::BurgersOracle(const StepDatum& datum, double t_max, int points) { build(datum, t_max, points); }

BurgersOracle::BurgersOracle(const std::function<double(double)>& u0, double lo, double hi, double t_max, int points) {
    if (!(lo < hi) || points < 2) throw Error(ErrorCode::InvalidArgument, "bad oracle grid");
    // Three-point Gauss averages per cell.
    static const double g = std::sqrt(0.6);
    StepDatum d;
    const double h = (hi - lo) / points;
    State v(1);
    v(0) = u0(lo);
    d.values.push_back(v);
    for (int k = 0; k < points; ++k) {
        const double a = lo + k * h, c = a + 0.5 * h;
        d.breaks.push_back(a);
        v(0) = (5.0 * u0(c - 0.5 * h * g) + 8.0 * u0(c) + 5.0 * u0(c + 0.5 * h * g)) / 18.0;
        d.values.push_back(v);
    }
    d.breaks.push_back(hi);
    v(0) = u0(hi);
    d.values.push_back(v);
    build(d, t_max, points);
}

void BurgersOracle::build(const StepDatum& datum, double t_max, int points) {
    if (points < 2 || datum.values.size() != datum.breaks.size() + 1)
        throw Error(ErrorCode::InvalidArgument, "bad oracle datum");
    umax_ = 0.0;
    for (const auto& v : datum.values) umax_ = std::max(umax_, std::abs(v(0)));
    double a = datum.breaks.empty() ? 0.0 : datum.breaks.front();
    double b = datum.breaks.empty() ? 0.0 : datum.breaks.back();
    const double pad = std::max(umax_ * std::max(t_max, 0.0), 1e-3);
    a -= pad;
    b += pad;
    h_ = (b - a) / (points - 1);
    nodes_.clear();
    for (int k = 0; k < points; ++k) nodes_.push_back(k + 1 == points ? b : a + k * h_);
    nodes_.insert(nodes_.end(), datum.breaks.begin(), datum.breaks.end());
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    vals_.clear();
    vals_.push_back(datum.values.front()(0));
    for (std::size_t k = 1; k < nodes_.size(); ++k) vals_.push_back(datum_value(datum, 0.5 * (nodes_[k - 1] + nodes_[k])));
    vals_.push_back(datum.values.back()(0));
    prim_.assign(nodes_.size(), 0.0);
    for (std::size_t k = 1; k < nodes_.size(); ++k) prim_[k] = prim_[k - 1] + vals_[k] * (nodes_[k] - nodes_[k - 1]);
}

double BurgersOracle::objective(double t, double x, double y, std::size_t piece) const {
    // U0 is linear on the piece; anchor at the piece's right node (left node for the last piece).
    const std::size_t anchor = piece < nodes_.size() ? piece : nodes_.size() - 1;
    const double u0 = prim_[anchor] + vals_[piece] * (y - nodes_[anchor]);
    return u0 + (x - y) * (x - y) / (2.0 * t);
}

double BurgersOracle::minimizer(double t, double x) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    double best = inf, best_y = x;
    for (std::size_t k = 0; k < vals_.size(); ++k) {
        const double lo = k == 0 ? -inf : nodes_[k - 1];
        const double hi = k < nodes_.size() ? nodes_[k] : inf;
        const double y = std::clamp(x - vals_[k] * t, lo, hi);
        const double v = objective(t, x, y, k);
        // Ties go to the larger minimizer: right-continuous u.
        if (v < best || (v == best && y > best_y)) {
            best = v;
            best_y = y;
        }
    }
    return best_y;
}

double BurgersOracle::value(double t, double x) const {
    if (!(t > 0.0)) {
        const auto k = std::upper_bound(nodes_.begin(), nodes_.end(), x) - nodes_.begin();
        return vals_[static_cast<std::size_t>(k)];
    }
    return (x - minimizer(t, x)) / t;
}

OracleSolution BurgersOracle::sample(double t, const std::vector<double>& xs, double shock_jump) const {
    OracleSolution s;
    s.t = t;
    s.x = xs;
    s.grid_spacing = h_;
    for (double x : xs) s.u.push_back(value(t, x));
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        if (!(s.u[k] - s.u[k + 1] > shock_jump)) continue;
        const double mid_u = 0.5 * (s.u[k] + s.u[k + 1]);
        double a = xs[k], b = xs[k + 1];
        for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
            const double m = 0.5 * (a + b);
            if (value(t, m) > mid_u) a = m;
            else b = m;
        }
        s.shocks.push_back(0.5 * (a + b));
    }
    return s;
}

std::pair<double, double> BurgersOracle::influence(double t) const {
    return {nodes_.front() - umax_ * t, nodes_.back() + umax_ * t};
}

double l1_error(const Timeline& tl, const BurgersOracle& oracle, double t, double lo, double hi, int samples) {
    const double dx = (hi - lo) / samples;
    double err = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double x = lo + (k + 0.5) * dx;
        err += std::abs(tl.state_at(t, x)(0) - oracle.value(t, x)) * dx;
    }
    return err;
}

} // namespace fronttrack::harness
