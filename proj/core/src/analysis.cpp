#include "fronttrack/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace fronttrack {

namespace {

bool in_union(const std::vector<Interval>& ivs, double x) {
    for (const auto& iv : ivs) {
        if (x >= iv.first && x <= iv.second) return true;
    }
    return false;
}

double union_length(std::vector<Interval> ivs) {
    std::sort(ivs.begin(), ivs.end());
    double len = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = lo;
    for (const auto& iv : ivs) {
        if (iv.first > hi) {
            if (hi > lo) len += hi - lo;
            lo = iv.first;
            hi = iv.second;
        } else {
            hi = std::max(hi, iv.second);
        }
    }
    if (hi > lo) len += hi - lo;
    return len;
}

} // namespace

SignedAtomicMeasure1D SignedAtomicMeasure1D::from_atoms(std::vector<Atom1D> atoms) {
    std::stable_sort(atoms.begin(), atoms.end(), [](const Atom1D& a, const Atom1D& b) { return a.x < b.x; });
    SignedAtomicMeasure1D m;
    for (const auto& a : atoms) {
        if (!m.atoms_.empty() && m.atoms_.back().x == a.x)
            m.atoms_.back().weight += a.weight;
        else
            m.atoms_.push_back(a);
    }
    return m;
}

double SignedAtomicMeasure1D::total() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.weight;
    return s;
}

double SignedAtomicMeasure1D::mass(const Interval& iv) const {
    double s = 0.0;
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), iv.first,
                               [](const Atom1D& a, double x) { return a.x < x; });
    for (; it != atoms_.end() && it->x <= iv.second; ++it) s += it->weight;
    return s;
}

double SignedAtomicMeasure1D::mass(const std::vector<Interval>& ivs) const {
    double s = 0.0;
    for (const auto& a : atoms_) {
        if (in_union(ivs, a.x)) s += a.weight;
    }
    return s;
}

double SignedAtomicMeasure1D::positive_mass(const std::vector<Interval>& ivs) const {
    double s = 0.0;
    for (const auto& a : atoms_) {
        if (a.weight > 0.0 && in_union(ivs, a.x)) s += a.weight;
    }
    return s;
}

SignedAtomicMeasure1D SignedAtomicMeasure1D::restricted(const std::vector<Interval>& ivs) const {
    SignedAtomicMeasure1D m;
    for (const auto& a : atoms_) {
        if (in_union(ivs, a.x)) m.atoms_.push_back(a);
    }
    return m;
}

SignedAtomicMeasure1D SignedAtomicMeasure1D::complement(const std::vector<Interval>& ivs) const {
    SignedAtomicMeasure1D m;
    for (const auto& a : atoms_) {
        if (!in_union(ivs, a.x)) m.atoms_.push_back(a);
    }
    return m;
}

WaveMeasures wave_measure_at(const Timeline& tl, double t, int family, const JumpSet* js, bool physical_only) {
    if (js == nullptr) throw Error(ErrorCode::JumpSetMissing, "wave measure split needs a jump set");
    if (js->family != family) throw Error(ErrorCode::JumpSetMissing, "jump set tracks another family");
    const RunLog& log = tl.log();
    std::vector<Atom1D> all;
    std::vector<Atom1D> jump;
    std::vector<Atom1D> cont;
    for (int id : tl.fronts_at(t)) {
        const Front& f = log.front(id);
        if (physical_only && f.non_physical()) continue;
        const Atom1D a{f.x_at(t), f.components(family)};
        all.push_back(a);
        if (js->contains(id))
            jump.push_back(a);
        else
            cont.push_back(a);
    }
    WaveMeasures w;
    w.all = SignedAtomicMeasure1D::from_atoms(std::move(all));
    w.jump = SignedAtomicMeasure1D::from_atoms(std::move(jump));
    w.cont = SignedAtomicMeasure1D::from_atoms(std::move(cont));
    return w;
}

double Polyline::at(double time) const {
    if (t.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (time <= t.front()) return x.front();
    if (time >= t.back()) return x.back();
    const auto k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), time) - t.begin());
    const double t0 = t[k - 1];
    const double t1 = t[k];
    if (time == t0) return x[k - 1];
    return x[k - 1] + (x[k] - x[k - 1]) * (time - t0) / (t1 - t0);
}

double Polyline::slope_after(double time) const {
    if (t.size() < 2) return 0.0;
    auto k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), time) - t.begin());
    if (k == 0) k = 1;
    if (k >= t.size()) k = t.size() - 1;
    return (x[k] - x[k - 1]) / (t[k] - t[k - 1]);
}

namespace {

struct LocalPicture {
    std::size_t lo = 0;  // first front through the point
    std::size_t hi = 0;  // one past the last
    std::vector<State> states;  // u_0 (left) ... u_k (right)
    std::vector<double> lambdas;
    std::vector<double> speeds;  // speeds[m-1] for through front m
};

LocalPicture local_picture(const Timeline& tl, const SystemModel& model, const std::vector<int>& fr, double t,
                           double x, int family, double tol) {
    const RunLog& log = tl.log();
    LocalPicture p;
    p.lo = static_cast<std::size_t>(
        std::partition_point(fr.begin(), fr.end(), [&](int id) { return log.front(id).x_at(t) < x - tol; }) -
        fr.begin());
    p.hi = static_cast<std::size_t>(
        std::partition_point(fr.begin(), fr.end(), [&](int id) { return log.front(id).x_at(t) <= x + tol; }) -
        fr.begin());
    if (p.hi < p.lo) p.hi = p.lo;
    State u0;
    if (fr.empty())
        u0 = log.far_left;
    else if (p.lo < fr.size())
        u0 = log.front(fr[p.lo]).left;
    else
        u0 = log.front(fr.back()).right;
    p.states.push_back(u0);
    for (std::size_t k = p.lo; k < p.hi; ++k) {
        p.states.push_back(log.front(fr[k]).right);
        p.speeds.push_back(log.front(fr[k]).track_speed());
    }
    for (const auto& u : p.states) p.lambdas.push_back(eigenvalue_at(model, u, family));
    return p;
}

} // namespace

Polyline trace_characteristic(const Timeline& tl, const SystemModel& model, double t0, double x0, int family,
                              double t1, CharSelection sel) {
    if (family < 0 || family >= model.n_eqs()) throw Error(ErrorCode::InvalidArgument, "family out of range");
    const RunLog& log = tl.log();
    constexpr double kSpeedTol = 1e-8;
    Polyline poly;
    poly.t.push_back(t0);
    poly.x.push_back(x0);
    double t = t0;
    double x = x0;
    for (std::size_t guard = 0; t < t1; ++guard) {
        if (guard > 50000000) throw Error(ErrorCode::NoConvergence, "characteristic tracing does not advance");
        const std::size_t e = tl.epoch_of(t);
        const auto& fr = tl.epoch_fronts(e);
        const double tend = std::min(t1, tl.epoch_end(e));
        const double tol = 1e-11 * (1.0 + std::abs(x));
        const LocalPicture p = local_picture(tl, model, fr, t, x, family, tol);
        const int k = static_cast<int>(p.hi - p.lo);
        const auto& L = p.lambdas;
        const auto& S = p.speeds;
        auto sector_ok = [&](int j) {
            const bool left_ok = j == 0 || L[static_cast<std::size_t>(j)] > S[static_cast<std::size_t>(j - 1)];
            const bool right_ok = j == k || L[static_cast<std::size_t>(j)] < S[static_cast<std::size_t>(j)];
            return left_ok && right_ok;
        };
        auto front_ok = [&](int m) {
            const double s = S[static_cast<std::size_t>(m - 1)];
            return L[static_cast<std::size_t>(m)] - kSpeedTol <= s && s <= L[static_cast<std::size_t>(m - 1)] + kSpeedTol;
        };
        int sector = -1;
        int ride = -1;
        if (sel == CharSelection::Minimal) {
            for (int j = 0; j <= k && sector < 0 && ride < 0; ++j) {
                if (sector_ok(j)) sector = j;
                else if (j < k && front_ok(j + 1)) ride = j + 1;
            }
        } else {
            for (int j = k; j >= 0 && sector < 0 && ride < 0; --j) {
                if (sector_ok(j)) sector = j;
                else if (j > 0 && front_ok(j)) ride = j;
            }
        }
        if (sector < 0 && ride < 0) {
            // Only possible through round-off at a front; follow the one closest to admissible.
            double best = std::numeric_limits<double>::infinity();
            for (int m = 1; m <= k; ++m) {
                const double s = S[static_cast<std::size_t>(m - 1)];
                const double v = std::max({L[static_cast<std::size_t>(m)] - s, s - L[static_cast<std::size_t>(m - 1)], 0.0});
                if (v < best) {
                    best = v;
                    ride = m;
                }
            }
            if (ride < 0) sector = 0;
        }
        double tn = tend;
        double xn;
        if (ride > 0) {
            const Front& f = log.front(fr[p.lo + static_cast<std::size_t>(ride - 1)]);
            xn = f.x_at(tn);
        } else {
            const double c = L[static_cast<std::size_t>(sector)];
            int left_nb = -1;
            int right_nb = -1;
            if (sector == 0) {
                if (p.lo > 0) left_nb = fr[p.lo - 1];
            } else {
                left_nb = fr[p.lo + static_cast<std::size_t>(sector - 1)];
            }
            if (sector == k) {
                if (p.hi < fr.size()) right_nb = fr[p.hi];
            } else {
                right_nb = fr[p.lo + static_cast<std::size_t>(sector)];
            }
            int hit = -1;
            if (right_nb >= 0) {
                const Front& r = log.front(right_nb);
                if (c > r.track_speed()) {
                    const double th = t + std::max(0.0, r.x_at(t) - x) / (c - r.track_speed());
                    if (th < tn) {
                        tn = th;
                        hit = right_nb;
                    }
                }
            }
            if (left_nb >= 0) {
                const Front& l = log.front(left_nb);
                if (l.track_speed() > c) {
                    const double th = t + std::max(0.0, x - l.x_at(t)) / (l.track_speed() - c);
                    if (th < tn) {
                        tn = th;
                        hit = left_nb;
                    }
                }
            }
            xn = hit >= 0 ? log.front(hit).x_at(tn) : x + c * (tn - t);
        }
        if (!(tn > t)) tn = std::nextafter(t, std::numeric_limits<double>::infinity());
        poly.t.push_back(tn);
        poly.x.push_back(xn);
        t = tn;
        x = xn;
    }
    return poly;
}

Polyline minimal_characteristic(const Timeline& tl, const SystemModel& model, double t0, double x0, int family,
                                double tau) {
    return trace_characteristic(tl, model, t0, x0, family, t0 + tau, CharSelection::Minimal);
}

void validate_characteristic(const Timeline& tl, const SystemModel& model, const Polyline& p, int family,
                             double tol) {
    for (std::size_t k = 0; k + 1 < p.t.size(); ++k) {
        const double dt = p.t[k + 1] - p.t[k];
        if (!(dt > 0.0)) throw Error(ErrorCode::BoundaryNotCharacteristic, "polyline times must increase");
        const double c = (p.x[k + 1] - p.x[k]) / dt;
        const double tm = 0.5 * (p.t[k] + p.t[k + 1]);
        const double xm = 0.5 * (p.x[k] + p.x[k + 1]);
        const LocalPicture lp = local_picture(tl, model, tl.fronts_at(tm), tm, xm, family, 1e-9 * (1.0 + std::abs(xm)));
        const double lo = *std::min_element(lp.lambdas.begin(), lp.lambdas.end());
        const double hi = *std::max_element(lp.lambdas.begin(), lp.lambdas.end());
        const double ctol = tol * (1.0 + std::abs(c));
        bool ok;
        if (lp.lambdas.size() == 1)
            ok = std::abs(c - lp.lambdas.front()) <= ctol;
        else
            ok = c >= std::min(lo, lp.lambdas.back()) - ctol && c <= std::max(hi, lp.lambdas.front()) + ctol;
        if (!ok) {
            throw Error(ErrorCode::BoundaryNotCharacteristic,
                        "speed " + std::to_string(c) + " outside the characteristic range at t=" + std::to_string(tm));
        }
    }
}

std::vector<Interval> CharRegion::section(double t) const {
    std::vector<Interval> s;
    for (std::size_t m = 0; m < intervals.size(); ++m) {
        const double a = left[m].at(t);
        const double b = std::max(a, right[m].at(t));
        s.emplace_back(a, b);
    }
    return s;
}

bool CharRegion::contains(double t, double x, double tol) const {
    for (std::size_t m = 0; m < intervals.size(); ++m) {
        const double a = left[m].at(t);
        const double b = right[m].at(t);
        if (x >= a - tol && x <= std::max(a, b) + tol) return true;
    }
    return false;
}

bool CharRegion::contains_event(double t, double x, double tol) const {
    return t > t0 && t <= t1() && contains(t, x, tol);
}

double CharRegion::section_length(double t) const { return union_length(section(t)); }

CharRegion make_region(const Timeline& tl, const SystemModel& model, int family, double t0, double tau,
                       std::vector<Interval> intervals, CharSelection sel) {
    if (!(tau > 0.0) || !(t0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "region needs t0 >= 0 and tau > 0");
    if (intervals.empty()) throw Error(ErrorCode::InvalidArgument, "region needs at least one interval");
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t m = 0; m < intervals.size(); ++m) {
        if (!(intervals[m].first <= intervals[m].second))
            throw Error(ErrorCode::InvalidArgument, "interval endpoints out of order");
        if (m > 0 && !(intervals[m].first > intervals[m - 1].second))
            throw Error(ErrorCode::InvalidArgument, "intervals must be disjoint");
    }
    CharRegion r;
    r.family = family;
    r.t0 = t0;
    r.tau = tau;
    r.intervals = intervals;
    for (const auto& iv : intervals) {
        r.left.push_back(trace_characteristic(tl, model, t0, iv.first, family, t0 + tau, sel));
        r.right.push_back(trace_characteristic(tl, model, t0, iv.second, family, t0 + tau, sel));
    }
    return r;
}

double FluxLedger::total() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight;
    return s;
}

double FluxLedger::physical_total() const {
    double s = 0.0;
    for (const auto& a : atoms) {
        if (a.physical) s += a.weight;
    }
    return s;
}

double FluxLedger::jump_total() const {
    double s = 0.0;
    for (const auto& a : atoms) {
        if (a.in_jump_set) s += a.weight;
    }
    return s;
}

namespace {

// Times in (lo, hi) where the status of front f relative to the region can change.
std::vector<double> breakpoints(const CharRegion& r, const Front& f, double lo, double hi) {
    std::vector<double> bp;
    for (const auto* side : {&r.left, &r.right}) {
        for (const auto& poly : *side) {
            for (double t : poly.t) {
                if (t > lo && t < hi) bp.push_back(t);
            }
        }
    }
    bp.push_back(lo);
    bp.push_back(hi);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<double> roots;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        const double ta = bp[k];
        const double tb = bp[k + 1];
        for (const auto* side : {&r.left, &r.right}) {
            for (const auto& poly : *side) {
                const double da = f.x_at(ta) - poly.at(ta);
                const double db = f.x_at(tb) - poly.at(tb);
                if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
                    const double tr = ta + (tb - ta) * da / (da - db);
                    // Crossings that round onto an endpoint belong to that endpoint (often an event).
                    const double eps = 1e-12 * (1.0 + std::abs(tr));
                    if (tr > ta + eps && tr < tb - eps) roots.push_back(tr);
                }
            }
        }
    }
    bp.insert(bp.end(), roots.begin(), roots.end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<double> inner;
    for (double t : bp) {
        if (t > lo && t < hi) inner.push_back(t);
    }
    return inner;
}

std::string tag_event_node(const RunLog& log, const InteractionEvent& ev, int family,
                           const std::vector<FluxAtom>& atoms) {
    auto entered = [&](int id) {
        for (const auto& a : atoms) {
            if (a.front_id == id && a.event_id == ev.id && a.weight * log.front(id).components(family) > 0.0 &&
                a.t == ev.t && log.front(id).child_event == ev.id)
                return true;
        }
        return false;
    };
    bool rar_exits = false;
    for (int id : ev.outgoing) {
        const Front& f = log.front(id);
        if (f.family != family || f.kind != FrontKind::Rarefaction) continue;
        for (const auto& a : atoms) {
            if (a.front_id == id && a.event_id == ev.id && a.weight < 0.0) rar_exits = true;
        }
    }
    const Front& l = log.front(ev.incoming.front());
    const Front& r = log.front(ev.incoming.back());
    auto is_shock = [&](const Front& f) { return f.family == family && f.kind == FrontKind::Shock; };
    auto is_rar = [&](const Front& f) { return f.family == family && f.kind == FrontKind::Rarefaction; };
    const bool l_out = entered(l.id);
    const bool r_out = entered(r.id);
    const std::string ex = rar_exits ? "exit" : "no_exit";
    if (is_shock(l) && is_shock(r)) {
        if (l_out && r_out) return "shocks_out_merge";
        if (l_out || r_out) return "shock_in_shock_out_merge";
        return "interior";
    }
    const Front* sh = is_shock(l) ? &l : (is_shock(r) ? &r : nullptr);
    const Front* ra = is_rar(l) ? &l : (is_rar(r) ? &r : nullptr);
    if (sh != nullptr && ra != nullptr) {
        const bool s_out = sh == &l ? l_out : r_out;
        const bool ra_out = ra == &l ? l_out : r_out;
        if (s_out && ra_out) return "both_out_" + ex;
        if (s_out) return "shock_out_rarefaction_in_" + ex;
        if (ra_out) return "rarefaction_out_shock_in_" + ex;
        return rar_exits ? "rarefaction_exits" : "interior";
    }
    if ((sh != nullptr && (sh == &l ? l_out : r_out))) return "shock_enters";
    if (rar_exits) return "rarefaction_exits";
    return "other";
}

} // namespace

FluxLedger boundary_flux(const Timeline& tl, const CharRegion& region, const JumpSet& js,
                         const InteractionMeasures& im, double tol) {
    const RunLog& log = tl.log();
    const int i = region.family;
    const double t0 = region.t0;
    const double t1 = region.t1();
    FluxLedger ledger;
    for (const auto& f : log.fronts) {
        if (!(f.t_death > t0) || f.t_birth > t1) continue;
        const double start = std::max(f.t_birth, t0);
        const double end = std::min(f.t_death, t1);
        const bool dies = f.t_death <= t1;
        const double w = f.components(i);
        auto status_at = [&](double t) {
            if (dies && t == end) {
                const auto& ev = log.events[static_cast<std::size_t>(f.child_event)];
                return region.contains(ev.t, ev.x, tol);
            }
            return region.contains(t, f.x_at(t), tol);
        };
        // Status changes within the speed-perturbation scale of a birth or death event belong to it.
        const double snap = 1e-8 * (1.0 + std::abs(end));
        const bool born_in = f.parent_event >= 0 && start == f.t_birth;
        std::vector<double> samples;
        samples.push_back(start);
        for (double t : breakpoints(region, f, start, end)) {
            if (dies && end - t < snap) continue;
            if (born_in && t - start < snap) continue;
            samples.push_back(t);
        }
        if (end > start) samples.push_back(end);
        bool prev = status_at(samples.front());
        auto record = [&](double t, bool now) {
            if (now == prev) return;
            FluxAtom a;
            a.t = t;
            a.x = f.x_at(t);
            a.front_id = f.id;
            if (t == f.t_birth) a.event_id = f.parent_event;
            if (dies && t == end) {
                a.event_id = f.child_event;
                a.x = log.events[static_cast<std::size_t>(f.child_event)].x;
            }
            a.weight = now ? w : -w;
            a.physical = !f.non_physical();
            a.in_jump_set = js.contains(f.id);
            ledger.atoms.push_back(a);
            prev = now;
        };
        for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
            const double mid = 0.5 * (samples[k] + samples[k + 1]);
            record(samples[k], status_at(mid));
            record(samples[k + 1], status_at(samples[k + 1]));
        }
    }

    // Group by event (or by free crossing) and tag.
    std::map<int, FluxNode> at_event;
    for (const auto& a : ledger.atoms) {
        if (a.event_id >= 0) {
            auto& n = at_event[a.event_id];
            n.event_id = a.event_id;
            n.t = log.events[static_cast<std::size_t>(a.event_id)].t;
            n.x = log.events[static_cast<std::size_t>(a.event_id)].x;
            n.full += a.weight;
            if (a.physical) n.physical += a.weight;
            if (a.in_jump_set) n.jump += a.weight;
            continue;
        }
        FluxNode n;
        n.t = a.t;
        n.x = a.x;
        n.full = a.weight;
        n.physical = a.physical ? a.weight : 0.0;
        n.jump = a.in_jump_set ? a.weight : 0.0;
        const Front& f = log.front(a.front_id);
        if (f.non_physical())
            n.case_tag = "non_physical";
        else if (f.family != i)
            n.case_tag = "other_family";
        else if (f.kind == FrontKind::Rarefaction && a.weight <= 0.0)
            n.case_tag = "rarefaction_exits";
        else if (f.kind == FrontKind::Shock && a.weight <= 0.0 && f.strength <= 0.0)
            n.case_tag = "shock_enters";
        else
            n.case_tag = std::string("unexpected_") + (a.weight > 0.0 ? "enter_" : "leave_") + to_string(f.kind);
        ledger.nodes.push_back(n);
    }
    const auto ic = im.interaction_cancellation.per_event(tl.log().events.size());
    for (auto& [id, n] : at_event) {
        const auto& ev = log.events[static_cast<std::size_t>(id)];
        n.case_tag = tag_event_node(log, ev, i, ledger.atoms);
        n.mu_ic = id >= 0 ? ic[static_cast<std::size_t>(id)] : 0.0;
        ledger.nodes.push_back(n);
    }
    std::stable_sort(ledger.nodes.begin(), ledger.nodes.end(), [](const FluxNode& a, const FluxNode& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.x < b.x;
    });
    return ledger;
}

bool BalanceReport::identity_holds(double tol) const {
    for (const auto* b : {&full, &physical, &jump, &cont}) {
        const double scale = 1.0 + std::abs(b->lhs) + std::abs(b->events) + std::abs(b->flux);
        if (!(std::abs(b->residual()) <= tol * scale)) return false;
    }
    return true;
}

BalanceReport region_balance_check(const Timeline& tl, const CharRegion& region, const JumpSet& js,
                                   const InteractionMeasures& im, double eps_nu, double constant) {
    if (js.family != region.family) throw Error(ErrorCode::JumpSetMissing, "jump set tracks another family");
    const RunLog& log = tl.log();
    const int i = region.family;
    const auto ui = static_cast<std::size_t>(i);
    constexpr double tol = 1e-10;
    BalanceReport rep;
    rep.eps_nu = eps_nu;
    rep.constant = constant;

    // Direct sums over the sections at both ends.
    auto sums = [&](double t, double& full, double& phys, double& jump, double& cont) {
        full = phys = jump = cont = 0.0;
        for (int id : tl.fronts_at(t)) {
            const Front& f = log.front(id);
            if (!region.contains(t, f.x_at(t), tol)) continue;
            const double w = f.components(i);
            full += w;
            if (f.non_physical()) continue;
            phys += w;
            if (js.contains(id))
                jump += w;
            else
                cont += w;
        }
    };
    double f0, p0, j0, c0, f1, p1, j1, c1;
    sums(region.t0, f0, p0, j0, c0);
    sums(region.t1(), f1, p1, j1, c1);
    rep.full.lhs = f1 - f0;
    rep.physical.lhs = p1 - p0;
    rep.jump.lhs = j1 - j0;
    rep.cont.lhs = c1 - c0;

    const auto ic_by_event = im.interaction_cancellation.per_event(log.events.size());
    for (const auto& ev : log.events) {
        if (!region.contains_event(ev.t, ev.x, tol)) continue;
        const double p = ev.out[ui] - ev.in_left[ui] - ev.in_right[ui];
        const double r = ev.np_out[ui] - ev.np_in[ui];
        rep.full.events += p + r;
        rep.physical.events += p;
        auto it = js.nodes.find(ev.id);
        const double q = it == js.nodes.end() ? 0.0 : it->second.q;
        rep.jump.events += q;
        rep.cont.events += p - q;
        const double ic = ic_by_event[static_cast<std::size_t>(ev.id)];
        rep.mu_ic += ic;
        rep.mu_jump += q;
        rep.mu_icj += ic + std::abs(q);
    }

    rep.ledger = boundary_flux(tl, region, js, im, tol);
    rep.full.flux = rep.ledger.total();
    rep.physical.flux = rep.ledger.physical_total();
    rep.jump.flux = rep.ledger.jump_total();
    rep.cont.flux = rep.physical.flux - rep.jump.flux;

    for (const auto& n : rep.ledger.nodes) {
        if (n.jump > 1e-12) rep.jump_flux_nonpositive = false;
        if (n.physical > 1e-12) {
            ++rep.positive_flux_nodes;
            const double ratio = n.mu_ic > 0.0 ? n.physical / n.mu_ic : std::numeric_limits<double>::infinity();
            rep.worst_positive_flux_ratio = std::max(rep.worst_positive_flux_ratio, ratio);
            if (n.physical > 3.0 * n.mu_ic + 1e-12) ++rep.positive_flux_violations;
        }
    }
    rep.margin_total = constant * (rep.mu_ic + eps_nu) - rep.full.lhs;
    rep.margin_jump = rep.mu_jump + 1e-12 - rep.jump.lhs;
    rep.margin_cont = constant * (rep.mu_icj + eps_nu) - rep.cont.lhs;
    return rep;
}

bool PositiveDecayReport::pass() const {
    for (const auto& it : items) {
        if (!it.pass) return false;
    }
    return true;
}

PositiveDecayReport check_positive_decay(const Timeline& tl, int family, double s, double t,
                                         const std::vector<std::vector<Interval>>& sets, double constant) {
    if (!(s >= 0.0) || !(t > s)) throw Error(ErrorCode::InvalidArgument, "need 0 <= s < t");
    const RunLog& log = tl.log();
    PositiveDecayReport rep;
    rep.s = s;
    rep.t = t;
    rep.constant = constant;
    rep.q_s = interaction_potential(log, tl, s);
    rep.q_t = interaction_potential(log, tl, t);
    std::vector<Atom1D> atoms;
    for (int id : tl.fronts_at(t)) {
        const Front& f = log.front(id);
        atoms.push_back({f.x_at(t), f.components(family)});
    }
    const auto m = SignedAtomicMeasure1D::from_atoms(std::move(atoms));
    for (const auto& set : sets) {
        PositiveDecayItem item;
        item.set = set;
        item.lhs = m.positive_mass(set);
        item.rhs = constant * (union_length(set) / (t - s) + rep.q_s - rep.q_t);
        item.pass = item.lhs <= item.rhs + 1e-12;
        rep.items.push_back(std::move(item));
    }
    return rep;
}

double positive_density(const Timeline& tl, int family, double t) {
    const RunLog& log = tl.log();
    std::vector<Atom1D> atoms;
    for (int id : tl.fronts_at(t)) {
        const Front& f = log.front(id);
        if (f.non_physical()) continue;
        atoms.push_back({f.x_at(t), f.components(family)});
    }
    const auto m = SignedAtomicMeasure1D::from_atoms(std::move(atoms));
    double best = 0.0;
    const Atom1D* prev = nullptr;
    for (const auto& a : m.atoms()) {
        if (a.weight <= 0.0) continue;
        if (prev != nullptr) best = std::max(best, a.weight / (a.x - prev->x));
        prev = &a;
    }
    return best;
}

bool ContDecayReport::case2_any() const {
    return std::any_of(traces.begin(), traces.end(), [](const DecayTrace& d) { return d.case2; });
}

bool ContDecayReport::case2_explained() const {
    return std::all_of(traces.begin(), traces.end(), [](const DecayTrace& d) { return !d.case2 || d.mu_icj > 0.0; });
}

namespace {

double icj_in_region(const AtomicMeasure& icj, const CharRegion& r) {
    double s = 0.0;
    for (const auto& a : icj.atoms) {
        if (r.contains_event(a.t, a.x, 1e-10)) s += a.weight;
    }
    return s;
}

} // namespace

ContDecayReport check_cont_decay(const Timeline& tl, const SystemModel& model, int family, double t0, double tau,
                                 const std::vector<Interval>& intervals, const JumpSet& js,
                                 const AtomicMeasure& icj, double eps_nu, double constant) {
    ContDecayReport rep;
    rep.t0 = t0;
    rep.tau = tau;
    rep.intervals = intervals;
    rep.eps_nu = eps_nu;
    rep.eps1 = js.eps1;
    rep.constant = constant;
    const CharRegion region = make_region(tl, model, family, t0, tau, intervals);
    const WaveMeasures w0 = wave_measure_at(tl, t0, family, &js, true);
    rep.lhs = -w0.cont.mass(region.intervals);
    rep.length = union_length(region.intervals);
    rep.mu_icj = icj_in_region(icj, region);
    rep.rhs = constant * (rep.length / tau + rep.mu_icj + eps_nu + rep.eps1);
    rep.margin = rep.rhs - rep.lhs;

    for (std::size_t m = 0; m < region.intervals.size(); ++m) {
        CharRegion one;
        one.family = family;
        one.t0 = t0;
        one.tau = tau;
        one.intervals = {region.intervals[m]};
        one.left = {region.left[m]};
        one.right = {region.right[m]};
        DecayTrace d;
        d.initial = region.intervals[m];
        d.v_cont0 = w0.cont.mass(d.initial);
        d.mu_icj = icj_in_region(icj, one);
        std::vector<double> ts(one.left[0].t);
        ts.insert(ts.end(), one.right[0].t.begin(), one.right[0].t.end());
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        for (double t : ts) {
            if (t < t0 || t > t0 + tau) continue;
            const auto sec = one.section(t);
            d.t.push_back(t);
            d.z.push_back(sec[0].second - sec[0].first);
            const WaveMeasures w = wave_measure_at(tl, t, family, &js, true);
            d.v_cont.push_back(w.cont.mass(sec[0]));
            d.v_jump.push_back(w.jump.mass(sec[0]));
        }
        for (std::size_t k = 0; k + 1 < d.t.size(); ++k) {
            const double zd = (d.z[k + 1] - d.z[k]) / (d.t[k + 1] - d.t[k]);
            d.zdot.push_back(zd);
            const double tm = 0.5 * (d.t[k] + d.t[k + 1]);
            const double a = one.left[0].at(tm);
            const double b = std::max(a, one.right[0].at(tm));
            const double ca = one.left[0].slope_after(tm);
            const double cb = one.right[0].slope_after(tm);
            const double la = eigenvalue_at(model, tl.state_left_of(tm, a), family);
            const double lb = eigenvalue_at(model, tl.state_at(tm, b), family);
            d.xi.push_back((ca - la) + (lb - cb));
            // After collapse z stays 0; only pieces with an open section can show slowed compression.
            const bool open = d.z[k] > 1e-12 * (1.0 + std::abs(a));
            if (d.v_cont0 < 0.0 && open && !d.case2 && zd >= d.v_cont0 / 4.0) {
                d.case2 = true;
                d.t_bar = d.t[k];
            }
        }
        rep.traces.push_back(std::move(d));
    }
    return rep;
}

std::vector<ExceptionalTime> exceptional_times(const RunLog& log, const std::vector<JumpSet>& sets,
                                               double threshold) {
    const InteractionMeasures im = interaction_measures(log);
    const auto pure_by_event = im.interaction.per_event(log.events.size());
    std::map<double, ExceptionalTime> found;
    for (const auto& js : sets) {
        const AtomicMeasure jump = jump_balance_measure(log, js);
        std::map<double, double> marginal;
        std::map<double, std::set<std::string>> why;
        for (const auto& a : im.interaction_cancellation.atoms) {
            if (!(a.t > 0.0)) continue;
            marginal[a.t] += a.weight;
            const double pure = pure_by_event[static_cast<std::size_t>(a.event_id)];
            if (pure > 0.0) why[a.t].insert("interaction");
            if (a.weight > pure) why[a.t].insert("cancellation");
        }
        for (const auto& a : jump.atoms) {
            if (!(a.t > 0.0)) continue;
            marginal[a.t] += std::abs(a.weight);
            if (a.weight != 0.0) why[a.t].insert(a.kind == "initial" ? "jump-creation" : "jump");
        }
        for (const auto& [t, mass] : marginal) {
            if (mass < threshold) continue;
            auto& e = found[t];
            e.t = t;
            e.mass = std::max(e.mass, mass);
            e.attribution.insert(why[t].begin(), why[t].end());
        }
    }
    std::vector<ExceptionalTime> out;
    for (auto& [t, e] : found) {
        (void)t;
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace fronttrack
