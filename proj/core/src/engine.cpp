#include "fronttrack/engine.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <queue>
#include <set>
#include <sstream>

namespace fronttrack {

const char* to_string(FrontKind kind) {
    switch (kind) {
    case FrontKind::Shock: return "shock";
    case FrontKind::Rarefaction: return "rarefaction";
    case FrontKind::Contact: return "contact";
    case FrontKind::NonPhysical: return "non_physical";
    }
    return "unknown";
}

const char* to_string(SolverUsed s) { return s == SolverUsed::Accurate ? "accurate" : "simplified"; }

double id_hash(int id) {
    std::uint64_t z = static_cast<std::uint64_t>(id) + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z = z ^ (z >> 31);
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

void RunParams::validate() const {
    if (!(nu > 0.0)) throw Error(ErrorCode::InvalidArgument, "nu must be positive");
    if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
    if (!(speed_perturb >= 0.0)) throw Error(ErrorCode::InvalidArgument, "speed perturbation must be >= 0");
    for (std::size_t k = 0; k < ladder.size(); ++k) {
        const double e0 = ladder[k].first;
        const double e1 = ladder[k].second;
        const double scale = std::ldexp(1.0, static_cast<int>(k + 1));
        if (!(e0 > 0.0) || !(e1 >= scale * e0 * (1.0 - 1e-12))) {
            std::ostringstream os;
            os << "ladder level " << (k + 1) << " violates 2^k eps0 <= eps1";
            throw Error(ErrorCode::InvalidArgument, os.str());
        }
    }
}

double StepDatum::total_variation() const {
    double tv = 0.0;
    for (std::size_t k = 1; k < values.size(); ++k) tv += (values[k] - values[k - 1]).norm();
    return tv;
}

State front_components(const SystemModel& model, const Front& f) {
    const int n = model.n_eqs();
    State c = State::Zero(n);
    if (!f.non_physical()) {
        c(f.family) = f.strength;
        return c;
    }
    const State du = f.right - f.left;
    for (int i = 0; i < n; ++i) c(i) = averaged_left_vector(model, f.left, f.right, i).dot(du);
    return c;
}

namespace {

FrontKind kind_of(WaveKind k) {
    switch (k) {
    case WaveKind::Shock: return FrontKind::Shock;
    case WaveKind::RarefactionFan: return FrontKind::Rarefaction;
    case WaveKind::Contact: return FrontKind::Contact;
    case WaveKind::NonPhysical: return FrontKind::NonPhysical;
    }
    return FrontKind::Shock;
}

struct Piece {
    FrontKind kind;
    int family;
    double strength;
    double speed;
    State left;
    State right;
};

// Turns a fan into front pieces, splitting rarefactions when split is set.
std::vector<Piece> pieces_of(const SystemModel& model, const WaveFan& fan, double nu, bool split) {
    std::vector<Piece> out;
    for (const auto& w : fan.waves) {
        if (w.kind == WaveKind::RarefactionFan && split) {
            for (const auto& j : discretize_rarefaction(model, w, nu))
                out.push_back({FrontKind::Rarefaction, w.family, j.strength, j.speed, j.left, j.right});
        } else {
            out.push_back({kind_of(w.kind), w.non_physical() ? -1 : w.family, w.strength, w.speed, w.left_state,
                           w.right_state});
        }
    }
    return out;
}

} // namespace

InitialFronts sample_initial_datum(const SystemModel& model, const StepDatum& datum, double nu, double tv_guard) {
    if (datum.values.size() != datum.breaks.size() + 1)
        throw Error(ErrorCode::InvalidArgument, "step datum needs one more value than breaks");
    for (std::size_t k = 1; k < datum.breaks.size(); ++k) {
        if (!(datum.breaks[k] > datum.breaks[k - 1]))
            throw Error(ErrorCode::InvalidArgument, "step datum breaks must increase");
    }
    for (const auto& v : datum.values) {
        if (v.size() != model.n_eqs()) throw Error(ErrorCode::InvalidArgument, "datum state dimension mismatch");
        if (!model.domain().contains(v)) throw Error(ErrorCode::OutOfDomain, "datum value outside the domain box");
    }
    const double tv = datum.total_variation();
    if (model.n_eqs() > 1 && tv > tv_guard) {
        std::ostringstream os;
        os << "datum total variation " << tv << " exceeds guard " << tv_guard;
        throw Error(ErrorCode::TVTooLarge, os.str());
    }
    InitialFronts init;
    init.far_left = datum.values.front();
    for (std::size_t k = 0; k < datum.breaks.size(); ++k) {
        const State& ul = datum.values[k];
        const State& ur = datum.values[k + 1];
        if ((ur - ul).cwiseAbs().maxCoeff() == 0.0) continue;
        const WaveFan fan = solve_riemann(model, ul, ur);
        for (auto& p : pieces_of(model, fan, nu, true)) {
            Front f;
            f.id = static_cast<int>(init.fronts.size());
            f.family = p.family;
            f.kind = p.kind;
            f.strength = p.strength;
            f.speed = p.speed;
            f.t_birth = 0.0;
            f.x_birth = datum.breaks[k];
            f.left = p.left;
            f.right = p.right;
            f.components = front_components(model, f);
            init.fronts.push_back(std::move(f));
        }
    }
    return init;
}

namespace {

struct Candidate {
    double t;
    double x;
    int left;
    int right;
    bool operator>(const Candidate& o) const {
        if (t != o.t) return t > o.t;
        if (x != o.x) return x > o.x;
        return left > o.left;
    }
};

class Engine {
public:
    Engine(const SystemModel& model, const RunParams& params) : model_(model), p_(params) {
        log_.params = params;
        log_.model_name = model.name();
        log_.n_eqs = model.n_eqs();
    }

    RunLog run(const InitialFronts& init) {
        log_.far_left = init.far_left;
        for (const auto& f : init.fronts) {
            Front g = f;
            g.id = static_cast<int>(log_.fronts.size());
            add_front(std::move(g));
        }
        for (const auto& f : log_.fronts) {
            log_.initial.push_back(f.id);
            where_[static_cast<std::size_t>(f.id)] = order_.insert(order_.end(), f.id);
            if (f.non_physical()) np_total_ += f.strength;
        }
        log_.max_np_total = np_total_;
        check_budget(0.0);
        if (order_.size() > p_.max_fronts)
            throw Error(ErrorCode::FrontCountExplosion, "initial front count exceeds cap");
        // Initial pairs, left to right; a tie perturbs the right (later-created) front.
        for (auto it = order_.begin(); it != order_.end(); ++it) {
            auto nx = std::next(it);
            if (nx == order_.end()) break;
            schedule_with_tie_break(*it, *nx, *nx);
        }

        while (!heap_.empty()) {
            Candidate c = pop_next();
            if (c.left < 0) break;
            if (c.t > p_.horizon) break;
            now_ = c.t;
            resolve(c);
            if (order_.size() > p_.max_fronts)
                throw Error(ErrorCode::FrontCountExplosion, "active front count exceeds cap");
            if (log_.events.size() > p_.max_events)
                throw Error(ErrorCode::FrontCountExplosion, "event count exceeds cap");
        }
        for (int id : order_) log_.final_fronts.push_back(id);
        return std::move(log_);
    }

private:
    Front& fr(int id) { return log_.fronts[static_cast<std::size_t>(id)]; }

    int add_front(Front f) {
        const int id = f.id;
        log_.fronts.push_back(std::move(f));
        where_.emplace_back();
        pair_time_.push_back(std::numeric_limits<double>::quiet_NaN());
        perturbed_.push_back(false);
        return id;
    }

    double predict(int l, int r) const {
        const Front& a = log_.fronts[static_cast<std::size_t>(l)];
        const Front& b = log_.fronts[static_cast<std::size_t>(r)];
        const double sa = a.track_speed();
        const double sb = b.track_speed();
        if (!(sa > sb)) return std::numeric_limits<double>::quiet_NaN();
        const double tr = std::max(now_, std::max(a.t_birth, b.t_birth));
        double gap = b.x_at(tr) - a.x_at(tr);
        if (gap < 0.0) gap = 0.0;
        return tr + gap / (sa - sb);
    }

    bool ties(double t) const {
        if (!std::isfinite(t)) return false;
        auto it = pending_.lower_bound(t - 1e-13);
        return it != pending_.end() && *it <= t + 1e-13;
    }

    void clear_pair(int l) {
        double& pt = pair_time_[static_cast<std::size_t>(l)];
        if (std::isfinite(pt)) {
            auto it = pending_.find(pt);
            if (it != pending_.end()) pending_.erase(it);
        }
        pt = std::numeric_limits<double>::quiet_NaN();
    }

    void set_pair(int l, int r) {
        clear_pair(l);
        const double t = predict(l, r);
        if (!std::isfinite(t)) return;
        pair_time_[static_cast<std::size_t>(l)] = t;
        pending_.insert(t);
        heap_.push({t, fr(l).x_at(t), l, r});
    }

    void perturb(int id) {
        if (perturbed_[static_cast<std::size_t>(id)] || p_.speed_perturb == 0.0) return;
        perturbed_[static_cast<std::size_t>(id)] = true;
        fr(id).perturbation = p_.speed_perturb * id_hash(id);
    }

    void schedule_with_tie_break(int l, int r, int newest) {
        if (ties(predict(l, r))) perturb(newest);
        set_pair(l, r);
    }

    bool valid(const Candidate& c) const {
        const auto& ft = log_.fronts;
        if (ft[static_cast<std::size_t>(c.left)].t_death < std::numeric_limits<double>::infinity()) return false;
        if (ft[static_cast<std::size_t>(c.right)].t_death < std::numeric_limits<double>::infinity()) return false;
        const double pt = pair_time_[static_cast<std::size_t>(c.left)];
        if (!(pt == c.t)) return false;
        auto it = where_[static_cast<std::size_t>(c.left)];
        auto nx = std::next(it);
        return nx != order_.end() && *nx == c.right;
    }

    // Earliest valid collision; among collisions within 1e-13 of it, the leftmost pair goes first.
    Candidate pop_next() {
        while (!heap_.empty() && !valid(heap_.top())) heap_.pop();
        if (heap_.empty()) return {0.0, 0.0, -1, -1};
        Candidate best = heap_.top();
        heap_.pop();
        std::vector<Candidate> held;
        while (!heap_.empty() && heap_.top().t <= best.t + 1e-13) {
            Candidate c = heap_.top();
            heap_.pop();
            if (!valid(c)) continue;
            if (c.x < best.x || (c.x == best.x && c.left < best.left)) std::swap(c, best);
            held.push_back(c);
        }
        for (const auto& c : held) heap_.push(c);
        return best;
    }

    void check_budget(double t) {
        log_.max_np_total = std::max(log_.max_np_total, np_total_);
        if (np_total_ > p_.eps_nu() && !budget_alarm_) {
            budget_alarm_ = true;
            std::ostringstream os;
            os << "non-physical total " << np_total_ << " exceeds budget " << p_.eps_nu();
            log_.alarms.push_back({"BudgetExceeded", t, np_total_, os.str()});
        }
    }

    void resolve(const Candidate& c) {
        const int l = c.left;
        const int r = c.right;
        const double t = c.t;
        const double x = fr(l).x_at(t);
        const State ul = fr(l).left;
        const State ur = fr(r).right;
        const bool np = fr(l).non_physical() || fr(r).non_physical();
        const double product = std::abs(fr(l).strength * fr(r).strength);

        InteractionEvent ev;
        ev.id = static_cast<int>(log_.events.size());
        ev.t = t;
        ev.x = x;
        ev.incoming = {l, r};
        ev.solver = (np || product < p_.rho_np()) ? SolverUsed::Simplified : SolverUsed::Accurate;

        std::vector<Piece> pieces;
        WaveFan fan;
        if (ev.solver == SolverUsed::Accurate) {
            try {
                fan = solve_riemann(model_, ul, ur);
                pieces = pieces_of(model_, fan, p_.nu, true);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoConvergence && e.code() != ErrorCode::LeftDomain &&
                    e.code() != ErrorCode::OutOfDomain)
                    throw;
                log_.alarms.push_back({"AccurateSolverFailed", t, product, e.what()});
                ev.solver = SolverUsed::Simplified;
            }
        }
        if (ev.solver == SolverUsed::Simplified) {
            std::vector<IncomingWave> inc;
            for (int id : {l, r}) inc.push_back({fr(id).family, fr(id).non_physical(), fr(id).strength});
            fan = solve_simplified(model_, ul, ur, inc);
            pieces = pieces_of(model_, fan, p_.nu, false);
        }

        // Families that came in but cancelled out completely.
        for (int id : {l, r}) {
            const Front& f = fr(id);
            if (f.non_physical()) continue;
            const double s = fan.strengths.size() > f.family ? fan.strengths(f.family) : 0.0;
            if (std::abs(s) < 1e-14) ++ev.cancelled;
        }
        std::vector<Piece> kept;
        for (auto& p : pieces) {
            if (std::abs(p.strength) < 1e-14) {
                if (p.kind == FrontKind::NonPhysical) ++ev.cancelled;
                continue;
            }
            kept.push_back(std::move(p));
        }
        if (!kept.empty()) {
            kept.front().left = ul;
            kept.back().right = ur;
        }

        const int n = model_.n_eqs();
        ev.in_left.assign(static_cast<std::size_t>(n), 0.0);
        ev.in_right.assign(static_cast<std::size_t>(n), 0.0);
        ev.out.assign(static_cast<std::size_t>(n), 0.0);
        ev.np_in.assign(static_cast<std::size_t>(n), 0.0);
        ev.np_out.assign(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            const auto si = static_cast<std::size_t>(i);
            const Front& a = fr(l);
            const Front& b = fr(r);
            if (a.non_physical()) ev.np_in[si] += a.components(i); else ev.in_left[si] = a.components(i);
            if (b.non_physical()) ev.np_in[si] += b.components(i); else ev.in_right[si] = b.components(i);
        }

        auto pos_l = where_[static_cast<std::size_t>(l)];
        auto pos_r = where_[static_cast<std::size_t>(r)];
        const int left_nb = pos_l == order_.begin() ? -1 : *std::prev(pos_l);
        auto after = std::next(pos_r);
        const int right_nb = after == order_.end() ? -1 : *after;

        for (int id : {l, r}) {
            Front& f = fr(id);
            f.t_death = t;
            f.x_death = x;
            f.child_event = ev.id;
            if (f.non_physical()) np_total_ -= f.strength;
            clear_pair(id);
        }
        if (left_nb >= 0) clear_pair(left_nb);
        order_.erase(pos_l);
        order_.erase(pos_r);

        std::vector<int> created;
        for (auto& p : kept) {
            Front f;
            f.id = static_cast<int>(log_.fronts.size());
            f.family = p.family;
            f.kind = p.kind;
            f.strength = p.strength;
            f.speed = p.speed;
            f.t_birth = t;
            f.x_birth = x;
            f.left = std::move(p.left);
            f.right = std::move(p.right);
            f.parent_event = ev.id;
            f.components = front_components(model_, f);
            for (int i = 0; i < n; ++i) {
                if (f.non_physical()) ev.np_out[static_cast<std::size_t>(i)] += f.components(i);
                else ev.out[static_cast<std::size_t>(i)] += f.components(i);
            }
            if (f.non_physical()) np_total_ += f.strength;
            created.push_back(add_front(std::move(f)));
        }
        for (int id : created) where_[static_cast<std::size_t>(id)] = order_.insert(after, id);
        ev.outgoing = created;
        log_.events.push_back(std::move(ev));
        check_budget(t);

        if (created.empty()) {
            if (left_nb >= 0 && right_nb >= 0) set_pair(left_nb, right_nb);
            return;
        }
        const int first = created.front();
        const int last = created.back();
        // New fronts are the latest created, so they take any tie-breaking perturbation.
        if (left_nb >= 0 && ties(predict(left_nb, first))) perturb(first);
        if (right_nb >= 0 && ties(predict(last, right_nb))) perturb(last);
        if (left_nb >= 0) set_pair(left_nb, first);
        for (std::size_t k = 0; k + 1 < created.size(); ++k) set_pair(created[k], created[k + 1]);
        if (right_nb >= 0) set_pair(last, right_nb);
    }

    const SystemModel& model_;
    RunParams p_;
    RunLog log_;
    std::list<int> order_;
    std::vector<std::list<int>::iterator> where_;
    std::vector<double> pair_time_;
    std::vector<bool> perturbed_;
    std::multiset<double> pending_;
    std::priority_queue<Candidate, std::vector<Candidate>, std::greater<Candidate>> heap_;
    double np_total_ = 0.0;
    double now_ = 0.0;
    bool budget_alarm_ = false;
};

} // namespace

RunLog run(const SystemModel& model, const RunParams& params, const InitialFronts& initial) {
    params.validate();
    Engine e(model, params);
    return e.run(initial);
}

std::vector<int> fronts_at(const RunLog& log, double t) {
    std::vector<int> ids;
    for (const auto& f : log.fronts) {
        if (f.alive_at(t)) ids.push_back(f.id);
    }
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        const Front& fa = log.front(a);
        const Front& fb = log.front(b);
        const double xa = fa.x_at(t);
        const double xb = fb.x_at(t);
        if (xa != xb) return xa < xb;
        if (fa.track_speed() != fb.track_speed()) return fa.track_speed() < fb.track_speed();
        return a < b;
    });
    return ids;
}

namespace {

State state_in(const RunLog& log, const std::vector<int>& ids, double t, double x, bool strict) {
    if (ids.empty()) return log.far_left;
    // Last front with position <= x (or < x when strict).
    auto it = std::partition_point(ids.begin(), ids.end(), [&](int id) {
        const double xf = log.front(id).x_at(t);
        return strict ? xf < x : xf <= x;
    });
    if (it == ids.begin()) return log.front(ids.front()).left;
    return log.front(*std::prev(it)).right;
}

} // namespace

State state_at(const RunLog& log, double t, double x) { return state_in(log, fronts_at(log, t), t, x, false); }

double total_variation(const RunLog& log, double t) {
    double tv = 0.0;
    for (const auto& f : log.fronts) {
        if (f.alive_at(t) && !f.non_physical()) tv += std::abs(f.strength);
    }
    return tv;
}

double np_total_strength(const RunLog& log, double t) {
    double s = 0.0;
    for (const auto& f : log.fronts) {
        if (f.alive_at(t) && f.non_physical()) s += f.strength;
    }
    return s;
}

ReplayResult replay(const RunLog& log) {
    ReplayResult res;
    auto fail = [&](const std::string& m) {
        res.ok = false;
        res.message = m;
        return res;
    };
    std::list<int> order(log.initial.begin(), log.initial.end());
    std::vector<std::list<int>::iterator> where(log.fronts.size(), order.end());
    for (auto it = order.begin(); it != order.end(); ++it) where[static_cast<std::size_t>(*it)] = it;
    double last_t = 0.0;
    for (const auto& ev : log.events) {
        if (ev.t < last_t) return fail("event times decrease at event " + std::to_string(ev.id));
        last_t = ev.t;
        if (ev.incoming.size() != 2) return fail("event " + std::to_string(ev.id) + " is not binary");
        const int l = ev.incoming[0];
        const int r = ev.incoming[1];
        if (l < 0 || r < 0 || static_cast<std::size_t>(std::max(l, r)) >= log.fronts.size())
            return fail("bad front id in event " + std::to_string(ev.id));
        auto pl = where[static_cast<std::size_t>(l)];
        auto pr = where[static_cast<std::size_t>(r)];
        if (pl == order.end() || pr == order.end() || std::next(pl) != pr)
            return fail("incoming fronts not adjacent at event " + std::to_string(ev.id));
        for (int id : {l, r}) {
            const Front& f = log.front(id);
            if (f.child_event != ev.id || f.t_death != ev.t)
                return fail("front " + std::to_string(id) + " death does not match event");
            if (std::abs(f.x_at(ev.t) - ev.x) > 1e-9 * (1.0 + std::abs(ev.x)))
                return fail("front " + std::to_string(id) + " misses event position");
        }
        auto after = std::next(pr);
        order.erase(pl);
        order.erase(pr);
        where[static_cast<std::size_t>(l)] = order.end();
        where[static_cast<std::size_t>(r)] = order.end();
        for (int id : ev.outgoing) {
            const Front& f = log.front(id);
            if (f.parent_event != ev.id || f.t_birth != ev.t || f.x_birth != ev.x)
                return fail("front " + std::to_string(id) + " birth does not match event");
            where[static_cast<std::size_t>(id)] = order.insert(after, id);
        }
    }
    std::vector<int> fin(order.begin(), order.end());
    if (fin != log.final_fronts) return fail("final front set differs");
    return res;
}

Timeline::Timeline(const RunLog& log) : log_(&log) {
    std::vector<int> cur = log.initial;
    epochs_.push_back(cur);
    event_times_.reserve(log.events.size());
    for (const auto& ev : log.events) {
        event_times_.push_back(ev.t);
        auto it = std::find(cur.begin(), cur.end(), ev.incoming.front());
        if (it == cur.end() || std::next(it) == cur.end() || *std::next(it) != ev.incoming.back())
            throw Error(ErrorCode::InvalidArgument, "log replay failed at event " + std::to_string(ev.id));
        it = cur.erase(it, it + 2);
        cur.insert(it, ev.outgoing.begin(), ev.outgoing.end());
        epochs_.push_back(cur);
    }
}

std::size_t Timeline::epoch_of(double t) const {
    return static_cast<std::size_t>(std::upper_bound(event_times_.begin(), event_times_.end(), t) -
                                    event_times_.begin());
}

double Timeline::epoch_start(std::size_t epoch) const { return epoch == 0 ? 0.0 : event_times_[epoch - 1]; }

double Timeline::epoch_end(std::size_t epoch) const {
    return epoch < event_times_.size() ? event_times_[epoch] : std::numeric_limits<double>::infinity();
}

State Timeline::state_at(double t, double x) const { return state_in(*log_, fronts_at(t), t, x, false); }

State Timeline::state_left_of(double t, double x) const { return state_in(*log_, fronts_at(t), t, x, true); }

} // namespace fronttrack
