#include "fronttrack/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fronttrack {

double AtomicMeasure::total() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight;
    return s;
}

double AtomicMeasure::positive_mass() const {
    double s = 0.0;
    for (const auto& a : atoms) s += std::max(a.weight, 0.0);
    return s;
}

double AtomicMeasure::negative_mass() const {
    double s = 0.0;
    for (const auto& a : atoms) s += std::min(a.weight, 0.0);
    return s;
}

double AtomicMeasure::total_variation() const {
    double s = 0.0;
    for (const auto& a : atoms) s += std::abs(a.weight);
    return s;
}

double AtomicMeasure::mass_in(double t0, double t1, double x0, double x1) const {
    double s = 0.0;
    for (const auto& a : atoms) {
        if (a.t >= t0 && a.t <= t1 && a.x >= x0 && a.x <= x1) s += a.weight;
    }
    return s;
}

double AtomicMeasure::at_event(int event_id) const {
    double s = 0.0;
    for (const auto& a : atoms) {
        if (a.event_id == event_id) s += a.weight;
    }
    return s;
}

std::vector<double> AtomicMeasure::per_event(std::size_t n_events) const {
    std::vector<double> w(n_events, 0.0);
    for (const auto& a : atoms) {
        if (a.event_id >= 0 && static_cast<std::size_t>(a.event_id) < n_events)
            w[static_cast<std::size_t>(a.event_id)] += a.weight;
    }
    return w;
}

double default_glimm_c0(const SystemModel& model) {
    double k = 0.0;
    for (int i = 0; i < model.n_eqs(); ++i) {
        if (!model.genuinely_nonlinear(i)) continue;
        k = k == 0.0 ? model.gn_constant(i) : std::min(k, model.gn_constant(i));
    }
    return k > 0.0 ? 16.0 / k : 16.0;
}

GlimmSnapshot glimm_snapshot(const RunLog& log, const std::vector<int>& ordered, double c0) {
    const int n = log.n_eqs;
    // Running sums of |sigma| over fronts already passed, per family (index n = non-physical).
    double all[kMaxEqs + 1] = {0, 0, 0, 0};
    double shock[kMaxEqs + 1] = {0, 0, 0, 0};
    GlimmSnapshot s;
    for (int id : ordered) {
        const Front& f = log.front(id);
        const int fam = f.non_physical() ? n : f.family;
        const double a = std::abs(f.strength);
        const bool is_shock = f.kind == FrontKind::Shock;
        // A front on the left approaches this one if its family is faster, or if it is of the same
        // family and one of the two is a shock.
        double faster_phys = 0.0;
        for (int g = fam + 1; g < n; ++g) faster_phys += all[g];
        const double same = is_shock ? all[fam] : shock[fam];
        if (f.non_physical()) {
            s.V_np += a;
            s.Q_np += a * same;
        } else {
            s.V += a;
            s.V_np += a;
            s.Q += a * (faster_phys + same);
            s.Q_np += a * (faster_phys + same + all[n]);
        }
        all[fam] += a;
        if (is_shock) shock[fam] += a;
    }
    s.upsilon = s.V + c0 * s.Q;
    s.upsilon_np = s.V_np + c0 * s.Q_np;
    return s;
}

GlimmSeries glimm_series(const RunLog& log, const Timeline& tl, double c0, double rel_tol) {
    GlimmSeries g;
    g.c0 = c0;
    for (std::size_t e = 0; e < tl.epoch_count(); ++e) {
        GlimmSnapshot s = glimm_snapshot(log, tl.epoch_fronts(e), c0);
        s.epoch = e;
        s.t = tl.epoch_start(e);
        if (e > 0) {
            const double before = g.snapshots.back().upsilon_np;
            if (s.upsilon_np > before + rel_tol * (1.0 + before))
                g.violations.push_back({static_cast<int>(e - 1), before, s.upsilon_np});
        }
        g.snapshots.push_back(s);
    }
    return g;
}

double interaction_potential(const RunLog& log, const Timeline& tl, double t) {
    return glimm_snapshot(log, tl.fronts_at(t), 0.0).Q;
}

InteractionMeasures interaction_measures(const RunLog& log) {
    InteractionMeasures m;
    m.interaction.name = "interaction";
    m.interaction_cancellation.name = "interaction_cancellation";
    for (const auto& ev : log.events) {
        const Front& a = log.front(ev.incoming.front());
        const Front& b = log.front(ev.incoming.back());
        if (a.non_physical() || b.non_physical()) continue;
        const double prod = std::abs(a.strength * b.strength);
        double canc = 0.0;
        if (a.family == b.family)
            canc = std::abs(a.strength) + std::abs(b.strength) - std::abs(a.strength + b.strength);
        m.interaction.atoms.push_back({ev.t, ev.x, prod, ev.id, "interaction"});
        m.interaction_cancellation.atoms.push_back(
            {ev.t, ev.x, prod + canc, ev.id, canc > 0.0 ? "cancellation" : "interaction"});
    }
    return m;
}

WaveBalance wave_balance_measure(const RunLog& log, int family) {
    if (family < 0 || family >= log.n_eqs) throw Error(ErrorCode::InvalidArgument, "family out of range");
    WaveBalance w;
    w.family = family;
    w.total.name = "wave_balance";
    w.physical.name = "wave_balance_physical";
    w.non_physical.name = "wave_balance_non_physical";
    const auto i = static_cast<std::size_t>(family);
    for (const auto& ev : log.events) {
        const double p = ev.out[i] - ev.in_left[i] - ev.in_right[i];
        const double r = ev.np_out[i] - ev.np_in[i];
        w.physical.atoms.push_back({ev.t, ev.x, p, ev.id, "physical"});
        w.non_physical.atoms.push_back({ev.t, ev.x, r, ev.id, "non_physical"});
        w.total.atoms.push_back({ev.t, ev.x, p + r, ev.id, r != 0.0 ? "non_physical" : "physical"});
    }
    return w;
}

AtomicMeasure jump_balance_measure(const RunLog& log, const JumpSet& js) {
    AtomicMeasure m;
    m.name = "jump_balance";
    for (const auto& [key, n] : js.nodes) {
        (void)key;
        m.atoms.push_back({n.t, n.x, n.q, n.event_id, to_string(n.jump_case)});
    }
    std::stable_sort(m.atoms.begin(), m.atoms.end(), [](const SpaceTimeAtom& a, const SpaceTimeAtom& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.x < b.x;
    });
    (void)log;
    return m;
}

AtomicMeasure icj_measure(const InteractionMeasures& im, const AtomicMeasure& jump) {
    // Merge by event; t = 0 jump atoms keep their own entries.
    std::map<int, SpaceTimeAtom> by_event;
    AtomicMeasure m;
    m.name = "interaction_cancellation_jump";
    for (const auto& a : im.interaction_cancellation.atoms) {
        auto& slot = by_event[a.event_id];
        slot = a;
        slot.kind = a.kind;
    }
    for (const auto& a : jump.atoms) {
        if (a.event_id < 0) {
            m.atoms.push_back({a.t, a.x, std::abs(a.weight), -1, "jump"});
            continue;
        }
        auto it = by_event.find(a.event_id);
        if (it == by_event.end()) {
            by_event[a.event_id] = {a.t, a.x, std::abs(a.weight), a.event_id, "jump"};
        } else {
            it->second.weight += std::abs(a.weight);
            if (a.weight != 0.0) it->second.kind += "+jump";
        }
    }
    for (auto& [id, a] : by_event) {
        (void)id;
        m.atoms.push_back(a);
    }
    std::stable_sort(m.atoms.begin(), m.atoms.end(), [](const SpaceTimeAtom& a, const SpaceTimeAtom& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.x < b.x;
    });
    return m;
}

} // namespace fronttrack
