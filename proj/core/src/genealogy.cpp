#include "fronttrack/genealogy.hpp"

#include <algorithm>
#include <cmath>

namespace fronttrack {

const char* to_string(NodeRole role) {
    switch (role) {
    case NodeRole::Initial: return "initial";
    case NodeRole::Triple: return "triple";
    case NodeRole::MergeIn: return "merge_in";
    case NodeRole::CancelHit: return "cancel_hit";
    case NodeRole::Terminal: return "terminal";
    }
    return "unknown";
}

const char* to_string(JumpCase c) {
    switch (c) {
    case JumpCase::Initial: return "initial";
    case JumpCase::Triple: return "triple";
    case JumpCase::Terminal: return "terminal";
    case JumpCase::Otherwise: return "otherwise";
    }
    return "unknown";
}

std::size_t JumpSet::segment_count() const {
    return static_cast<std::size_t>(std::count(member.begin(), member.end(), char{1}));
}

namespace {

// Shocks for genuinely nonlinear families; contacts of linearly degenerate ones are tracked the
// same way but flagged as informational.
bool tracked_kind(const Front& f, int family) {
    return f.family == family && (f.kind == FrontKind::Shock || f.kind == FrontKind::Contact);
}

struct Forest {
    std::vector<char> admissible;
    std::vector<int> succ;
    std::vector<int> pred_left;
    std::vector<int> pred_right;
};

Forest build_forest(const RunLog& log, int family, double eps0) {
    const std::size_t n = log.fronts.size();
    Forest g;
    g.admissible.assign(n, 0);
    g.succ.assign(n, -1);
    g.pred_left.assign(n, -1);
    g.pred_right.assign(n, -1);
    for (const auto& f : log.fronts) {
        if (tracked_kind(f, family) && std::abs(f.strength) >= eps0)
            g.admissible[static_cast<std::size_t>(f.id)] = 1;
    }
    for (const auto& ev : log.events) {
        int out = -1;
        for (int id : ev.outgoing) {
            if (g.admissible[static_cast<std::size_t>(id)]) out = id;
        }
        if (out < 0) continue;
        const int l = ev.incoming.front();
        const int r = ev.incoming.back();
        const bool al = g.admissible[static_cast<std::size_t>(l)] != 0;
        const bool ar = g.admissible[static_cast<std::size_t>(r)] != 0;
        if (al) g.succ[static_cast<std::size_t>(l)] = out;
        if (ar) g.succ[static_cast<std::size_t>(r)] = out;
        if (al && ar) {
            g.pred_left[static_cast<std::size_t>(out)] = l;
            g.pred_right[static_cast<std::size_t>(out)] = r;
        } else if (al) {
            g.pred_left[static_cast<std::size_t>(out)] = l;
        } else if (ar) {
            g.pred_left[static_cast<std::size_t>(out)] = r;
        }
    }
    return g;
}

} // namespace

std::vector<ShockFrontPath> extract_maximal_fronts(const RunLog& log, int family, double eps0, double eps1) {
    if (!(eps0 > 0.0) || !(eps1 > eps0)) throw Error(ErrorCode::InvalidArgument, "need 0 < eps0 < eps1");
    Forest g = build_forest(log, family, eps0);
    const std::size_t n = log.fronts.size();

    // A segment is kept when some admissible line through it reaches eps1, looking both
    // downstream along successors and upstream through every ancestor.
    std::vector<double> fwd(n, -1.0), bwd(n, -1.0);
    auto strength = [&](int id) { return std::abs(log.front(id).strength); };
    std::vector<int> order;
    for (const auto& f : log.fronts) {
        if (g.admissible[static_cast<std::size_t>(f.id)]) order.push_back(f.id);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Front& fa = log.front(a);
        const Front& fb = log.front(b);
        if (fa.t_birth != fb.t_birth) return fa.t_birth < fb.t_birth;
        return a < b;
    });
    for (int id : order) {
        const auto k = static_cast<std::size_t>(id);
        double m = strength(id);
        for (int p : {g.pred_left[k], g.pred_right[k]}) {
            if (p >= 0) m = std::max(m, bwd[static_cast<std::size_t>(p)]);
        }
        bwd[k] = m;
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto k = static_cast<std::size_t>(*it);
        fwd[k] = strength(*it);
        if (g.succ[k] >= 0) fwd[k] = std::max(fwd[k], fwd[static_cast<std::size_t>(g.succ[k])]);
    }
    std::vector<char> keep(n, 0);
    for (int id : order) {
        const auto k = static_cast<std::size_t>(id);
        keep[k] = std::max(fwd[k], bwd[k]) >= eps1 ? 1 : 0;
    }
    // Restrict the forest to kept segments. A kept segment's successor is always kept.
    for (int id : order) {
        const auto k = static_cast<std::size_t>(id);
        const int l = g.pred_left[k];
        const int r = g.pred_right[k];
        const bool kl = l >= 0 && keep[static_cast<std::size_t>(l)];
        const bool kr = r >= 0 && keep[static_cast<std::size_t>(r)];
        g.pred_left[k] = kl ? l : (kr ? r : -1);
        g.pred_right[k] = kl && kr ? r : -1;
    }

    // Walk back from each root along left predecessors; right predecessors start new branches.
    struct Pending {
        int end_segment;
        bool merges;
    };
    std::vector<Pending> stack;
    for (int id : order) {
        const auto k = static_cast<std::size_t>(id);
        if (keep[k] && g.succ[k] < 0) stack.push_back({id, false});
    }
    std::vector<ShockFrontPath> paths;
    while (!stack.empty()) {
        const Pending p = stack.back();
        stack.pop_back();
        std::vector<int> segs;
        int cur = p.end_segment;
        while (cur >= 0) {
            segs.push_back(cur);
            const auto k = static_cast<std::size_t>(cur);
            if (g.pred_right[k] >= 0) stack.push_back({g.pred_right[k], true});
            cur = g.pred_left[k];
        }
        std::reverse(segs.begin(), segs.end());
        ShockFrontPath path;
        path.family = family;
        path.segments = segs;
        path.merges = p.merges;
        path.informational = log.front(segs.front()).kind == FrontKind::Contact;
        // Over the whole line: the branch plus whatever it merges into.
        path.max_abs_strength = fwd[static_cast<std::size_t>(segs.front())];
        const Front& first = log.front(segs.front());
        const Front& last = log.front(segs.back());
        path.t_minus = first.t_birth;
        path.t_plus = std::min(last.t_death, log.params.horizon);
        path.terminates = !p.merges && last.child_event >= 0;
        if (path.terminates) {
            for (int id : log.events[static_cast<std::size_t>(last.child_event)].outgoing) {
                if (tracked_kind(log.front(id), family)) path.terminal_residual = log.front(id).strength;
            }
        }
        paths.push_back(std::move(path));
    }
    std::sort(paths.begin(), paths.end(), [&](const ShockFrontPath& a, const ShockFrontPath& b) {
        const Front& fa = log.front(a.segments.front());
        const Front& fb = log.front(b.segments.front());
        if (fa.x_birth != fb.x_birth) return fa.x_birth < fb.x_birth;
        if (fa.t_birth != fb.t_birth) return fa.t_birth < fb.t_birth;
        return fa.id < fb.id;
    });
    for (std::size_t k = 0; k < paths.size(); ++k) paths[k].id = static_cast<int>(k);
    return paths;
}

namespace {

JumpCase case_of(int n_in, int n_out) {
    if (n_in == 0 && n_out == 1) return JumpCase::Initial;
    if (n_in == 2 && n_out == 1) return JumpCase::Triple;
    if (n_in == 1 && n_out == 0) return JumpCase::Terminal;
    if (n_in == 1 && n_out == 1) return JumpCase::Otherwise;
    throw Error(ErrorCode::InconsistentJumpSet,
                "node with " + std::to_string(n_in) + " incoming and " + std::to_string(n_out) + " outgoing segments");
}

NodeRole role_of(JumpCase c) {
    switch (c) {
    case JumpCase::Initial: return NodeRole::Initial;
    case JumpCase::Triple: return NodeRole::Triple;
    case JumpCase::Terminal: return NodeRole::Terminal;
    case JumpCase::Otherwise: return NodeRole::CancelHit;
    }
    return NodeRole::CancelHit;
}

} // namespace

JumpSet jump_set(const RunLog& log, int family, double eps0, double eps1) {
    JumpSet js;
    js.family = family;
    js.eps0 = eps0;
    js.eps1 = eps1;
    js.paths = extract_maximal_fronts(log, family, eps0, eps1);
    js.member.assign(log.fronts.size(), 0);
    for (const auto& p : js.paths) {
        for (int id : p.segments) js.member[static_cast<std::size_t>(id)] = 1;
    }
    for (const auto& f : log.fronts) {
        if (!js.contains(f.id) || f.parent_event >= 0) continue;
        JumpNode n;
        n.event_id = -1;
        n.t = f.t_birth;
        n.x = f.x_birth;
        n.n_out = 1;
        n.q = f.strength;
        n.jump_case = JumpCase::Initial;
        js.nodes[-f.id - 2] = n;
    }
    for (const auto& ev : log.events) {
        JumpNode n;
        n.event_id = ev.id;
        n.t = ev.t;
        n.x = ev.x;
        for (int id : ev.incoming) {
            if (js.contains(id)) {
                ++n.n_in;
                n.q -= log.front(id).strength;
            }
        }
        for (int id : ev.outgoing) {
            if (js.contains(id)) {
                ++n.n_out;
                n.q += log.front(id).strength;
            }
        }
        if (n.n_in == 0 && n.n_out == 0) continue;
        n.jump_case = case_of(n.n_in, n.n_out);
        js.nodes[ev.id] = n;
    }
    for (auto& p : js.paths) {
        const Front& first = log.front(p.segments.front());
        if (first.parent_event < 0) {
            p.nodes.push_back({-1, first.t_birth, first.x_birth, NodeRole::Initial});
        } else {
            const JumpNode& n = js.nodes.at(first.parent_event);
            p.nodes.push_back({n.event_id, n.t, n.x, role_of(n.jump_case)});
        }
        for (int id : p.segments) {
            const Front& f = log.front(id);
            if (f.child_event < 0) break;
            const JumpNode& n = js.nodes.at(f.child_event);
            NodeRole role = role_of(n.jump_case);
            if (id == p.segments.back() && p.merges) {
                if (n.jump_case == JumpCase::Triple) {
                    role = NodeRole::MergeIn;
                } else {
                    // The branch it merged into was dropped, so here it simply ends.
                    p.merges = false;
                    p.terminates = true;
                    for (int o : log.events[static_cast<std::size_t>(n.event_id)].outgoing) {
                        if (log.front(o).family == p.family && log.front(o).kind != FrontKind::Rarefaction)
                            p.terminal_residual = log.front(o).strength;
                    }
                }
            }
            p.nodes.push_back({n.event_id, n.t, n.x, role});
        }
    }
    return js;
}

bool jump_set_contains(const JumpSet& outer, const JumpSet& inner) {
    for (std::size_t k = 0; k < inner.member.size(); ++k) {
        if (inner.member[k] && (k >= outer.member.size() || !outer.member[k])) return false;
    }
    return true;
}

} // namespace fronttrack
