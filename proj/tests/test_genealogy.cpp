#include "support.hpp"

#include <fronttrack/genealogy.hpp>

#include <algorithm>
#include <cmath>

using namespace fttest;

TEST_CASE("a single strong shock is one path", "[genealogy]") {
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0}, {1.0, 0.0}), params(0.1, 2.0));
    auto js = jump_set(log, 0, 0.1, 0.5);
    REQUIRE(js.paths.size() == 1);
    const auto& p = js.paths[0];
    CHECK(p.t_minus == 0.0);
    CHECK(p.t_plus == 2.0);
    CHECK_FALSE(p.terminates);
    CHECK(p.max_abs_strength == Approx(1.0));
    CHECK(js.segment_count() == 1);
}

TEST_CASE("a weak shock is not a jump", "[genealogy]") {
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0}, {0.3, 0.0}), params(0.1, 2.0));
    auto js = jump_set(log, 0, 0.1, 0.5);
    CHECK(js.paths.empty());
    CHECK(js.segment_count() == 0);
    CHECK(js.nodes.empty());
}

TEST_CASE("erosion ends a path at a terminal node", "[genealogy]") {
    auto b = make_burgers();
    RunParams rp = params(0.1, 60.0);
    rp.ladder = {{0.15, 0.5}};
    auto log = run_datum(*b, scalar_steps({0.0, 1.0}, {0.0, 0.6, 0.0}), rp);
    auto js = jump_set(log, 0, 0.15, 0.5);
    REQUIRE(js.paths.size() == 1);
    const auto& p = js.paths[0];
    CHECK(p.terminates);
    CHECK(p.nodes.back().role == NodeRole::Terminal);
    CHECK(std::abs(p.terminal_residual) <= 0.15);
    CHECK(p.t_plus < 60.0);
    const auto& node = js.nodes.at(p.nodes.back().event_id);
    CHECK(node.jump_case == JumpCase::Terminal);
    CHECK(node.n_in == 1);
    CHECK(node.n_out == 0);
    // q is minus the arriving strength, so positive for a shock
    CHECK(node.q > 0.0);
}

TEST_CASE("a merge is interior to one path and ends the other", "[genealogy]") {
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0, 1.0}, {1.0, 0.4, -0.2}), params(0.1, 3.0));
    auto js = jump_set(log, 0, 0.1, 0.5);
    REQUIRE(js.paths.size() == 2);
    REQUIRE(log.events.size() == 1);
    int interior = 0, endpoint = 0;
    for (const auto& p : js.paths) {
        bool arrives = false, leaves = false;
        for (int id : p.segments) {
            arrives = arrives || log.front(id).child_event == 0;
            leaves = leaves || log.front(id).parent_event == 0;
        }
        if (arrives && leaves) ++interior;
        if (arrives && !leaves) ++endpoint;
    }
    CHECK(interior == 1);
    CHECK(endpoint == 1);
    CHECK(js.nodes.at(0).jump_case == JumpCase::Triple);
    CHECK(js.nodes.at(0).q == Approx(0.0).margin(1e-14));
}

TEST_CASE("a weak shock feeding a strong one belongs to the jump set", "[genealogy]") {
    // -0.05 merges into -0.65; the merged line reaches eps1 so the weak branch is part of it
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0, 0.2}, {1.0, 0.95, 0.3}), params(0.1, 3.0));
    REQUIRE(!log.events.empty());
    auto js = jump_set(log, 0, 0.02, 0.1);
    for (int id : log.initial) CHECK(js.contains(id));
    const auto& ev = log.events[0];
    CHECK(js.contains(ev.outgoing[0]));
}

TEST_CASE("jump sets shrink along the ladder", "[genealogy][property]") {
    auto b = make_burgers();
    forall(30, 51, [](std::mt19937_64& r) { return random_burgers_steps(r, 8, 0.5); },
           [&](const StepDatum& d) {
               auto log = run_datum(*b, d, params(0.05, 3.0));
               auto j1 = jump_set(log, 0, 0.02, 0.1);
               auto j2 = jump_set(log, 0, 0.04, 0.2);
               auto j3 = jump_set(log, 0, 0.08, 0.4);
               CHECK(jump_set_contains(j1, j2));
               CHECK(jump_set_contains(j2, j3));
               for (const auto& p : j2.paths) {
                   for (int id : p.segments) CHECK(std::abs(log.front(id).strength) >= 0.04 - 1e-12);
                   CHECK(p.max_abs_strength >= 0.2 - 1e-12);
               }
           });
}

TEST_CASE("paths are consistent polylines", "[genealogy][property]") {
    auto p = make_p_system(2.0);
    forall(8, 52, [](std::mt19937_64& r) { return random_psys_steps(r, 6, 0.03); },
           [&](const StepDatum& d) {
               auto log = run_datum(*p, d, params(0.02, 2.0));
               for (int i = 0; i < 2; ++i) {
                   auto js = jump_set(log, i, 0.005, 0.02);
                   for (const auto& path : js.paths) {
                       REQUIRE(!path.segments.empty());
                       CHECK(path.family == i);
                       for (std::size_t k = 0; k < path.segments.size(); ++k) {
                           const Front& f = log.front(path.segments[k]);
                           CHECK(f.is_shock_of(i));
                           if (k > 0) CHECK(log.front(path.segments[k - 1]).child_event == f.parent_event);
                       }
                       CHECK(path.t_minus <= path.t_plus);
                   }
                   for (const auto& [id, node] : js.nodes) {
                       if (node.jump_case == JumpCase::Triple) CHECK(node.n_in == 2);
                       if (node.jump_case == JumpCase::Initial) CHECK(node.n_in == 0);
                   }
               }
           });
}
