#include "support.hpp"

#include <fronttrack/measures.hpp>

#include <cmath>

using namespace fttest;

TEST_CASE("glimm functional of a single shock", "[measures]") {
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0}, {1.0, 0.0}), params(0.1, 1.0));
    Timeline tl(log);
    const double c0 = default_glimm_c0(*b);
    CHECK(c0 == Approx(16.0));
    auto g = glimm_snapshot(log, tl.epoch_fronts(0), c0);
    CHECK(g.V == Approx(1.0));
    CHECK(g.Q == 0.0);
    CHECK(g.upsilon == Approx(1.0));
}

TEST_CASE("glimm functional of two approaching shocks", "[measures]") {
    auto b = make_burgers();
    // shocks of strength -0.1 and -0.2 with speeds 0.25 and 0.1
    auto log = run_datum(*b, scalar_steps({0.0, 1.0}, {0.3, 0.2, 0.0}), params(0.1, 10.0));
    Timeline tl(log);
    const double c0 = default_glimm_c0(*b);
    auto g = glimm_snapshot(log, tl.epoch_fronts(0), c0);
    CHECK(g.V == Approx(0.3));
    CHECK(g.Q == Approx(0.02));
    CHECK(g.upsilon == Approx(0.3 + 0.02 * c0));
    auto series = glimm_series(log, tl, c0);
    CHECK(series.monotone());
    CHECK(series.snapshots.back().Q == 0.0);
    CHECK(interaction_potential(log, tl, 9.0) == 0.0);
}

TEST_CASE("interaction measures at a merge", "[measures]") {
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0, 1.0}, {0.3, 0.2, 0.0}), params(0.1, 10.0));
    REQUIRE(log.events.size() == 1);
    auto im = interaction_measures(log);
    CHECK(im.interaction.total() == Approx(0.02));
    CHECK(im.interaction_cancellation.total() == Approx(0.02));
    CHECK(im.interaction.at_event(0) == Approx(0.02));
}

TEST_CASE("shock absorbing a rarefaction front", "[measures]") {
    // shock 0.4 -> 0.2 (speed 0.3) behind a rarefaction front 0.2 -> 0.3 (speed 0.25)
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0, 1.0}, {0.4, 0.2, 0.3}), params(0.1, 40.0));
    REQUIRE(!log.events.empty());
    auto im = interaction_measures(log);
    CHECK(im.interaction.at_event(0) == Approx(0.02));
    CHECK(im.interaction_cancellation.at_event(0) == Approx(0.22));
    auto wb = wave_balance_measure(log, 0);
    CHECK(std::abs(wb.total.at_event(0)) <= 1e-14);
}

TEST_CASE("cross-family interaction in the p-system", "[measures]") {
    auto p = make_p_system(2.0);
    const State ul = st({1.0, 0.0});
    const State um = wave_curve_point(*p, ul, 1, -0.1);
    const State ur = wave_curve_point(*p, um, 0, -0.2);
    RunParams rp = params(0.02, 1.0);
    rp.ladder = {{0.01, 0.04}};
    auto log = run_datum(*p, steps({0.0, 0.5}, {ul, um, ur}), rp);
    REQUIRE(!log.events.empty());
    auto im = interaction_measures(log);
    CHECK(im.interaction.at_event(0) == Approx(0.02).epsilon(1e-8));
    CHECK(im.interaction_cancellation.at_event(0) == Approx(0.02).epsilon(1e-8));
}

TEST_CASE("wave balance vanishes on scalar merges", "[measures][property]") {
    auto b = make_burgers();
    forall(20, 41, [](std::mt19937_64& r) { return random_burgers_steps(r, 5, 0.3); },
           [&](const StepDatum& d) {
               auto log = run_datum(*b, d, params(0.05, 3.0));
               auto wb = wave_balance_measure(log, 0);
               CHECK(wb.total.total_variation() <= 1e-12);
               CHECK(wb.non_physical.total_variation() == 0.0);
           });
}

TEST_CASE("wave balance is bounded by interactions", "[measures][property]") {
    auto p = make_p_system(2.0);
    forall(8, 42, [](std::mt19937_64& r) { return random_psys_steps(r, 5, 0.03); },
           [&](const StepDatum& d) {
               auto log = run_datum(*p, d, params(0.02, 2.0));
               auto im = interaction_measures(log);
               for (int i = 0; i < 2; ++i) {
                   auto wb = wave_balance_measure(log, i);
                   auto mu = wb.physical.per_event(log.events.size());
                   auto ic = im.interaction_cancellation.per_event(log.events.size());
                   for (std::size_t e = 0; e < mu.size(); ++e) {
                       INFO("event " << e);
                       CHECK(std::abs(mu[e]) <= 4.0 * ic[e] + 1e-12);
                   }
               }
           });
}

TEST_CASE("jump balance atoms", "[measures]") {
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0, 1.0}, {0.3, 0.2, 0.0}), params(0.1, 10.0));
    auto js = jump_set(log, 0, 0.05, 0.25);
    auto jb = jump_balance_measure(log, js);
    // two starts at t = 0 with q = sigma, a triple with q = 0
    CHECK(jb.mass_in(0.0, 0.0, -10.0, 10.0) == Approx(-0.3));
    CHECK(jb.at_event(0) == Approx(0.0).margin(1e-14));

    auto im = interaction_measures(log);
    auto icj = icj_measure(im, jb);
    CHECK(icj.total() == Approx(im.interaction_cancellation.total() + jb.total_variation()));
}

TEST_CASE("atomic measure arithmetic", "[measures]") {
    AtomicMeasure m;
    m.atoms = {{0.5, 0.0, 1.0, 0, "a"}, {1.0, 1.0, -0.25, 1, "b"}, {2.0, -1.0, 0.5, 1, "c"}};
    CHECK(m.total() == Approx(1.25));
    CHECK(m.positive_mass() == Approx(1.5));
    CHECK(m.negative_mass() == Approx(-0.25));
    CHECK(m.total_variation() == Approx(1.75));
    CHECK(m.mass_in(0.0, 1.0, -1.0, 1.0) == Approx(0.75));
    CHECK(m.at_event(1) == Approx(0.25));
    auto pe = m.per_event(3);
    CHECK(pe[0] == 1.0);
    CHECK(pe[1] == Approx(0.25));
    CHECK(pe[2] == 0.0);
}
