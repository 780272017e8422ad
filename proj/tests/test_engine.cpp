#include "support.hpp"

#include <fronttrack/engine.hpp>
#include <fronttrack/serialize.hpp>

#include <chrono>
#include <cmath>

using namespace fttest;

TEST_CASE("initial sampling", "[engine]") {
    auto b = make_burgers();
    auto one = sample_initial_datum(*b, scalar_steps({0.0}, {1.0, 0.0}), 0.1);
    REQUIRE(one.fronts.size() == 1);
    CHECK(one.fronts[0].kind == FrontKind::Shock);
    CHECK(one.fronts[0].speed == Approx(0.5));

    auto fan = sample_initial_datum(*b, scalar_steps({0.0}, {0.0, 1.0}), 0.25);
    REQUIRE(fan.fronts.size() == 4);
    for (const auto& f : fan.fronts) {
        CHECK(f.kind == FrontKind::Rarefaction);
        CHECK(f.strength == Approx(0.25));
    }

    std::vector<double> br, vals;
    for (int k = 0; k <= 8; ++k) vals.push_back(-0.05 * k);
    for (int k = 1; k <= 8; ++k) br.push_back(k / 8.0);
    StepDatum ramp = scalar_steps(br, vals);
    CHECK(ramp.total_variation() == Approx(0.4));
    auto r = sample_initial_datum(*b, ramp, 0.1);
    CHECK(r.fronts.size() == 8);
}

TEST_CASE("systems with large variation are refused", "[engine]") {
    auto p = make_p_system(2.0);
    StepDatum d = steps({0.0}, {st({1.0, 0.0}), st({1.0, 0.6})});
    try {
        sample_initial_datum(*p, d, 0.1);
        FAIL("expected TVTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TVTooLarge);
    }
}

TEST_CASE("two shocks merge", "[engine]") {
    // u = 1 | 0.4 | -0.2 with jumps at 0 and 1: speeds 0.7 and 0.1 meet at t = 5/3
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0, 1.0}, {1.0, 0.4, -0.2}), params(0.1, 3.0));
    REQUIRE(log.events.size() == 1);
    const auto& ev = log.events[0];
    CHECK(ev.t == Approx(5.0 / 3.0).epsilon(1e-8));
    CHECK(ev.x == Approx(0.7 * 5.0 / 3.0).epsilon(1e-8));
    REQUIRE(ev.outgoing.size() == 1);
    const Front& out = log.front(ev.outgoing[0]);
    CHECK(out.strength == Approx(-1.2));
    CHECK(out.speed == Approx(0.4));
    CHECK(replay(log).ok);
}

TEST_CASE("a single shock never interacts", "[engine]") {
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0}, {1.0, 0.0}), params(0.1, 5.0));
    CHECK(log.events.empty());
    CHECK(log.final_fronts.size() == 1);
    CHECK(replay(log).ok);
    CHECK(state_at(log, 2.0, 0.99)(0) == 1.0);
    CHECK(state_at(log, 2.0, 1.01)(0) == 0.0);
}

TEST_CASE("state is right-continuous in x", "[engine]") {
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0}, {1.0, 0.0}), params(0.1, 5.0));
    const Front& f = log.front(log.final_fronts[0]);
    const double x = f.x_at(2.0);
    CHECK(state_at(log, 2.0, x)(0) == 0.0);
    Timeline tl(log);
    CHECK(tl.state_left_of(2.0, x)(0) == 1.0);
}

TEST_CASE("scalar interactions conserve strength", "[engine][property]") {
    auto b = make_burgers();
    forall(30, 31, [](std::mt19937_64& r) { return random_burgers_steps(r, 6, 0.3); },
           [&](const StepDatum& d) {
               auto log = run_datum(*b, d, params(0.05, 4.0));
               CHECK(replay(log).ok);
               double prev = 0.0;
               for (const auto& ev : log.events) {
                   CHECK(ev.t >= prev);
                   prev = ev.t;
                   CHECK(ev.incoming.size() == 2);
                   CHECK(ev.out[0] == Approx(ev.in_left[0] + ev.in_right[0]).margin(1e-12));
               }
               // scalar total variation never grows
               const double tv0 = total_variation(log, 0.0);
               for (double t : {0.5, 1.0, 2.0, 3.9}) CHECK(total_variation(log, t) <= tv0 + 1e-12);
           });
}

TEST_CASE("total variation of simple states", "[engine]") {
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0, 1.0}, {1.0, 0.4, -0.2}), params(0.1, 3.0));
    CHECK(total_variation(log, 0.0) == Approx(1.2));
    CHECK(total_variation(log, 2.5) == Approx(1.2));
}

TEST_CASE("p-system runs replay and keep the non-physical budget", "[engine][property]") {
    auto p = make_p_system(2.0);
    forall(10, 32, [](std::mt19937_64& r) { return random_psys_steps(r, 5, 0.03); },
           [&](const StepDatum& d) {
               RunParams rp = params(0.02, 2.0);
               auto log = run_datum(*p, d, rp);
               CHECK(replay(log).ok);
               CHECK(log.max_np_total <= rp.eps_nu());
               for (const auto& ev : log.events) CHECK(ev.incoming.size() == 2);
           });
}

TEST_CASE("non-physical budget alarm", "[engine]") {
    auto p = make_p_system(2.0);
    RunParams rp = params(0.02, 2.0);
    rp.np_threshold = 1.0;   // every interaction uses the simplified solver
    rp.np_budget = 1e-12;
    StepDatum d = steps({-0.5, 0.5}, {st({1.0, 0.0}), st({1.0, -0.05}), st({1.0, 0.0})});
    auto log = run_datum(*p, d, rp);
    bool found = false;
    for (const auto& a : log.alarms) found = found || a.kind == "BudgetExceeded";
    CHECK(found);
}

TEST_CASE("front count limit", "[engine]") {
    auto b = make_burgers();
    RunParams rp = params(0.01, 2.0);
    rp.max_fronts = 5;
    try {
        run_datum(*b, scalar_steps({0.0}, {0.0, 1.0}), rp);
        FAIL("expected FrontCountExplosion");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FrontCountExplosion);
    }
}

TEST_CASE("timeline epochs", "[engine]") {
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0, 1.0}, {1.0, 0.4, -0.2}), params(0.1, 3.0));
    Timeline tl(log);
    REQUIRE(tl.epoch_count() == 2);
    CHECK(tl.epoch_of(0.0) == 0);
    CHECK(tl.epoch_of(log.events[0].t) == 1);
    CHECK(tl.epoch_fronts(0).size() == 2);
    CHECK(tl.epoch_fronts(1).size() == 1);
    CHECK(tl.epoch_end(0) == log.events[0].t);
}

TEST_CASE("runs are deterministic", "[engine]") {
    auto p = make_p_system(2.0);
    std::mt19937_64 rng(33);
    StepDatum d = random_psys_steps(rng, 6, 0.03);
    auto a = run_datum(*p, d, params(0.02, 2.0));
    auto c = run_datum(*p, d, params(0.02, 2.0));
    CHECK(to_jsonl(a) == to_jsonl(c));
}

TEST_CASE("sampled burgers datum on 200 cells stays fast", "[engine]") {
    auto b = make_burgers();
    std::vector<double> br, vals;
    for (int k = 0; k <= 200; ++k) vals.push_back(0.5 * std::sin(2.0 * M_PI * k / 200.0));
    for (int k = 1; k <= 200; ++k) br.push_back(k / 200.0);
    auto start = std::chrono::steady_clock::now();
    auto log = run_datum(*b, scalar_steps(br, vals), params(0.05, 1.0));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(secs < 10.0);
    CHECK(log.fronts.size() < 100000);
}
