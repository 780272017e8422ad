#include "support.hpp"

#include <fronttrack/riemann.hpp>

#include <cmath>

using namespace fttest;

TEST_CASE("burgers riemann fans", "[riemann]") {
    auto b = make_burgers();
    auto shock = solve_riemann(*b, st({1.0}), st({0.0}));
    REQUIRE(shock.waves.size() == 1);
    CHECK(shock.waves[0].kind == WaveKind::Shock);
    CHECK(shock.waves[0].strength == Approx(-1.0));
    CHECK(shock.waves[0].speed == Approx(0.5));

    auto fan = solve_riemann(*b, st({0.0}), st({1.0}));
    REQUIRE(fan.waves.size() == 1);
    CHECK(fan.waves[0].kind == WaveKind::RarefactionFan);
    CHECK(fan.waves[0].strength == Approx(1.0));
}

TEST_CASE("p-system riemann solution inverts the Lax map", "[riemann]") {
    auto p = make_p_system(2.0);
    const State ul = st({1.0, 0.0});
    const State sigma = st({0.05, -0.03});
    State ur = lax_map(*p, ul, sigma).back();
    auto fan = solve_riemann(*p, ul, ur);
    CHECK((fan.strengths - sigma).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(fan.residual <= 1e-9);
    REQUIRE(fan.states.size() == 3);
    CHECK((fan.states.front() - ul).norm() == 0.0);
    CHECK((fan.states.back() - ur).norm() == 0.0);
}

TEST_CASE("riemann round trip and wave ordering", "[riemann][property]") {
    auto p = make_p_system(2.0);
    forall(200, 21,
           [](std::mt19937_64& r) {
               return std::make_pair(st({uniform(r, 0.9, 1.1), uniform(r, -0.1, 0.1)}),
                                     st({uniform(r, -0.05, 0.05), uniform(r, -0.05, 0.05)}));
           },
           [&](const std::pair<State, State>& in) {
               State ur = lax_map(*p, in.first, in.second).back();
               auto fan = solve_riemann(*p, in.first, ur);
               CHECK((fan.strengths - in.second).cwiseAbs().maxCoeff() <= 1e-8);
               for (std::size_t k = 1; k < fan.waves.size(); ++k)
                   CHECK(fan.waves[k - 1].speed < fan.waves[k].speed);
               for (const auto& w : fan.waves) {
                   if (w.kind == WaveKind::Shock) {
                       CHECK(rh_residual(*p, w.left_state, w.right_state, w.speed) <= 1e-10);
                       CHECK(lax_check(*p, w).admissible());
                   }
               }
           });
}

TEST_CASE("rarefaction discretization", "[riemann]") {
    auto b = make_burgers();
    auto w = make_wave(*b, st({0.0}), 0, 1.0);
    auto subs = discretize_rarefaction(*b, w, 0.25);
    REQUIRE(subs.size() == 4);
    const double speeds[] = {0.125, 0.375, 0.625, 0.875};
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(subs[k].strength == Approx(0.25));
        CHECK(subs[k].speed == Approx(speeds[k]));
    }
    CHECK(subs.front().left(0) == 0.0);
    CHECK(subs.back().right(0) == Approx(1.0));

    auto w2 = make_wave(*b, st({0.0}), 0, 0.3);
    auto subs2 = discretize_rarefaction(*b, w2, 0.25);
    REQUIRE(subs2.size() == 2);
    CHECK(subs2[0].strength == Approx(0.15));
    CHECK(subs2[1].strength == Approx(0.15));
}

TEST_CASE("discretized fans stay within nu", "[riemann][property]") {
    auto p = make_p_system(2.0);
    forall(60, 22,
           [](std::mt19937_64& r) {
               return std::make_tuple(static_cast<int>(r() % 2), uniform(r, 0.001, 0.1), uniform(r, 0.005, 0.05));
           },
           [&](const std::tuple<int, double, double>& in) {
               auto [i, s, nu] = in;
               auto w = make_wave(*p, st({1.0, 0.0}), i, s);
               auto subs = discretize_rarefaction(*p, w, nu);
               const std::size_t n = static_cast<std::size_t>(std::ceil(s / nu - 1e-12));
               CHECK(subs.size() == std::max<std::size_t>(n, 1));
               double total = 0.0;
               for (const auto& sj : subs) {
                   CHECK(sj.strength <= nu + 1e-12);
                   total += sj.strength;
               }
               CHECK(total == Approx(s).epsilon(1e-12));
               for (std::size_t k = 1; k < subs.size(); ++k) CHECK(subs[k - 1].speed < subs[k].speed);
           });
}

TEST_CASE("lax margins", "[riemann]") {
    auto b = make_burgers();
    auto w = make_wave(*b, st({1.0}), 0, -1.0);
    auto rep = lax_check(*b, w);
    CHECK(rep.left_margin == Approx(0.5));
    CHECK(rep.right_margin == Approx(0.5));
    CHECK(rep.admissible());
}

TEST_CASE("simplified solver keeps incoming sizes", "[riemann]") {
    auto p = make_p_system(2.0);
    const State ul = st({1.0, 0.0});

    SECTION("a single wave passes through unchanged") {
        State ur = wave_curve_point(*p, ul, 0, -0.02);
        auto fan = solve_simplified(*p, ul, ur, {{0, false, -0.02}});
        double np = 0.0;
        int phys = 0;
        for (const auto& w : fan.waves) {
            if (w.non_physical()) {
                np += w.strength;
            } else {
                ++phys;
                CHECK(w.family == 0);
                CHECK(w.strength == Approx(-0.02).epsilon(1e-12));
            }
        }
        CHECK(phys == 1);
        CHECK(np <= 1e-10);
    }

    SECTION("a mismatch is sent to a non-physical front") {
        State ur = wave_curve_point(*p, ul, 1, 0.01);
        State d = st({1e-4, -2e-4});
        auto fan = solve_simplified(*p, ul, ur + d, {{1, false, 0.01}, {0, true, d.norm()}});
        REQUIRE(!fan.waves.empty());
        const Wave& last = fan.waves.back();
        CHECK(last.non_physical());
        CHECK(last.strength == Approx(d.norm()).epsilon(1e-8));
        CHECK(last.speed == p->np_speed());
    }

    SECTION("crossing waves leave a non-physical front of size O(product)") {
        const double s1 = 3e-5, s2 = 3e-5;
        State um = wave_curve_point(*p, ul, 1, s1);
        State ur = wave_curve_point(*p, um, 0, s2);
        auto fan = solve_simplified(*p, ul, ur, {{1, false, s1}, {0, false, s2}});
        double np = 0.0;
        for (const auto& w : fan.waves)
            if (w.non_physical()) np += w.strength;
        CHECK(np <= 10.0 * s1 * s2);
        auto accurate = solve_riemann(*p, ul, ur);
        CHECK(std::abs(accurate.strengths(0) - s2) <= 10.0 * s1 * s2);
        CHECK(std::abs(accurate.strengths(1) - s1) <= 10.0 * s1 * s2);
    }
}

TEST_CASE("linearly degenerate contact has zero lax margins", "[riemann]") {
    PolynomialFluxSpec spec;
    spec.n = 2;
    Monomial a;
    a.coef = 0.5;
    a.exps = {2, 0, 0};
    Monomial c;
    c.coef = 2.0;
    c.exps = {0, 1, 0};
    Monomial d;
    d.coef = 1.0;
    d.exps = {1, 0, 0};
    // f1 = u^2/2, f2 = u + 2 v: eigenvalues u and 2, the second field is linearly degenerate
    spec.flux = {{a}, {d, c}};
    spec.kinds = {FieldKind::GenuinelyNonlinear, FieldKind::LinearlyDegenerate};
    spec.box = Box{st({-0.5, -1.0}), st({0.5, 1.0})};
    auto m = make_polynomial(spec);
    auto w = make_wave(*m, st({0.1, 0.0}), 1, 0.2);
    CHECK(w.kind == WaveKind::Contact);
    auto rep = lax_check(*m, w);
    CHECK(std::abs(rep.left_margin) <= 1e-10);
    CHECK(std::abs(rep.right_margin) <= 1e-10);
}
