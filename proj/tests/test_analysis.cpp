#include "support.hpp"

#include <fronttrack/analysis.hpp>

#include <cmath>

using namespace fttest;

namespace {

struct Bundle {
    ModelPtr model;
    RunLog log;
    std::unique_ptr<Timeline> tl;
};

Bundle make_bundle(ModelPtr m, const StepDatum& d, const RunParams& p) {
    Bundle b{m, run_datum(*m, d, p), nullptr};
    b.tl = std::make_unique<Timeline>(b.log);
    return b;
}

std::vector<Interval> random_union(std::mt19937_64& r, double lo, double hi, int max_k) {
    const int k = 1 + static_cast<int>(r() % static_cast<std::uint64_t>(max_k));
    std::vector<double> cuts;
    for (int j = 0; j < 2 * k; ++j) cuts.push_back(uniform(r, lo, hi));
    std::sort(cuts.begin(), cuts.end());
    std::vector<Interval> out;
    for (int j = 0; j < k; ++j)
        if (cuts[2 * j + 1] > cuts[2 * j]) out.push_back({cuts[2 * j], cuts[2 * j + 1]});
    if (out.empty()) out.push_back({lo, hi});
    return out;
}

} // namespace

TEST_CASE("wave measure of simple states", "[analysis]") {
    auto b = make_bundle(make_burgers(), scalar_steps({0.0}, {1.0, 0.0}), params(0.1, 2.0));
    auto js = jump_set(b.log, 0, 0.1, 0.5);
    auto wm = wave_measure_at(*b.tl, 1.0, 0, &js);
    REQUIRE(wm.all.atoms().size() == 1);
    CHECK(wm.all.atoms()[0].x == Approx(0.5));
    CHECK(wm.all.atoms()[0].weight == Approx(-1.0));
    CHECK(wm.jump.total() == Approx(-1.0));
    CHECK(wm.cont.total() == 0.0);
    CHECK_THROWS_AS(wave_measure_at(*b.tl, 1.0, 0, nullptr), Error);

    auto fan = make_bundle(make_burgers(), scalar_steps({0.0}, {0.0, 1.0}), params(0.25, 2.0));
    auto js2 = jump_set(fan.log, 0, 0.1, 0.5);
    auto wf = wave_measure_at(*fan.tl, 1.0, 0, &js2);
    REQUIRE(wf.all.atoms().size() == 4);
    for (const auto& a : wf.all.atoms()) CHECK(a.weight == Approx(0.25));
    CHECK(wf.cont.total() == Approx(1.0));
}

TEST_CASE("p-system fronts carry only their own family", "[analysis]") {
    auto p = make_p_system(2.0);
    const State ul = st({1.0, 0.0});
    const State ur = wave_curve_point(*p, ul, 1, -0.05);
    auto b = make_bundle(p, steps({0.0}, {ul, ur}), params(0.02, 1.0));
    auto js0 = jump_set(b.log, 0, 0.01, 0.04);
    auto js1 = jump_set(b.log, 1, 0.01, 0.04);
    CHECK(std::abs(wave_measure_at(*b.tl, 0.5, 0, &js0).all.total()) <= 1e-12);
    CHECK(wave_measure_at(*b.tl, 0.5, 1, &js1).all.total() == Approx(-0.05).epsilon(1e-8));
}

TEST_CASE("signed atomic measure on the line", "[analysis]") {
    auto m = SignedAtomicMeasure1D::from_atoms({{1.0, 0.5}, {0.0, -1.0}, {1.0, 0.25}, {2.0, 2.0}});
    REQUIRE(m.atoms().size() == 3);
    CHECK(m.atoms()[1].weight == Approx(0.75));
    CHECK(m.total() == Approx(1.75));
    CHECK(m.mass(Interval{0.0, 1.0}) == Approx(-0.25));
    const std::vector<Interval> ivs{{-0.5, 0.5}, {1.5, 2.5}};
    CHECK(m.mass(ivs) == Approx(1.0));
    CHECK(m.positive_mass(ivs) == Approx(2.0));
    CHECK(m.restricted(ivs).total() + m.complement(ivs).total() == Approx(m.total()));
}

TEST_CASE("characteristics in a constant state are straight", "[analysis]") {
    auto b = make_bundle(make_burgers(), scalar_steps({0.0}, {1.0, 0.0}), params(0.1, 4.0));
    auto c = minimal_characteristic(*b.tl, *b.model, 0.0, -1.0, 0, 0.5);
    CHECK(c.at(0.5) == Approx(-0.5));
    auto right = minimal_characteristic(*b.tl, *b.model, 0.0, 2.0, 0, 1.0);
    CHECK(right.at(1.0) == Approx(2.0));
    validate_characteristic(*b.tl, *b.model, c, 0);
}

TEST_CASE("characteristics are absorbed by shocks", "[analysis]") {
    auto b = make_bundle(make_burgers(), scalar_steps({0.0}, {1.0, 0.0}), params(0.1, 4.0));
    // from x = -0.5 at speed 1 the shock (speed 0.5) is hit at t = 1
    auto c = minimal_characteristic(*b.tl, *b.model, 0.0, -0.5, 0, 3.0);
    CHECK(c.at(1.0) == Approx(0.5).margin(1e-8));
    CHECK(c.at(3.0) == Approx(1.5).margin(1e-8));
    validate_characteristic(*b.tl, *b.model, c, 0);
}

TEST_CASE("characteristics collapse at a merge", "[analysis]") {
    auto b = make_bundle(make_burgers(), scalar_steps({0.0, 1.0}, {1.0, 0.4, -0.2}), params(0.1, 3.0));
    const double tm = b.log.events[0].t;
    auto c1 = minimal_characteristic(*b.tl, *b.model, 0.0, 0.2, 0, 3.0);
    auto c2 = minimal_characteristic(*b.tl, *b.model, 0.0, 0.8, 0, 3.0);
    CHECK(c1.at(2.5) == Approx(c2.at(2.5)).margin(1e-8));
    CHECK(c1.at(tm + 0.1) == Approx(c2.at(tm + 0.1)).margin(1e-8));
}

TEST_CASE("characteristics form a semigroup", "[analysis][property]") {
    auto b = make_burgers();
    forall(20, 61, [](std::mt19937_64& r) { return random_burgers_steps(r, 6, 0.4); },
           [&](const StepDatum& d) {
               auto bd = make_bundle(b, d, params(0.05, 3.0));
               std::mt19937_64 r(7);
               const double x0 = uniform(r, -0.5, 2.5);
               auto whole = minimal_characteristic(*bd.tl, *b, 0.0, x0, 0, 2.0);
               validate_characteristic(*bd.tl, *b, whole, 0);
               const double xm = whole.at(1.0);
               auto tail = minimal_characteristic(*bd.tl, *b, 1.0, xm, 0, 1.0);
               CHECK(tail.at(2.0) == Approx(whole.at(2.0)).margin(1e-8));
           });
}

TEST_CASE("bogus boundaries are rejected", "[analysis]") {
    auto b = make_bundle(make_burgers(), scalar_steps({0.0}, {1.0, 0.0}), params(0.1, 4.0));
    Polyline p;
    p.t = {0.0, 1.0};
    p.x = {-1.0, 1.0};  // slope 2 in a region where u = 1
    try {
        validate_characteristic(*b.tl, *b.model, p, 0);
        FAIL("expected BoundaryNotCharacteristic");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BoundaryNotCharacteristic);
    }
}

TEST_CASE("a shock entering through the left boundary", "[analysis]") {
    auto b = make_bundle(make_burgers(), scalar_steps({0.0}, {1.0, 0.0}), params(0.1, 2.0));
    auto js = jump_set(b.log, 0, 0.1, 0.5);
    auto im = interaction_measures(b.log);
    auto region = make_region(*b.tl, *b.model, 0, 0.0, 1.0, {{0.2, 0.8}});
    auto rep = region_balance_check(*b.tl, region, js, im, 0.0, 1.0);
    CHECK(rep.full.lhs == Approx(-1.0));
    CHECK(rep.full.flux == Approx(-1.0));
    CHECK(rep.full.events == 0.0);
    CHECK(rep.identity_holds());
    CHECK(rep.jump_flux_nonpositive);
    REQUIRE(rep.ledger.nodes.size() == 1);
    CHECK(rep.ledger.nodes[0].case_tag == "shock_enters");
    CHECK(rep.ledger.nodes[0].t == Approx(0.4));
}

TEST_CASE("a region without fronts has nothing to balance", "[analysis]") {
    auto b = make_bundle(make_burgers(), scalar_steps({0.0}, {1.0, 0.0}), params(0.1, 2.0));
    auto js = jump_set(b.log, 0, 0.1, 0.5);
    auto im = interaction_measures(b.log);
    auto region = make_region(*b.tl, *b.model, 0, 0.0, 1.0, {{-2.0, -1.0}});
    auto rep = region_balance_check(*b.tl, region, js, im, 0.0, 1.0);
    CHECK(rep.full.lhs == 0.0);
    CHECK(rep.ledger.atoms.empty());
    CHECK(rep.inequalities_hold());
}

TEST_CASE("region balance holds on random regions", "[analysis][property]") {
    struct Case {
        ModelPtr m;
        StepDatum d;
        RunParams p;
        double eps0, eps1;
    };
    std::vector<Case> cases;
    cases.push_back({make_burgers(), scalar_steps({0.0, 1.0}, {0.0, 0.5, 0.0}), params(0.05, 6.0), 0.02, 0.1});
    cases.push_back({make_burgers(), scalar_steps({0.0, 0.5, 1.0}, {0.6, 0.0, 0.4, -0.2}), params(0.05, 4.0), 0.02, 0.1});
    {
        std::mt19937_64 r(62);
        cases.push_back({make_p_system(2.0), random_psys_steps(r, 6, 0.03), params(0.02, 2.0), 0.005, 0.02});
    }
    for (const auto& c : cases) {
        auto bd = make_bundle(c.m, c.d, c.p);
        auto im = interaction_measures(bd.log);
        const double T = c.p.horizon;
        for (int i = 0; i < c.m->n_eqs(); ++i) {
            auto js = jump_set(bd.log, i, c.eps0, c.eps1);
            forall(40, 63 + static_cast<std::uint64_t>(i), [&](std::mt19937_64& r) {
                       const double t0 = uniform(r, 0.0, 0.75 * T);
                       const double tau = uniform(r, 0.05, 1.0) * (T - t0);
                       return std::make_tuple(t0, tau, random_union(r, -2.0, 3.0, 3));
                   },
                   [&](const std::tuple<double, double, std::vector<Interval>>& in) {
                       auto region = make_region(*bd.tl, *c.m, i, std::get<0>(in), std::get<1>(in), std::get<2>(in));
                       auto rep = region_balance_check(*bd.tl, region, js, im, c.p.eps_nu(), 1e300);
                       CHECK(rep.identity_holds(1e-12));
                       CHECK(rep.jump_flux_nonpositive);
                       CHECK(rep.positive_flux_violations == 0);
                       for (const auto& n : rep.ledger.nodes) {
                           INFO(n.case_tag);
                           CHECK(n.case_tag.rfind("unexpected_", 0) != 0);
                       }
                   });
        }
    }
}

TEST_CASE("positive wave density of a rarefaction decays like 1/t", "[analysis]") {
    auto b = make_bundle(make_burgers(), scalar_steps({0.0}, {0.0, 1.0}), params(0.05, 2.0));
    for (double t : {0.5, 1.0, 2.0}) CHECK(positive_density(*b.tl, 0, t) == Approx(1.0 / t).epsilon(1e-9));

    auto rep = check_positive_decay(*b.tl, 0, 0.5, 2.0, {{{0.0, 0.5}}, {{-3.0, -1.0}}}, 1.0);
    CHECK(rep.pass());
    REQUIRE(rep.items.size() == 2);
    CHECK(rep.items[1].lhs == 0.0);
}

TEST_CASE("continuous part decays on a compressive ramp", "[analysis]") {
    std::vector<double> br, vals;
    for (int k = 0; k <= 8; ++k) vals.push_back(-0.05 * k);
    for (int k = 1; k <= 8; ++k) br.push_back(k / 8.0);
    RunParams rp = params(0.1, 2.0);
    rp.np_budget = 1e-3;
    auto b = make_bundle(make_burgers(), scalar_steps(br, vals), rp);
    auto js = jump_set(b.log, 0, 0.02, 0.1);
    auto im = interaction_measures(b.log);
    auto icj = icj_measure(im, jump_balance_measure(b.log, js));
    auto rep = check_cont_decay(*b.tl, *b.model, 0, 0.5, 1.0, {{0.1, 0.9}}, js, icj, rp.eps_nu(), 1.6);
    CHECK(rep.pass());
    CHECK(rep.case2_explained());

    auto fan = make_bundle(make_burgers(), scalar_steps({0.0}, {0.0, 1.0}), params(0.05, 2.0));
    auto js2 = jump_set(fan.log, 0, 0.02, 0.1);
    auto im2 = interaction_measures(fan.log);
    auto icj2 = icj_measure(im2, jump_balance_measure(fan.log, js2));
    auto rep2 = check_cont_decay(*fan.tl, *fan.model, 0, 0.5, 1.0, {{0.0, 1.0}}, js2, icj2, 0.5, 1.0);
    CHECK(rep2.lhs <= 0.0);
    CHECK(rep2.pass());
}

TEST_CASE("exceptional times", "[analysis]") {
    auto b = make_burgers();
    auto quiet = run_datum(*b, scalar_steps({0.0}, {1.0, 0.0}), params(0.1, 2.0));
    CHECK(exceptional_times(quiet, {jump_set(quiet, 0, 0.1, 0.5)}, 1e-3).empty());

    auto merge = run_datum(*b, scalar_steps({0.0, 1.0}, {1.0, 0.4, -0.2}), params(0.1, 3.0));
    auto ex = exceptional_times(merge, {jump_set(merge, 0, 0.1, 0.5)}, 1e-3);
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].t == Approx(5.0 / 3.0).epsilon(1e-8));
    CHECK(ex[0].attribution.count("interaction") == 1);
}

TEST_CASE("a jump born at an interaction is attributed to jump creation", "[analysis]") {
    // three weak shocks of -0.08 merge into -0.24; only the merged shocks exceed eps0
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0, 0.2, 0.6}, {0.24, 0.16, 0.08, 0.0}), params(0.1, 20.0));
    REQUIRE(log.events.size() == 2);
    auto js = jump_set(log, 0, 0.1, 0.2);
    auto ex = exceptional_times(log, {js}, 1e-3);
    bool creation = false;
    for (const auto& e : ex)
        if (e.attribution.count("jump-creation") != 0) {
            creation = true;
            CHECK(e.t == Approx(log.events[0].t));
        }
    CHECK(creation);
}
