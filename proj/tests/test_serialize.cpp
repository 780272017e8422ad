#include "support.hpp"

#include <fronttrack/serialize.hpp>

#include <cmath>
#include <limits>

using namespace fttest;

TEST_CASE("doubles round-trip through text", "[serialize]") {
    const double inf = std::numeric_limits<double>::infinity();
    for (double v : {0.0, -0.0, 1.0 / 3.0, 5e-324, 1.7976931348623157e308, -inf, inf, 0.1 + 0.2}) {
        const double back = parse_double(format_double(v));
        CHECK(back == v);
        CHECK(std::signbit(back) == std::signbit(v));
    }
    CHECK(std::isnan(parse_double(format_double(std::nan("")))));
    CHECK_THROWS(parse_double("1.5x"));
}

TEST_CASE("run logs round-trip through JSON lines", "[serialize][property]") {
    auto p = make_p_system(2.0);
    forall(5, 71, [](std::mt19937_64& r) { return random_psys_steps(r, 5, 0.03); },
           [&](const StepDatum& d) {
               auto log = run_datum(*p, d, params(0.02, 1.5));
               const std::string text = to_jsonl(log);
               auto back = from_jsonl(text);
               CHECK(to_jsonl(back) == text);
               REQUIRE(back.fronts.size() == log.fronts.size());
               for (std::size_t k = 0; k < log.fronts.size(); ++k) {
                   CHECK(back.fronts[k].t_death == log.fronts[k].t_death);
                   CHECK(back.fronts[k].strength == log.fronts[k].strength);
               }
               CHECK(replay(back).ok);
           });
}

TEST_CASE("corrupt logs are rejected", "[serialize]") {
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0}, {1.0, 0.0}), params(0.1, 1.0));
    std::string text = to_jsonl(log);
    CHECK_THROWS(from_jsonl(text.substr(0, text.size() / 2)));
    CHECK_THROWS(from_jsonl("not json\n"));
}

TEST_CASE("snapshots round-trip through CSV", "[serialize]") {
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0, 1.0}, {1.0, 0.4, -0.2}), params(0.1, 3.0));
    Timeline tl(log);
    auto rows = snapshot_rows(tl, {0.0, 1.0, 2.0});
    // three pieces before the merge, two after
    CHECK(rows.size() == 3 + 3 + 2);
    CHECK(std::isinf(rows[0].x_left));
    const std::string csv = snapshots_to_csv(rows, 1);
    auto back = snapshots_from_csv(csv);
    CHECK(snapshots_to_csv(back, 1) == csv);
}

TEST_CASE("atoms and paths round-trip through CSV", "[serialize]") {
    auto b = make_burgers();
    auto log = run_datum(*b, scalar_steps({0.0, 1.0}, {1.0, 0.4, -0.2}), params(0.1, 3.0));
    auto im = interaction_measures(log);
    const std::string csv = atoms_to_csv(im.interaction_cancellation);
    auto back = atoms_from_csv(csv);
    CHECK(atoms_to_csv(back) == csv);
    CHECK(back.total() == im.interaction_cancellation.total());

    auto js = jump_set(log, 0, 0.1, 0.5);
    auto pts = path_points(log, js.paths);
    CHECK(!pts.empty());
    const std::string pcsv = paths_to_csv(pts);
    CHECK(paths_to_csv(paths_from_csv(pcsv)) == pcsv);
}
