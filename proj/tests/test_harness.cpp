#include "support.hpp"

#include "harness/calibration.hpp"
#include "harness/checks.hpp"
#include "harness/config.hpp"
#include "harness/expression.hpp"
#include "harness/oracle.hpp"
#include "harness/pipeline.hpp"

#include <cmath>

using namespace fttest;
using namespace fronttrack::harness;
using nlohmann::json;

TEST_CASE("expressions", "[harness]") {
    CHECK(Expression::parse("1 + 2 * 3")(0.0) == 7.0);
    CHECK(Expression::parse("-x^2")(3.0) == -9.0);
    CHECK(Expression::parse("2^3^2")(0.0) == 512.0);
    CHECK(Expression::parse("(1 + x) / 4")(1.0) == 0.5);
    CHECK(Expression::parse("clamp(x, 0, 1)")(2.0) == 1.0);
    CHECK(Expression::parse("max(x, -x) - abs(x)")(-0.3) == 0.0);
    CHECK(Expression::parse("sin(pi/2)")(0.0) == Approx(1.0));
    CHECK(Expression::parse("step(x)")(-1.0) == 0.0);
    CHECK_THROWS_AS(Expression::parse("1 +"), Error);
    CHECK_THROWS_AS(Expression::parse("foo(x)"), Error);
    CHECK_THROWS_AS(Expression::parse("y"), Error);
}

namespace {

json merge_config() {
    return json::parse(R"({
        "schema": 1, "name": "t", "system": {"type": "burgers"},
        "datum": {"type": "steps", "breaks": [0.0, 0.5], "values": [[1.0], [0.8], [0.4]]},
        "params": {"nu": 0.1, "horizon": 3.0}
    })");
}

ErrorCode parse_error(const json& j) {
    try {
        parse_scenario(j);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("config accepted");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("scenario configs", "[harness]") {
    auto cfg = parse_scenario(merge_config());
    CHECK(cfg.name == "t");
    CHECK(cfg.params.horizon == 3.0);
    CHECK(cfg.datum.values.size() == 3);

    json bad = merge_config();
    bad["params"]["speling"] = 1;
    CHECK(parse_error(bad) == ErrorCode::InvalidArgument);

    json noschema = merge_config();
    noschema.erase("schema");
    CHECK(parse_error(noschema) == ErrorCode::InvalidArgument);

    json ladder = merge_config();
    ladder["ladder"] = json::array({json::array({0.1, 0.15})});
    CHECK(parse_error(ladder) == ErrorCode::InvalidArgument);

    json fam = merge_config();
    fam["analysis"] = {{"families", {1}}};
    CHECK(parse_scenario(fam).analysis.families == std::vector<int>{0});
    fam["analysis"]["families"] = {0};
    CHECK(parse_error(fam) == ErrorCode::InvalidArgument);
}

TEST_CASE("the shipped suites parse", "[harness]") {
    auto suite = load_scenarios(std::string(FRONTTRACK_DATA_DIR) + "/suite.json");
    CHECK(suite.size() >= 20);
    auto cal = load_scenarios(std::string(FRONTTRACK_DATA_DIR) + "/calibration_suite.json");
    CHECK(!cal.empty());
}

TEST_CASE("burgers oracle on riemann data", "[harness]") {
    BurgersOracle shock(scalar_steps({0.0}, {1.0, 0.0}), 2.0);
    CHECK(shock.value(1.0, 0.49) == Approx(1.0));
    CHECK(shock.value(1.0, 0.51) == Approx(0.0).margin(1e-12));
    auto sol = shock.sample(1.0, {-1.0, 0.0, 0.25, 0.75, 1.0});
    REQUIRE(sol.shocks.size() == 1);
    CHECK(sol.shocks[0] == Approx(0.5).margin(1e-10));

    BurgersOracle fan(scalar_steps({0.0}, {0.0, 1.0}), 2.0);
    for (double x : {0.1, 0.3, 0.77}) CHECK(fan.value(1.0, x) == Approx(x).margin(1e-9));
    CHECK(fan.value(2.0, 1.0) == Approx(0.5).margin(1e-9));
}

TEST_CASE("burgers oracle finds the breaking time of a ramp", "[harness]") {
    // u0 = -0.4 clamp(x, 0, 1) breaks at t = 1 / 0.4
    BurgersOracle ramp([](double x) { return -0.4 * std::clamp(x, 0.0, 1.0); }, -1.0, 2.0, 4.0, 8192);
    std::vector<double> xs;
    for (int k = 0; k <= 400; ++k) xs.push_back(-0.1 + 0.0005 * k);
    // before breaking the characteristic from y sits at x = (1 - 0.4 t) y
    CHECK(ramp.sample(2.4, xs).shocks.empty());
    CHECK(ramp.value(2.4, 0.02) == Approx(-0.2).margin(1e-3));
    // afterwards one shock from 0 to -0.4 travels at -0.2 from x = 0, t = 2.5
    auto after = ramp.sample(2.6, xs);
    REQUIRE(after.shocks.size() == 1);
    CHECK(after.shocks[0] == Approx(-0.02).margin(1e-3));
    CHECK(ramp.value(2.6, -0.025) == Approx(0.0).margin(1e-3));
    CHECK(ramp.value(2.6, -0.015) == Approx(-0.4).margin(1e-3));
}

TEST_CASE("oracle refuses systems", "[harness]") {
    try {
        require_burgers(*make_p_system(2.0));
        FAIL("expected NotScalar");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotScalar);
    }
}

TEST_CASE("calibration json", "[harness]") {
    Calibration c;
    c.factor = 2.0;
    c.constants["balance"] = {0.5, 0.25, 3, "x"};
    c.scenarios = {"x"};
    auto back = Calibration::from_json(c.to_json());
    CHECK(back.value("balance") == 0.5);
    CHECK(back.constants.at("balance").observations == 3);
    CHECK_THROWS_AS(back.value("ladder"), Error);

    auto frozen = Calibration::load(std::string(FRONTTRACK_DATA_DIR) + "/calibration.json");
    for (const auto& key : calibration_keys()) {
        INFO(key);
        CHECK(frozen.has(key));
        CHECK(frozen.value(key) > 0.0);
    }
}

TEST_CASE("checks on a quiet scenario", "[harness]") {
    auto frozen = Calibration::load(std::string(FRONTTRACK_DATA_DIR) + "/calibration.json");
    CheckOptions opt;
    opt.calibration = &frozen;
    auto rep = run_checks(parse_scenario(merge_config()), opt);
    for (const auto& c : rep.checks) {
        INFO(c.name << ": " << c.message);
        CHECK((c.pass || c.skipped));
    }
    CHECK(rep.pass);
}

TEST_CASE("an injected glimm violation is reported", "[harness]") {
    auto frozen = Calibration::load(std::string(FRONTTRACK_DATA_DIR) + "/calibration.json");
    json j = merge_config();
    j["inject"] = "glimm_violation";
    CheckOptions opt;
    opt.calibration = &frozen;
    opt.only = {"glimm"};
    auto rep = run_checks(parse_scenario(j), opt);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.find("glimm") != nullptr);
    CHECK_FALSE(rep.find("glimm")->pass);
}
