#include "harness/config.hpp"

#include <fronttrack/serialize.hpp>

#include <algorithm>
#include <set>

namespace fronttrack::harness {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::InvalidArgument, where + ": " + what);
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    for (const auto& [k, v] : j.items()) {
        (void)v;
        if (!allowed.count(k)) fail(where, "unknown key '" + k + "'");
    }
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<int>();
}

std::string text(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

State state(const json& j, int n, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        fail(where, "expected an array of " + std::to_string(n) + " numbers");
    State s(n);
    for (int k = 0; k < n; ++k) s(k) = number(j[static_cast<std::size_t>(k)], where);
    return s;
}

std::vector<double> numbers(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array");
    std::vector<double> v;
    for (const auto& e : j) v.push_back(number(e, where));
    return v;
}

std::vector<std::pair<double, double>> interval_list(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected a list of [a, b] pairs");
    std::vector<std::pair<double, double>> out;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) fail(where, "expected [a, b]");
        const double a = number(e[0], where), b = number(e[1], where);
        if (!(a <= b)) fail(where, "interval with a > b");
        out.emplace_back(a, b);
    }
    return out;
}

Box parse_box(const json& j, int n, const std::string& where) {
    only_keys(j, {"lo", "hi"}, where);
    Box b{state(j.at("lo"), n, where + ".lo"), state(j.at("hi"), n, where + ".hi")};
    for (int k = 0; k < n; ++k)
        if (!(b.lo(k) < b.hi(k))) fail(where, "empty box");
    return b;
}

SystemConfig parse_system(const json& j) {
    only_keys(j, {"type", "gamma", "box", "n", "flux", "kinds", "gn_constants"}, "system");
    SystemConfig s;
    s.type = text(j.at("type"), "system.type");
    if (s.type == "burgers") {
        if (j.contains("box")) s.box = parse_box(j["box"], 1, "system.box");
    } else if (s.type == "p_system") {
        if (j.contains("gamma")) s.gamma = number(j["gamma"], "system.gamma");
        if (!(s.gamma >= 1.0)) fail("system.gamma", "must be >= 1");
        if (j.contains("box")) s.box = parse_box(j["box"], 2, "system.box");
    } else if (s.type == "polynomial") {
        auto& p = s.polynomial;
        const json& flux = j.at("flux");
        if (!flux.is_array() || flux.empty() || flux.size() > static_cast<std::size_t>(kMaxEqs))
            fail("system.flux", "expected 1 to 3 components");
        p.n = static_cast<int>(flux.size());
        if (j.contains("n") && integer(j["n"], "system.n") != p.n) fail("system.n", "does not match flux");
        for (const auto& comp : flux) {
            std::vector<Monomial> terms;
            for (const auto& m : comp) {
                only_keys(m, {"coef", "exps"}, "system.flux[]");
                Monomial mono;
                mono.coef = number(m.at("coef"), "system.flux[].coef");
                const json& e = m.at("exps");
                if (!e.is_array() || static_cast<int>(e.size()) != p.n) fail("system.flux[].exps", "wrong length");
                for (int k = 0; k < p.n; ++k) {
                    const int d = integer(e[static_cast<std::size_t>(k)], "system.flux[].exps");
                    if (d < 0) fail("system.flux[].exps", "negative exponent");
                    mono.exps[static_cast<std::size_t>(k)] = d;
                }
                terms.push_back(mono);
            }
            p.flux.push_back(std::move(terms));
        }
        const json& kinds = j.at("kinds");
        if (!kinds.is_array() || static_cast<int>(kinds.size()) != p.n) fail("system.kinds", "one kind per family");
        for (const auto& k : kinds) {
            const std::string name = text(k, "system.kinds");
            if (name == "GN") p.kinds.push_back(FieldKind::GenuinelyNonlinear);
            else if (name == "LD") p.kinds.push_back(FieldKind::LinearlyDegenerate);
            else fail("system.kinds", "expected GN or LD");
        }
        if (j.contains("gn_constants")) p.gn_constants = numbers(j["gn_constants"], "system.gn_constants");
        if (!j.contains("box")) fail("system", "polynomial systems need a box");
        p.box = parse_box(j["box"], p.n, "system.box");
        s.box = p.box;
    } else {
        fail("system.type", "unknown system '" + s.type + "'");
    }
    return s;
}

int system_size(const SystemConfig& s) {
    if (s.type == "burgers") return 1;
    if (s.type == "p_system") return 2;
    return s.polynomial.n;
}

DatumConfig parse_datum(const json& j, int n) {
    only_keys(j, {"type", "left", "right", "strengths", "x0", "breaks", "values", "expression", "expressions",
                  "cells", "range", "sample"},
              "datum");
    DatumConfig d;
    d.type = text(j.at("type"), "datum.type");
    if (d.type == "riemann") {
        d.left = state(j.at("left"), n, "datum.left");
        if (j.contains("right") == j.contains("strengths")) fail("datum", "give exactly one of right, strengths");
        if (j.contains("right")) d.right = state(j["right"], n, "datum.right");
        if (j.contains("strengths")) d.strengths = state(j["strengths"], n, "datum.strengths");
        if (j.contains("x0")) d.x0 = number(j["x0"], "datum.x0");
    } else if (d.type == "steps") {
        d.breaks = numbers(j.at("breaks"), "datum.breaks");
        for (const auto& v : j.at("values")) d.values.push_back(state(v, n, "datum.values[]"));
        if (d.values.size() != d.breaks.size() + 1) fail("datum", "need one more value than breaks");
        if (!std::is_sorted(d.breaks.begin(), d.breaks.end())) fail("datum.breaks", "must increase");
    } else if (d.type == "sampled") {
        if (j.contains("expression") == j.contains("expressions"))
            fail("datum", "give exactly one of expression, expressions");
        if (j.contains("expression")) d.expressions.push_back(text(j["expression"], "datum.expression"));
        else
            for (const auto& e : j["expressions"]) d.expressions.push_back(text(e, "datum.expressions[]"));
        if (static_cast<int>(d.expressions.size()) != n) fail("datum", "one expression per component");
        d.cells = integer(j.at("cells"), "datum.cells");
        if (d.cells <= 0) fail("datum.cells", "must be positive");
        const auto r = numbers(j.at("range"), "datum.range");
        if (r.size() != 2 || !(r[0] < r[1])) fail("datum.range", "expected [lo, hi] with lo < hi");
        d.lo = r[0];
        d.hi = r[1];
        if (j.contains("sample")) d.sample = text(j["sample"], "datum.sample");
        if (d.sample != "left" && d.sample != "midpoint") fail("datum.sample", "expected left or midpoint");
    } else {
        fail("datum.type", "unknown datum '" + d.type + "'");
    }
    return d;
}

void parse_params(const json& j, RunParams& p) {
    only_keys(j, {"nu", "np_threshold", "np_budget", "speed_perturb", "horizon", "tv_guard", "max_fronts",
                  "max_events"},
              "params");
    if (j.contains("nu")) p.nu = number(j["nu"], "params.nu");
    if (j.contains("np_threshold")) p.np_threshold = number(j["np_threshold"], "params.np_threshold");
    if (j.contains("np_budget")) p.np_budget = number(j["np_budget"], "params.np_budget");
    if (j.contains("speed_perturb")) p.speed_perturb = number(j["speed_perturb"], "params.speed_perturb");
    if (j.contains("horizon")) p.horizon = number(j["horizon"], "params.horizon");
    if (j.contains("tv_guard")) p.tv_guard = number(j["tv_guard"], "params.tv_guard");
    if (j.contains("max_fronts")) p.max_fronts = static_cast<std::size_t>(integer(j["max_fronts"], "params.max_fronts"));
    if (j.contains("max_events")) p.max_events = static_cast<std::size_t>(integer(j["max_events"], "params.max_events"));
}

std::vector<int> parse_families(const json& j, int n) {
    std::vector<int> out;
    if (!j.is_array()) fail("analysis.families", "expected an array");
    for (const auto& e : j) {
        const int f = integer(e, "analysis.families");
        if (f < 1 || f > n) fail("analysis.families", "family out of range (families are 1-based)");
        out.push_back(f - 1);
    }
    return out;
}

AnalysisConfig parse_analysis(const json& j, int n) {
    only_keys(j, {"families", "glimm_c0", "regions", "max_intervals", "tv_growth", "positive_decay", "cont_decay",
                  "oracle", "exceptional"},
              "analysis");
    AnalysisConfig a;
    if (j.contains("families")) a.families = parse_families(j["families"], n);
    if (j.contains("glimm_c0")) a.glimm_c0 = number(j["glimm_c0"], "analysis.glimm_c0");
    if (j.contains("regions")) a.regions = integer(j["regions"], "analysis.regions");
    if (j.contains("max_intervals")) a.max_intervals = integer(j["max_intervals"], "analysis.max_intervals");
    if (j.contains("tv_growth")) a.tv_growth = number(j["tv_growth"], "analysis.tv_growth");
    if (a.regions < 0 || a.max_intervals < 1) fail("analysis", "bad region sampling counts");
    if (j.contains("positive_decay")) {
        const json& q = j["positive_decay"];
        only_keys(q, {"s", "t", "sets", "random_sets", "density_times", "density_tol"}, "analysis.positive_decay");
        PositiveDecayConfig p;
        if (q.contains("s")) p.s = number(q["s"], "positive_decay.s");
        if (q.contains("t")) p.t = number(q["t"], "positive_decay.t");
        if (q.contains("sets"))
            for (const auto& s : q["sets"]) p.sets.push_back(interval_list(s, "positive_decay.sets[]"));
        if (q.contains("random_sets")) p.random_sets = integer(q["random_sets"], "positive_decay.random_sets");
        if (q.contains("density_times")) p.density_times = numbers(q["density_times"], "positive_decay.density_times");
        if (q.contains("density_tol")) p.density_tol = number(q["density_tol"], "positive_decay.density_tol");
        if ((!p.sets.empty() || p.random_sets > 0) && !(0.0 <= p.s && p.s < p.t))
            fail("analysis.positive_decay", "need 0 <= s < t");
        a.positive = p;
    }
    if (j.contains("cont_decay")) {
        const json& q = j["cont_decay"];
        only_keys(q, {"t0", "tau", "sets", "max_intervals", "min_length", "max_length"}, "analysis.cont_decay");
        ContDecayConfig c;
        c.t0 = number(q.at("t0"), "cont_decay.t0");
        c.tau = number(q.at("tau"), "cont_decay.tau");
        if (q.contains("sets")) c.sets = integer(q["sets"], "cont_decay.sets");
        if (q.contains("max_intervals")) c.max_intervals = integer(q["max_intervals"], "cont_decay.max_intervals");
        if (q.contains("min_length")) c.min_length = number(q["min_length"], "cont_decay.min_length");
        if (q.contains("max_length")) c.max_length = number(q["max_length"], "cont_decay.max_length");
        if (!(c.tau > 0.0) || c.t0 < 0.0 || c.max_intervals < 1 || !(c.min_length > 0.0 && c.min_length <= c.max_length))
            fail("analysis.cont_decay", "bad parameters");
        a.cont = c;
    }
    if (j.contains("oracle")) {
        const json& q = j["oracle"];
        only_keys(q, {"t", "nus", "grid", "samples", "min_order", "max_seconds"}, "analysis.oracle");
        OracleConfig o;
        if (q.contains("t")) o.t = number(q["t"], "oracle.t");
        if (q.contains("nus")) o.nus = numbers(q["nus"], "oracle.nus");
        if (q.contains("grid")) o.grid = integer(q["grid"], "oracle.grid");
        if (q.contains("samples")) o.samples = integer(q["samples"], "oracle.samples");
        if (q.contains("min_order")) o.min_order = number(q["min_order"], "oracle.min_order");
        if (q.contains("max_seconds")) o.max_seconds = number(q["max_seconds"], "oracle.max_seconds");
        if (o.nus.size() < 2 || o.grid < 2 || o.samples < 2 || !(o.t > 0.0)) fail("analysis.oracle", "bad parameters");
        a.oracle = o;
    }
    if (j.contains("exceptional")) {
        const json& q = j["exceptional"];
        only_keys(q, {"threshold", "expect", "tol"}, "analysis.exceptional");
        if (q.contains("threshold")) a.exceptional.threshold = number(q["threshold"], "exceptional.threshold");
        if (q.contains("expect")) a.exceptional.expect = numbers(q["expect"], "exceptional.expect");
        if (q.contains("tol")) a.exceptional.tol = number(q["tol"], "exceptional.tol");
    }
    return a;
}

} // namespace

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names{
        "lax",        "rankine_hugoniot", "glimm",     "tv",             "wave_balance", "identities",
        "regions",    "region_inequalities", "genealogy", "positive_decay", "cont_decay",   "exceptional",
        "oracle",     "determinism"};
    return names;
}

ScenarioConfig parse_scenario(const json& j) {
    only_keys(j, {"schema", "name", "description", "system", "datum", "params", "ladder", "checks", "output", "seed",
                  "snapshots", "characteristics", "inject", "analysis"},
              "scenario");
    ScenarioConfig c;
    c.source = j;
    if (!j.contains("schema")) fail("scenario", "missing schema");
    c.schema = integer(j["schema"], "schema");
    if (c.schema != kConfigSchema) fail("schema", "unsupported version " + std::to_string(c.schema));
    c.name = text(j.at("name"), "name");
    if (c.name.empty()) fail("name", "must not be empty");
    if (j.contains("description")) c.description = text(j["description"], "description");
    c.system = parse_system(j.at("system"));
    const int n = system_size(c.system);
    c.datum = parse_datum(j.at("datum"), n);
    if (j.contains("params")) parse_params(j["params"], c.params);
    if (j.contains("ladder")) {
        const json& l = j["ladder"];
        if (!l.is_array()) fail("ladder", "expected a list of [eps0, eps1]");
        for (const auto& e : l) {
            if (!e.is_array() || e.size() != 2) fail("ladder", "expected [eps0, eps1]");
            c.params.ladder.emplace_back(number(e[0], "ladder"), number(e[1], "ladder"));
        }
    } else {
        c.params.ladder = {{0.02, 0.1}, {0.01, 0.05}};
    }
    c.params.validate();
    if (j.contains("analysis")) c.analysis = parse_analysis(j["analysis"], n);
    if (j.contains("checks")) {
        for (const auto& e : j["checks"]) {
            const std::string name = text(e, "checks[]");
            const auto& known = known_checks();
            if (std::find(known.begin(), known.end(), name) == known.end()) fail("checks", "unknown check '" + name + "'");
            c.checks.push_back(name);
        }
    } else {
        c.checks = {"lax",    "rankine_hugoniot",    "glimm",     "tv",         "wave_balance", "identities",
                    "regions", "region_inequalities", "genealogy", "exceptional", "determinism"};
        if (c.analysis.positive) c.checks.push_back("positive_decay");
        if (c.analysis.cont) c.checks.push_back("cont_decay");
        if (c.analysis.oracle) c.checks.push_back("oracle");
    }
    if (j.contains("output")) c.output = text(j["output"], "output");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) fail("seed", "expected a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("snapshots")) c.snapshots = numbers(j["snapshots"], "snapshots");
    if (j.contains("characteristics")) {
        for (const auto& e : j["characteristics"]) {
            only_keys(e, {"t0", "x0", "family", "tau", "selection"}, "characteristics[]");
            CharacteristicRequest r;
            r.t0 = number(e.at("t0"), "characteristics[].t0");
            r.x0 = number(e.at("x0"), "characteristics[].x0");
            r.family = integer(e.at("family"), "characteristics[].family") - 1;
            if (r.family < 0 || r.family >= n) fail("characteristics[].family", "out of range (1-based)");
            r.tau = number(e.at("tau"), "characteristics[].tau");
            if (e.contains("selection")) r.selection = text(e["selection"], "characteristics[].selection");
            if (r.selection != "minimal" && r.selection != "maximal")
                fail("characteristics[].selection", "expected minimal or maximal");
            c.characteristics.push_back(r);
        }
    }
    if (j.contains("inject")) {
        c.inject = text(j["inject"], "inject");
        if (c.inject != "glimm_violation") fail("inject", "unknown injection '" + c.inject + "'");
    }
    return c;
}

std::vector<ScenarioConfig> parse_scenarios(const json& j) {
    std::vector<ScenarioConfig> out;
    if (j.is_object() && j.contains("scenarios")) {
        only_keys(j, {"schema", "scenarios", "description"}, "suite");
        if (!j.contains("schema") || integer(j["schema"], "schema") != kConfigSchema) fail("suite", "bad schema");
        std::set<std::string> names;
        for (const auto& s : j["scenarios"]) {
            out.push_back(parse_scenario(s));
            if (!names.insert(out.back().name).second) fail("suite", "duplicate scenario '" + out.back().name + "'");
        }
    } else {
        out.push_back(parse_scenario(j));
    }
    return out;
}

std::vector<ScenarioConfig> load_scenarios(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        fail(path, e.what());
    }
    return parse_scenarios(j);
}

} // namespace fronttrack::harness
