#include "harness/pipeline.hpp"

#include "harness/expression.hpp"

#include <fronttrack/riemann.hpp>

#include <chrono>

namespace fronttrack::harness {

ModelPtr build_model(const SystemConfig& cfg) {
    if (cfg.type == "burgers") {
        if (cfg.box) return make_burgers(cfg.box->lo(0), cfg.box->hi(0));
        return make_burgers();
    }
    if (cfg.type == "p_system") {
        if (cfg.box) return make_p_system(cfg.gamma, *cfg.box);
        return make_p_system(cfg.gamma);
    }
    return make_polynomial(cfg.polynomial);
}

StepDatum build_datum(const SystemModel& model, const DatumConfig& cfg) {
    StepDatum d;
    if (cfg.type == "riemann") {
        State right = cfg.strengths ? lax_map(model, cfg.left, *cfg.strengths).back() : cfg.right;
        d.breaks = {cfg.x0};
        d.values = {cfg.left, right};
        return d;
    }
    if (cfg.type == "steps") {
        d.breaks = cfg.breaks;
        d.values = cfg.values;
        return d;
    }
    std::vector<Expression> comps;
    for (const auto& e : cfg.expressions) comps.push_back(Expression::parse(e));
    auto eval = [&](double x) {
        State s(model.n_eqs());
        for (int k = 0; k < model.n_eqs(); ++k) s(k) = comps[static_cast<std::size_t>(k)](x);
        return s;
    };
    const double h = (cfg.hi - cfg.lo) / cfg.cells;
    d.values.push_back(eval(cfg.lo));
    for (int k = 0; k <= cfg.cells; ++k) d.breaks.push_back(k == cfg.cells ? cfg.hi : cfg.lo + k * h);
    for (int k = 0; k < cfg.cells; ++k) {
        const double a = cfg.lo + k * h;
        d.values.push_back(eval(cfg.sample == "left" ? a : a + 0.5 * h));
    }
    d.values.push_back(eval(cfg.hi));
    return d;
}

std::vector<double> snapshot_times(const ScenarioConfig& cfg) {
    if (!cfg.snapshots.empty()) return cfg.snapshots;
    const double T = cfg.params.horizon;
    return {0.0, 0.25 * T, 0.5 * T, 0.75 * T, T};
}

namespace {

// Test mode: scale the first front born at an interaction by 1000 so the Glimm functional jumps up.
void inject_glimm_violation(RunLog& log) {
    for (const auto& ev : log.events) {
        for (int id : ev.outgoing) {
            Front& f = log.fronts[static_cast<std::size_t>(id)];
            if (f.non_physical()) continue;
            f.strength *= 1000.0;
            f.components *= 1000.0;
            return;
        }
    }
}

} // namespace

Scenario execute(const ScenarioConfig& cfg, std::optional<double> nu_override) {
    Scenario sc;
    sc.config = cfg;
    if (nu_override) sc.config.params.nu = *nu_override;
    const RunParams& p = sc.config.params;
    p.validate();
    sc.model = build_model(cfg.system);
    sc.datum = build_datum(*sc.model, cfg.datum);
    const auto start = std::chrono::steady_clock::now();
    const InitialFronts init = sample_initial_datum(*sc.model, sc.datum, p.nu, p.tv_guard);
    auto log = std::make_shared<RunLog>(run(*sc.model, p, init));
    sc.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cfg.inject == "glimm_violation") inject_glimm_violation(*log);
    sc.log = log;
    sc.timeline = std::make_shared<const Timeline>(*log);
    return sc;
}

} // namespace fronttrack::harness
