#include "commands.hpp"

#include <harness/checks.hpp>
#include <harness/config.hpp>
#include <harness/pipeline.hpp>

#include <fronttrack/analysis.hpp>
#include <fronttrack/genealogy.hpp>
#include <fronttrack/measures.hpp>
#include <fronttrack/riemann.hpp>
#include <fronttrack/serialize.hpp>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;

namespace fronttrack::cli {

namespace {

using harness::Calibration;
using harness::CheckOptions;
using harness::Scenario;
using harness::ScenarioConfig;
using harness::ScenarioReport;

std::vector<ScenarioConfig> scenarios(const Options& o) {
    if (o.config.empty()) throw Error(ErrorCode::InvalidArgument, "--config is required");
    auto all = harness::load_scenarios(o.config);
    if (o.scenario.empty()) return all;
    std::vector<ScenarioConfig> picked;
    for (auto& s : all) {
        if (s.name == o.scenario) picked.push_back(std::move(s));
    }
    if (picked.empty()) throw Error(ErrorCode::InvalidArgument, "no scenario named '" + o.scenario + "'");
    return picked;
}

fs::path out_dir(const Options& o, const ScenarioConfig& cfg) {
    fs::path base = !o.out.empty() ? fs::path(o.out) : !cfg.output.empty() ? fs::path(cfg.output) : fs::path("out");
    fs::path dir = base / cfg.name;
    fs::create_directories(dir);
    return dir;
}

Calibration calibration(const Options& o) {
    const std::string path = o.calibration.empty() ? std::string(FRONTTRACK_DATA_DIR) + "/calibration.json" : o.calibration;
    spdlog::debug("calibration: {}", path);
    return Calibration::load(path);
}

json state_json(const State& s) {
    json a = json::array();
    for (int k = 0; k < s.size(); ++k) a.push_back(s(k));
    return a;
}

State to_state(const std::vector<double>& v) {
    State s(static_cast<Eigen::Index>(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k) s(static_cast<Eigen::Index>(k)) = v[k];
    return s;
}

void write(const fs::path& p, const std::string& text) {
    write_text_file(p.string(), text);
    spdlog::info("wrote {}", p.string());
}

bool budget_alarm(const RunLog& log) {
    return std::any_of(log.alarms.begin(), log.alarms.end(), [](const Alarm& a) { return a.kind == "BudgetExceeded"; });
}

void print_json(const Options& o, const json& j) { std::cout << (o.pretty ? j.dump(2) : j.dump()) << "\n"; }

} // namespace

int cmd_riemann(const Options& o) {
    ModelPtr model;
    State ul, ur;
    if (!o.config.empty()) {
        const auto cfgs = scenarios(o);
        const ScenarioConfig& cfg = cfgs.front();
        model = harness::build_model(cfg.system);
        const StepDatum d = harness::build_datum(*model, cfg.datum);
        if (d.values.size() != 2) throw Error(ErrorCode::InvalidArgument, "riemann needs a two-state datum");
        ul = d.values[0];
        ur = d.values[1];
    } else {
        harness::SystemConfig sys;
        sys.type = o.system;
        sys.gamma = o.gamma;
        if (sys.type != "burgers" && sys.type != "p_system")
            throw Error(ErrorCode::InvalidArgument, "--system must be burgers or p_system");
        model = harness::build_model(sys);
        ul = to_state(o.left);
        ur = to_state(o.right);
        if (ul.size() != model->n_eqs() || ur.size() != model->n_eqs())
            throw Error(ErrorCode::InvalidArgument, "--left/--right need one value per equation");
    }
    const WaveFan fan = solve_riemann(*model, ul, ur);
    json waves = json::array();
    bool ok = true;
    for (const auto& w : fan.waves) {
        json e{{"family", w.non_physical() ? 0 : w.family + 1},
               {"kind", to_string(w.kind)},
               {"strength", w.strength},
               {"speed", w.speed},
               {"left", state_json(w.left_state)},
               {"right", state_json(w.right_state)}};
        if (w.kind == WaveKind::Shock || w.kind == WaveKind::Contact) {
            const LaxReport lr = lax_check(*model, w);
            e["lax_margins"] = {lr.left_margin, lr.right_margin};
            e["rh_residual"] = rh_residual(*model, w.left_state, w.right_state, w.speed);
            ok = ok && lr.admissible();
        }
        waves.push_back(e);
    }
    json states = json::array();
    for (const auto& s : fan.states) states.push_back(state_json(s));
    print_json(o, {{"model", model->name()},
                   {"strengths", state_json(fan.strengths)},
                   {"states", states},
                   {"waves", waves},
                   {"residual", fan.residual},
                   {"iterations", fan.iterations}});
    return ok ? kPass : kViolation;
}

int cmd_run(const Options& o) {
    int code = kPass;
    for (const auto& cfg : scenarios(o)) {
        const Scenario sc = harness::execute(cfg);
        const fs::path dir = out_dir(o, cfg);
        write(dir / "log.jsonl", to_jsonl(*sc.log));
        write(dir / "snapshots.csv",
              snapshots_to_csv(snapshot_rows(*sc.timeline, harness::snapshot_times(cfg)), sc.log->n_eqs));
        json alarms = json::array();
        for (const auto& a : sc.log->alarms)
            alarms.push_back({{"kind", a.kind}, {"t", a.t}, {"value", a.value}, {"detail", a.detail}});
        const json summary{{"scenario", cfg.name},
                           {"fronts", sc.log->fronts.size()},
                           {"events", sc.log->events.size()},
                           {"final_fronts", sc.log->final_fronts.size()},
                           {"tv_initial", total_variation(*sc.log, 0.0)},
                           {"tv_final", total_variation(*sc.log, sc.log->params.horizon)},
                           {"max_np_total", sc.log->max_np_total},
                           {"seconds", sc.seconds},
                           {"alarms", alarms}};
        write(dir / "summary.json", summary.dump(2));
        print_json(o, summary);
        if (budget_alarm(*sc.log)) code = kViolation;
    }
    return code;
}

int cmd_measures(const Options& o) {
    for (const auto& cfg : scenarios(o)) {
        const Scenario sc = harness::execute(cfg);
        const RunLog& log = *sc.log;
        const fs::path dir = out_dir(o, cfg);
        const InteractionMeasures im = interaction_measures(log);
        write(dir / "interaction.csv", atoms_to_csv(im.interaction));
        write(dir / "interaction_cancellation.csv", atoms_to_csv(im.interaction_cancellation));
        for (int i = 0; i < log.n_eqs; ++i) {
            const std::string fam = std::to_string(i + 1);
            const WaveBalance wb = wave_balance_measure(log, i);
            write(dir / ("wave_balance_" + fam + ".csv"), atoms_to_csv(wb.total));
            for (std::size_t k = 0; k < log.params.ladder.size(); ++k) {
                const auto [e0, e1] = log.params.ladder[k];
                const JumpSet js = jump_set(log, i, e0, e1);
                const AtomicMeasure jb = jump_balance_measure(log, js);
                const std::string tag = fam + "_" + std::to_string(k + 1);
                write(dir / ("jump_balance_" + tag + ".csv"), atoms_to_csv(jb));
                write(dir / ("icj_" + tag + ".csv"), atoms_to_csv(icj_measure(im, jb)));
            }
        }
    }
    return kPass;
}

int cmd_fronts(const Options& o) {
    for (const auto& cfg : scenarios(o)) {
        const Scenario sc = harness::execute(cfg);
        const RunLog& log = *sc.log;
        const fs::path dir = out_dir(o, cfg);
        json summary = json::array();
        for (int i = 0; i < log.n_eqs; ++i) {
            for (std::size_t k = 0; k < log.params.ladder.size(); ++k) {
                const auto [e0, e1] = log.params.ladder[k];
                const JumpSet js = jump_set(log, i, e0, e1);
                const std::string tag = std::to_string(i + 1) + "_" + std::to_string(k + 1);
                write(dir / ("paths_" + tag + ".csv"), paths_to_csv(path_points(log, js.paths)));
                long terminating = 0;
                for (const auto& p : js.paths) terminating += p.terminates ? 1 : 0;
                summary.push_back({{"family", i + 1},
                                   {"level", k + 1},
                                   {"eps0", e0},
                                   {"eps1", e1},
                                   {"paths", js.paths.size()},
                                   {"terminating", terminating},
                                   {"segments", js.segment_count()},
                                   {"nodes", js.nodes.size()}});
            }
        }
        write(dir / "fronts.json", summary.dump(2));
        print_json(o, {{"scenario", cfg.name}, {"jump_sets", summary}});
    }
    return kPass;
}

int cmd_characteristics(const Options& o) {
    int code = kPass;
    for (const auto& cfg : scenarios(o)) {
        if (cfg.characteristics.empty()) throw Error(ErrorCode::InvalidArgument, cfg.name + ": no characteristics requested");
        const Scenario sc = harness::execute(cfg);
        const fs::path dir = out_dir(o, cfg);
        json out = json::array();
        for (std::size_t k = 0; k < cfg.characteristics.size(); ++k) {
            const auto& r = cfg.characteristics[k];
            const CharSelection sel = r.selection == "maximal" ? CharSelection::Maximal : CharSelection::Minimal;
            const Polyline p = trace_characteristic(*sc.timeline, *sc.model, r.t0, r.x0, r.family, r.t0 + r.tau, sel);
            bool valid = true;
            try {
                validate_characteristic(*sc.timeline, *sc.model, p, r.family);
            } catch (const Error& e) {
                spdlog::warn("{}", e.what());
                valid = false;
                code = kViolation;
            }
            write(dir / ("characteristic_" + std::to_string(k + 1) + ".csv"), polyline_to_csv(p));
            out.push_back({{"index", k + 1}, {"vertices", p.t.size()}, {"x_end", p.x.back()}, {"valid", valid}});
        }
        print_json(o, {{"scenario", cfg.name}, {"characteristics", out}});
    }
    return code;
}

namespace {

int check_with(const Options& o, std::vector<std::string> only) {
    const Calibration cal = calibration(o);
    CheckOptions opt;
    opt.calibration = &cal;
    opt.only = std::move(only);
    int code = kPass;
    json all = json::array();
    for (const auto& cfg : scenarios(o)) {
        const ScenarioReport rep = harness::run_checks(cfg, opt);
        if (!rep.pass) code = kViolation;
        if (std::find(rep.alarms.begin(), rep.alarms.end(), "BudgetExceeded") != rep.alarms.end()) code = kViolation;
        const json j = rep.to_json();
        if (!o.out.empty() || !cfg.output.empty()) write(out_dir(o, cfg) / "report.json", j.dump(2));
        all.push_back(j);
    }
    print_json(o, all.size() == 1 ? all.front() : all);
    return code;
}

} // namespace

int cmd_check(const Options& o) { return check_with(o, o.only); }

int cmd_oracle(const Options& o) { return check_with(o, {"oracle"}); }

int cmd_report(const Options& o) {
    const auto cfgs = scenarios(o);
    const Calibration cal = calibration(o);
    CheckOptions opt;
    opt.calibration = &cal;
    opt.only = o.only;
    std::vector<ScenarioReport> reports(cfgs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < cfgs.size(); k = next++) {
            spdlog::info("scenario {}", cfgs[k].name);
            reports[k] = harness::run_checks(cfgs[k], opt);
        }
    };
    const int jobs = std::max(1, o.jobs);
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::sort(reports.begin(), reports.end(),
              [](const ScenarioReport& a, const ScenarioReport& b) { return a.scenario < b.scenario; });

    json j;
    j["schema"] = 1;
    j["scenarios"] = json::array();
    std::size_t passed = 0;
    for (const auto& r : reports) {
        j["scenarios"].push_back(r.to_json());
        passed += r.pass ? 1 : 0;
        std::string failed;
        for (const auto& c : r.checks) {
            if (!c.pass) failed += (failed.empty() ? "" : ",") + c.name;
        }
        if (!r.error.empty()) failed = r.error;
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.scenario << (failed.empty() ? "" : "  [" + failed + "]") << "\n";
    }
    j["passed"] = passed;
    j["total"] = reports.size();
    std::cout << passed << "/" << reports.size() << " scenarios pass\n";
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        write(fs::path(o.out) / "report.json", j.dump(2));
    }
    return passed == reports.size() ? kPass : kViolation;
}

} // namespace fronttrack::cli
