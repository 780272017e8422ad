#include "fronttrack/serialize.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace fronttrack {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw Error(ErrorCode::InvalidArgument, "bad number '" + s + "'");
    return v;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    out << text;
}

namespace {

// JSON has no inf/nan; they travel as strings.
json num(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

double get_num(const json& j) {
    if (j.is_string()) return parse_double(j.get<std::string>());
    return j.get<double>();
}

json state_json(const State& s) {
    json a = json::array();
    for (int k = 0; k < s.size(); ++k) a.push_back(num(s(k)));
    return a;
}

State state_from(const json& j) {
    State s(static_cast<int>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) s(static_cast<int>(k)) = get_num(j[k]);
    return s;
}

json vec_json(const std::vector<double>& v) {
    json a = json::array();
    for (double d : v) a.push_back(num(d));
    return a;
}

std::vector<double> vec_from(const json& j) {
    std::vector<double> v;
    for (const auto& e : j) v.push_back(get_num(e));
    return v;
}

FrontKind front_kind_from(const std::string& s) {
    for (auto k : {FrontKind::Shock, FrontKind::Rarefaction, FrontKind::Contact, FrontKind::NonPhysical}) {
        if (s == to_string(k)) return k;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown front kind " + s);
}

std::string dump(const json& j) {
    return j.dump(-1, ' ', false, json::error_handler_t::strict);
}

} // namespace

std::string to_jsonl(const RunLog& log) {
    std::string out;
    json h;
    h["type"] = "header";
    h["schema"] = kLogSchemaVersion;
    h["model"] = log.model_name;
    h["n_eqs"] = log.n_eqs;
    const auto& p = log.params;
    json pj;
    pj["nu"] = num(p.nu);
    pj["np_threshold"] = num(p.np_threshold);
    pj["np_budget"] = num(p.np_budget);
    pj["speed_perturb"] = num(p.speed_perturb);
    pj["horizon"] = num(p.horizon);
    json lad = json::array();
    for (const auto& [a, b] : p.ladder) lad.push_back(json::array({num(a), num(b)}));
    pj["ladder"] = lad;
    pj["tv_guard"] = num(p.tv_guard);
    pj["max_fronts"] = p.max_fronts;
    pj["max_events"] = p.max_events;
    h["params"] = pj;
    h["far_left"] = state_json(log.far_left);
    h["initial"] = log.initial;
    h["final_fronts"] = log.final_fronts;
    json al = json::array();
    for (const auto& a : log.alarms)
        al.push_back({{"kind", a.kind}, {"t", num(a.t)}, {"value", num(a.value)}, {"detail", a.detail}});
    h["alarms"] = al;
    h["max_np_total"] = num(log.max_np_total);
    h["front_count"] = log.fronts.size();
    h["event_count"] = log.events.size();
    out += dump(h) + "\n";
    for (const auto& f : log.fronts) {
        json j;
        j["type"] = "front";
        j["id"] = f.id;
        j["family"] = f.family;
        j["kind"] = to_string(f.kind);
        j["strength"] = num(f.strength);
        j["speed"] = num(f.speed);
        j["perturbation"] = num(f.perturbation);
        j["birth"] = json::array({num(f.t_birth), num(f.x_birth)});
        j["death"] = json::array({num(f.t_death), num(f.x_death)});
        j["left"] = state_json(f.left);
        j["right"] = state_json(f.right);
        j["parent_event"] = f.parent_event;
        j["child_event"] = f.child_event;
        j["components"] = state_json(f.components);
        out += dump(j) + "\n";
    }
    for (const auto& ev : log.events) {
        json j;
        j["type"] = "event";
        j["id"] = ev.id;
        j["t"] = num(ev.t);
        j["x"] = num(ev.x);
        j["incoming"] = ev.incoming;
        j["outgoing"] = ev.outgoing;
        j["solver"] = to_string(ev.solver);
        j["strengths"] = {{"in_left", vec_json(ev.in_left)},
                          {"in_right", vec_json(ev.in_right)},
                          {"out", vec_json(ev.out)},
                          {"np_in", vec_json(ev.np_in)},
                          {"np_out", vec_json(ev.np_out)}};
        j["cancelled"] = ev.cancelled;
        out += dump(j) + "\n";
    }
    return out;
}

RunLog from_jsonl(const std::string& text) {
    RunLog log;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": " + e.what());
        }
        const std::string type = j.at("type").get<std::string>();
        if (type == "header") {
            if (j.at("schema").get<int>() != kLogSchemaVersion)
                throw Error(ErrorCode::InvalidArgument, "unsupported log schema");
            header = true;
            log.model_name = j.at("model").get<std::string>();
            log.n_eqs = j.at("n_eqs").get<int>();
            const auto& pj = j.at("params");
            auto& p = log.params;
            p.nu = get_num(pj.at("nu"));
            p.np_threshold = get_num(pj.at("np_threshold"));
            p.np_budget = get_num(pj.at("np_budget"));
            p.speed_perturb = get_num(pj.at("speed_perturb"));
            p.horizon = get_num(pj.at("horizon"));
            for (const auto& l : pj.at("ladder")) p.ladder.emplace_back(get_num(l.at(0)), get_num(l.at(1)));
            p.tv_guard = get_num(pj.at("tv_guard"));
            p.max_fronts = pj.at("max_fronts").get<std::size_t>();
            p.max_events = pj.at("max_events").get<std::size_t>();
            log.far_left = state_from(j.at("far_left"));
            log.initial = j.at("initial").get<std::vector<int>>();
            log.final_fronts = j.at("final_fronts").get<std::vector<int>>();
            for (const auto& a : j.at("alarms"))
                log.alarms.push_back({a.at("kind").get<std::string>(), get_num(a.at("t")), get_num(a.at("value")),
                                      a.at("detail").get<std::string>()});
            log.max_np_total = get_num(j.at("max_np_total"));
        } else if (type == "front") {
            Front f;
            f.id = j.at("id").get<int>();
            if (f.id != static_cast<int>(log.fronts.size()))
                throw Error(ErrorCode::InvalidArgument, "front ids must be dense and ordered");
            f.family = j.at("family").get<int>();
            f.kind = front_kind_from(j.at("kind").get<std::string>());
            f.strength = get_num(j.at("strength"));
            f.speed = get_num(j.at("speed"));
            f.perturbation = get_num(j.at("perturbation"));
            f.t_birth = get_num(j.at("birth").at(0));
            f.x_birth = get_num(j.at("birth").at(1));
            f.t_death = get_num(j.at("death").at(0));
            f.x_death = get_num(j.at("death").at(1));
            f.left = state_from(j.at("left"));
            f.right = state_from(j.at("right"));
            f.parent_event = j.at("parent_event").get<int>();
            f.child_event = j.at("child_event").get<int>();
            f.components = state_from(j.at("components"));
            log.fronts.push_back(std::move(f));
        } else if (type == "event") {
            InteractionEvent ev;
            ev.id = j.at("id").get<int>();
            if (ev.id != static_cast<int>(log.events.size()))
                throw Error(ErrorCode::InvalidArgument, "event ids must be dense and ordered");
            ev.t = get_num(j.at("t"));
            ev.x = get_num(j.at("x"));
            ev.incoming = j.at("incoming").get<std::vector<int>>();
            ev.outgoing = j.at("outgoing").get<std::vector<int>>();
            const std::string solver = j.at("solver").get<std::string>();
            ev.solver = solver == "accurate" ? SolverUsed::Accurate : SolverUsed::Simplified;
            const auto& s = j.at("strengths");
            ev.in_left = vec_from(s.at("in_left"));
            ev.in_right = vec_from(s.at("in_right"));
            ev.out = vec_from(s.at("out"));
            ev.np_in = vec_from(s.at("np_in"));
            ev.np_out = vec_from(s.at("np_out"));
            ev.cancelled = j.at("cancelled").get<int>();
            log.events.push_back(std::move(ev));
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown record type " + type);
        }
    }
    if (!header) throw Error(ErrorCode::InvalidArgument, "log has no header line");
    const int nf = static_cast<int>(log.fronts.size());
    auto check_id = [&](int id) {
        if (id < 0 || id >= nf) throw Error(ErrorCode::InvalidArgument, "front id out of range");
    };
    for (int id : log.initial) check_id(id);
    for (int id : log.final_fronts) check_id(id);
    for (const auto& ev : log.events) {
        for (int id : ev.incoming) check_id(id);
        for (int id : ev.outgoing) check_id(id);
    }
    return log;
}

void write_jsonl(const RunLog& log, const std::string& path) { write_text_file(path, to_jsonl(log)); }

RunLog read_jsonl(const std::string& path) { return from_jsonl(read_text_file(path)); }

std::vector<SnapshotRow> snapshot_rows(const Timeline& tl, const std::vector<double>& times) {
    const RunLog& log = tl.log();
    std::vector<SnapshotRow> rows;
    auto push = [&](double t, double x, const State& u) {
        SnapshotRow r;
        r.t = t;
        r.x_left = x;
        for (int k = 0; k < u.size(); ++k) r.u.push_back(u(k));
        rows.push_back(std::move(r));
    };
    for (double t : times) {
        const auto& fr = tl.fronts_at(t);
        push(t, -std::numeric_limits<double>::infinity(), fr.empty() ? log.far_left : log.front(fr.front()).left);
        for (int id : fr) push(t, log.front(id).x_at(t), log.front(id).right);
    }
    return rows;
}

std::string snapshots_to_csv(const std::vector<SnapshotRow>& rows, int n_eqs) {
    std::string out = "t,x_left";
    for (int k = 1; k <= n_eqs; ++k) out += ",u_" + std::to_string(k);
    out += "\n";
    for (const auto& r : rows) {
        out += format_double(r.t) + "," + format_double(r.x_left);
        for (double v : r.u) out += "," + format_double(v);
        out += "\n";
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

std::vector<std::vector<std::string>> csv_body(const std::string& text, std::size_t min_cols) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            continue;
        }
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() < min_cols) throw Error(ErrorCode::InvalidArgument, "short CSV row: " + line);
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace

std::vector<SnapshotRow> snapshots_from_csv(const std::string& text) {
    std::vector<SnapshotRow> rows;
    for (const auto& c : csv_body(text, 3)) {
        SnapshotRow r;
        r.t = parse_double(c[0]);
        r.x_left = parse_double(c[1]);
        for (std::size_t k = 2; k < c.size(); ++k) r.u.push_back(parse_double(c[k]));
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string atoms_to_csv(const AtomicMeasure& m) {
    std::string out = "t,x,weight,event_id,kind\n";
    for (const auto& a : m.atoms) {
        out += format_double(a.t) + "," + format_double(a.x) + "," + format_double(a.weight) + "," +
               std::to_string(a.event_id) + "," + a.kind + "\n";
    }
    return out;
}

AtomicMeasure atoms_from_csv(const std::string& text) {
    AtomicMeasure m;
    for (const auto& c : csv_body(text, 5)) {
        m.atoms.push_back({parse_double(c[0]), parse_double(c[1]), parse_double(c[2]), std::stoi(c[3]), c[4]});
    }
    return m;
}

std::vector<PathPoint> path_points(const RunLog& log, const std::vector<ShockFrontPath>& paths) {
    std::vector<PathPoint> pts;
    for (const auto& p : paths) {
        for (int id : p.segments) {
            const Front& f = log.front(id);
            pts.push_back({p.id, p.family, f.t_birth, f.x_birth, f.strength});
        }
        const Front& last = log.front(p.segments.back());
        const double te = std::min(last.t_death, log.params.horizon);
        pts.push_back({p.id, p.family, te, last.x_at(te), last.strength});
    }
    return pts;
}

std::string paths_to_csv(const std::vector<PathPoint>& pts) {
    std::string out = "path_id,family,t,x,sigma\n";
    for (const auto& p : pts) {
        out += std::to_string(p.path_id) + "," + std::to_string(p.family + 1) + "," + format_double(p.t) + "," +
               format_double(p.x) + "," + format_double(p.strength) + "\n";
    }
    return out;
}

std::vector<PathPoint> paths_from_csv(const std::string& text) {
    std::vector<PathPoint> pts;
    for (const auto& c : csv_body(text, 5)) {
        pts.push_back({std::stoi(c[0]), std::stoi(c[1]) - 1, parse_double(c[2]), parse_double(c[3]),
                       parse_double(c[4])});
    }
    return pts;
}

std::string polyline_to_csv(const Polyline& p) {
    std::string out = "t,x\n";
    for (std::size_t k = 0; k < p.t.size(); ++k) out += format_double(p.t[k]) + "," + format_double(p.x[k]) + "\n";
    return out;
}

} // namespace fronttrack
