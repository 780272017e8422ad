#pragma once

#include "fronttrack/analysis.hpp"
#include "fronttrack/engine.hpp"
#include "fronttrack/genealogy.hpp"
#include "fronttrack/measures.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fronttrack {

constexpr int kLogSchemaVersion = 1;

// One JSON object per line: a header, then every front, then every event in time order.
std::string to_jsonl(const RunLog& log);
RunLog from_jsonl(const std::string& text);
void write_jsonl(const RunLog& log, const std::string& path);
RunLog read_jsonl(const std::string& path);

struct SnapshotRow {
    double t = 0.0;
    double x_left = 0.0;  // -inf for the leftmost piece
    std::vector<double> u;
};

// Piecewise-constant state at each time: one row per constant piece, keyed by its left end.
std::vector<SnapshotRow> snapshot_rows(const Timeline& tl, const std::vector<double>& times);
std::string snapshots_to_csv(const std::vector<SnapshotRow>& rows, int n_eqs);
std::vector<SnapshotRow> snapshots_from_csv(const std::string& text);

std::string atoms_to_csv(const AtomicMeasure& m);
AtomicMeasure atoms_from_csv(const std::string& text);

struct PathPoint {
    int path_id = 0;
    int family = 0;
    double t = 0.0;
    double x = 0.0;
    double strength = 0.0;  // strength of the segment leaving this point (last point: the arriving one)
};

std::vector<PathPoint> path_points(const RunLog& log, const std::vector<ShockFrontPath>& paths);
std::string paths_to_csv(const std::vector<PathPoint>& pts);
std::vector<PathPoint> paths_from_csv(const std::string& text);

std::string polyline_to_csv(const Polyline& p);

// %.17g, with inf/nan spelled the way strtod reads them back.
std::string format_double(double v);
double parse_double(const std::string& s);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace fronttrack
