#pragma once

#include "fronttrack/engine.hpp"

#include <map>
#include <vector>

namespace fronttrack {

enum class NodeRole { Initial, Triple, MergeIn, CancelHit, Terminal };

const char* to_string(NodeRole role);

// The four ways a node can sit in the jump set, keyed by how many of its incoming and outgoing
// segments belong to it.
enum class JumpCase { Initial, Triple, Terminal, Otherwise };

const char* to_string(JumpCase c);

struct PathNode {
    int event_id = -1;  // -1 for a start at t = 0
    double t = 0.0;
    double x = 0.0;
    NodeRole role = NodeRole::Initial;
};

struct ShockFrontPath {
    int id = -1;
    int family = 0;
    std::vector<int> segments;  // front ids in time order
    std::vector<PathNode> nodes;
    double t_minus = 0.0;
    double t_plus = 0.0;
    bool terminates = false;        // ends at a Terminal node
    bool merges = false;            // ends by merging into another path
    double terminal_residual = 0.0; // strength of the i-shock leaving the terminal node, 0 if none
    double max_abs_strength = 0.0;  // along the branch and everything downstream of it
    bool informational = false;     // linearly degenerate family
};

struct JumpNode {
    int event_id = -1;
    double t = 0.0;
    double x = 0.0;
    int n_in = 0;
    int n_out = 0;
    double q = 0.0;  // sum of outgoing minus sum of incoming member strengths
    JumpCase jump_case = JumpCase::Otherwise;
};

struct JumpSet {
    int family = 0;
    double eps0 = 0.0;
    double eps1 = 0.0;
    std::vector<ShockFrontPath> paths;
    std::vector<char> member;  // indexed by front id
    // Nodes keyed by event id; starts at t = 0 use -(front id) - 2.
    std::map<int, JumpNode> nodes;

    bool contains(int front_id) const {
        return front_id >= 0 && static_cast<std::size_t>(front_id) < member.size() &&
               member[static_cast<std::size_t>(front_id)] != 0;
    }
    std::size_t segment_count() const;
};

// Maximal polygonal i-shock lines with strength >= eps0 throughout and >= eps1 at least once.
// A segment belongs to the jump set when some such line passes through it. At a merge the left
// incoming branch continues and the right branch ends.
std::vector<ShockFrontPath> extract_maximal_fronts(const RunLog& log, int family, double eps0, double eps1);

// Throws InconsistentJumpSet if a node does not fit one of the four cases.
JumpSet jump_set(const RunLog& log, int family, double eps0, double eps1);

// True when every segment of inner is a segment of outer.
bool jump_set_contains(const JumpSet& outer, const JumpSet& inner);

} // namespace fronttrack
