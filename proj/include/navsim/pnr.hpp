#pragma once
// pnr.hpp - Push-and-Rotate on a cropped subgrid: push / swap / rotate
// primitives, the solver loop with its two-blanks precondition, plan
// verification, and the lexicographic progress potential used by the
// invariant checks.

#include <cstdint>
#include <optional>
#include <vector>

#include "navsim/mapf.hpp"

namespace navsim {

struct Move {
    int agent = -1;
    Cell from{};
    Cell to{};
};

// One transition per entry; a transition moves one agent, or several for a
// simultaneous cyclic shift.
struct MoveTrace {
    std::vector<std::vector<Move>> transitions;

    void single(int agent, const Cell& from, const Cell& to) {
        transitions.push_back({Move{agent, from, to}});
    }
    size_t size() const { return transitions.size(); }
};

// Vertex assignment (cell index -> agent or blank) plus the finished set.
struct Configuration {
    std::vector<int> occupant;      // per cell index; -1 = blank
    std::vector<Cell> agent_cell;   // per agent slot
    std::vector<uint8_t> finished;  // per agent slot

    static Configuration from_starts(const Subgrid& sg, const std::vector<Cell>& starts);
    int at(const Subgrid& sg, const Cell& c) const { return occupant[sg.grid.index(c)]; }
    bool blank(const Subgrid& sg, const Cell& c) const { return at(sg, c) < 0; }
    void apply(const Subgrid& sg, const std::vector<Move>& transition);
};

enum class PrimitiveStatus : uint8_t {
    Ok,
    NoBlankReachable,
    NoCycleWithBlank,
    NoBlankOnCycle,
    Rejected,
};

// Shift the occupants of blank-path Q one step toward its blank tail, freeing
// Q.front(). Q must be simple, contain no finished agents, and end at a blank.
PrimitiveStatus primitive_push(const Subgrid& sg, Configuration& config,
                               const std::vector<Cell>& blank_path, MoveTrace* trace);

// Move every agent on the simple cycle one vertex along the cycle direction
// (cells[i] -> cells[i+1]), filling a blank on the cycle. Rejected when the
// cycle is fully occupied or crosses a finished agent.
PrimitiveStatus primitive_rotate(const Subgrid& sg, Configuration& config,
                                 const std::vector<Cell>& cycle, MoveTrace* trace);

// Exchange adjacent agents r and b, restoring every other agent. Tries a
// cleared simple cycle through the shared edge first, then the classic
// exchange at a degree->=3 vertex reached by moving the pair together.
PrimitiveStatus primitive_swap(const Subgrid& sg, Configuration& config, int agent_r,
                               int agent_b, MoveTrace* trace);

// BFS from `from` to the nearest blank avoiding `forbidden` cells; returns the
// path [from..blank] or empty when unreachable. Deterministic tie-break.
std::vector<Cell> find_blank_path(const Subgrid& sg, const Configuration& config,
                                  const Cell& from, const std::vector<Cell>& forbidden);

enum class SolveStatus : uint8_t { Ok, PreconditionBlanks, Unsolvable };

const char* to_string(SolveStatus s);

struct SolveStats {
    int pushes = 0;
    int swaps = 0;
    int rotates = 0;
    int advances = 0;
    int retries = 0;
    int invariant_violations = 0;
    int potential_violations = 0;

    int primitive_count() const { return pushes + swaps + rotates + advances; }
};

struct PnrOptions {
    bool track_potential = false;  // compute the (D, K, H) potential per primitive
    int max_retries = -1;          // agent-order retries; -1 = 2 * agents
};

struct SolveResult {
    SolveStatus status = SolveStatus::Unsolvable;
    JointPlan plan;
    SolveStats stats;
    bool ok() const { return status == SolveStatus::Ok; }
};

// Complete solver for instances whose participant components hold at least
// two blanks: routes one agent at a time along a shortest path, resolving
// blockers with push, rotate and swap; freezes each agent at its target.
SolveResult pnr_solve(const LocalInstance& instance, const PnrOptions& options = {});

// Structural solvability decision: per component, order constraints on paths
// and cycles, always solvable otherwise (given the two-blank precondition).
bool instance_solvable(const LocalInstance& instance);

struct PlanViolation {
    enum class Kind : uint8_t {
        BadStart,
        OffGrid,
        VertexConflict,
        NonAdjacent,
        EdgeSwap,
        FinishedMoved,
        WrongFinal,
    } kind = Kind::BadStart;
    int step = 0;
    int agent_a = -1;
    int agent_b = -1;
};

// Checks per-step uniqueness, adjacency-or-wait, no edge swaps, frozen agents
// fixed, and final assignment equal to the targets. Empty result means valid.
std::optional<PlanViolation> verify_plan(const LocalInstance& instance, const JointPlan& plan);

const char* to_string(PlanViolation::Kind k);

// Lexicographic progress potential (distance-to-target, blockers on the
// chosen path, blocker-to-blank distances) for the active agent.
struct Potential {
    long long dist = 0;
    long long blockers = 0;
    long long blocker_blank_dist = 0;

    bool operator<(const Potential& o) const {
        if (dist != o.dist) return dist < o.dist;
        if (blockers != o.blockers) return blockers < o.blockers;
        return blocker_blank_dist < o.blocker_blank_dist;
    }
};

Potential compute_potential(const Subgrid& sg, const Configuration& config, int agent,
                            const Cell& target);

}  // namespace navsim
