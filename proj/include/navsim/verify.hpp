#pragma once
// verify.hpp - independent reference oracles (joint-configuration-space BFS,
// Dijkstra, polyomino enumeration) and the acceptance check runners built on
// them. Oracles never call the implementations they check.

#include <cstdint>
#include <string>
#include <vector>

#include "navsim/bench.hpp"
#include "navsim/mapf.hpp"
#include "navsim/planner.hpp"

namespace navsim {

// --- oracles -----------------------------------------------------------------

// Free-cell graph extracted from a subgrid for oracle searches.
struct FreeGraph {
    std::vector<Cell> cells;             // free cells in index order
    std::vector<int> cell_to_node;       // grid cell index -> node or -1
    std::vector<std::vector<int>> adj;   // 4-neighborhood

    int node_of(const Grid& g, const Cell& c) const { return cell_to_node[g.index(c)]; }
};

FreeGraph build_free_graph(const Subgrid& sg);

// Reachable joint configurations under sequential single-agent moves,
// encoded base |cells|. Index = sum_k node_k * |cells|^k.
std::vector<uint8_t> joint_reachable(const FreeGraph& graph, const std::vector<int>& start_nodes);

uint64_t joint_encode(const FreeGraph& graph, const std::vector<int>& nodes);

// Single-query variant with early exit.
bool joint_bfs_solvable(const Subgrid& sg, const std::vector<Cell>& starts,
                        const std::vector<Cell>& targets);

// Reference cost for the global planner: Dijkstra over the same 8-connected,
// no-corner-cutting neighborhood. Negative when unreachable.
double dijkstra_grid_cost(const Grid& grid, const Cell& start, const Cell& goal);

// Free polyominoes (canonical under the 8 plane symmetries) of exactly n
// cells, each translated to the origin and sorted.
using Polyomino = std::vector<std::pair<int, int>>;
std::vector<Polyomino> enumerate_polyominoes(int cells);

Subgrid polyomino_subgrid(const Polyomino& shape);

// Seeded random connected polyomino of `cells` cells.
Polyomino random_polyomino(int cells, uint64_t seed);

// --- acceptance checks ---------------------------------------------------------

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Exhaustive 2-agent solver-vs-oracle equivalence on all free polyominoes of
// max_cells or fewer vertices, plus seeded 3-agent sampling; counts oracle
// mismatches, plan violations, and invariant/potential violations.
struct OracleSweepOutcome {
    long long instances_2 = 0;
    long long instances_3 = 0;
    long long mismatches = 0;
    long long plan_violations = 0;
    long long invariant_violations = 0;
    long long potential_violations = 0;
};

OracleSweepOutcome run_pnr_oracle_sweep(int max_cells_2agents, int max_cells_3agents,
                                        int samples_3agents, uint64_t seed);

CheckResult check_pnr_oracle_equivalence();
CheckResult check_invariant_potential_suite();
CheckResult check_polynomial_envelope();
CheckResult check_benchmark_direction(std::vector<BatchRow>* rows_out = nullptr);
CheckResult check_clearance_property();
CheckResult check_detector_truth_tables();
CheckResult check_null_intervention();
CheckResult check_batch_determinism();

// All eight checks in order; prints one pass/fail line per criterion to the
// stream when `print` is set.
std::vector<CheckResult> run_acceptance_suite(bool print);

}  // namespace navsim
