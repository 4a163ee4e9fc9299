#include "navsim/verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "navsim/deadlock.hpp"
#include "navsim/pnr.hpp"
#include "navsim/policy.hpp"
#include "navsim/rng.hpp"

namespace navsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename Fn>
void parallel_for(int count, Fn&& fn) {
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, std::max(1, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto run = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
}

}  // namespace

// --- oracle graph --------------------------------------------------------------

FreeGraph build_free_graph(const Subgrid& sg) {
    FreeGraph g;
    const Grid& grid = sg.grid;
    g.cell_to_node.assign(static_cast<size_t>(grid.cell_count()), -1);
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
            const Cell c{x, y};
            if (!grid.free(c)) continue;
            g.cell_to_node[grid.index(c)] = static_cast<int>(g.cells.size());
            g.cells.push_back(c);
        }
    }
    g.adj.resize(g.cells.size());
    static const int dx4[4] = {1, -1, 0, 0};
    static const int dy4[4] = {0, 0, 1, -1};
    for (size_t i = 0; i < g.cells.size(); ++i) {
        for (int k = 0; k < 4; ++k) {
            const Cell nb{g.cells[i].x + dx4[k], g.cells[i].y + dy4[k]};
            if (grid.free(nb)) g.adj[i].push_back(g.cell_to_node[grid.index(nb)]);
        }
    }
    return g;
}

uint64_t joint_encode(const FreeGraph& graph, const std::vector<int>& nodes) {
    const uint64_t base = graph.cells.size();
    uint64_t code = 0;
    for (size_t k = nodes.size(); k > 0; --k) code = code * base + static_cast<uint64_t>(nodes[k - 1]);
    return code;
}

std::vector<uint8_t> joint_reachable(const FreeGraph& graph, const std::vector<int>& start_nodes) {
    const size_t v = graph.cells.size();
    const size_t k = start_nodes.size();
    size_t states = 1;
    for (size_t i = 0; i < k; ++i) states *= v;
    std::vector<uint8_t> visited(states, 0);

    std::vector<int> nodes = start_nodes;
    std::deque<uint64_t> queue;
    const uint64_t start = joint_encode(graph, nodes);
    visited[start] = 1;
    queue.push_back(start);

    std::vector<int> decoded(k);
    while (!queue.empty()) {
        uint64_t code = queue.front();
        queue.pop_front();
        uint64_t rest = code;
        for (size_t i = 0; i < k; ++i) {
            decoded[i] = static_cast<int>(rest % v);
            rest /= v;
        }
        for (size_t i = 0; i < k; ++i) {
            for (int nb : graph.adj[static_cast<size_t>(decoded[i])]) {
                bool occupied = false;
                for (size_t j = 0; j < k; ++j) {
                    if (j != i && decoded[j] == nb) {
                        occupied = true;
                        break;
                    }
                }
                if (occupied) continue;
                uint64_t mult = 1;
                for (size_t j = 0; j < i; ++j) mult *= v;
                const uint64_t next =
                    code + mult * static_cast<uint64_t>(nb - decoded[i]);
                if (!visited[next]) {
                    visited[next] = 1;
                    queue.push_back(next);
                }
            }
        }
    }
    return visited;
}

bool joint_bfs_solvable(const Subgrid& sg, const std::vector<Cell>& starts,
                        const std::vector<Cell>& targets) {
    const FreeGraph graph = build_free_graph(sg);
    std::vector<int> s, t;
    for (const Cell& c : starts) s.push_back(graph.node_of(sg.grid, c));
    for (const Cell& c : targets) t.push_back(graph.node_of(sg.grid, c));
    const std::vector<uint8_t> visited = joint_reachable(graph, s);
    return visited[joint_encode(graph, t)] != 0;
}

double dijkstra_grid_cost(const Grid& grid, const Cell& start, const Cell& goal) {
    if (!grid.free(start) || !grid.free(goal)) return -1.0;
    const size_t n = static_cast<size_t>(grid.cell_count());
    std::vector<double> dist(n, kInf);
    std::vector<uint8_t> done(n, 0);
    dist[grid.index(start)] = 0.0;
    static const int dx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static const int dy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    for (;;) {
        double best = kInf;
        size_t cur = n;
        for (size_t i = 0; i < n; ++i) {
            if (!done[i] && dist[i] < best) {
                best = dist[i];
                cur = i;
            }
        }
        if (cur == n) break;
        done[cur] = 1;
        const Cell c = grid.cell_at(cur);
        for (int k = 0; k < 8; ++k) {
            const Cell nb{c.x + dx8[k], c.y + dy8[k]};
            if (!grid.free(nb)) continue;
            if (k >= 4 &&
                (!grid.free({c.x + dx8[k], c.y}) || !grid.free({c.x, c.y + dy8[k]}))) {
                continue;
            }
            const double w = k >= 4 ? 1.4142135623730951 : 1.0;
            const size_t ni = grid.index(nb);
            dist[ni] = std::min(dist[ni], best + w);
        }
    }
    const double d = dist[grid.index(goal)];
    return std::isinf(d) ? -1.0 : d;
}

// --- polyominoes ----------------------------------------------------------------

namespace {

Polyomino normalize(Polyomino shape) {
    int minx = shape[0].first, miny = shape[0].second;
    for (const auto& [x, y] : shape) {
        minx = std::min(minx, x);
        miny = std::min(miny, y);
    }
    for (auto& [x, y] : shape) {
        x -= minx;
        y -= miny;
    }
    std::sort(shape.begin(), shape.end());
    return shape;
}

Polyomino canonical(const Polyomino& shape) {
    Polyomino best;
    for (int t = 0; t < 8; ++t) {
        Polyomino variant;
        variant.reserve(shape.size());
        for (const auto& [x, y] : shape) {
            int px = x, py = y;
            if (t & 4) std::swap(px, py);
            if (t & 1) px = -px;
            if (t & 2) py = -py;
            variant.push_back({px, py});
        }
        variant = normalize(std::move(variant));
        if (best.empty() || variant < best) best = variant;
    }
    return best;
}

}  // namespace

std::vector<Polyomino> enumerate_polyominoes(int cells) {
    std::vector<Polyomino> current = {{{0, 0}}};
    static const int dx4[4] = {1, -1, 0, 0};
    static const int dy4[4] = {0, 0, 1, -1};
    for (int size = 2; size <= cells; ++size) {
        std::set<Polyomino> next;
        for (const Polyomino& shape : current) {
            std::set<std::pair<int, int>> occupied(shape.begin(), shape.end());
            for (const auto& [x, y] : shape) {
                for (int k = 0; k < 4; ++k) {
                    const std::pair<int, int> cand{x + dx4[k], y + dy4[k]};
                    if (occupied.count(cand)) continue;
                    Polyomino grown = shape;
                    grown.push_back(cand);
                    next.insert(canonical(grown));
                }
            }
        }
        current.assign(next.begin(), next.end());
    }
    return current;
}

Subgrid polyomino_subgrid(const Polyomino& shape) {
    int maxx = 0, maxy = 0;
    for (const auto& [x, y] : shape) {
        maxx = std::max(maxx, x);
        maxy = std::max(maxy, y);
    }
    Subgrid sg;
    sg.grid = Grid(maxx + 1, maxy + 1, 1.0, {0.0, 0.0});
    for (int y = 0; y <= maxy; ++y) {
        for (int x = 0; x <= maxx; ++x) sg.grid.set_blocked({x, y}, true);
    }
    for (const auto& [x, y] : shape) sg.grid.set_blocked({x, y}, false);
    label_components(sg);
    return sg;
}

Polyomino random_polyomino(int cells, uint64_t seed) {
    SplitMix64 rng(seed);
    std::set<std::pair<int, int>> occupied{{0, 0}};
    static const int dx4[4] = {1, -1, 0, 0};
    static const int dy4[4] = {0, 0, 1, -1};
    while (static_cast<int>(occupied.size()) < cells) {
        std::vector<std::pair<int, int>> frontier;
        for (const auto& [x, y] : occupied) {
            for (int k = 0; k < 4; ++k) {
                const std::pair<int, int> cand{x + dx4[k], y + dy4[k]};
                if (!occupied.count(cand)) frontier.push_back(cand);
            }
        }
        std::sort(frontier.begin(), frontier.end());
        frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
        occupied.insert(frontier[static_cast<size_t>(rng.below(frontier.size()))]);
    }
    Polyomino shape(occupied.begin(), occupied.end());
    return normalize(std::move(shape));
}

// --- oracle sweep ----------------------------------------------------------------

OracleSweepOutcome run_pnr_oracle_sweep(int max_cells_2agents, int max_cells_3agents,
                                        int samples_3agents, uint64_t seed) {
    OracleSweepOutcome out;
    PnrOptions opts;
    opts.track_potential = true;

    // Exhaustive 2-agent instances on every free polyomino with >= 2 blanks.
    for (int cells = 4; cells <= max_cells_2agents; ++cells) {
        const std::vector<Polyomino> shapes = enumerate_polyominoes(cells);
        std::vector<OracleSweepOutcome> partial(shapes.size());
        parallel_for(static_cast<int>(shapes.size()), [&](int si) {
            OracleSweepOutcome& acc = partial[static_cast<size_t>(si)];
            const Subgrid sg = polyomino_subgrid(shapes[static_cast<size_t>(si)]);
            const FreeGraph graph = build_free_graph(sg);
            const int v = static_cast<int>(graph.cells.size());

            LocalInstance inst;
            inst.subgrid = sg;
            inst.agent_ids = {0, 1};
            inst.starts.resize(2);
            inst.targets.resize(2);
            for (int s0 = 0; s0 < v; ++s0) {
                for (int s1 = 0; s1 < v; ++s1) {
                    if (s1 == s0) continue;
                    const std::vector<uint8_t> reach = joint_reachable(graph, {s0, s1});
                    inst.starts[0] = graph.cells[static_cast<size_t>(s0)];
                    inst.starts[1] = graph.cells[static_cast<size_t>(s1)];
                    for (int t0 = 0; t0 < v; ++t0) {
                        for (int t1 = 0; t1 < v; ++t1) {
                            if (t1 == t0) continue;
                            inst.targets[0] = graph.cells[static_cast<size_t>(t0)];
                            inst.targets[1] = graph.cells[static_cast<size_t>(t1)];
                            ++acc.instances_2;
                            const bool oracle = reach[joint_encode(graph, {t0, t1})] != 0;
                            const SolveResult res = pnr_solve(inst, opts);
                            acc.invariant_violations += res.stats.invariant_violations;
                            acc.potential_violations += res.stats.potential_violations;
                            if (res.ok() != oracle) {
                                ++acc.mismatches;
                            } else if (res.ok() && verify_plan(inst, res.plan)) {
                                ++acc.plan_violations;
                            }
                        }
                    }
                }
            }
        });
        for (const OracleSweepOutcome& acc : partial) {
            out.instances_2 += acc.instances_2;
            out.mismatches += acc.mismatches;
            out.plan_violations += acc.plan_violations;
            out.invariant_violations += acc.invariant_violations;
            out.potential_violations += acc.potential_violations;
        }
    }

    // Seeded 3-agent sampling on shapes of up to max_cells_3agents vertices.
    std::vector<OracleSweepOutcome> partial3(static_cast<size_t>(samples_3agents));
    parallel_for(samples_3agents, [&](int i) {
        OracleSweepOutcome& acc = partial3[static_cast<size_t>(i)];
        SplitMix64 rng(seed + 977 * static_cast<uint64_t>(i));
        const int cells = 5 + static_cast<int>(rng.below(
                                  static_cast<uint64_t>(max_cells_3agents - 5 + 1)));
        const Polyomino shape = random_polyomino(cells, rng.next());
        const Subgrid sg = polyomino_subgrid(shape);
        const FreeGraph graph = build_free_graph(sg);
        const int v = static_cast<int>(graph.cells.size());

        auto pick_distinct = [&](std::vector<int>* nodes) {
            nodes->clear();
            while (nodes->size() < 3) {
                const int c = static_cast<int>(rng.below(static_cast<uint64_t>(v)));
                if (std::find(nodes->begin(), nodes->end(), c) == nodes->end()) {
                    nodes->push_back(c);
                }
            }
        };
        std::vector<int> s_nodes, t_nodes;
        pick_distinct(&s_nodes);
        pick_distinct(&t_nodes);

        LocalInstance inst;
        inst.subgrid = sg;
        inst.agent_ids = {0, 1, 2};
        for (int k = 0; k < 3; ++k) {
            inst.starts.push_back(graph.cells[static_cast<size_t>(s_nodes[k])]);
            inst.targets.push_back(graph.cells[static_cast<size_t>(t_nodes[k])]);
        }
        ++acc.instances_3;
        const std::vector<uint8_t> reach = joint_reachable(graph, s_nodes);
        const bool oracle = reach[joint_encode(graph, t_nodes)] != 0;
        const SolveResult res = pnr_solve(inst, opts);
        acc.invariant_violations += res.stats.invariant_violations;
        acc.potential_violations += res.stats.potential_violations;
        if (res.ok() != oracle) {
            ++acc.mismatches;
        } else if (res.ok() && verify_plan(inst, res.plan)) {
            ++acc.plan_violations;
        }
    });
    for (const OracleSweepOutcome& acc : partial3) {
        out.instances_3 += acc.instances_3;
        out.mismatches += acc.mismatches;
        out.plan_violations += acc.plan_violations;
        out.invariant_violations += acc.invariant_violations;
        out.potential_violations += acc.potential_violations;
    }
    return out;
}

namespace {

std::pair<CheckResult, CheckResult> sweep_results(const OracleSweepOutcome& sweep,
                                                  double elapsed) {
    CheckResult c1;
    c1.name = "pnr-oracle-equivalence";
    c1.pass = sweep.mismatches == 0 && sweep.plan_violations == 0;
    {
        std::ostringstream os;
        os << sweep.instances_2 << " exhaustive 2-agent + " << sweep.instances_3
           << " sampled 3-agent instances (shapes canonical up to isometry), "
           << sweep.mismatches << " oracle mismatches, " << sweep.plan_violations
           << " invalid plans";
        c1.detail = os.str();
    }
    c1.seconds = elapsed;

    CheckResult c2;
    c2.name = "invariant-potential-suite";
    c2.pass = sweep.invariant_violations == 0 && sweep.potential_violations == 0;
    {
        std::ostringstream os;
        os << sweep.invariant_violations << " finished-fixed/two-blank violations, "
           << sweep.potential_violations << " potential-descent violations";
        c2.detail = os.str();
    }
    c2.seconds = elapsed;
    return {c1, c2};
}

}  // namespace

CheckResult check_pnr_oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    const OracleSweepOutcome sweep = run_pnr_oracle_sweep(9, 12, 10000, 0xBEEF);
    return sweep_results(sweep, seconds_since(t0)).first;
}

CheckResult check_invariant_potential_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    const OracleSweepOutcome sweep = run_pnr_oracle_sweep(9, 12, 10000, 0xBEEF);
    return sweep_results(sweep, seconds_since(t0)).second;
}

// --- polynomial envelope ----------------------------------------------------------

CheckResult check_polynomial_envelope() {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult result;
    result.name = "polynomial-envelope";

    double small_max = 0.0;  // n in 4..7
    double large_max = 0.0;  // n in 8..10
    long long failures = 0;
    for (int n = 4; n <= 10; ++n) {
        Subgrid sg;
        sg.grid = Grid(n, n, 1.0, {0.0, 0.0});
        label_components(sg);
        const int v = n * n;
        for (int k = 2; k <= 6; ++k) {
            for (int rep = 0; rep < 10; ++rep) {
                SplitMix64 rng(0x9000 + 131 * n + 17 * k + rep);
                auto pick = [&](std::vector<Cell>* cells) {
                    std::vector<int> chosen;
                    while (static_cast<int>(chosen.size()) < k) {
                        const int c = static_cast<int>(rng.below(static_cast<uint64_t>(v)));
                        if (std::find(chosen.begin(), chosen.end(), c) == chosen.end()) {
                            chosen.push_back(c);
                        }
                    }
                    for (int c : chosen) cells->push_back(sg.grid.cell_at(static_cast<size_t>(c)));
                };
                LocalInstance inst;
                inst.subgrid = sg;
                for (int a = 0; a < k; ++a) inst.agent_ids.push_back(a);
                pick(&inst.starts);
                pick(&inst.targets);

                const SolveResult res = pnr_solve(inst);
                if (!res.ok() || verify_plan(inst, res.plan)) {
                    ++failures;
                    continue;
                }
                const double ratio = static_cast<double>(res.stats.primitive_count()) /
                                     (static_cast<double>(v) * v * k);
                if (n <= 7) {
                    small_max = std::max(small_max, ratio);
                } else {
                    large_max = std::max(large_max, ratio);
                }
            }
        }
    }
    const double fitted_c = std::max(small_max, large_max);
    result.pass = failures == 0 && large_max <= 1.5 * small_max + 1e-12;
    std::ostringstream os;
    os << "fitted c=" << fitted_c << " (count <= c*|V'|^2*k), small-grid max ratio "
       << small_max << ", large-grid max ratio " << large_max << ", " << failures
       << " solve failures";
    result.detail = os.str();
    result.seconds = seconds_since(t0);
    return result;
}

// --- benchmark direction + clearance ----------------------------------------------

namespace {

struct BenchmarkOutcome {
    std::vector<BatchRow> rows;
    long long clearance_checks = 0;
    long long clearance_violations = 0;
    bool direction_pass = true;
    std::string direction_detail;
};

BenchmarkOutcome run_full_benchmark() {
    BenchmarkOutcome out;
    const std::vector<uint64_t> seeds = make_seeds(1000, 100);
    const int t_max = 1000;
    std::ostringstream detail;

    for (const std::string scen_name : {"doorway", "corridor"}) {
        for (const int n : {4, 6, 8}) {
            const Scenario scenario = make_builtin_scenario(scen_name, n);
            const BatchResult base = run_batch(scenario, RunMethod::BaseOnly, seeds, t_max);
            const BatchResult hybrid = run_batch(scenario, RunMethod::Hybrid, seeds, t_max);
            out.rows.push_back(base.row);
            out.rows.push_back(hybrid.row);
            for (const EpisodeResult& ep : hybrid.episodes) {
                out.clearance_checks += ep.clearance_checks;
                out.clearance_violations += ep.clearance_violations;
            }
            const double b = base.row.success_rate();
            const double h = hybrid.row.success_rate();
            bool cell_ok = true;
            if (scen_name == "corridor") {
                cell_ok = b <= 0.20 && h >= 0.95;
            } else {
                cell_ok = h >= 0.90 && (h - b) >= 0.30;
            }
            if (!cell_ok) out.direction_pass = false;
            detail << scen_name << "/" << n << " base " << 100.0 * b << "% hybrid "
                   << 100.0 * h << "%" << (cell_ok ? "" : " [FAIL]") << "; ";
        }
    }
    out.direction_detail = detail.str();
    return out;
}

std::pair<CheckResult, CheckResult> benchmark_results(const BenchmarkOutcome& bench,
                                                      double elapsed) {
    CheckResult c4;
    c4.name = "benchmark-direction";
    c4.pass = bench.direction_pass;
    c4.detail = bench.direction_detail;
    c4.seconds = elapsed;

    CheckResult c5;
    c5.name = "clearance-property";
    c5.pass = bench.clearance_violations == 0;
    std::ostringstream os;
    os << bench.clearance_checks << " post-solve clearance checks, "
       << bench.clearance_violations << " bound violations";
    c5.detail = os.str();
    c5.seconds = elapsed;
    return {c4, c5};
}

}  // namespace

CheckResult check_benchmark_direction(std::vector<BatchRow>* rows_out) {
    const auto t0 = std::chrono::steady_clock::now();
    const BenchmarkOutcome bench = run_full_benchmark();
    if (rows_out) *rows_out = bench.rows;
    return benchmark_results(bench, seconds_since(t0)).first;
}

CheckResult check_clearance_property() {
    const auto t0 = std::chrono::steady_clock::now();
    const BenchmarkOutcome bench = run_full_benchmark();
    return benchmark_results(bench, seconds_since(t0)).second;
}

// --- detector truth tables ----------------------------------------------------------

CheckResult check_detector_truth_tables() {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult result;
    result.name = "detector-truth-tables";
    int cases = 0;
    int failures = 0;
    std::ostringstream why;

    const DetectorConfig cfg;  // defaults
    const WorldConfig wcfg;
    const double tol = 1e-9;

    auto expect = [&](bool ok, const std::string& label) {
        ++cases;
        if (!ok) {
            ++failures;
            why << label << "; ";
        }
    };
    auto close = [&](double a, double b) {
        if (std::isinf(a) || std::isinf(b)) return std::isinf(a) && std::isinf(b);
        return std::abs(a - b) <= tol;
    };

    // TTC / dmin closed forms, hand-evaluated.
    struct TtcCase {
        Vec2 r, u;
        double ttc, dmin;
    };
    const TtcCase ttc_cases[] = {
        {{2, 0}, {-1, 0}, 2.0, 0.0},
        {{2, 0}, {1, 0}, kInf, 2.0},
        {{2, 1}, {-1, -0.5}, 2.0, 0.0},
        {{3, 1}, {-1, 0}, 3.0, 1.0},
        {{0, 2}, {0, -0.5}, 4.0, 0.0},
        {{1, 1}, {0, 0}, kInf, std::sqrt(2.0)},
        {{2, 2}, {-1, 1}, kInf, 2.0 * std::sqrt(2.0)},
        {{4, 0}, {-2, 0}, 2.0, 0.0},
        {{1, 0}, {-0.5, 0.5}, 1.0, std::sqrt(0.5)},
        {{-3, 0}, {1, 0}, 3.0, 0.0},
        {{-2, -2}, {1, 1}, 2.0, 0.0},
        {{5, 0}, {-1, 0.2}, 125.0 / 26.0, 5.0 / std::sqrt(26.0)},
    };
    for (const TtcCase& c : ttc_cases) {
        const double ttc = ttc_pair(c.r, c.u, cfg.eps);
        const double dmin = dmin_pair(c.r, c.u, ttc);
        expect(close(ttc, c.ttc), "ttc closed form");
        expect(close(dmin, c.dmin), "dmin closed form");
    }

    // Speed / non-progress predicate.
    {
        auto spd = [&](double ego, std::vector<NeighborSample> nbs,
                       int quorum = 1) {
            DetectorConfig c = cfg;
            c.eps_n = quorum;
            return trigger_spd(ego, nbs, c);
        };
        expect(spd(0.0, {{1, 0.0, 0.0}}) == true, "spd stationary pair");
        expect(spd(wcfg.v_max, {{1, 0.0, 0.0}}) == false, "spd fast ego");
        expect(spd(0.05, {{1, 0.05, 0.1}}) == false, "spd progressing neighbor");
        expect(spd(0.05, {{1, 0.05, -0.01}}) == true, "spd stalled neighbor");
        expect(spd(0.05, {{1, 0.5, -1.0}, {2, 0.05, 0.0}}) == true, "spd second neighbor");
        expect(spd(0.05, {}) == false, "spd no neighbors");
        expect(spd(0.1, {{1, 0.0, 0.0}}) == false, "spd ego at threshold");
        expect(spd(0.0999, {{1, 0.0999, 0.0}}) == true, "spd just below threshold");
        expect(spd(0.05, {{1, 0.05, 0.0}}, 2) == false, "spd quorum 2 unmet");
        expect(spd(0.05, {{1, 0.05, 0.0}, {2, 0.01, -0.2}}, 2) == true, "spd quorum 2 met");
    }

    // Waypoint-stuck predicate.
    {
        WaypointList wl;
        wl.points = {{5.0, 0.0}};
        wl.reach_threshold = 0.3;

        wl.last_advance_step = 100;
        expect(trigger_wp(wl, {3.0, 0.0}, 100, cfg) == false, "wp advanced this step");
        wl.last_advance_step = 100 - cfg.t_wp;
        expect(trigger_wp(wl, {3.0, 0.0}, 100, cfg) == true, "wp stalled far");
        expect(trigger_wp(wl, {5.0, 0.1}, 100, cfg) == false, "wp within goal tolerance");
        wl.last_advance_step = 100 - cfg.t_wp + 1;
        expect(trigger_wp(wl, {3.0, 0.0}, 100, cfg) == false, "wp budget not reached");
        wl.last_advance_step = 100 - cfg.t_wp;
        expect(trigger_wp(wl, {5.0 - cfg.eps_goal, 0.0}, 100, cfg) == false,
               "wp boundary distance");
        WaypointList done = wl;
        done.active_index = 1;
        expect(trigger_wp(done, {3.0, 0.0}, 100, cfg) == false, "wp exhausted list");
    }

    // Core-pair risk predicate.
    {
        auto agent = [](int id, Vec2 p, Vec2 v) {
            AgentState s;
            s.id = id;
            s.position = p;
            s.velocity = v;
            return s;
        };
        auto risk = [&](const std::vector<AgentState>& all, int ego_id) {
            const AgentState* ego = nullptr;
            for (const AgentState& s : all) {
                if (s.id == ego_id) ego = &s;
            }
            return trigger_risk(*ego, neighbor_query(*ego, all, wcfg), all, wcfg, cfg);
        };

        // Head-on closing pair, 2 m apart at 1 m/s each: ttc = 1 s.
        std::vector<AgentState> headon{agent(0, {0, 0}, {1, 0}), agent(1, {2, 0}, {-1, 0})};
        RiskResult r = risk(headon, 0);
        expect(r.fired && r.agent_a == 0 && r.agent_b == 1, "risk head-on fires");
        r = risk(headon, 1);
        expect(r.fired && r.agent_a == 0 && r.agent_b == 1, "risk mutuality symmetric");

        // Ego's best neighbor prefers somebody else: no fire for ego.
        std::vector<AgentState> trio{agent(0, {0, 0}, {0.1, 0}),
                                     agent(1, {3, 0}, {-1, 0}),
                                     agent(2, {3, 2}, {-1, -2})};
        expect(risk(trio, 0).fired == false, "risk non-mutual ego");
        r = risk(trio, 1);
        expect(r.fired && r.agent_a == 1 && r.agent_b == 2, "risk mutual pair in trio");

        // Stationary pair: ttc infinite, fires on dmin alone when close.
        std::vector<AgentState> close_pair{agent(0, {0, 0}, {0, 0}),
                                           agent(1, {0.4, 0}, {0, 0})};
        expect(risk(close_pair, 0).fired == true, "risk stationary close pair");
        std::vector<AgentState> far_pair{agent(0, {0, 0}, {0, 0}),
                                         agent(1, {0.5, 0}, {0, 0})};
        expect(risk(far_pair, 0).fired == false, "risk stationary separated pair");

        // Mutual but neither imminent nor close.
        std::vector<AgentState> lofty{agent(0, {0, 0}, {0, 0}), agent(1, {10, 3}, {-1, 0})};
        expect(risk(lofty, 0).fired == false, "risk distant crossing");

        // Receding pair.
        std::vector<AgentState> receding{agent(0, {0, 0}, {-1, 0}), agent(1, {1, 0}, {1, 0})};
        expect(risk(receding, 0).fired == false, "risk receding pair");
    }

    result.pass = failures == 0 && cases >= 30;
    std::ostringstream os;
    os << cases << " snapshots, " << failures << " disagreements";
    if (failures > 0) os << " (" << why.str() << ")";
    result.detail = os.str();
    result.seconds = seconds_since(t0);
    return result;
}

// --- null intervention ---------------------------------------------------------------

CheckResult check_null_intervention() {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult result;
    result.name = "null-intervention-equivalence";
    const int t_max = 1000;
    const std::vector<uint64_t> seeds = make_seeds(1000, 100);
    std::atomic<long long> mismatches{0};
    long long compared = 0;

    for (const std::string scen_name : {"doorway", "corridor"}) {
        for (const int n : {4, 6, 8}) {
            const Scenario scenario = make_builtin_scenario(scen_name, n);
            // Detector present but fully gated off: must be byte-identical to
            // the detector-free build.
            Scenario gated = scenario;
            gated.exec.detector.t_warm = t_max + 1;

            std::vector<uint64_t> base_hash(seeds.size()), gated_hash(seeds.size());
            parallel_for(static_cast<int>(seeds.size()), [&](int i) {
                const uint64_t seed = seeds[static_cast<size_t>(i)];
                const EpisodeResult base =
                    run_episode(scenario, RunMethod::BaseOnly, seed, t_max, true);
                base_hash[static_cast<size_t>(i)] =
                    trajectory_hash(scenario, RunMethod::BaseOnly, seed, base);

                EpisodeSetup setup = make_setup(gated, seed);
                setup.exec.detector_enabled = true;
                const EpisodeResult nulled = navsim::run_episode(setup, t_max, true);
                gated_hash[static_cast<size_t>(i)] =
                    trajectory_hash(scenario, RunMethod::BaseOnly, seed, nulled);
            });
            for (size_t i = 0; i < seeds.size(); ++i) {
                if (base_hash[i] != gated_hash[i]) mismatches.fetch_add(1);
            }
            compared += static_cast<long long>(seeds.size());
        }
    }
    result.pass = mismatches.load() == 0;
    std::ostringstream os;
    os << compared << " episode pairs compared, " << mismatches.load()
       << " trajectory mismatches";
    result.detail = os.str();
    result.seconds = seconds_since(t0);
    return result;
}

// --- determinism -----------------------------------------------------------------------

CheckResult check_batch_determinism() {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult result;
    result.name = "batch-determinism";
    long long diffs = 0;
    std::ostringstream detail;

    struct Setup {
        std::string scen;
        int n;
        RunMethod method;
    };
    const Setup setups[] = {
        {"doorway", 6, RunMethod::Hybrid},
        {"corridor", 4, RunMethod::Hybrid},
        {"corridor", 6, RunMethod::BaseOnly},
    };
    for (const Setup& su : setups) {
        const Scenario scenario = make_builtin_scenario(su.scen, su.n);
        const std::vector<uint64_t> seeds = make_seeds(777, 20);
        const BatchResult a = run_batch(scenario, su.method, seeds, 1000);
        const BatchResult b = run_batch(scenario, su.method, seeds, 1000);
        if (emit_csv({a.row}) != emit_csv({b.row})) ++diffs;
        if (a.outcomes != b.outcomes) ++diffs;
        for (size_t i = 0; i < a.episodes.size(); ++i) {
            std::ostringstream la, lb;
            for (const EventRecord& e : a.episodes[i].log) la << e.to_line() << '\n';
            for (const EventRecord& e : b.episodes[i].log) lb << e.to_line() << '\n';
            if (la.str() != lb.str()) {
                ++diffs;
                break;
            }
        }
        // Trajectory bytes for a few seeds.
        for (uint64_t seed : {seeds[0], seeds[7], seeds[19]}) {
            const EpisodeResult ta = run_episode(scenario, su.method, seed, 1000, true);
            const EpisodeResult tb = run_episode(scenario, su.method, seed, 1000, true);
            if (trajectory_hash(scenario, su.method, seed, ta) !=
                trajectory_hash(scenario, su.method, seed, tb)) {
                ++diffs;
            }
        }
    }
    result.pass = diffs == 0;
    detail << "3 batch setups rerun, " << diffs << " differences across tables, "
           << "outcomes, logs and trajectories";
    result.detail = detail.str();
    result.seconds = seconds_since(t0);
    return result;
}

// --- suite -----------------------------------------------------------------------------

std::vector<CheckResult> run_acceptance_suite(bool print) {
    std::vector<CheckResult> results;

    auto emit = [&](const CheckResult& r, int index) {
        results.push_back(r);
        if (print) {
            std::printf("[%s] criterion %d (%s): %s (%.1fs)\n", r.pass ? "PASS" : "FAIL",
                        index, r.name.c_str(), r.detail.c_str(), r.seconds);
            std::fflush(stdout);
        }
    };

    {
        const auto t0 = std::chrono::steady_clock::now();
        const OracleSweepOutcome sweep = run_pnr_oracle_sweep(9, 12, 10000, 0xBEEF);
        const auto [c1, c2] = sweep_results(sweep, seconds_since(t0));
        emit(c1, 1);
        emit(c2, 2);
    }
    emit(check_polynomial_envelope(), 3);
    {
        const auto t0 = std::chrono::steady_clock::now();
        const BenchmarkOutcome bench = run_full_benchmark();
        const auto [c4, c5] = benchmark_results(bench, seconds_since(t0));
        emit(c4, 4);
        emit(c5, 5);
        if (print) {
            std::printf("%s", emit_table(bench.rows).c_str());
            std::fflush(stdout);
        }
    }
    emit(check_detector_truth_tables(), 6);
    emit(check_null_intervention(), 7);
    emit(check_batch_determinism(), 8);
    return results;
}

}  // namespace navsim
