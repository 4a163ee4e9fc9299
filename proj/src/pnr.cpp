#include "navsim/pnr.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>

namespace navsim {

namespace {

static const int dx4[4] = {1, -1, 0, 0};
static const int dy4[4] = {0, 0, 1, -1};

bool adjacent4(const Cell& a, const Cell& b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y) == 1;
}

std::vector<uint8_t> make_mask(const Subgrid& sg, const std::vector<Cell>& cells) {
    std::vector<uint8_t> mask(static_cast<size_t>(sg.grid.cell_count()), 0);
    for (const Cell& c : cells) {
        if (sg.grid.in_bounds(c)) mask[sg.grid.index(c)] = 1;
    }
    return mask;
}

// BFS shortest path avoiding masked cells; deterministic neighbor order.
std::vector<Cell> bfs_path(const Subgrid& sg, const Cell& from, const Cell& to,
                           const std::vector<uint8_t>& avoid) {
    if (!sg.grid.free(from) || !sg.grid.free(to)) return {};
    if (avoid[sg.grid.index(from)] || avoid[sg.grid.index(to)]) return {};
    if (from == to) return {from};
    const size_t n = static_cast<size_t>(sg.grid.cell_count());
    std::vector<int> parent(n, -2);
    std::deque<Cell> queue{from};
    parent[sg.grid.index(from)] = -1;
    while (!queue.empty()) {
        const Cell c = queue.front();
        queue.pop_front();
        for (int k = 0; k < 4; ++k) {
            const Cell nb{c.x + dx4[k], c.y + dy4[k]};
            if (!sg.grid.free(nb)) continue;
            const size_t ni = sg.grid.index(nb);
            if (avoid[ni] || parent[ni] != -2) continue;
            parent[ni] = static_cast<int>(sg.grid.index(c));
            if (nb == to) {
                std::vector<Cell> path{to};
                size_t cur = ni;
                while (parent[cur] >= 0) {
                    cur = static_cast<size_t>(parent[cur]);
                    path.push_back(sg.grid.cell_at(cur));
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
            queue.push_back(nb);
        }
    }
    return {};
}

// BFS distances from `from` over free, unmasked cells; -1 when unreachable.
std::vector<int> bfs_distances(const Subgrid& sg, const Cell& from,
                               const std::vector<uint8_t>& avoid) {
    const size_t n = static_cast<size_t>(sg.grid.cell_count());
    std::vector<int> dist(n, -1);
    if (!sg.grid.free(from) || avoid[sg.grid.index(from)]) return dist;
    std::deque<Cell> queue{from};
    dist[sg.grid.index(from)] = 0;
    while (!queue.empty()) {
        const Cell c = queue.front();
        queue.pop_front();
        const int d = dist[sg.grid.index(c)];
        for (int k = 0; k < 4; ++k) {
            const Cell nb{c.x + dx4[k], c.y + dy4[k]};
            if (!sg.grid.free(nb)) continue;
            const size_t ni = sg.grid.index(nb);
            if (avoid[ni] || dist[ni] >= 0) continue;
            dist[ni] = d + 1;
            queue.push_back(nb);
        }
    }
    return dist;
}

std::vector<Cell> finished_cells(const Subgrid& sg, const Configuration& config) {
    std::vector<Cell> cells;
    for (size_t k = 0; k < config.agent_cell.size(); ++k) {
        if (config.finished[k]) cells.push_back(config.agent_cell[k]);
    }
    (void)sg;
    return cells;
}

// Shortest simple cycle through edge (a, b): the edge plus a shortest
// alternative path from b back to a avoiding masked cells. Returned in rotate
// order [a, b, ...], empty when no cycle exists.
std::vector<Cell> cycle_through_edge(const Subgrid& sg, const Cell& a, const Cell& b,
                                     const std::vector<uint8_t>& avoid) {
    // Forbid the direct edge by searching from each non-a neighbor of b.
    const size_t n = static_cast<size_t>(sg.grid.cell_count());
    std::vector<int> parent(n, -2);
    std::deque<Cell> queue;
    parent[sg.grid.index(b)] = -1;
    for (int k = 0; k < 4; ++k) {
        const Cell nb{b.x + dx4[k], b.y + dy4[k]};
        if (nb == a || !sg.grid.free(nb)) continue;
        const size_t ni = sg.grid.index(nb);
        if (avoid[ni] || parent[ni] != -2) continue;
        parent[ni] = static_cast<int>(sg.grid.index(b));
        queue.push_back(nb);
    }
    while (!queue.empty()) {
        const Cell c = queue.front();
        queue.pop_front();
        if (c == a) {
            std::vector<Cell> tail;
            size_t cur = sg.grid.index(c);
            while (parent[cur] >= 0) {
                tail.push_back(sg.grid.cell_at(cur));
                cur = static_cast<size_t>(parent[cur]);
            }
            // tail runs a .. (b-neighbor); cycle = [a, b] + reversed tail minus a.
            std::vector<Cell> cycle{a, b};
            for (size_t i = tail.size() - 1; i + 1 > 0; --i) {
                if (tail[i] == a) continue;
                cycle.push_back(tail[i]);
            }
            return cycle;
        }
        for (int k = 0; k < 4; ++k) {
            const Cell nb{c.x + dx4[k], c.y + dy4[k]};
            if (!sg.grid.free(nb)) continue;
            const size_t ni = sg.grid.index(nb);
            if (avoid[ni] || parent[ni] != -2) continue;
            parent[ni] = static_cast<int>(sg.grid.index(c));
            queue.push_back(nb);
        }
    }
    return {};
}

}  // namespace

Configuration Configuration::from_starts(const Subgrid& sg, const std::vector<Cell>& starts) {
    Configuration c;
    c.occupant.assign(static_cast<size_t>(sg.grid.cell_count()), -1);
    c.agent_cell = starts;
    c.finished.assign(starts.size(), 0);
    for (size_t k = 0; k < starts.size(); ++k) {
        c.occupant[sg.grid.index(starts[k])] = static_cast<int>(k);
    }
    return c;
}

void Configuration::apply(const Subgrid& sg, const std::vector<Move>& transition) {
    for (const Move& m : transition) occupant[sg.grid.index(m.from)] = -1;
    for (const Move& m : transition) {
        occupant[sg.grid.index(m.to)] = m.agent;
        agent_cell[m.agent] = m.to;
    }
}

PrimitiveStatus primitive_push(const Subgrid& sg, Configuration& config,
                               const std::vector<Cell>& blank_path, MoveTrace* trace) {
    const auto& q = blank_path;
    if (q.size() < 2) return PrimitiveStatus::Rejected;
    for (size_t i = 0; i < q.size(); ++i) {
        if (!sg.grid.free(q[i])) return PrimitiveStatus::Rejected;
        if (i + 1 < q.size() && !adjacent4(q[i], q[i + 1])) return PrimitiveStatus::Rejected;
        for (size_t j = i + 1; j < q.size(); ++j) {
            if (q[i] == q[j]) return PrimitiveStatus::Rejected;
        }
        const int occ = config.at(sg, q[i]);
        if (occ >= 0 && config.finished[occ]) return PrimitiveStatus::Rejected;
    }
    if (!config.blank(sg, q.back())) return PrimitiveStatus::Rejected;

    // The blank walks from the tail back to the head, one shift per step.
    for (size_t i = q.size() - 1; i > 0; --i) {
        const int agent = config.at(sg, q[i - 1]);
        if (agent < 0) continue;  // already blank, nothing to shift
        std::vector<Move> t{Move{agent, q[i - 1], q[i]}};
        config.apply(sg, t);
        if (trace) trace->transitions.push_back(std::move(t));
    }
    return PrimitiveStatus::Ok;
}

PrimitiveStatus primitive_rotate(const Subgrid& sg, Configuration& config,
                                 const std::vector<Cell>& cycle, MoveTrace* trace) {
    const size_t len = cycle.size();
    if (len < 3) return PrimitiveStatus::Rejected;
    bool has_blank = false;
    for (size_t i = 0; i < len; ++i) {
        if (!sg.grid.free(cycle[i])) return PrimitiveStatus::Rejected;
        if (!adjacent4(cycle[i], cycle[(i + 1) % len])) return PrimitiveStatus::Rejected;
        for (size_t j = i + 1; j < len; ++j) {
            if (cycle[i] == cycle[j]) return PrimitiveStatus::Rejected;
        }
        const int occ = config.at(sg, cycle[i]);
        if (occ < 0) {
            has_blank = true;
        } else if (config.finished[occ]) {
            return PrimitiveStatus::Rejected;
        }
    }
    if (!has_blank) return PrimitiveStatus::NoBlankOnCycle;

    std::vector<Move> t;
    for (size_t i = 0; i < len; ++i) {
        const int agent = config.at(sg, cycle[i]);
        if (agent >= 0) t.push_back(Move{agent, cycle[i], cycle[(i + 1) % len]});
    }
    config.apply(sg, t);
    if (trace) trace->transitions.push_back(std::move(t));
    return PrimitiveStatus::Ok;
}

// Blank cells reachable from `from` (avoiding `forbidden` and finished
// agents) with their BFS paths, nearest blank first.
std::vector<std::vector<Cell>> all_blank_paths(const Subgrid& sg, const Configuration& config,
                                               const Cell& from,
                                               const std::vector<Cell>& forbidden) {
    std::vector<std::vector<Cell>> paths;
    std::vector<uint8_t> avoid = make_mask(sg, forbidden);
    for (const Cell& c : finished_cells(sg, config)) avoid[sg.grid.index(c)] = 1;
    if (!sg.grid.free(from) || avoid[sg.grid.index(from)]) return paths;

    const size_t n = static_cast<size_t>(sg.grid.cell_count());
    std::vector<int> parent(n, -2);
    std::deque<Cell> queue{from};
    parent[sg.grid.index(from)] = -1;
    static const int dx[4] = {1, -1, 0, 0};
    static const int dy[4] = {0, 0, 1, -1};
    while (!queue.empty()) {
        const Cell c = queue.front();
        queue.pop_front();
        if (config.blank(sg, c)) {
            std::vector<Cell> path{c};
            size_t cur = sg.grid.index(c);
            while (parent[cur] >= 0) {
                cur = static_cast<size_t>(parent[cur]);
                path.push_back(sg.grid.cell_at(cur));
            }
            std::reverse(path.begin(), path.end());
            paths.push_back(std::move(path));
        }
        for (int k = 0; k < 4; ++k) {
            const Cell nb{c.x + dx[k], c.y + dy[k]};
            if (!sg.grid.free(nb)) continue;
            const size_t ni = sg.grid.index(nb);
            if (avoid[ni] || parent[ni] != -2) continue;
            parent[ni] = static_cast<int>(sg.grid.index(c));
            queue.push_back(nb);
        }
    }
    return paths;
}

std::vector<Cell> find_blank_path(const Subgrid& sg, const Configuration& config,
                                  const Cell& from, const std::vector<Cell>& forbidden) {
    std::vector<std::vector<Cell>> paths = all_blank_paths(sg, config, from, forbidden);
    if (paths.empty()) return {};
    return paths.front();
}

namespace {

// Swap working state: candidate sequences are built on a copy and committed
// only when the whole exchange succeeds.
struct SwapAttempt {
    const Subgrid& sg;
    Configuration config;  // working copy
    std::vector<Move> moves;

    explicit SwapAttempt(const Subgrid& sg_, const Configuration& base)
        : sg(sg_), config(base) {}

    void move_one(int agent, const Cell& from, const Cell& to) {
        std::vector<Move> t{Move{agent, from, to}};
        config.apply(sg, t);
        moves.push_back(t[0]);
    }

    bool push_from(const Cell& head, const std::vector<Cell>& forbidden) {
        const std::vector<Cell> q = find_blank_path(sg, config, head, forbidden);
        if (q.empty()) return false;
        if (q.size() == 1) return true;  // head already blank
        for (size_t i = q.size() - 1; i > 0; --i) {
            const int agent = config.at(sg, q[i - 1]);
            if (agent < 0) continue;
            move_one(agent, q[i - 1], q[i]);
        }
        return true;
    }
};

int free_degree(const Subgrid& sg, const Cell& c) {
    int deg = 0;
    for (int k = 0; k < 4; ++k) {
        if (sg.grid.free({c.x + dx4[k], c.y + dy4[k]})) ++deg;
    }
    return deg;
}

// Exchange r and b around a simple cycle whose remaining cells are cleared
// first; third parties are restored by replaying the clears in reverse.
bool try_cycle_exchange(const Subgrid& sg, const Configuration& base, int r, int b,
                        const std::vector<Cell>& cycle, std::vector<Move>* out) {
    SwapAttempt at(sg, base);
    const Cell x = cycle[0];  // r
    const Cell u = cycle[1];  // b

    std::vector<Move> clears;
    for (size_t i = 2; i < cycle.size(); ++i) {
        const int occ = at.config.at(sg, cycle[i]);
        if (occ < 0) continue;
        if (at.config.finished[occ]) return false;
        // Push the occupant off the cycle without disturbing other cycle cells.
        std::vector<Cell> forbidden;
        for (size_t j = 0; j < cycle.size(); ++j) {
            if (j != i) forbidden.push_back(cycle[j]);
        }
        const size_t before = at.moves.size();
        if (!at.push_from(cycle[i], forbidden)) return false;
        clears.insert(clears.end(), at.moves.begin() + before, at.moves.end());
    }

    // b walks the long way around, r steps forward, b closes onto r's cell.
    for (size_t i = 1; i + 1 < cycle.size(); ++i) at.move_one(b, cycle[i], cycle[i + 1]);
    at.move_one(r, x, u);
    at.move_one(b, cycle.back(), x);

    // Restore the cleared third parties.
    for (auto it = clears.rbegin(); it != clears.rend(); ++it) {
        at.move_one(it->agent, it->to, it->from);
    }
    *out = std::move(at.moves);
    return true;
}

// Route blanks into every cell of `targets` (in the given order), with the
// already-cleared cells protected; drains may pass through any other cell.
bool clear_cells(SwapAttempt& at, const std::vector<Cell>& targets,
                 const std::vector<Cell>& pinned) {
    std::vector<Cell> forbidden = pinned;
    for (const Cell& tgt : targets) {
        if (!at.push_from(tgt, forbidden)) return false;
        forbidden.push_back(tgt);
    }
    return true;
}

// Classic exchange at a vertex with three or more free neighbors: walk the
// pair to the hub, drain two spare arms (and the hub itself) while the
// junction is still open, run the six-move exchange, then replay the
// preparation in reverse with the two labels swapped.
bool try_hub_exchange(const Subgrid& sg, const Configuration& base, int r, int b,
                      const Cell& hub, bool r_leads, std::vector<Move>* out) {
    SwapAttempt at(sg, base);
    const int leader = r_leads ? r : b;
    const int follower = r_leads ? b : r;
    const bool leader_on_hub = at.config.agent_cell[leader] == hub;

    if (!leader_on_hub) {
        const std::vector<Cell> fin = finished_cells(sg, at.config);
        std::vector<Cell> avoid_cells = fin;
        avoid_cells.push_back(at.config.agent_cell[follower]);
        const std::vector<Cell> pi =
            bfs_path(sg, at.config.agent_cell[leader], hub, make_mask(sg, avoid_cells));
        if (pi.size() < 2) return false;

        // Approach: slide the pair until the leader sits next to the hub.
        for (size_t i = 1; i + 1 < pi.size(); ++i) {
            const Cell lc = at.config.agent_cell[leader];
            const Cell fc = at.config.agent_cell[follower];
            const Cell w = pi[i];
            const int occ = at.config.at(sg, w);
            if (occ >= 0) {
                if (at.config.finished[occ]) return false;
                if (!at.push_from(w, {lc, fc})) return false;
            }
            at.move_one(leader, lc, w);
            at.move_one(follower, fc, lc);
        }
    }

    const Cell lc = at.config.agent_cell[leader];    // adjacent to hub, or the hub
    const Cell fc0 = at.config.agent_cell[follower];

    // Spare arms of the hub, excluding the pair's entry side.
    std::vector<Cell> spares;
    for (int k = 0; k < 4; ++k) {
        const Cell nb{hub.x + dx4[k], hub.y + dy4[k]};
        if (!sg.grid.free(nb) || nb == lc || nb == fc0) continue;
        const int occ = at.config.at(sg, nb);
        if (occ >= 0 && at.config.finished[occ]) continue;
        spares.push_back(nb);
    }
    if (spares.size() < 2) return false;

    // Drain two spares plus the hub, trying clear orders until one works.
    bool cleared = false;
    Cell n1{}, n2{};
    for (size_t i = 0; i < spares.size() && !cleared; ++i) {
        for (size_t j = 0; j < spares.size() && !cleared; ++j) {
            if (i == j) continue;
            std::vector<std::vector<Cell>> orders;
            if (leader_on_hub) {
                orders = {{spares[i], spares[j]}, {spares[j], spares[i]}};
            } else {
                orders = {{spares[i], spares[j], hub}, {spares[i], hub, spares[j]},
                          {hub, spares[i], spares[j]}, {spares[j], hub, spares[i]}};
            }
            for (const std::vector<Cell>& order : orders) {
                SwapAttempt trial(sg, at.config);
                if (!clear_cells(trial, order, {lc, fc0})) continue;
                at.config = trial.config;
                at.moves.insert(at.moves.end(), trial.moves.begin(), trial.moves.end());
                n1 = spares[i];
                n2 = spares[j];
                cleared = true;
                break;
            }
        }
    }

    // A pair parked on the junction can seal its own arms. Retreat one step,
    // vent the arms through the open hub, then step back in.
    bool reentered = false;
    if (!cleared && leader_on_hub) {
        for (int k = 0; k < 4 && !cleared; ++k) {
            const Cell rb{fc0.x + dx4[k], fc0.y + dy4[k]};
            if (!sg.grid.free(rb) || rb == hub) continue;
            SwapAttempt trial(sg, at.config);
            const int occ = trial.config.at(sg, rb);
            if (occ >= 0) {
                if (trial.config.finished[occ]) continue;
                if (!trial.push_from(rb, {hub, fc0})) continue;
            }
            trial.move_one(follower, fc0, rb);
            trial.move_one(leader, hub, fc0);
            for (size_t i = 0; i < spares.size() && !cleared; ++i) {
                for (size_t j = 0; j < spares.size() && !cleared; ++j) {
                    if (i == j) continue;
                    const std::vector<std::vector<Cell>> orders = {
                        {spares[i], spares[j], hub}, {spares[i], hub, spares[j]},
                        {hub, spares[i], spares[j]}, {spares[j], hub, spares[i]}};
                    for (const std::vector<Cell>& order : orders) {
                        SwapAttempt vent(sg, trial.config);
                        if (!clear_cells(vent, order, {fc0, rb})) continue;
                        vent.move_one(leader, fc0, hub);
                        vent.move_one(follower, rb, fc0);
                        at.config = vent.config;
                        at.moves.insert(at.moves.end(), trial.moves.begin(), trial.moves.end());
                        at.moves.insert(at.moves.end(), vent.moves.begin(), vent.moves.end());
                        n1 = spares[i];
                        n2 = spares[j];
                        cleared = true;
                        reentered = true;
                        break;
                    }
                }
            }
        }
    }
    if (!cleared) return false;
    (void)reentered;

    // Enter the junction.
    Cell fc = fc0;
    if (!leader_on_hub) {
        at.move_one(leader, lc, hub);
        at.move_one(follower, fc0, lc);
        fc = lc;
    }
    const size_t prep_len = at.moves.size();  // approach + clears + entry

    // Six-move exchange around the hub.
    at.move_one(leader, hub, n1);
    at.move_one(follower, fc, hub);
    at.move_one(follower, hub, n2);
    at.move_one(leader, n1, hub);
    at.move_one(leader, hub, fc);
    at.move_one(follower, n2, hub);

    // Unwind the preparation with r and b exchanged.
    std::vector<Move> prep(at.moves.begin(), at.moves.begin() + prep_len);
    for (auto it = prep.rbegin(); it != prep.rend(); ++it) {
        int agent = it->agent;
        if (agent == r) {
            agent = b;
        } else if (agent == b) {
            agent = r;
        }
        at.move_one(agent, it->to, it->from);
    }
    *out = std::move(at.moves);
    return true;
}

}  // namespace

PrimitiveStatus primitive_swap(const Subgrid& sg, Configuration& config, int agent_r,
                               int agent_b, MoveTrace* trace) {
    if (agent_r < 0 || agent_b < 0 || agent_r == agent_b) return PrimitiveStatus::Rejected;
    if (config.finished[agent_r] || config.finished[agent_b]) return PrimitiveStatus::Rejected;
    const Cell x = config.agent_cell[agent_r];
    const Cell u = config.agent_cell[agent_b];
    if (!adjacent4(x, u)) return PrimitiveStatus::Rejected;

    std::vector<uint8_t> fin_mask = make_mask(sg, finished_cells(sg, config));
    std::vector<Move> moves;
    bool done = false;

    // Candidate 1: cleared cycle through the shared edge.
    const std::vector<Cell> cycle = cycle_through_edge(sg, x, u, fin_mask);
    if (!cycle.empty() && try_cycle_exchange(sg, config, agent_r, agent_b, cycle, &moves)) {
        done = true;
    }

    // Candidate 2: exchange at a branch vertex, nearest first.
    if (!done) {
        const std::vector<int> dist = bfs_distances(sg, x, fin_mask);
        struct Hub {
            int d;
            size_t idx;
            Cell c;
        };
        std::vector<Hub> hubs;
        for (int cy = 0; cy < sg.grid.height(); ++cy) {
            for (int cx = 0; cx < sg.grid.width(); ++cx) {
                const Cell c{cx, cy};
                if (!sg.grid.free(c)) continue;
                const size_t ci = sg.grid.index(c);
                if (dist[ci] < 0 || free_degree(sg, c) < 3) continue;
                hubs.push_back({dist[ci], ci, c});
            }
        }
        std::sort(hubs.begin(), hubs.end(), [](const Hub& a, const Hub& b) {
            if (a.d != b.d) return a.d < b.d;
            return a.idx < b.idx;
        });
        for (const Hub& hub : hubs) {
            if (try_hub_exchange(sg, config, agent_r, agent_b, hub.c, true, &moves) ||
                try_hub_exchange(sg, config, agent_r, agent_b, hub.c, false, &moves)) {
                done = true;
                break;
            }
        }
    }
    if (!done) return PrimitiveStatus::NoCycleWithBlank;

    for (const Move& m : moves) {
        std::vector<Move> t{m};
        config.apply(sg, t);
        if (trace) trace->transitions.push_back(std::move(t));
    }
    return PrimitiveStatus::Ok;
}

Potential compute_potential(const Subgrid& sg, const Configuration& config, int agent,
                            const Cell& target) {
    Potential phi;
    const std::vector<uint8_t> fin_mask = make_mask(sg, finished_cells(sg, config));
    const std::vector<Cell> path = bfs_path(sg, config.agent_cell[agent], target, fin_mask);
    if (path.empty()) {
        phi.dist = std::numeric_limits<int>::max();
        return phi;
    }
    phi.dist = static_cast<long long>(path.size()) - 1;
    for (size_t i = 1; i < path.size(); ++i) {
        const int occ = config.at(sg, path[i]);
        if (occ < 0 || config.finished[occ] || occ == agent) continue;
        ++phi.blockers;
        const std::vector<int> d = bfs_distances(sg, path[i], fin_mask);
        int best = std::numeric_limits<int>::max();
        for (int idx = 0; idx < sg.grid.cell_count(); ++idx) {
            const Cell c = sg.grid.cell_at(static_cast<size_t>(idx));
            if (!sg.grid.free(c) || d[idx] < 0) continue;
            if (config.at(sg, c) < 0) best = std::min(best, d[idx]);
        }
        phi.blocker_blank_dist += (best == std::numeric_limits<int>::max() ? 1000000 : best);
    }
    return phi;
}

// --- solvability -------------------------------------------------------------

namespace {

// Agents of one component listed along a canonical walk of a path or cycle.
struct ComponentShape {
    enum class Kind { Path, Cycle, Branching } kind = Kind::Branching;
    std::vector<Cell> walk;  // canonical vertex order for Path/Cycle
};

ComponentShape classify_component(const Subgrid& sg, const std::vector<Cell>& cells) {
    ComponentShape shape;
    int edges2 = 0;
    int max_deg = 0;
    for (const Cell& c : cells) {
        const int d = free_degree(sg, c);
        edges2 += d;
        max_deg = std::max(max_deg, d);
    }
    if (max_deg > 2) {
        shape.kind = ComponentShape::Kind::Branching;
        return shape;
    }
    const int v = static_cast<int>(cells.size());
    const int e = edges2 / 2;

    auto cell_less = [&](const Cell& a, const Cell& b) {
        return sg.grid.index(a) < sg.grid.index(b);
    };

    if (e == v && v >= 3) {
        shape.kind = ComponentShape::Kind::Cycle;
        Cell start = cells[0];
        for (const Cell& c : cells) {
            if (cell_less(c, start)) start = c;
        }
        // Walk toward the smaller-indexed neighbor for a canonical orientation.
        Cell prev = start;
        Cell cur = start;
        Cell first{};
        bool have_first = false;
        for (int k = 0; k < 4; ++k) {
            const Cell nb{start.x + dx4[k], start.y + dy4[k]};
            if (!sg.grid.free(nb)) continue;
            if (!have_first || cell_less(nb, first)) {
                first = nb;
                have_first = true;
            }
        }
        shape.walk.push_back(start);
        cur = first;
        while (cur != start) {
            shape.walk.push_back(cur);
            for (int k = 0; k < 4; ++k) {
                const Cell nb{cur.x + dx4[k], cur.y + dy4[k]};
                if (!sg.grid.free(nb) || nb == prev) continue;
                prev = cur;
                cur = nb;
                break;
            }
        }
        return shape;
    }

    // Path (including the single-vertex case).
    shape.kind = ComponentShape::Kind::Path;
    Cell end = cells[0];
    bool have_end = false;
    for (const Cell& c : cells) {
        if (free_degree(sg, c) <= 1) {
            if (!have_end || cell_less(c, end)) {
                end = c;
                have_end = true;
            }
        }
    }
    shape.walk.push_back(end);
    Cell prev = end;
    Cell cur = end;
    for (;;) {
        bool moved = false;
        for (int k = 0; k < 4; ++k) {
            const Cell nb{cur.x + dx4[k], cur.y + dy4[k]};
            if (!sg.grid.free(nb) || nb == prev) continue;
            prev = cur;
            cur = nb;
            shape.walk.push_back(cur);
            moved = true;
            break;
        }
        if (!moved) break;
    }
    return shape;
}

std::vector<int> agent_sequence(const std::vector<Cell>& walk,
                                const std::vector<Cell>& agent_cells) {
    std::vector<int> seq;
    for (const Cell& c : walk) {
        for (size_t k = 0; k < agent_cells.size(); ++k) {
            if (agent_cells[k] == c) {
                seq.push_back(static_cast<int>(k));
                break;
            }
        }
    }
    return seq;
}

bool cyclic_rotation_equal(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    for (size_t shift = 0; shift < a.size(); ++shift) {
        bool match = true;
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] != b[(i + shift) % a.size()]) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

}  // namespace

// Structural solvability on the subgrid with `blocked_extra` cells treated as
// walls: per component, order constraints on paths and cycles, always
// solvable otherwise (blank counts are checked separately). `positions` and
// `targets` are aligned; both must sit inside the reduced free space.
bool residual_solvable(const Subgrid& sg, const std::vector<Cell>& blocked_extra,
                       const std::vector<Cell>& positions, const std::vector<Cell>& targets) {
    Subgrid reduced = sg;
    for (const Cell& c : blocked_extra) {
        if (reduced.grid.in_bounds(c)) reduced.grid.set_blocked(c, true);
    }
    label_components(reduced);

    for (size_t k = 0; k < positions.size(); ++k) {
        if (!reduced.grid.free(positions[k]) || !reduced.grid.free(targets[k])) return false;
        if (reduced.component_of(positions[k]) != reduced.component_of(targets[k])) return false;
    }

    std::vector<std::vector<Cell>> comp_cells(static_cast<size_t>(reduced.component_count));
    for (int idx = 0; idx < reduced.grid.cell_count(); ++idx) {
        const Cell c = reduced.grid.cell_at(static_cast<size_t>(idx));
        if (!reduced.grid.free(c)) continue;
        comp_cells[static_cast<size_t>(reduced.component[idx])].push_back(c);
    }
    for (int comp = 0; comp < reduced.component_count; ++comp) {
        bool has_agent = false;
        for (const Cell& s : positions) {
            if (reduced.component_of(s) == comp) {
                has_agent = true;
                break;
            }
        }
        if (!has_agent) continue;

        const ComponentShape shape =
            classify_component(reduced, comp_cells[static_cast<size_t>(comp)]);
        if (shape.kind == ComponentShape::Kind::Branching) continue;

        const std::vector<int> seq_s = agent_sequence(shape.walk, positions);
        const std::vector<int> seq_t = agent_sequence(shape.walk, targets);
        if (shape.kind == ComponentShape::Kind::Path) {
            if (seq_s != seq_t) return false;  // linear order is invariant
        } else {
            if (!cyclic_rotation_equal(seq_s, seq_t)) return false;
        }
    }
    return true;
}

bool instance_solvable(const LocalInstance& inst) {
    return residual_solvable(inst.subgrid, {}, inst.starts, inst.targets);
}

// --- solver ------------------------------------------------------------------

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Ok: return "ok";
        case SolveStatus::PreconditionBlanks: return "precondition-blanks";
        case SolveStatus::Unsolvable: return "unsolvable";
    }
    return "?";
}

namespace {

class Solver {
public:
    Solver(const LocalInstance& inst, const PnrOptions& opts)
        : inst_(inst), sg_(inst.subgrid), opts_(opts) {}

    SolveResult run() {
        SolveResult result;
        const int n = static_cast<int>(inst_.agent_ids.size());

        // Two blanks per participant component.
        std::vector<int> comp_free(static_cast<size_t>(sg_.component_count), 0);
        std::vector<int> comp_agents(static_cast<size_t>(sg_.component_count), 0);
        for (int idx = 0; idx < sg_.grid.cell_count(); ++idx) {
            const Cell c = sg_.grid.cell_at(static_cast<size_t>(idx));
            if (sg_.grid.free(c)) ++comp_free[static_cast<size_t>(sg_.component[idx])];
        }
        for (const Cell& s : inst_.starts) {
            if (!sg_.grid.free(s)) {
                result.status = SolveStatus::Unsolvable;
                return result;
            }
            ++comp_agents[static_cast<size_t>(sg_.component_of(s))];
        }
        for (int comp = 0; comp < sg_.component_count; ++comp) {
            if (comp_agents[comp] > 0 && comp_free[comp] - comp_agents[comp] < 2) {
                result.status = SolveStatus::PreconditionBlanks;
                return result;
            }
        }
        if (!instance_solvable(inst_)) {
            result.status = SolveStatus::Unsolvable;
            return result;
        }

        // Priority prefixes to try: adaptive order first, then each agent
        // boosted to the front, then (for small teams) every full
        // permutation, then stuck-agent promotions.
        std::vector<std::vector<int>> queue;
        queue.push_back({});
        for (int a = 0; a < n; ++a) queue.push_back({a});
        if (n >= 3 && n <= 5) {
            std::vector<int> perm(static_cast<size_t>(n));
            for (int a = 0; a < n; ++a) perm[static_cast<size_t>(a)] = a;
            do {
                queue.push_back(perm);
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        const int extra_retries = opts_.max_retries >= 0 ? opts_.max_retries : 2 * n;

        std::vector<int> boost;  // stuck agents, most recent first
        int attempt = 0;
        for (size_t qi = 0; qi < queue.size() + static_cast<size_t>(extra_retries); ++qi) {
            const std::vector<int>& order = qi < queue.size() ? queue[qi] : boost;
            stats_ = SolveStats{};
            stats_.retries = attempt++;
            int stuck = -1;
            if (solve_once(order, &stuck)) {
                result.status = SolveStatus::Ok;
                result.plan = std::move(plan_);
                result.stats = stats_;
                return result;
            }
            if (stuck >= 0 && qi + 1 >= queue.size()) {
                boost.erase(std::remove(boost.begin(), boost.end(), stuck), boost.end());
                boost.insert(boost.begin(), stuck);
            } else if (stuck >= 0 && boost.empty()) {
                boost.push_back(stuck);
            }
        }
        result.status = SolveStatus::Unsolvable;
        result.stats = stats_;
        return result;
    }

private:
    const LocalInstance& inst_;
    const Subgrid& sg_;
    PnrOptions opts_;
    Configuration config_;
    JointPlan plan_;
    SolveStats stats_;

    void commit(const std::vector<Move>& transition) {
        config_.apply(sg_, transition);
        plan_.steps.push_back(config_.agent_cell);
    }

    void commit_trace(const MoveTrace& trace) {
        for (const auto& t : trace.transitions) commit(t);
    }

    // Freezing r at its target must leave the residual instance structurally
    // solvable (remaining agents from their current cells, with r's target as
    // one more wall). Returns -1 when safe, else an implicated agent to boost.
    int stranded_by_freeze(int r) const {
        std::vector<Cell> walls = finished_cells(sg_, config_);
        walls.push_back(inst_.targets[r]);
        std::vector<Cell> positions, targets;
        std::vector<int> which;
        for (size_t k = 0; k < inst_.agent_ids.size(); ++k) {
            if (static_cast<int>(k) == r || config_.finished[k]) continue;
            positions.push_back(config_.agent_cell[k]);
            targets.push_back(inst_.targets[k]);
            which.push_back(static_cast<int>(k));
        }
        if (residual_solvable(sg_, walls, positions, targets)) return -1;
        // Boost the first remaining agent that is not already home.
        const std::vector<uint8_t> avoid = make_mask(sg_, walls);
        for (size_t i = 0; i < which.size(); ++i) {
            if (bfs_path(sg_, positions[i], targets[i], avoid).empty()) return which[i];
        }
        for (size_t i = 0; i < which.size(); ++i) {
            if (positions[i] != targets[i]) return which[i];
        }
        return which.empty() ? -1 : which.front();
    }

    // One full attempt from the start configuration; false with *stuck set on
    // an unresolvable blocker under this agent order.
    bool solve_once(const std::vector<int>& boost, int* stuck) {
        const int n = static_cast<int>(inst_.agent_ids.size());
        config_ = Configuration::from_starts(sg_, inst_.starts);
        plan_ = JointPlan{};
        plan_.agent_ids = inst_.agent_ids;
        plan_.freeze_step.assign(static_cast<size_t>(n), -1);
        plan_.steps.push_back(config_.agent_cell);
        parked_.assign(static_cast<size_t>(n), 0);
        std::vector<int> order = boost;

        int finished_count = 0;
        int phases = 0;
        const int phase_cap = 4 * n * n + 16;
        while (finished_count < n) {
            if (++phases > phase_cap) {
                *stuck = order.empty() ? 0 : order.front();
                return false;
            }
            // Parked agents freeze once that no longer strands anybody;
            // agents knocked off their targets rejoin the rotation.
            for (size_t k = 0; k < inst_.agent_ids.size(); ++k) {
                if (!parked_[k] || config_.finished[k]) continue;
                if (config_.agent_cell[k] != inst_.targets[k]) {
                    parked_[k] = 0;
                } else if (stranded_by_freeze(static_cast<int>(k)) < 0) {
                    parked_[k] = 0;
                    config_.finished[k] = 1;
                    plan_.freeze_step[k] = static_cast<int>(plan_.steps.size()) - 1;
                    ++finished_count;
                }
            }
            if (finished_count == n) break;

            const int r = pick_active(order);
            if (r < 0) {
                for (size_t k = 0; k < inst_.agent_ids.size(); ++k) {
                    if (!config_.finished[k]) {
                        *stuck = static_cast<int>(k);
                        return false;
                    }
                }
                return false;
            }
            if (!route_agent(r, stuck)) return false;

            const int strandable = stranded_by_freeze(r);
            if (strandable >= 0) {
                // Hold r unfrozen at its target and resolve the stranded
                // agent first; r acts as an ordinary blocker meanwhile.
                parked_[r] = 1;
                order.erase(std::remove(order.begin(), order.end(), strandable), order.end());
                order.insert(order.begin(), strandable);
            } else {
                config_.finished[r] = 1;
                plan_.freeze_step[r] = static_cast<int>(plan_.steps.size()) - 1;
                ++finished_count;
            }
        }
        return true;
    }

    // Boosted agents first, then ascending remaining distance (id tie-break);
    // parked agents wait for their freeze.
    int pick_active(const std::vector<int>& order) const {
        for (int a : order) {
            if (!config_.finished[a] && !parked_[a]) return a;
        }
        const std::vector<uint8_t> fin_mask = make_mask(sg_, finished_cells(sg_, config_));
        int best = -1;
        int best_d = std::numeric_limits<int>::max();
        for (size_t k = 0; k < inst_.agent_ids.size(); ++k) {
            if (config_.finished[k] || parked_[k]) continue;
            const std::vector<int> dist = bfs_distances(sg_, config_.agent_cell[k], fin_mask);
            const int d = dist[sg_.grid.index(inst_.targets[k])];
            const int dd = d < 0 ? std::numeric_limits<int>::max() - 1 : d;
            if (dd < best_d) {
                best_d = dd;
                best = static_cast<int>(k);
            }
        }
        return best;
    }

    // Shortest path for the active agent; among equal lengths, the one
    // crossing the fewest other agents (Dijkstra over (length, blockers)).
    std::vector<Cell> route_path(int r, const Cell& target,
                                 const std::vector<uint8_t>& fin_mask) const {
        const size_t n = static_cast<size_t>(sg_.grid.cell_count());
        struct Key {
            int len = std::numeric_limits<int>::max();
            int blockers = std::numeric_limits<int>::max();
            bool operator<(const Key& o) const {
                if (len != o.len) return len < o.len;
                return blockers < o.blockers;
            }
        };
        std::vector<Key> best(n);
        std::vector<int> parent(n, -1);
        std::vector<uint8_t> done(n, 0);
        const Cell start = config_.agent_cell[r];
        best[sg_.grid.index(start)] = {0, 0};
        static const int dx[4] = {1, -1, 0, 0};
        static const int dy[4] = {0, 0, 1, -1};
        for (;;) {
            size_t cur = n;
            for (size_t i = 0; i < n; ++i) {
                if (!done[i] && best[i].len != std::numeric_limits<int>::max() &&
                    (cur == n || best[i] < best[cur])) {
                    cur = i;
                }
            }
            if (cur == n) break;
            done[cur] = 1;
            const Cell c = sg_.grid.cell_at(cur);
            if (c == target) break;
            for (int k = 0; k < 4; ++k) {
                const Cell nb{c.x + dx[k], c.y + dy[k]};
                if (!sg_.grid.free(nb)) continue;
                const size_t ni = sg_.grid.index(nb);
                if (done[ni] || fin_mask[ni]) continue;
                const Key cand{best[cur].len + 1,
                               best[cur].blockers + (config_.occupant[ni] >= 0 ? 1 : 0)};
                if (cand < best[ni]) {
                    best[ni] = cand;
                    parent[ni] = static_cast<int>(cur);
                }
            }
        }
        const size_t ti = sg_.grid.index(target);
        if (best[ti].len == std::numeric_limits<int>::max()) return {};
        std::vector<Cell> path{target};
        for (size_t cur = ti; parent[cur] >= 0;) {
            cur = static_cast<size_t>(parent[cur]);
            path.push_back(sg_.grid.cell_at(cur));
        }
        std::reverse(path.begin(), path.end());
        return path;
    }

    bool route_agent(int r, int* stuck) {
        const Cell target = inst_.targets[r];
        const std::vector<uint8_t> fin_mask = make_mask(sg_, finished_cells(sg_, config_));
        const std::vector<Cell> path = route_path(r, target, fin_mask);
        if (path.empty()) {
            *stuck = r;
            return false;
        }
        for (size_t i = 1; i < path.size(); ++i) {
            const Cell u = path[i];
            Potential before;
            if (opts_.track_potential) before = compute_potential(sg_, config_, r, target);

            if (!resolve_step(r, u)) {
                *stuck = r;
                return false;
            }

            if (opts_.track_potential) {
                const Potential after = compute_potential(sg_, config_, r, target);
                if (!(after < before)) ++stats_.potential_violations;
                check_invariants();
            }
        }
        return true;
    }

    // A push along q is safe when the residual instance (everyone but r, from
    // their post-push cells, with r's target as one more wall) stays
    // structurally solvable; otherwise r's freeze would entomb somebody or
    // invert an order on a path.
    bool push_preserves_targets(const std::vector<Cell>& q, int r) {
        Configuration scratch = config_;
        MoveTrace ignored;
        if (primitive_push(sg_, scratch, q, &ignored) != PrimitiveStatus::Ok) return false;
        std::vector<Cell> walls = finished_cells(sg_, scratch);
        walls.push_back(inst_.targets[r]);
        std::vector<Cell> positions, targets;
        for (size_t k = 0; k < scratch.agent_cell.size(); ++k) {
            if (static_cast<int>(k) == r || scratch.finished[k]) continue;
            positions.push_back(scratch.agent_cell[k]);
            targets.push_back(inst_.targets[k]);
        }
        return residual_solvable(sg_, walls, positions, targets);
    }

    bool try_push(int r, const Cell& x, const Cell& u, bool validated) {
        for (const std::vector<Cell>& q : all_blank_paths(sg_, config_, u, {x})) {
            if (validated && !push_preserves_targets(q, r)) continue;
            MoveTrace trace;
            if (primitive_push(sg_, config_copy_guard(), q, &trace) == PrimitiveStatus::Ok) {
                commit_trace(trace);
                ++stats_.pushes;
                commit({Move{r, x, u}});
                ++stats_.advances;
                return true;
            }
        }
        return false;
    }

    // Make u the next cell of r: direct move, push, rotate, or swap.
    bool resolve_step(int r, const Cell& u) {
        const Cell x = config_.agent_cell[r];
        if (config_.blank(sg_, u)) {
            commit({Move{r, x, u}});
            ++stats_.advances;
            return true;
        }
        const int blocker = config_.at(sg_, u);
        if (config_.finished[blocker]) return false;  // path avoids finished; defensive

        // Push the blocker chain toward a blank it can come back from.
        if (try_push(r, x, u, true)) return true;

        // Rotate a cycle through (x, u) carrying a blank.
        {
            const std::vector<uint8_t> fin_mask = make_mask(sg_, finished_cells(sg_, config_));
            const std::vector<Cell> cycle = cycle_through_edge(sg_, x, u, fin_mask);
            if (!cycle.empty()) {
                MoveTrace trace;
                if (primitive_rotate(sg_, config_copy_guard(), cycle, &trace) ==
                    PrimitiveStatus::Ok) {
                    commit_trace(trace);
                    ++stats_.rotates;
                    return true;
                }
            }
        }
        // Swap r past the blocker.
        {
            MoveTrace trace;
            if (primitive_swap(sg_, config_copy_guard(), r, blocker, &trace) ==
                PrimitiveStatus::Ok) {
                commit_trace(trace);
                ++stats_.swaps;
                return true;
            }
        }
        // Last resort: an unvalidated push keeps the phase moving; a later
        // retry reorders the agents if somebody ends up walled in.
        if (try_push(r, x, u, false)) return true;
        return false;
    }

    // The primitives mutate a configuration; commit_trace replays their moves
    // onto the solver state, so hand them a scratch copy.
    Configuration& config_copy_guard() {
        scratch_ = config_;
        return scratch_;
    }

    void check_invariants() {
        // I1: finished agents pinned at their targets.
        for (size_t k = 0; k < inst_.agent_ids.size(); ++k) {
            if (config_.finished[k] && !(config_.agent_cell[k] == inst_.targets[k])) {
                ++stats_.invariant_violations;
            }
        }
        // I2: at least two blanks per participant component.
        std::vector<int> blanks(static_cast<size_t>(sg_.component_count), 0);
        std::vector<int> agents(static_cast<size_t>(sg_.component_count), 0);
        for (int idx = 0; idx < sg_.grid.cell_count(); ++idx) {
            const Cell c = sg_.grid.cell_at(static_cast<size_t>(idx));
            if (!sg_.grid.free(c)) continue;
            const int comp = sg_.component[idx];
            if (config_.occupant[idx] < 0) {
                ++blanks[comp];
            } else {
                ++agents[comp];
            }
        }
        for (int comp = 0; comp < sg_.component_count; ++comp) {
            if (agents[comp] > 0 && blanks[comp] < 2) ++stats_.invariant_violations;
        }
    }

    Configuration scratch_;
    std::vector<uint8_t> parked_;
};

}  // namespace

SolveResult pnr_solve(const LocalInstance& instance, const PnrOptions& options) {
    Solver solver(instance, options);
    return solver.run();
}

// --- verification -------------------------------------------------------------

const char* to_string(PlanViolation::Kind k) {
    switch (k) {
        case PlanViolation::Kind::BadStart: return "bad-start";
        case PlanViolation::Kind::OffGrid: return "off-grid";
        case PlanViolation::Kind::VertexConflict: return "vertex-conflict";
        case PlanViolation::Kind::NonAdjacent: return "non-adjacent";
        case PlanViolation::Kind::EdgeSwap: return "edge-swap";
        case PlanViolation::Kind::FinishedMoved: return "finished-moved";
        case PlanViolation::Kind::WrongFinal: return "wrong-final";
    }
    return "?";
}

std::optional<PlanViolation> verify_plan(const LocalInstance& inst, const JointPlan& plan) {
    const size_t n = inst.agent_ids.size();
    auto fail = [](PlanViolation::Kind kind, int step, int a, int b) {
        return PlanViolation{kind, step, a, b};
    };
    if (plan.steps.empty() || plan.steps.front() != inst.starts) {
        return fail(PlanViolation::Kind::BadStart, 0, -1, -1);
    }
    for (size_t t = 0; t < plan.steps.size(); ++t) {
        const auto& row = plan.steps[t];
        if (row.size() != n) return fail(PlanViolation::Kind::OffGrid, static_cast<int>(t), -1, -1);
        for (size_t k = 0; k < n; ++k) {
            if (!inst.subgrid.grid.free(row[k])) {
                return fail(PlanViolation::Kind::OffGrid, static_cast<int>(t),
                            static_cast<int>(k), -1);
            }
            for (size_t j = k + 1; j < n; ++j) {
                if (row[k] == row[j]) {
                    return fail(PlanViolation::Kind::VertexConflict, static_cast<int>(t),
                                static_cast<int>(k), static_cast<int>(j));
                }
            }
        }
        if (t == 0) continue;
        const auto& prev = plan.steps[t - 1];
        for (size_t k = 0; k < n; ++k) {
            if (prev[k] != row[k] && !adjacent4(prev[k], row[k])) {
                return fail(PlanViolation::Kind::NonAdjacent, static_cast<int>(t),
                            static_cast<int>(k), -1);
            }
            for (size_t j = k + 1; j < n; ++j) {
                if (prev[k] != row[k] && row[k] == prev[j] && row[j] == prev[k]) {
                    return fail(PlanViolation::Kind::EdgeSwap, static_cast<int>(t),
                                static_cast<int>(k), static_cast<int>(j));
                }
            }
        }
    }
    for (size_t k = 0; k < n; ++k) {
        if (k < plan.freeze_step.size() && plan.freeze_step[k] >= 0) {
            const size_t f = static_cast<size_t>(plan.freeze_step[k]);
            for (size_t t = f; t < plan.steps.size(); ++t) {
                if (plan.steps[t][k] != plan.steps[f][k]) {
                    return fail(PlanViolation::Kind::FinishedMoved, static_cast<int>(t),
                                static_cast<int>(k), -1);
                }
            }
        }
        if (plan.steps.back()[k] != inst.targets[k]) {
            return fail(PlanViolation::Kind::WrongFinal,
                        static_cast<int>(plan.steps.size()) - 1, static_cast<int>(k), -1);
        }
    }
    return std::nullopt;
}

}  // namespace navsim
