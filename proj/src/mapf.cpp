#include "navsim/mapf.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>

namespace navsim {

const char* to_string(InstanceStatus s) {
    switch (s) {
        case InstanceStatus::Ok: return "ok";
        case InstanceStatus::ProjectionConflict: return "projection-conflict";
        case InstanceStatus::TargetOutsideCrop: return "target-outside-crop";
        case InstanceStatus::Disconnected: return "disconnected";
    }
    return "?";
}

void label_components(Subgrid& sg) {
    const Grid& g = sg.grid;
    sg.component.assign(static_cast<size_t>(g.cell_count()), -1);
    sg.component_count = 0;
    static const int dx4[4] = {1, -1, 0, 0};
    static const int dy4[4] = {0, 0, 1, -1};
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            const Cell c0{x, y};
            if (!g.free(c0) || sg.component[g.index(c0)] >= 0) continue;
            const int id = sg.component_count++;
            std::deque<Cell> queue{c0};
            sg.component[g.index(c0)] = id;
            while (!queue.empty()) {
                const Cell c = queue.front();
                queue.pop_front();
                for (int k = 0; k < 4; ++k) {
                    const Cell nb{c.x + dx4[k], c.y + dy4[k]};
                    if (g.free(nb) && sg.component[g.index(nb)] < 0) {
                        sg.component[g.index(nb)] = id;
                        queue.push_back(nb);
                    }
                }
            }
        }
    }
}

Subgrid crop_subgrid(const ObstacleMap& map, const std::vector<Vec2>& participant_positions,
                     const std::vector<Vec2>& static_agents, double margin,
                     double resolution, double inflation) {
    Rect box{1e30, 1e30, -1e30, -1e30};
    for (const Vec2& p : participant_positions) {
        box.xmin = std::min(box.xmin, p.x);
        box.xmax = std::max(box.xmax, p.x);
        box.ymin = std::min(box.ymin, p.y);
        box.ymax = std::max(box.ymax, p.y);
    }
    box = box.inflated(margin);
    box.xmin = std::max(box.xmin, map.bounds.xmin);
    box.ymin = std::max(box.ymin, map.bounds.ymin);
    box.xmax = std::min(box.xmax, map.bounds.xmax);
    box.ymax = std::min(box.ymax, map.bounds.ymax);

    Subgrid sg;
    sg.grid = build_occupancy_grid(map, box, resolution, inflation);
    // Finished agents are static discs the plan must not route through.
    for (const Vec2& p : static_agents) {
        const Cell c = sg.grid.world_to_cell(p);
        if (sg.grid.in_bounds(c)) sg.grid.set_blocked(c, true);
    }
    label_components(sg);
    return sg;
}

namespace {

// Free cells of the subgrid ordered by distance to `ref` (cell-index
// tie-break); used for deterministic projection-conflict resolution.
std::vector<Cell> cells_by_distance(const Subgrid& sg, const Vec2& ref, int component) {
    struct Scored {
        double d;
        size_t idx;
        Cell c;
    };
    std::vector<Scored> scored;
    const Grid& g = sg.grid;
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            const Cell c{x, y};
            if (!g.free(c)) continue;
            if (component >= 0 && sg.component_of(c) != component) continue;
            scored.push_back({distance(g.cell_center(c), ref), g.index(c), c});
        }
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.d != b.d) return a.d < b.d;
        return a.idx < b.idx;
    });
    std::vector<Cell> cells;
    cells.reserve(scored.size());
    for (const Scored& s : scored) cells.push_back(s.c);
    return cells;
}

// Last free in-crop point of the segment from `from` toward `to`.
bool clip_segment_to_crop(const Subgrid& sg, const Vec2& from, const Vec2& to, Vec2* out) {
    const double seg_len = distance(from, to);
    const double step = sg.grid.cell_size() * 0.25;
    const int samples = std::max(1, static_cast<int>(std::ceil(seg_len / step)));
    for (int i = samples; i >= 0; --i) {
        const Vec2 p = from + (to - from) * (static_cast<double>(i) / samples);
        const Cell c = sg.grid.world_to_cell(p);
        if (sg.grid.free(c)) {
            *out = p;
            return true;
        }
    }
    return false;
}

// Assign one distinct free cell per agent near its reference point.
// `component_of_agent` < 0 means unconstrained.
bool assign_cells(const Subgrid& sg, const std::vector<Vec2>& refs,
                  const std::vector<int>& component_of_agent, std::vector<Cell>* out) {
    const size_t n = refs.size();
    struct Rank {
        double d;
        size_t agent;
    };
    std::vector<Rank> ranks;
    for (size_t i = 0; i < n; ++i) {
        const Cell pref = sg.grid.world_to_cell(refs[i]);
        const double d = sg.grid.in_bounds(pref)
                             ? distance(sg.grid.cell_center(pref), refs[i])
                             : 1e30;
        ranks.push_back({d, i});
    }
    std::sort(ranks.begin(), ranks.end(), [](const Rank& a, const Rank& b) {
        if (a.d != b.d) return a.d < b.d;
        return a.agent < b.agent;
    });

    out->assign(n, Cell{-1, -1});
    std::vector<size_t> taken;
    for (const Rank& r : ranks) {
        const std::vector<Cell> candidates =
            cells_by_distance(sg, refs[r.agent], component_of_agent[r.agent]);
        bool placed = false;
        for (const Cell& c : candidates) {
            const size_t idx = sg.grid.index(c);
            if (std::find(taken.begin(), taken.end(), idx) != taken.end()) continue;
            (*out)[r.agent] = c;
            taken.push_back(idx);
            placed = true;
            break;
        }
        if (!placed) return false;
    }
    return true;
}

}  // namespace

InstanceResult build_instance(const Subgrid& subgrid, const std::vector<int>& agent_ids,
                              const std::vector<Vec2>& positions,
                              const std::vector<Vec2>& waypoints) {
    InstanceResult result;
    result.instance.subgrid = subgrid;
    result.instance.agent_ids = agent_ids;
    const size_t n = agent_ids.size();

    // Starts: nearest-cell projection with conflict resolution.
    std::vector<int> unconstrained(n, -1);
    if (!assign_cells(subgrid, positions, unconstrained, &result.instance.starts)) {
        result.status = InstanceStatus::ProjectionConflict;
        return result;
    }

    // Targets: project active waypoints, clipping to the crop when outside,
    // constrained to each agent's start component.
    std::vector<Vec2> refs(n);
    std::vector<int> comps(n);
    for (size_t i = 0; i < n; ++i) {
        comps[i] = subgrid.component_of(result.instance.starts[i]);
        Vec2 ref = waypoints[i];
        const Cell direct = subgrid.grid.world_to_cell(ref);
        if (!subgrid.grid.free(direct)) {
            if (!clip_segment_to_crop(subgrid, positions[i], waypoints[i], &ref)) {
                result.status = InstanceStatus::TargetOutsideCrop;
                return result;
            }
        }
        refs[i] = ref;
    }
    if (!assign_cells(subgrid, refs, comps, &result.instance.targets)) {
        result.status = InstanceStatus::Disconnected;
        return result;
    }
    for (size_t i = 0; i < n; ++i) {
        if (subgrid.component_of(result.instance.targets[i]) != comps[i]) {
            result.status = InstanceStatus::Disconnected;
            return result;
        }
    }
    result.status = InstanceStatus::Ok;
    return result;
}

DensePlan plan_to_dense(const JointPlan& plan, const Subgrid& subgrid) {
    DensePlan dense;
    dense.agent_ids = plan.agent_ids;
    dense.waypoints.resize(plan.agent_ids.size());
    for (size_t k = 0; k < plan.agent_ids.size(); ++k) {
        std::vector<Vec2>& pts = dense.waypoints[k];
        for (const auto& row : plan.steps) {
            const Vec2 p = subgrid.grid.cell_center(row[k]);
            if (pts.empty() || pts.back() != p) pts.push_back(p);
        }
        if (pts.empty() && !plan.steps.empty()) {
            pts.push_back(subgrid.grid.cell_center(plan.steps.front()[k]));
        }
    }
    return dense;
}

// --- serialization ----------------------------------------------------------

void write_instance(std::ostream& os, const LocalInstance& inst) {
    const Grid& g = inst.subgrid.grid;
    os << "instance\n";
    os << "grid " << g.width() << ' ' << g.height() << ' ' << g.cell_size() << ' '
       << g.origin().x << ' ' << g.origin().y << "\n";
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) os << (g.free({x, y}) ? '.' : '#');
        os << "\n";
    }
    os << "agents " << inst.agent_ids.size() << "\n";
    for (size_t i = 0; i < inst.agent_ids.size(); ++i) {
        os << "agent " << inst.agent_ids[i] << ' ' << inst.starts[i].x << ' '
           << inst.starts[i].y << ' ' << inst.targets[i].x << ' ' << inst.targets[i].y << "\n";
    }
    os << "end\n";
}

bool read_instance(std::istream& is, LocalInstance* out) {
    std::string tok;
    if (!(is >> tok) || tok != "instance") return false;
    int w = 0, h = 0;
    double cell = 0.0, ox = 0.0, oy = 0.0;
    if (!(is >> tok >> w >> h >> cell >> ox >> oy) || tok != "grid") return false;
    Grid grid(w, h, cell, {ox, oy});
    for (int y = 0; y < h; ++y) {
        std::string row;
        if (!(is >> row) || static_cast<int>(row.size()) != w) return false;
        for (int x = 0; x < w; ++x) grid.set_blocked({x, y}, row[x] != '.');
    }
    size_t n = 0;
    if (!(is >> tok >> n) || tok != "agents") return false;
    out->agent_ids.clear();
    out->starts.clear();
    out->targets.clear();
    for (size_t i = 0; i < n; ++i) {
        int id = 0;
        Cell s{}, t{};
        if (!(is >> tok >> id >> s.x >> s.y >> t.x >> t.y) || tok != "agent") return false;
        out->agent_ids.push_back(id);
        out->starts.push_back(s);
        out->targets.push_back(t);
    }
    if (!(is >> tok) || tok != "end") return false;
    out->subgrid.grid = grid;
    label_components(out->subgrid);
    return true;
}

void write_plan(std::ostream& os, const JointPlan& plan) {
    os << "plan " << plan.agent_ids.size() << ' ' << plan.steps.size() << "\n";
    os << "ids";
    for (int id : plan.agent_ids) os << ' ' << id;
    os << "\n";
    for (const auto& row : plan.steps) {
        os << "step";
        for (const Cell& c : row) os << ' ' << c.x << ' ' << c.y;
        os << "\n";
    }
    os << "freeze";
    for (int f : plan.freeze_step) os << ' ' << f;
    os << "\nend\n";
}

bool read_plan(std::istream& is, JointPlan* out) {
    std::string tok;
    size_t n = 0, steps = 0;
    if (!(is >> tok >> n >> steps) || tok != "plan") return false;
    if (!(is >> tok) || tok != "ids") return false;
    out->agent_ids.assign(n, 0);
    for (size_t i = 0; i < n; ++i) {
        if (!(is >> out->agent_ids[i])) return false;
    }
    out->steps.assign(steps, std::vector<Cell>(n));
    for (size_t t = 0; t < steps; ++t) {
        if (!(is >> tok) || tok != "step") return false;
        for (size_t k = 0; k < n; ++k) {
            if (!(is >> out->steps[t][k].x >> out->steps[t][k].y)) return false;
        }
    }
    if (!(is >> tok) || tok != "freeze") return false;
    out->freeze_step.assign(n, -1);
    for (size_t k = 0; k < n; ++k) {
        if (!(is >> out->freeze_step[k])) return false;
    }
    if (!(is >> tok) || tok != "end") return false;
    return true;
}

}  // namespace navsim
