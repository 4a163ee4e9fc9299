#include "navsim/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace navsim {

namespace {

constexpr double kDiag = 1.4142135623730951;

struct OpenEntry {
    double f;
    double g;
    size_t idx;
    // Min-heap on f; ties broken on larger g (goal-ward), then lower index.
    bool operator<(const OpenEntry& o) const {
        if (f != o.f) return f > o.f;
        if (g != o.g) return g < o.g;
        return idx > o.idx;
    }
};

double octile(const Cell& a, const Cell& b) {
    const int dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
    const int lo = std::min(dx, dy), hi = std::max(dx, dy);
    return lo * kDiag + (hi - lo);
}

}  // namespace

AstarResult plan_astar(const Grid& grid, const Cell& start, const Cell& goal) {
    AstarResult result;
    if (!grid.free(start) || !grid.free(goal)) {
        result.status = PlanStatus::InvalidCell;
        return result;
    }
    if (start == goal) {
        result.status = PlanStatus::Ok;
        result.path = {start};
        result.cost = 0.0;
        return result;
    }

    const size_t n = static_cast<size_t>(grid.cell_count());
    std::vector<double> g(n, std::numeric_limits<double>::infinity());
    std::vector<size_t> parent(n, n);
    std::vector<uint8_t> closed(n, 0);
    std::priority_queue<OpenEntry> open;

    const size_t start_idx = grid.index(start);
    const size_t goal_idx = grid.index(goal);
    g[start_idx] = 0.0;
    open.push({octile(start, goal), 0.0, start_idx});

    static const int dx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static const int dy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};

    while (!open.empty()) {
        const OpenEntry top = open.top();
        open.pop();
        if (closed[top.idx]) continue;
        closed[top.idx] = 1;
        if (top.idx == goal_idx) break;

        const Cell c = grid.cell_at(top.idx);
        for (int k = 0; k < 8; ++k) {
            const Cell nb{c.x + dx8[k], c.y + dy8[k]};
            if (!grid.free(nb)) continue;
            const bool diagonal = k >= 4;
            if (diagonal) {
                // No corner cutting through blocked orthogonal neighbors.
                if (!grid.free({c.x + dx8[k], c.y}) || !grid.free({c.x, c.y + dy8[k]})) {
                    continue;
                }
            }
            const size_t ni = grid.index(nb);
            if (closed[ni]) continue;
            const double ng = g[top.idx] + (diagonal ? kDiag : 1.0);
            if (ng < g[ni]) {
                g[ni] = ng;
                parent[ni] = top.idx;
                open.push({ng + octile(nb, goal), ng, ni});
            }
        }
    }

    if (!closed[goal_idx]) {
        result.status = PlanStatus::NoPath;
        return result;
    }
    result.status = PlanStatus::Ok;
    result.cost = g[goal_idx];
    for (size_t cur = goal_idx; cur != n; cur = parent[cur]) {
        result.path.push_back(grid.cell_at(cur));
        if (cur == start_idx) break;
    }
    std::reverse(result.path.begin(), result.path.end());
    return result;
}

WaypointList resample_polyline(const std::vector<Vec2>& polyline, double spacing) {
    WaypointList wl;
    wl.kind = WaypointKind::GlobalSparse;
    if (polyline.empty()) return wl;
    if (polyline.size() == 1) {
        wl.points = {polyline.front()};
        return wl;
    }

    std::vector<double> arc(polyline.size(), 0.0);
    for (size_t i = 1; i < polyline.size(); ++i) {
        arc[i] = arc[i - 1] + distance(polyline[i - 1], polyline[i]);
    }
    const double total = arc.back();
    if (total <= 0.0) {
        wl.points = {polyline.front()};
        return wl;
    }

    const int intervals = std::max(1, static_cast<int>(std::ceil(total / spacing - 1e-12)));
    wl.points.reserve(intervals + 1);
    size_t seg = 1;
    for (int i = 0; i <= intervals; ++i) {
        const double s = total * static_cast<double>(i) / intervals;
        while (seg + 1 < polyline.size() && arc[seg] < s) ++seg;
        const double seg_len = arc[seg] - arc[seg - 1];
        const double t = seg_len > 0.0 ? (s - arc[seg - 1]) / seg_len : 0.0;
        wl.points.push_back(polyline[seg - 1] + (polyline[seg] - polyline[seg - 1]) * t);
    }
    wl.points.front() = polyline.front();
    wl.points.back() = polyline.back();
    return wl;
}

WaypointList resample_waypoints(const std::vector<Cell>& path, const Grid& grid,
                                double spacing) {
    std::vector<Vec2> polyline;
    polyline.reserve(path.size());
    for (const Cell& c : path) polyline.push_back(grid.cell_center(c));
    return resample_polyline(polyline, spacing);
}

void waypoint_advance(WaypointList& wl, const Vec2& pos, int step) {
    if (wl.exhausted()) return;
    if (distance(pos, wl.points[wl.active_index]) <= wl.reach_threshold) {
        ++wl.active_index;
        wl.last_advance_step = step;
    }
}

}  // namespace navsim
