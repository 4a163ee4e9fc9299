#pragma once
// planner.hpp - grid A* global paths, arc-length resampling into sparse
// waypoint lists, and the runtime waypoint manager.

#include <cstdint>
#include <vector>

#include "navsim/grid.hpp"

namespace navsim {

enum class PlanStatus : uint8_t { Ok, InvalidCell, NoPath };

struct AstarResult {
    PlanStatus status = PlanStatus::NoPath;
    std::vector<Cell> path;  // start..goal inclusive when Ok
    double cost = 0.0;       // unit steps cost 1, diagonals sqrt(2)

    bool ok() const { return status == PlanStatus::Ok; }
};

// Minimum-cost 8-connected path; diagonal moves cost sqrt(2) and may not cut
// corners past blocked orthogonal neighbors. Deterministic tie-breaking.
AstarResult plan_astar(const Grid& grid, const Cell& start, const Cell& goal);

enum class WaypointKind : uint8_t { GlobalSparse, MapfDense };

struct WaypointList {
    std::vector<Vec2> points;
    size_t active_index = 0;
    double reach_threshold = 0.3;
    WaypointKind kind = WaypointKind::GlobalSparse;
    int last_advance_step = 0;

    bool exhausted() const { return active_index >= points.size(); }
    const Vec2& active() const { return points[active_index]; }
};

// Resample a cell path into waypoints at uniform arc-length spacing along the
// polyline: ceil(L / spacing) intervals, first point the start, last the goal.
WaypointList resample_waypoints(const std::vector<Cell>& path, const Grid& grid,
                                double spacing);
WaypointList resample_polyline(const std::vector<Vec2>& polyline, double spacing);

// Advance the active index (at most one step per call) when `pos` is within
// the reach threshold of the active waypoint; records the advance step.
void waypoint_advance(WaypointList& wl, const Vec2& pos, int step);

}  // namespace navsim
