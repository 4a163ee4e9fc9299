#pragma once
// mapf.hpp - locally confined MAPF instances: subgrid cropping around the
// participants, start/target projection, joint plans, and conversion of a
// solved plan into per-agent dense waypoint lists.

#include <iosfwd>
#include <string>
#include <vector>

#include "navsim/grid.hpp"
#include "navsim/world.hpp"

namespace navsim {

// 4-connected free-cell graph cropped around the participants. Components are
// labeled once; all solver moves stay inside a component.
struct Subgrid {
    Grid grid;
    std::vector<int> component;  // per cell index; -1 for blocked cells
    int component_count = 0;

    bool free(const Cell& c) const { return grid.free(c); }
    int component_of(const Cell& c) const { return component[grid.index(c)]; }
};

void label_components(Subgrid& sg);

// Participants' AABB padded by `margin`, clamped to the workspace, discretized
// at `resolution` with obstacle inflation. Cells under `static_agents`
// (finished agents frozen at their goals) are blocked as static obstacles.
Subgrid crop_subgrid(const ObstacleMap& map, const std::vector<Vec2>& participant_positions,
                     const std::vector<Vec2>& static_agents, double margin,
                     double resolution, double inflation);

enum class InstanceStatus : uint8_t {
    Ok,
    ProjectionConflict,   // no free cell available for some start
    TargetOutsideCrop,    // no free in-crop cell toward some waypoint
    Disconnected,         // start and target separated in the subgrid
};

const char* to_string(InstanceStatus s);

struct LocalInstance {
    Subgrid subgrid;
    std::vector<int> agent_ids;  // ascending
    std::vector<Cell> starts;    // injective, aligned with agent_ids
    std::vector<Cell> targets;   // injective, same component as start
};

struct InstanceResult {
    InstanceStatus status = InstanceStatus::Ok;
    LocalInstance instance;
    bool ok() const { return status == InstanceStatus::Ok; }
};

// Starts by nearest-cell projection of current poses, targets by projecting
// each agent's active waypoint into the crop (segment-clipped when outside).
// Projection conflicts resolve deterministically: agents ranked by distance
// to the contested cell, losers take the nearest free unassigned cell.
InstanceResult build_instance(const Subgrid& subgrid, const std::vector<int>& agent_ids,
                              const std::vector<Vec2>& positions,
                              const std::vector<Vec2>& waypoints);

// Time-indexed vertex assignment per participant. Row 0 is the start
// configuration; horizon() counts configurations including it.
struct JointPlan {
    std::vector<int> agent_ids;
    std::vector<std::vector<Cell>> steps;  // steps[t][k] = cell of agent k at t
    std::vector<int> freeze_step;          // first step from which agent k is frozen; -1 if unset

    int horizon() const { return static_cast<int>(steps.size()); }
    int agent_count() const { return static_cast<int>(agent_ids.size()); }
};

struct DensePlan {
    std::vector<int> agent_ids;
    std::vector<std::vector<Vec2>> waypoints;  // wait-collapsed world points
};

// Project plan vertices to world-frame cell centers and collapse consecutive
// waits; order-preserving, endpoint = world position of the target cell.
DensePlan plan_to_dense(const JointPlan& plan, const Subgrid& subgrid);

// Structured text round-trip for regression fixtures.
void write_instance(std::ostream& os, const LocalInstance& inst);
bool read_instance(std::istream& is, LocalInstance* out);
void write_plan(std::ostream& os, const JointPlan& plan);
bool read_plan(std::istream& is, JointPlan* out);

}  // namespace navsim
