#pragma once
// world.hpp - discrete-time 2D world with disc agents: kinematic integration,
// collision checking, and radius-limited neighbor queries.

#include <cstdint>
#include <vector>

#include "navsim/geom.hpp"

namespace navsim {

struct WorldConfig {
    double dt = 0.1;             // seconds per step
    double v_max = 1.5;          // m/s speed limit
    double agent_radius = 0.2;   // m
    double sense_radius = 5.0;   // m, neighbor sensing horizon
    int neighbor_cap = 10;       // max neighbors returned per query
    double control_gain = 1.0;   // mu in v' = clip(v + mu * dv)
    double heading_gain = 4.0;   // proportional gain of the heading controller
    double omega_max = 2.0 * kPi;  // rad/s cap on heading rate

    bool valid() const {
        return dt > 0.0 && v_max > 0.0 && agent_radius > 0.0 &&
               sense_radius > agent_radius && neighbor_cap >= 1;
    }
};

enum class AgentMode : uint8_t { Default, Coordinated, Finished };

const char* to_string(AgentMode m);

struct AgentState {
    int id = 0;
    Vec2 position{};
    Vec2 velocity{};
    double heading = 0.0;  // radians in (-pi, pi]
    double radius = 0.2;
    AgentMode mode = AgentMode::Default;
};

// Static world geometry: rectangular workspace bounds plus axis-aligned
// rectangular obstacles. Occupancy grids are derived on demand (grid.hpp).
struct ObstacleMap {
    Rect bounds{};
    std::vector<Rect> obstacles;

    // Disc of radius r centered at p stays inside the workspace and clear of
    // every obstacle. Touching contact is allowed (strict overlap collides).
    bool disc_free(const Vec2& p, double r) const;

    // Center strictly inside free space F = W \ O.
    bool point_free(const Vec2& p) const;
};

struct CollisionEvent {
    enum class Kind : uint8_t { AgentPair, Obstacle } kind = Kind::AgentPair;
    int agent_a = -1;
    int agent_b = -1;       // valid for AgentPair only
    int obstacle_index = -1;  // valid for Obstacle; -1 means workspace bounds
};

// Velocity update v' = clip(v + mu*dv, |.| <= v_max), position integration
// p' = p + v'*dt, and heading relaxation toward atan2(v'_y, v'_x). Heading is
// diagnostic only; positions always integrate the Cartesian velocity.
AgentState step_kinematics(const AgentState& state, const Vec2& dv, const WorldConfig& cfg);

// Every agent pair with center distance <= sum of radii, and every agent
// overlapping an obstacle or outside the workspace. Empty result means safe.
std::vector<CollisionEvent> collision_check(const std::vector<AgentState>& states,
                                            const ObstacleMap& map);

// Agents within sense_radius of ego (inclusive), ego excluded, sorted by
// ascending distance (id tie-break), truncated at neighbor_cap.
std::vector<AgentState> neighbor_query(const AgentState& ego,
                                       const std::vector<AgentState>& states,
                                       const WorldConfig& cfg);

}  // namespace navsim
