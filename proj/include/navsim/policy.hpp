#pragma once
// policy.hpp - per-agent reactive navigation: VO/RVO observation features
// (descriptors, TTC, risk), goal-directed desired velocity, and a
// deterministic reciprocal-avoidance rule producing velocity increments.
// The policy interface is pluggable; a learned policy can be swapped in
// behind the same observation contract.

#include <optional>
#include <vector>

#include "navsim/geom.hpp"
#include "navsim/world.hpp"

namespace navsim {

struct PolicyConfig {
    double k_p = 1.0;              // desired-velocity gain (m/s toward target)
    double time_horizon = 2.0;     // s, reciprocal avoidance horizon
    double obstacle_horizon = 0.6; // s, wall approach-speed horizon
    double obstacle_margin = 0.02; // m, extra wall standoff
    double goal_tolerance = 0.3;   // m, degenerate-target radius
    double eps = 1e-9;             // numeric floor
};

// 6D VO descriptor per neighbor plus distance and TTC-derived risk.
struct NeighborDescriptor {
    Vec2 apex{};        // neighbor velocity
    Vec2 left_ray{};    // unit tangent, ccw side of the relative position
    Vec2 right_ray{};   // unit tangent, cw side
    double distance = 0.0;
    double ttc = 0.0;   // disc-contact time, +inf when no contact predicted
    double risk = 0.0;  // 1/(ttc+0.2), 0 when ttc infinite, 5 at overlap
};

struct SelfObservation {
    Vec2 velocity{};
    double heading = 0.0;
    Vec2 desired_velocity{};
    double combined_radius = 0.4;  // R_c = 2 * agent_radius for homogeneous teams
};

struct PolicyAction {
    Vec2 dv{};
};

struct RewardWeights {
    double alpha = 1.0;
    double beta = 0.5;
    double gamma = 0.5;
    double eta = 10.0;
    double ttc_hinge = 4.0;  // s, psi(x) = max(0, 1/x - 1/ttc_hinge)
};

// Directed line whose left side is the feasible half-plane.
struct HalfPlane {
    Vec2 point{};
    Vec2 direction{};  // unit
};

// Unit direction toward the waypoint scaled by min(k_p, v_max); empty when
// the target is within tolerance (degenerate, caller uses zero velocity).
std::optional<Vec2> desired_velocity(const Vec2& pos, const Vec2& waypoint, double k_p,
                                     double v_max, double tolerance);

// Time of closest approach: -<r,u>/|u|^2, +inf when |u|^2 <= eps or <r,u> >= 0.
double ttc_pair(const Vec2& r, const Vec2& u, double eps);

// Smallest tau > 0 with |r + tau*u| = combined_radius (disc-contact time);
// +inf when the discs never touch. Requires |r| > combined_radius.
double ttc_contact(const Vec2& r, const Vec2& u, double combined_radius, double eps);

// |r| when ttc infinite, else |r + ttc*u|.
double dmin_pair(const Vec2& r, const Vec2& u, double ttc);

struct Observation {
    SelfObservation self;
    std::vector<NeighborDescriptor> neighbors;
};

// One descriptor per neighbor. Overlapping discs (distance <= R_c) fall back
// to the half-plane perpendicular to the relative position with risk pinned
// at its maximum of 5.
Observation build_observation(const AgentState& ego,
                              const std::vector<AgentState>& neighbors,
                              const Vec2& waypoint, const WorldConfig& wcfg,
                              const PolicyConfig& pcfg);

// Half-plane constraints keeping the agent clear of static obstacles and the
// workspace boundary (approach speed limited by remaining gap).
std::vector<HalfPlane> build_obstacle_constraints(const AgentState& ego,
                                                  const ObstacleMap& map,
                                                  const WorldConfig& wcfg,
                                                  const PolicyConfig& pcfg);

// Deterministic reciprocal avoidance: steer toward the desired velocity
// projected outside all neighbors' truncated VO cones, each agent taking half
// the correction. Returns the braking action dv = -velocity when the feasible
// velocity set is empty.
PolicyAction reactive_policy(const SelfObservation& obs,
                             const std::vector<NeighborDescriptor>& descriptors,
                             const std::vector<HalfPlane>& obstacle_constraints,
                             const PolicyConfig& pcfg, const WorldConfig& wcfg,
                             double speed_limit);

// Convenience overload without wall constraints at the world speed limit.
PolicyAction reactive_policy(const SelfObservation& obs,
                             const std::vector<NeighborDescriptor>& descriptors,
                             const PolicyConfig& pcfg, const WorldConfig& wcfg);

// Diagnostic step reward: alpha * goal progress - beta * Phi_RVO
// - gamma * psi(min ttc) - eta * collision. Penalties vanish when the current
// velocity satisfies all reciprocal constraints.
double step_reward(const AgentState& prev, const AgentState& next, const Vec2& goal,
                   const std::vector<NeighborDescriptor>& descriptors,
                   const RewardWeights& weights, bool collision,
                   const PolicyConfig& pcfg, const WorldConfig& wcfg);

// Sum of hinge distances of `velocity` to the violated reciprocal half-planes.
double rvo_penetration(const Vec2& velocity, const SelfObservation& obs,
                       const std::vector<NeighborDescriptor>& descriptors,
                       const PolicyConfig& pcfg, const WorldConfig& wcfg);

}  // namespace navsim
