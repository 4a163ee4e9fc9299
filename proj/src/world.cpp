#include "navsim/world.hpp"

#include <algorithm>

namespace navsim {

const char* to_string(AgentMode m) {
    switch (m) {
        case AgentMode::Default: return "default";
        case AgentMode::Coordinated: return "coordinated";
        case AgentMode::Finished: return "finished";
    }
    return "?";
}

bool ObstacleMap::disc_free(const Vec2& p, double r) const {
    if (p.x - r < bounds.xmin || p.x + r > bounds.xmax ||
        p.y - r < bounds.ymin || p.y + r > bounds.ymax) {
        return false;
    }
    for (const Rect& o : obstacles) {
        if (o.distance_to(p) < r) return false;
    }
    return true;
}

bool ObstacleMap::point_free(const Vec2& p) const {
    if (!bounds.contains(p)) return false;
    for (const Rect& o : obstacles) {
        if (o.contains(p)) return false;
    }
    return true;
}

AgentState step_kinematics(const AgentState& state, const Vec2& dv, const WorldConfig& cfg) {
    AgentState next = state;

    Vec2 v = state.velocity + cfg.control_gain * dv;
    const double speed = v.norm();
    if (speed > cfg.v_max) v = v * (cfg.v_max / speed);

    next.velocity = v;
    next.position = state.position + v * cfg.dt;

    // Heading relaxes toward the direction of travel; stationary agents keep
    // their heading.
    if (v.norm_sq() > 1e-12) {
        const double target = std::atan2(v.y, v.x);
        const double err = wrap_angle(target - state.heading);
        const double omega = std::clamp(cfg.heading_gain * err, -cfg.omega_max, cfg.omega_max);
        next.heading = wrap_angle(state.heading + omega * cfg.dt);
    }
    return next;
}

std::vector<CollisionEvent> collision_check(const std::vector<AgentState>& states,
                                            const ObstacleMap& map) {
    std::vector<CollisionEvent> events;
    for (size_t i = 0; i < states.size(); ++i) {
        for (size_t j = i + 1; j < states.size(); ++j) {
            const double d = distance(states[i].position, states[j].position);
            if (d <= states[i].radius + states[j].radius) {
                CollisionEvent e;
                e.kind = CollisionEvent::Kind::AgentPair;
                e.agent_a = states[i].id;
                e.agent_b = states[j].id;
                events.push_back(e);
            }
        }
    }
    for (const AgentState& s : states) {
        if (!map.bounds.contains(s.position)) {
            CollisionEvent e;
            e.kind = CollisionEvent::Kind::Obstacle;
            e.agent_a = s.id;
            e.obstacle_index = -1;
            events.push_back(e);
            continue;
        }
        for (size_t k = 0; k < map.obstacles.size(); ++k) {
            if (map.obstacles[k].distance_to(s.position) < s.radius) {
                CollisionEvent e;
                e.kind = CollisionEvent::Kind::Obstacle;
                e.agent_a = s.id;
                e.obstacle_index = static_cast<int>(k);
                events.push_back(e);
                break;
            }
        }
    }
    return events;
}

std::vector<AgentState> neighbor_query(const AgentState& ego,
                                       const std::vector<AgentState>& states,
                                       const WorldConfig& cfg) {
    struct Entry {
        double dist;
        const AgentState* s;
    };
    std::vector<Entry> in_range;
    for (const AgentState& s : states) {
        if (s.id == ego.id) continue;
        const double d = distance(s.position, ego.position);
        if (d <= cfg.sense_radius) in_range.push_back({d, &s});
    }
    std::sort(in_range.begin(), in_range.end(), [](const Entry& a, const Entry& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        return a.s->id < b.s->id;
    });
    if (static_cast<int>(in_range.size()) > cfg.neighbor_cap) {
        in_range.resize(static_cast<size_t>(cfg.neighbor_cap));
    }
    std::vector<AgentState> out;
    out.reserve(in_range.size());
    for (const Entry& e : in_range) out.push_back(*e.s);
    return out;
}

}  // namespace navsim
