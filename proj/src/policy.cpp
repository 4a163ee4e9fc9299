#include "navsim/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace navsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Reconstruct the relative position and combined radius encoded in a
// descriptor's tangent rays.
struct ConeGeometry {
    Vec2 rel{};
    double combined_radius = 0.0;
    bool overlapping = false;
};

ConeGeometry cone_geometry(const NeighborDescriptor& d, double fallback_radius) {
    ConeGeometry g;
    const Vec2 bisector = d.left_ray + d.right_ray;
    if (bisector.norm_sq() < 1e-18) {
        // Half-plane fallback: rays are perpendicular to the relative position.
        const Vec2 rel_hat = perp_cw(d.left_ray);
        g.rel = rel_hat * d.distance;
        g.combined_radius = fallback_radius;
        g.overlapping = true;
        return g;
    }
    const Vec2 rel_hat = normalized(bisector);
    g.rel = rel_hat * d.distance;
    g.combined_radius = d.distance * det(rel_hat, d.left_ray);
    g.overlapping = d.distance <= g.combined_radius;
    return g;
}

// Reciprocal (half-responsibility) avoidance half-plane for one neighbor,
// following the standard ORCA construction.
HalfPlane orca_halfplane(const Vec2& ego_velocity, const NeighborDescriptor& d,
                         double fallback_radius, double time_horizon, double dt) {
    const ConeGeometry g = cone_geometry(d, fallback_radius);
    const Vec2 rel = g.rel;
    const double rc = g.combined_radius;
    const Vec2 relative_velocity = ego_velocity - d.apex;
    const double dist_sq = rel.norm_sq();
    const double rc_sq = rc * rc;

    HalfPlane line;
    Vec2 u;
    if (!g.overlapping && dist_sq > rc_sq) {
        const Vec2 w = relative_velocity - rel / time_horizon;
        const double w_len_sq = w.norm_sq();
        const double dot1 = dot(w, rel);
        if (dot1 < 0.0 && dot1 * dot1 > rc_sq * w_len_sq) {
            // Project on the cutoff arc.
            const double w_len = std::sqrt(w_len_sq);
            const Vec2 unit_w = w / w_len;
            line.direction = perp_cw(unit_w);
            u = (rc / time_horizon - w_len) * unit_w;
        } else {
            // Project on the nearer leg.
            const double leg = std::sqrt(dist_sq - rc_sq);
            if (det(rel, w) > 0.0) {
                line.direction = Vec2{rel.x * leg - rel.y * rc, rel.x * rc + rel.y * leg} / dist_sq;
            } else {
                line.direction = -Vec2{rel.x * leg + rel.y * rc, -rel.x * rc + rel.y * leg} / dist_sq;
            }
            u = dot(relative_velocity, line.direction) * line.direction - relative_velocity;
        }
    } else {
        // Already in contact: push apart over a single time step.
        const double inv_dt = 1.0 / dt;
        const Vec2 w = relative_velocity - rel * inv_dt;
        const double w_len = w.norm();
        const Vec2 unit_w = w_len > 0.0 ? w / w_len : -normalized(rel);
        line.direction = perp_cw(unit_w);
        u = (rc * inv_dt - w_len) * unit_w;
    }
    line.point = ego_velocity + 0.5 * u;
    return line;
}

// 1D projection step of the incremental linear program: optimize along line
// `index` subject to the disc and the previous constraints.
bool linear_program1(const std::vector<HalfPlane>& lines, size_t index, double radius,
                     const Vec2& opt_velocity, Vec2* result) {
    const HalfPlane& ln = lines[index];
    const double dot_pd = dot(ln.point, ln.direction);
    const double discriminant = dot_pd * dot_pd + radius * radius - ln.point.norm_sq();
    if (discriminant < 0.0) return false;

    const double sqrt_disc = std::sqrt(discriminant);
    double t_left = -dot_pd - sqrt_disc;
    double t_right = -dot_pd + sqrt_disc;

    for (size_t i = 0; i < index; ++i) {
        const double denom = det(ln.direction, lines[i].direction);
        const double numer = det(lines[i].direction, ln.point - lines[i].point);
        if (std::abs(denom) <= 1e-12) {
            if (numer < 0.0) return false;
            continue;
        }
        const double t = numer / denom;
        if (denom >= 0.0) {
            t_right = std::min(t_right, t);
        } else {
            t_left = std::max(t_left, t);
        }
        if (t_left > t_right) return false;
    }

    double t = dot(ln.direction, opt_velocity - ln.point);
    t = std::clamp(t, t_left, t_right);
    *result = ln.point + t * ln.direction;
    return true;
}

// Returns the number of satisfied constraints; equal to lines.size() when the
// full program is feasible.
size_t linear_program2(const std::vector<HalfPlane>& lines, double radius,
                       const Vec2& opt_velocity, Vec2* result) {
    if (opt_velocity.norm() > radius) {
        *result = normalized(opt_velocity) * radius;
    } else {
        *result = opt_velocity;
    }
    for (size_t i = 0; i < lines.size(); ++i) {
        if (det(lines[i].direction, lines[i].point - *result) > 0.0) {
            const Vec2 saved = *result;
            if (!linear_program1(lines, i, radius, opt_velocity, result)) {
                *result = saved;
                return i;
            }
        }
    }
    return lines.size();
}

}  // namespace

std::optional<Vec2> desired_velocity(const Vec2& pos, const Vec2& waypoint, double k_p,
                                     double v_max, double tolerance) {
    const Vec2 to_target = waypoint - pos;
    const double d = to_target.norm();
    if (d <= tolerance) return std::nullopt;
    return to_target * (std::min(k_p, v_max) / d);
}

double ttc_pair(const Vec2& r, const Vec2& u, double eps) {
    const double u_sq = u.norm_sq();
    const double ru = dot(r, u);
    if (u_sq <= eps || ru >= 0.0) return kInf;
    return -ru / u_sq;
}

double ttc_contact(const Vec2& r, const Vec2& u, double combined_radius, double eps) {
    const double a = u.norm_sq();
    const double b = dot(r, u);
    if (a <= eps || b >= 0.0) return kInf;
    const double c = r.norm_sq() - combined_radius * combined_radius;
    if (c <= 0.0) return 0.0;
    const double disc = b * b - a * c;
    if (disc < 0.0) return kInf;
    return (-b - std::sqrt(disc)) / a;
}

double dmin_pair(const Vec2& r, const Vec2& u, double ttc) {
    if (std::isinf(ttc)) return r.norm();
    return (r + ttc * u).norm();
}

Observation build_observation(const AgentState& ego,
                              const std::vector<AgentState>& neighbors,
                              const Vec2& waypoint, const WorldConfig& wcfg,
                              const PolicyConfig& pcfg) {
    Observation obs;
    obs.self.velocity = ego.velocity;
    obs.self.heading = ego.heading;
    obs.self.combined_radius = 2.0 * ego.radius;
    const auto vdes =
        desired_velocity(ego.position, waypoint, pcfg.k_p, wcfg.v_max, pcfg.goal_tolerance);
    obs.self.desired_velocity = vdes.value_or(Vec2{0.0, 0.0});

    obs.neighbors.reserve(neighbors.size());
    for (const AgentState& nb : neighbors) {
        NeighborDescriptor d;
        d.apex = nb.velocity;
        const Vec2 rel = nb.position - ego.position;
        const double dist = rel.norm();
        const double rc = ego.radius + nb.radius;
        d.distance = dist;
        const Vec2 u = nb.velocity - ego.velocity;
        if (dist <= rc) {
            // Overlapping discs: the cone degenerates to the half-plane
            // perpendicular to the relative position; risk saturates.
            const Vec2 rel_hat = dist > 0.0 ? rel / dist : Vec2{1.0, 0.0};
            d.left_ray = perp_ccw(rel_hat);
            d.right_ray = perp_cw(rel_hat);
            d.ttc = 0.0;
            d.risk = 5.0;
        } else {
            const Vec2 rel_hat = rel / dist;
            const double half_angle = std::asin(rc / dist);
            d.left_ray = rotated(rel_hat, half_angle);
            d.right_ray = rotated(rel_hat, -half_angle);
            d.ttc = ttc_contact(rel, u, rc, pcfg.eps);
            d.risk = std::isinf(d.ttc) ? 0.0 : 1.0 / (d.ttc + 0.2);
        }
        obs.neighbors.push_back(d);
    }
    return obs;
}

std::vector<HalfPlane> build_obstacle_constraints(const AgentState& ego,
                                                  const ObstacleMap& map,
                                                  const WorldConfig& wcfg,
                                                  const PolicyConfig& pcfg) {
    std::vector<HalfPlane> lines;
    const double reach = wcfg.v_max * pcfg.obstacle_horizon;

    auto add_plane = [&](const Vec2& outward_normal, double gap) {
        if (gap > reach) return;  // cannot bind within the horizon
        HalfPlane hp;
        hp.direction = perp_cw(outward_normal);
        hp.point = outward_normal * (-gap / pcfg.obstacle_horizon);
        lines.push_back(hp);
    };

    const Vec2 p = ego.position;
    const double standoff = ego.radius + pcfg.obstacle_margin;
    add_plane({1.0, 0.0}, p.x - map.bounds.xmin - standoff);
    add_plane({-1.0, 0.0}, map.bounds.xmax - p.x - standoff);
    add_plane({0.0, 1.0}, p.y - map.bounds.ymin - standoff);
    add_plane({0.0, -1.0}, map.bounds.ymax - p.y - standoff);

    for (const Rect& o : map.obstacles) {
        const Vec2 q = o.closest_point(p);
        Vec2 n = p - q;
        double d = n.norm();
        if (d < 1e-9) {
            // Center on or inside the obstacle: push away from its middle.
            const Vec2 mid{0.5 * (o.xmin + o.xmax), 0.5 * (o.ymin + o.ymax)};
            n = p - mid;
            d = 0.0;
            if (n.norm_sq() < 1e-18) n = {1.0, 0.0};
        }
        if (d - standoff > reach) continue;
        add_plane(normalized(n), d - standoff);
    }
    return lines;
}

PolicyAction reactive_policy(const SelfObservation& obs,
                             const std::vector<NeighborDescriptor>& descriptors,
                             const std::vector<HalfPlane>& obstacle_constraints,
                             const PolicyConfig& pcfg, const WorldConfig& wcfg,
                             double speed_limit) {
    std::vector<HalfPlane> lines = obstacle_constraints;
    lines.reserve(lines.size() + descriptors.size());
    for (const NeighborDescriptor& d : descriptors) {
        lines.push_back(orca_halfplane(obs.velocity, d, obs.combined_radius,
                                       pcfg.time_horizon, wcfg.dt));
    }

    Vec2 v_new;
    const size_t satisfied = linear_program2(lines, speed_limit, obs.desired_velocity, &v_new);
    if (satisfied < lines.size()) {
        return {-obs.velocity};  // infeasible: brake
    }
    return {v_new - obs.velocity};
}

PolicyAction reactive_policy(const SelfObservation& obs,
                             const std::vector<NeighborDescriptor>& descriptors,
                             const PolicyConfig& pcfg, const WorldConfig& wcfg) {
    return reactive_policy(obs, descriptors, {}, pcfg, wcfg, wcfg.v_max);
}

double rvo_penetration(const Vec2& velocity, const SelfObservation& obs,
                       const std::vector<NeighborDescriptor>& descriptors,
                       const PolicyConfig& pcfg, const WorldConfig& wcfg) {
    double total = 0.0;
    for (const NeighborDescriptor& d : descriptors) {
        const HalfPlane hp = orca_halfplane(obs.velocity, d, obs.combined_radius,
                                            pcfg.time_horizon, wcfg.dt);
        const double signed_dist = det(hp.direction, velocity - hp.point);
        total += std::max(0.0, -signed_dist);
    }
    return total;
}

double step_reward(const AgentState& prev, const AgentState& next, const Vec2& goal,
                   const std::vector<NeighborDescriptor>& descriptors,
                   const RewardWeights& weights, bool collision,
                   const PolicyConfig& pcfg, const WorldConfig& wcfg) {
    const double progress =
        distance(prev.position, goal) - distance(next.position, goal);

    SelfObservation self;
    self.velocity = prev.velocity;
    self.heading = prev.heading;
    self.combined_radius = 2.0 * prev.radius;
    const double phi = rvo_penetration(prev.velocity, self, descriptors, pcfg, wcfg);

    double min_ttc = kInf;
    for (const NeighborDescriptor& d : descriptors) min_ttc = std::min(min_ttc, d.ttc);
    double psi = 0.0;
    if (!std::isinf(min_ttc)) {
        const double hinge = 1.0 / weights.ttc_hinge;
        psi = std::max(0.0, 1.0 / std::max(min_ttc, 1e-9) - hinge);
    }

    return weights.alpha * progress - weights.beta * phi - weights.gamma * psi -
           weights.eta * (collision ? 1.0 : 0.0);
}

}  // namespace navsim
