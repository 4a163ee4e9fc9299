#include "navsim/executive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace navsim {

const char* to_string(EpisodeOutcome o) {
    switch (o) {
        case EpisodeOutcome::Success: return "success";
        case EpisodeOutcome::Timeout: return "timeout";
        case EpisodeOutcome::Collision: return "collision";
    }
    return "?";
}

std::string EventRecord::to_line() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Trigger:
            os << "trigger " << step << ' ' << agent << ' ' << label << ' ' << aux_a << ' '
               << aux_b;
            break;
        case Kind::Solve:
            os << "solve " << step << ' ' << (ok ? "ok" : "fail") << ' ' << label
               << " prims " << primitives << " horizon " << horizon << " cells " << cells
               << " widened " << (widened ? 1 : 0) << " agents";
            for (int a : participants) os << ' ' << a;
            break;
        case Kind::ModeChange:
            os << "mode " << step << ' ' << agent << ' ' << label;
            break;
        case Kind::Collision:
            os << "collision " << step << ' ' << label << ' ' << aux_a << ' ' << aux_b;
            break;
        case Kind::CoordCount:
            os << "coord " << step << ' ' << aux_a;
            break;
        case Kind::PlanFail:
            os << "planfail " << agent;
            break;
        case Kind::Clearance:
            os << "clearance " << step << ' ' << agent << ' ' << (ok ? "ok" : "violation")
               << " bound " << aux_a << " elapsed " << aux_b;
            break;
    }
    return os.str();
}

HybridExecutive::HybridExecutive(const EpisodeSetup& setup)
    : setup_(setup), wcfg_(setup.world), ecfg_(setup.exec) {
    const int n = static_cast<int>(setup.starts.size());
    states_.resize(n);
    controllers_.resize(n);
    for (int i = 0; i < n; ++i) {
        AgentState& s = states_[i];
        s.id = i;
        s.position = setup.starts[i];
        s.velocity = {0.0, 0.0};
        s.radius = wcfg_.agent_radius;
        s.mode = AgentMode::Default;
        const Vec2 dir = setup.goals[i] - setup.starts[i];
        s.heading = dir.norm_sq() > 0.0 ? std::atan2(dir.y, dir.x) : 0.0;
        controllers_[i].goal = setup.goals[i];
        controllers_[i].speed_cap = ecfg_.speed_cap_factor * wcfg_.v_max;
    }
    detector_ = DeadlockDetector(n, ecfg_.detector);
    lock_until_.assign(n, 0);
    plan_global_routes();
}

void HybridExecutive::plan_global_routes() {
    const Grid grid =
        build_occupancy_grid(setup_.map, ecfg_.plan_resolution, wcfg_.agent_radius);
    for (size_t i = 0; i < states_.size(); ++i) {
        AgentController& ctl = controllers_[i];
        Cell start_cell{}, goal_cell{};
        const bool ok_cells = grid.nearest_free_cell(states_[i].position, &start_cell) &&
                              grid.nearest_free_cell(ctl.goal, &goal_cell);
        AstarResult astar;
        if (ok_cells) astar = plan_astar(grid, start_cell, goal_cell);
        if (!ok_cells || !astar.ok()) {
            EventRecord ev;
            ev.kind = EventRecord::Kind::PlanFail;
            ev.agent = static_cast<int>(i);
            log_.push_back(ev);
            ctl.global_list.points = {ctl.goal};
        } else {
            ctl.global_list = resample_waypoints(astar.path, grid, ecfg_.waypoint_spacing);
            ctl.global_list.points.back() = ctl.goal;  // track the exact goal
        }
        ctl.global_list.kind = WaypointKind::GlobalSparse;
        ctl.global_list.reach_threshold = ecfg_.reach_threshold;
        ctl.global_list.active_index = 0;
        ctl.global_list.last_advance_step = 0;
    }
}

const WaypointList* HybridExecutive::active_list(size_t i) const {
    const AgentState& s = states_[i];
    if (s.mode == AgentMode::Finished) return nullptr;
    if (s.mode == AgentMode::Coordinated && controllers_[i].dense_list.has_value()) {
        return &*controllers_[i].dense_list;
    }
    return &controllers_[i].global_list;
}

std::optional<Vec2> HybridExecutive::active_target(size_t i) const {
    const WaypointList* wl = active_list(i);
    if (!wl || wl->exhausted()) return std::nullopt;
    return wl->active();
}

void HybridExecutive::set_mode(size_t i, AgentMode mode, int t) {
    if (states_[i].mode == mode) return;
    EventRecord ev;
    ev.kind = EventRecord::Kind::ModeChange;
    ev.step = t;
    ev.agent = static_cast<int>(i);
    ev.label = std::string(to_string(states_[i].mode)) + ">" + to_string(mode);
    log_.push_back(ev);
    states_[i].mode = mode;
}

void HybridExecutive::advance_waypoints(int t) {
    for (size_t i = 0; i < states_.size(); ++i) {
        AgentState& s = states_[i];
        if (s.mode == AgentMode::Finished) continue;
        AgentController& ctl = controllers_[i];
        if (s.mode == AgentMode::Coordinated && ctl.dense_list.has_value()) {
            waypoint_advance(*ctl.dense_list, s.position, t);
            if (ctl.dense_list->exhausted()) {
                ctl.dense_list.reset();
                set_mode(i, AgentMode::Default, t);
            }
            continue;
        }
        WaypointList& wl = ctl.global_list;
        if (!wl.exhausted()) {
            // The final waypoint is the goal; its reach radius is the success
            // tolerance.
            const bool final_point = wl.active_index + 1 == wl.points.size();
            const double saved = wl.reach_threshold;
            if (final_point) wl.reach_threshold = ecfg_.goal_tolerance;
            waypoint_advance(wl, s.position, t);
            wl.reach_threshold = saved;
        }
        if (wl.exhausted()) {
            set_mode(i, AgentMode::Finished, t);
            s.velocity = {0.0, 0.0};
            if (all_finished()) finish_step_ = t;
        }
    }
}

bool HybridExecutive::attempt_solve(const ParticipantSet& set, int t) {
    std::vector<Vec2> positions;
    std::vector<Vec2> waypoints;
    for (int a : set.agents) {
        positions.push_back(states_[a].position);
        const std::optional<Vec2> target = active_target(static_cast<size_t>(a));
        waypoints.push_back(target.value_or(states_[a].position));
    }
    std::vector<Vec2> frozen;
    for (const AgentState& s : states_) {
        if (s.mode == AgentMode::Finished) frozen.push_back(s.position);
    }

    double margin = ecfg_.mapf_margin;
    for (int round = 0; round < 2; ++round, margin *= 2.0) {
        const Subgrid sg = crop_subgrid(setup_.map, positions, frozen, margin,
                                        ecfg_.mapf_resolution, wcfg_.agent_radius);
        const InstanceResult inst = build_instance(sg, set.agents, positions, waypoints);
        EventRecord ev;
        ev.kind = EventRecord::Kind::Solve;
        ev.step = t;
        ev.cells = sg.grid.free_cell_count();
        ev.widened = round > 0;
        ev.participants = set.agents;
        if (!inst.ok()) {
            ev.ok = false;
            ev.label = to_string(inst.status);
            log_.push_back(ev);
            continue;
        }
        const SolveResult solved = pnr_solve(inst.instance);
        if (!solved.ok()) {
            ev.ok = false;
            ev.label = to_string(solved.status);
            log_.push_back(ev);
            continue;
        }
        const DensePlan dense = plan_to_dense(solved.plan, inst.instance.subgrid);
        const double cap = ecfg_.speed_cap_factor * wcfg_.v_max;
        const int steps_per_segment = static_cast<int>(
            std::ceil(ecfg_.mapf_resolution * 1.4142135623730951 / (cap * wcfg_.dt)));
        for (size_t k = 0; k < dense.agent_ids.size(); ++k) {
            const int a = dense.agent_ids[k];
            WaypointList wl;
            wl.points = dense.waypoints[k];
            wl.kind = WaypointKind::MapfDense;
            wl.reach_threshold = 0.5 * ecfg_.mapf_resolution;
            wl.active_index = 0;
            wl.last_advance_step = t;
            controllers_[a].dense_list = wl;
            set_mode(static_cast<size_t>(a), AgentMode::Coordinated, t);
            lock_until_[a] = set.lock_until;

            ClearanceMonitor mon;
            mon.agent = a;
            mon.global_index_at_install = controllers_[a].global_list.active_index;
            mon.installed_step = t;
            mon.deadline = t + static_cast<int>(wl.points.size()) * steps_per_segment *
                                   ecfg_.clearance_safety;
            monitors_.push_back(mon);
        }
        ev.ok = true;
        ev.label = "pnr";
        ev.primitives = solved.stats.primitive_count();
        ev.horizon = solved.plan.horizon();
        log_.push_back(ev);
        ++solves_ok_;
        return true;
    }
    ++solves_failed_;
    return false;
}

void HybridExecutive::run_detector_and_solve(int t) {
    // Feed the ring buffers even when triggering is disabled downstream.
    std::vector<std::optional<Vec2>> targets(states_.size());
    for (size_t i = 0; i < states_.size(); ++i) targets[i] = active_target(i);
    detector_.observe(states_, targets, t);
    if (!ecfg_.detector_enabled) return;

    std::vector<const WaypointList*> lists(states_.size(), nullptr);
    for (size_t i = 0; i < states_.size(); ++i) lists[i] = active_list(i);

    const std::vector<TriggerEvent> events =
        detector_.detect(states_, lists, lock_until_, t, wcfg_);
    bool solved_this_step = false;
    for (const TriggerEvent& ev : events) {
        EventRecord rec;
        rec.kind = EventRecord::Kind::Trigger;
        rec.step = t;
        rec.agent = ev.agent;
        rec.label = to_string(ev.kind);
        if (ev.core_pair) {
            rec.aux_a = ev.core_pair->first;
            rec.aux_b = ev.core_pair->second;
        }
        log_.push_back(rec);

        if (solved_this_step) continue;  // one solve per step
        if (lock_until_[ev.agent] > t) continue;  // locked by an earlier seed

        const ParticipantSet set =
            detector_.build_participants(ev, states_, lock_until_, wcfg_);
        if (set.agents.empty()) continue;
        detector_.mark_triggered(set.agents, t);
        ++triggers_;
        attempt_solve(set, t);
        solved_this_step = true;
    }
}

void HybridExecutive::record_trajectory(int t) {
    for (size_t i = 0; i < states_.size(); ++i) {
        TrajectoryRow row;
        row.step = t;
        row.agent = static_cast<int>(i);
        row.position = states_[i].position;
        row.velocity = states_[i].velocity;
        row.heading = states_[i].heading;
        row.mode = states_[i].mode;
        const std::optional<Vec2> target = active_target(i);
        row.has_target = target.has_value();
        row.target = target.value_or(Vec2{0.0, 0.0});
        trajectory_.push_back(row);
    }
}

void HybridExecutive::step() {
    const int t = step_ + 1;

    // (1)-(2) every agent picks its active target and runs the same local
    // policy; participants track dense points under the speed cap.
    std::vector<Vec2> dvs(states_.size(), Vec2{0.0, 0.0});
    for (size_t i = 0; i < states_.size(); ++i) {
        const AgentState& s = states_[i];
        if (s.mode == AgentMode::Finished) continue;
        const std::optional<Vec2> target = active_target(i);
        const std::vector<AgentState> neighbors = neighbor_query(s, states_, wcfg_);
        // Keep the desired velocity alive until the agent is well inside the
        // active waypoint's reach radius, whatever that radius is.
        PolicyConfig pcfg = ecfg_.policy;
        if (const WaypointList* wl = active_list(i)) {
            pcfg.goal_tolerance = std::min(pcfg.goal_tolerance, 0.4 * wl->reach_threshold);
        }
        const Observation obs =
            build_observation(s, neighbors, target.value_or(s.position), wcfg_, pcfg);
        const std::vector<HalfPlane> walls =
            build_obstacle_constraints(s, setup_.map, wcfg_, ecfg_.policy);
        const double limit =
            s.mode == AgentMode::Coordinated ? controllers_[i].speed_cap : wcfg_.v_max;
        dvs[i] = reactive_policy(obs.self, obs.neighbors, walls, ecfg_.policy, wcfg_, limit).dv;
    }

    // (3) integrate.
    for (size_t i = 0; i < states_.size(); ++i) {
        if (states_[i].mode == AgentMode::Finished) continue;
        states_[i] = step_kinematics(states_[i], dvs[i], wcfg_);
    }

    // Collisions are recorded and the episode keeps stepping.
    for (const CollisionEvent& ce : collision_check(states_, setup_.map)) {
        ++collision_events_;
        EventRecord ev;
        ev.kind = EventRecord::Kind::Collision;
        ev.step = t;
        ev.label = ce.kind == CollisionEvent::Kind::AgentPair ? "pair" : "obstacle";
        ev.aux_a = ce.agent_a;
        ev.aux_b = ce.kind == CollisionEvent::Kind::AgentPair ? ce.agent_b : ce.obstacle_index;
        log_.push_back(ev);
    }

    // (4) waypoint managers advance; exhausted dense lists hand back.
    advance_waypoints(t);

    // (5)-(6) detector update, triggers, crop -> instance -> solve.
    run_detector_and_solve(t);

    // Clearance monitoring for Theorem-1-style bounds.
    for (auto it = monitors_.begin(); it != monitors_.end();) {
        const AgentController& ctl = controllers_[it->agent];
        EventRecord ev;
        ev.kind = EventRecord::Kind::Clearance;
        ev.agent = it->agent;
        ev.step = t;
        ev.aux_a = it->deadline - it->installed_step;
        ev.aux_b = t - it->installed_step;
        if (ctl.global_list.active_index > it->global_index_at_install ||
            ctl.global_list.exhausted()) {
            ev.ok = true;
            ++clearance_checks_;
            log_.push_back(ev);
            it = monitors_.erase(it);
        } else if (t > it->deadline) {
            ev.ok = false;
            ++clearance_checks_;
            ++clearance_violations_;
            log_.push_back(ev);
            it = monitors_.erase(it);
        } else {
            ++it;
        }
    }

    int coord = 0;
    for (const AgentState& s : states_) coord += (s.mode == AgentMode::Coordinated);
    coordinated_agent_steps_ += coord;
    if (coord != last_coord_count_) {
        EventRecord ev;
        ev.kind = EventRecord::Kind::CoordCount;
        ev.step = t;
        ev.aux_a = coord;
        log_.push_back(ev);
        last_coord_count_ = coord;
    }

    if (record_) record_trajectory(t);
    step_ = t;
}

bool HybridExecutive::all_finished() const {
    for (const AgentState& s : states_) {
        if (s.mode != AgentMode::Finished) return false;
    }
    return true;
}

EpisodeResult HybridExecutive::finish(int t_max) const {
    EpisodeResult r;
    r.steps = step_;
    r.makespan = finish_step_ >= 0 ? finish_step_ : step_;
    r.collision_events = collision_events_;
    r.triggers = triggers_;
    r.solves_ok = solves_ok_;
    r.solves_failed = solves_failed_;
    r.clearance_checks = clearance_checks_;
    r.clearance_violations = clearance_violations_;
    r.log = log_;
    r.trajectory = trajectory_;
    const long long denom =
        static_cast<long long>(states_.size()) * std::max(1, step_);
    r.duty_cycle = static_cast<double>(coordinated_agent_steps_) / static_cast<double>(denom);
    if (collision_events_ > 0) {
        r.outcome = EpisodeOutcome::Collision;
    } else if (all_finished() && step_ <= t_max) {
        r.outcome = EpisodeOutcome::Success;
    } else {
        r.outcome = EpisodeOutcome::Timeout;
    }
    return r;
}

EpisodeResult run_episode(const EpisodeSetup& setup, int t_max, bool record_trajectory) {
    HybridExecutive exec(setup);
    if (record_trajectory) exec.enable_trajectory_recording();
    while (exec.current_step() < t_max && !exec.all_finished()) exec.step();
    return exec.finish(t_max);
}

}  // namespace navsim
