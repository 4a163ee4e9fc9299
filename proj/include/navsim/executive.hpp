#pragma once
// executive.hpp - per-step orchestration of the triggered hybrid: reactive
// waypoint tracking for everyone, deadlock detection, locally confined MAPF
// solves for participants, dense waypoint handover, and reversion to global
// guidance once dense lists are exhausted.

#include <optional>
#include <string>
#include <vector>

#include "navsim/deadlock.hpp"
#include "navsim/mapf.hpp"
#include "navsim/planner.hpp"
#include "navsim/pnr.hpp"
#include "navsim/policy.hpp"
#include "navsim/world.hpp"

namespace navsim {

struct ExecutiveConfig {
    double waypoint_spacing = 1.0;   // m between sparse global waypoints
    double reach_threshold = 0.3;    // m, global waypoint reach radius
    double goal_tolerance = 0.3;     // m, success tolerance at the final goal
    double plan_resolution = 0.25;   // m, global planning grid
    double mapf_margin = 1.5;        // m, crop padding around participants
    double mapf_resolution = 0.5;    // m, h_g of the local subgrid
    double speed_cap_factor = 0.6;   // coordinated tracking cap, fraction of v_max
    int clearance_safety = 3;        // multiplier in the clearance bound
    bool detector_enabled = true;
    PolicyConfig policy{};
    DetectorConfig detector{};
};

struct EventRecord {
    enum class Kind : uint8_t {
        Trigger,
        Solve,
        ModeChange,
        Collision,
        CoordCount,
        PlanFail,
        Clearance,
    } kind = Kind::Trigger;
    int step = 0;
    int agent = -1;
    int aux_a = -1;
    int aux_b = -1;
    bool ok = false;
    int primitives = 0;
    int horizon = 0;
    int cells = 0;
    bool widened = false;
    std::vector<int> participants;
    std::string label;

    std::string to_line() const;
};

enum class EpisodeOutcome : uint8_t { Success, Timeout, Collision };

const char* to_string(EpisodeOutcome o);

struct TrajectoryRow {
    int step = 0;
    int agent = -1;
    Vec2 position{};
    Vec2 velocity{};
    double heading = 0.0;
    AgentMode mode = AgentMode::Default;
    Vec2 target{};
    bool has_target = false;
};

struct EpisodeSetup {
    WorldConfig world{};
    ExecutiveConfig exec{};
    ObstacleMap map{};
    std::vector<Vec2> starts;
    std::vector<Vec2> goals;
};

struct EpisodeResult {
    EpisodeOutcome outcome = EpisodeOutcome::Timeout;
    int steps = 0;
    int makespan = 0;  // steps until the last agent finished (successes)
    int collision_events = 0;
    int triggers = 0;
    int solves_ok = 0;
    int solves_failed = 0;
    int clearance_checks = 0;
    int clearance_violations = 0;
    double duty_cycle = 0.0;  // coordinated agent-steps / (agents * steps)
    std::vector<EventRecord> log;
    std::vector<TrajectoryRow> trajectory;  // populated when recording
};

// Per-agent runtime navigation state: the sparse global list plus an optional
// dense list installed by a successful local solve.
struct AgentController {
    WaypointList global_list;
    std::optional<WaypointList> dense_list;
    Vec2 goal{};
    double speed_cap = 0.0;  // absolute m/s, active while Coordinated
};

class HybridExecutive {
public:
    HybridExecutive(const EpisodeSetup& setup);

    // Runs one pipeline step; returns false once every agent is finished.
    void step();

    bool all_finished() const;
    int current_step() const { return step_; }
    const std::vector<AgentState>& states() const { return states_; }
    const std::vector<AgentController>& controllers() const { return controllers_; }
    const std::vector<EventRecord>& log() const { return log_; }
    int collision_events() const { return collision_events_; }

    EpisodeResult finish(int t_max) const;  // summarize after stepping

    void enable_trajectory_recording() { record_ = true; }
    const std::vector<TrajectoryRow>& trajectory() const { return trajectory_; }

private:
    struct ClearanceMonitor {
        int agent = -1;
        size_t global_index_at_install = 0;
        int installed_step = 0;
        int deadline = 0;
    };

    std::optional<Vec2> active_target(size_t i) const;
    const WaypointList* active_list(size_t i) const;
    void plan_global_routes();
    void advance_waypoints(int t);
    void run_detector_and_solve(int t);
    bool attempt_solve(const ParticipantSet& set, int t);
    void set_mode(size_t i, AgentMode mode, int t);
    void record_trajectory(int t);

    EpisodeSetup setup_;
    WorldConfig wcfg_;
    ExecutiveConfig ecfg_;
    std::vector<AgentState> states_;
    std::vector<AgentController> controllers_;
    DeadlockDetector detector_;
    std::vector<int> lock_until_;
    std::vector<ClearanceMonitor> monitors_;
    std::vector<EventRecord> log_;
    std::vector<TrajectoryRow> trajectory_;
    int step_ = 0;
    int collision_events_ = 0;
    int triggers_ = 0;
    int solves_ok_ = 0;
    int solves_failed_ = 0;
    int clearance_checks_ = 0;
    int clearance_violations_ = 0;
    long long coordinated_agent_steps_ = 0;
    int last_coord_count_ = 0;
    int finish_step_ = -1;
    bool record_ = false;
};

// Steps the executive until every agent finishes or t_max steps elapse.
EpisodeResult run_episode(const EpisodeSetup& setup, int t_max, bool record_trajectory = false);

}  // namespace navsim
