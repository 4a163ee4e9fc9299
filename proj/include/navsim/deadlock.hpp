#pragma once
// deadlock.hpp - monitors per-agent kinematic history and raises deadlock
// triggers (speed/non-progress, waypoint-stuck, core-pair risk), applies
// gating and the union rule, and builds the locked participant set.

#include <optional>
#include <utility>
#include <vector>

#include "navsim/planner.hpp"
#include "navsim/world.hpp"

namespace navsim {

struct DetectorConfig {
    double v_low = 0.1;     // m/s low-speed threshold
    int window = 10;        // K, trailing-mean window in steps
    int t_wp = 60;          // steps without waypoint advance before firing
    double tau_ttc = 3.0;   // s, core-pair imminence threshold
    double delta_min = 0.45;  // m, core-pair min-distance threshold
    double eps = 1e-9;      // numeric floor for TTC
    double eps_goal = 0.3;  // m, goal/waypoint tolerance gate
    int t_warm = 20;        // steps before any trigger may fire
    int t_cool = 50;        // steps between triggers for one agent
    int t_lock = 100;       // participant lock duration in steps
    double eps_p = 0.0;     // progress floor for the stalled-neighbor clause
    int eps_n = 1;          // stalled-neighbor quorum (1 recovers the exists-j form)
};

enum class TriggerKind : uint8_t { Spd, Wp, Risk };

const char* to_string(TriggerKind k);

struct TriggerEvent {
    int agent = -1;
    int step = 0;
    TriggerKind kind = TriggerKind::Spd;
    std::optional<std::pair<int, int>> core_pair;  // present iff kind == Risk
};

struct ParticipantSet {
    std::vector<int> agents;  // sorted, non-empty
    int created_step = 0;
    int lock_until = 0;  // created_step + t_lock
};

struct RiskResult {
    bool fired = false;
    int agent_a = -1;
    int agent_b = -1;
};

// Speed and progress samples of one agent over the trailing window.
struct NeighborSample {
    int id = -1;
    double mean_speed = 0.0;
    double latest_progress = 0.0;
};

// Eq.-style speed/non-progress predicate: ego trailing-mean speed below v_low
// while at least eps_n neighbors are slow with progress <= eps_p.
bool trigger_spd(double ego_mean_speed, const std::vector<NeighborSample>& neighbors,
                 const DetectorConfig& cfg);

// Waypoint-stuck predicate: active index unchanged for t_wp steps while the
// agent is outside the goal tolerance of its active waypoint.
bool trigger_wp(const WaypointList& wl, const Vec2& pos, int step, const DetectorConfig& cfg);

// Core-pair risk predicate: mutual most-at-risk pair (by pairwise TTC,
// lowest-id tie-break) with imminent TTC or small predicted miss distance.
RiskResult trigger_risk(const AgentState& ego, const std::vector<AgentState>& neighbors,
                        const std::vector<AgentState>& all_states, const WorldConfig& wcfg,
                        const DetectorConfig& cfg);

class DeadlockDetector {
public:
    DeadlockDetector() = default;
    DeadlockDetector(int num_agents, const DetectorConfig& cfg);

    const DetectorConfig& config() const { return cfg_; }

    // Record one speed/progress sample per agent. `active_targets[i]` is the
    // point agent i currently tracks (empty once finished).
    void observe(const std::vector<AgentState>& states,
                 const std::vector<std::optional<Vec2>>& active_targets, int step);

    // Union rule over the three triggers with warm-up, goal, cool-down and
    // lock gating. One event per agent, preferring Risk > Wp > Spd.
    std::vector<TriggerEvent> detect(const std::vector<AgentState>& states,
                                     const std::vector<const WaypointList*>& active_lists,
                                     const std::vector<int>& lock_until, int step,
                                     const WorldConfig& wcfg) const;

    // Seed agent plus the core pair (when present) plus sensed neighbors of
    // the seed whose trailing-mean speed is below v_low; Finished and locked
    // agents excluded.
    ParticipantSet build_participants(const TriggerEvent& seed,
                                      const std::vector<AgentState>& states,
                                      const std::vector<int>& lock_until,
                                      const WorldConfig& wcfg) const;

    void mark_triggered(const std::vector<int>& agents, int step);

    double trailing_mean_speed(int agent) const;
    double latest_progress(int agent) const;
    int sample_count(int agent) const;
    int last_trigger_step(int agent) const { return last_trigger_[agent]; }

private:
    DetectorConfig cfg_{};
    int num_agents_ = 0;
    // Ring buffers, window samples per agent.
    std::vector<double> speeds_;
    std::vector<double> progress_;
    std::vector<int> counts_;
    std::vector<int> heads_;
    std::vector<int> last_trigger_;
};

}  // namespace navsim
