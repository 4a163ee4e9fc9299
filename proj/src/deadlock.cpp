#include "navsim/deadlock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "navsim/policy.hpp"

namespace navsim {

namespace {
constexpr int kNeverTriggered = std::numeric_limits<int>::min() / 2;
}

const char* to_string(TriggerKind k) {
    switch (k) {
        case TriggerKind::Spd: return "spd";
        case TriggerKind::Wp: return "wp";
        case TriggerKind::Risk: return "risk";
    }
    return "?";
}

bool trigger_spd(double ego_mean_speed, const std::vector<NeighborSample>& neighbors,
                 const DetectorConfig& cfg) {
    if (ego_mean_speed >= cfg.v_low) return false;
    int stalled = 0;
    for (const NeighborSample& n : neighbors) {
        if (n.mean_speed < cfg.v_low && n.latest_progress <= cfg.eps_p) ++stalled;
    }
    return stalled >= cfg.eps_n;
}

bool trigger_wp(const WaypointList& wl, const Vec2& pos, int step, const DetectorConfig& cfg) {
    if (wl.exhausted()) return false;
    if (step - wl.last_advance_step < cfg.t_wp) return false;
    return distance(pos, wl.active()) > cfg.eps_goal;
}

namespace {

// argmin_j ttc(i, j) over i's sensed neighbors, lowest id on ties.
int best_risk_neighbor(const AgentState& ego, const std::vector<AgentState>& neighbors,
                       const DetectorConfig& cfg, double* best_ttc, double* best_dmin) {
    int best = -1;
    double ttc_best = std::numeric_limits<double>::infinity();
    double dmin_best = std::numeric_limits<double>::infinity();
    for (const AgentState& nb : neighbors) {
        const Vec2 r = nb.position - ego.position;
        const Vec2 u = nb.velocity - ego.velocity;
        const double ttc = ttc_pair(r, u, cfg.eps);
        const bool better = best == -1 || ttc < ttc_best ||
                            (ttc == ttc_best && nb.id < best);
        if (better) {
            best = nb.id;
            ttc_best = ttc;
            dmin_best = dmin_pair(r, u, ttc);
        }
    }
    if (best_ttc) *best_ttc = ttc_best;
    if (best_dmin) *best_dmin = dmin_best;
    return best;
}

const AgentState* find_agent(const std::vector<AgentState>& states, int id) {
    for (const AgentState& s : states) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

}  // namespace

RiskResult trigger_risk(const AgentState& ego, const std::vector<AgentState>& neighbors,
                        const std::vector<AgentState>& all_states, const WorldConfig& wcfg,
                        const DetectorConfig& cfg) {
    RiskResult result;
    if (neighbors.empty()) return result;

    double ttc = 0.0, dmin = 0.0;
    const int j = best_risk_neighbor(ego, neighbors, cfg, &ttc, &dmin);
    if (j < 0) return result;

    const AgentState* other = find_agent(all_states, j);
    if (!other) return result;
    const std::vector<AgentState> other_neighbors = neighbor_query(*other, all_states, wcfg);
    const int back = best_risk_neighbor(*other, other_neighbors, cfg, nullptr, nullptr);
    if (back != ego.id) return result;  // not mutual

    if (ttc < cfg.tau_ttc || dmin < cfg.delta_min) {
        result.fired = true;
        result.agent_a = std::min(ego.id, j);
        result.agent_b = std::max(ego.id, j);
    }
    return result;
}

DeadlockDetector::DeadlockDetector(int num_agents, const DetectorConfig& cfg)
    : cfg_(cfg), num_agents_(num_agents) {
    const size_t n = static_cast<size_t>(num_agents);
    speeds_.assign(n * cfg.window, 0.0);
    progress_.assign(n * cfg.window, 0.0);
    counts_.assign(n, 0);
    heads_.assign(n, 0);
    last_trigger_.assign(n, kNeverTriggered);
}

void DeadlockDetector::observe(const std::vector<AgentState>& states,
                               const std::vector<std::optional<Vec2>>& active_targets,
                               int /*step*/) {
    for (size_t i = 0; i < states.size(); ++i) {
        const AgentState& s = states[i];
        const int a = s.id;
        const double speed = s.velocity.norm();
        double prog = 0.0;
        if (i < active_targets.size() && active_targets[i].has_value()) {
            const Vec2 to_target = *active_targets[i] - s.position;
            const double d = to_target.norm();
            if (d > cfg_.eps_goal) prog = dot(s.velocity, to_target / d);
        }
        const size_t base = static_cast<size_t>(a) * cfg_.window;
        speeds_[base + heads_[a]] = speed;
        progress_[base + heads_[a]] = prog;
        heads_[a] = (heads_[a] + 1) % cfg_.window;
        counts_[a] = std::min(counts_[a] + 1, cfg_.window);
    }
}

double DeadlockDetector::trailing_mean_speed(int agent) const {
    const int n = counts_[agent];
    if (n == 0) return 0.0;
    const size_t base = static_cast<size_t>(agent) * cfg_.window;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += speeds_[base + k];
    return sum / n;
}

double DeadlockDetector::latest_progress(int agent) const {
    if (counts_[agent] == 0) return 0.0;
    const size_t base = static_cast<size_t>(agent) * cfg_.window;
    const int last = (heads_[agent] + cfg_.window - 1) % cfg_.window;
    return progress_[base + last];
}

int DeadlockDetector::sample_count(int agent) const { return counts_[agent]; }

std::vector<TriggerEvent> DeadlockDetector::detect(
    const std::vector<AgentState>& states,
    const std::vector<const WaypointList*>& active_lists,
    const std::vector<int>& lock_until, int step, const WorldConfig& wcfg) const {
    std::vector<TriggerEvent> events;
    if (step < cfg_.t_warm) return events;

    for (size_t i = 0; i < states.size(); ++i) {
        const AgentState& ego = states[i];
        if (ego.mode != AgentMode::Default) continue;
        const int a = ego.id;
        if (step - last_trigger_[a] < cfg_.t_cool) continue;
        if (a < static_cast<int>(lock_until.size()) && lock_until[a] > step) continue;

        const WaypointList* wl = i < active_lists.size() ? active_lists[i] : nullptr;
        if (!wl || wl->exhausted()) continue;
        if (distance(ego.position, wl->active()) <= cfg_.eps_goal) continue;

        const std::vector<AgentState> neighbors = neighbor_query(ego, states, wcfg);

        TriggerEvent ev;
        ev.agent = a;
        ev.step = step;

        const RiskResult risk =
            neighbors.empty() ? RiskResult{}
                              : trigger_risk(ego, neighbors, states, wcfg, cfg_);
        if (risk.fired) {
            ev.kind = TriggerKind::Risk;
            ev.core_pair = std::make_pair(risk.agent_a, risk.agent_b);
            events.push_back(ev);
            continue;
        }
        if (trigger_wp(*wl, ego.position, step, cfg_)) {
            ev.kind = TriggerKind::Wp;
            events.push_back(ev);
            continue;
        }
        std::vector<NeighborSample> samples;
        samples.reserve(neighbors.size());
        for (const AgentState& nb : neighbors) {
            samples.push_back({nb.id, trailing_mean_speed(nb.id), latest_progress(nb.id)});
        }
        if (trigger_spd(trailing_mean_speed(a), samples, cfg_)) {
            ev.kind = TriggerKind::Spd;
            events.push_back(ev);
        }
    }
    return events;
}

ParticipantSet DeadlockDetector::build_participants(const TriggerEvent& seed,
                                                    const std::vector<AgentState>& states,
                                                    const std::vector<int>& lock_until,
                                                    const WorldConfig& wcfg) const {
    ParticipantSet set;
    set.created_step = seed.step;
    set.lock_until = seed.step + cfg_.t_lock;

    auto eligible = [&](int id) {
        const AgentState* s = find_agent(states, id);
        if (!s || s->mode == AgentMode::Finished) return false;
        if (id < static_cast<int>(lock_until.size()) && lock_until[id] > seed.step) return false;
        return true;
    };
    auto add = [&](int id) {
        if (!eligible(id)) return;
        if (std::find(set.agents.begin(), set.agents.end(), id) == set.agents.end()) {
            set.agents.push_back(id);
        }
    };

    add(seed.agent);
    if (seed.core_pair) {
        add(seed.core_pair->first);
        add(seed.core_pair->second);
    }
    const AgentState* seed_state = find_agent(states, seed.agent);
    if (seed_state) {
        for (const AgentState& nb : neighbor_query(*seed_state, states, wcfg)) {
            if (trailing_mean_speed(nb.id) < cfg_.v_low) add(nb.id);
        }
    }
    std::sort(set.agents.begin(), set.agents.end());
    return set;
}

void DeadlockDetector::mark_triggered(const std::vector<int>& agents, int step) {
    for (int a : agents) {
        if (a >= 0 && a < num_agents_) last_trigger_[a] = step;
    }
}

}  // namespace navsim
