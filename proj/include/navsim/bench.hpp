#pragma once
// bench.hpp - batch episode runner, success-rate tables, and trajectory
// export for the doorway/corridor benchmark suite.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "navsim/scenario.hpp"

namespace navsim {

enum class RunMethod : uint8_t { BaseOnly, Hybrid };

const char* to_string(RunMethod m);

// One seeded trial; BaseOnly disables the detector and solver, everything
// else identical.
EpisodeResult run_episode(const Scenario& scenario, RunMethod method, uint64_t seed,
                          int t_max, bool record_trajectory = false);

struct BatchRow {
    std::string scenario;
    std::string method;
    int agents = 0;
    int episodes = 0;
    int successes = 0;
    int timeouts = 0;
    int collisions = 0;
    double mean_triggers = 0.0;
    double mean_duty_cycle = 0.0;
    double mean_makespan_success = 0.0;

    double success_rate() const {
        return episodes > 0 ? static_cast<double>(successes) / episodes : 0.0;
    }
};

struct BatchResult {
    BatchRow row;
    std::vector<EpisodeOutcome> outcomes;  // aligned with seeds
    std::vector<EpisodeResult> episodes;   // aligned with seeds
};

// N independent episodes (parallel across a thread pool, aggregated in seed
// order so results are bit-identical regardless of scheduling).
BatchResult run_batch(const Scenario& scenario, RunMethod method,
                      const std::vector<uint64_t>& seeds, int t_max, int threads = 0);

std::vector<uint64_t> make_seeds(uint64_t base, int count);

// Human-readable table (one row per method, columns per scenario/agent-count)
// plus machine-readable comma-separated rows.
std::string emit_table(const std::vector<BatchRow>& rows);
std::string emit_csv(const std::vector<BatchRow>& rows);

// Per-step positions, modes and active targets with the event log
// interleaved; byte-deterministic for a fixed (scenario, seed).
void export_trajectories(std::ostream& os, const Scenario& scenario, RunMethod method,
                         uint64_t seed, const EpisodeResult& episode);

// FNV-1a over the serialized trajectory; used for equivalence checks.
uint64_t trajectory_hash(const Scenario& scenario, RunMethod method, uint64_t seed,
                         const EpisodeResult& episode);

}  // namespace navsim
