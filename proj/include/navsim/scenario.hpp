#pragma once
// scenario.hpp - benchmark scenario definitions: doorway and corridor
// generators, the plain-text scenario file format, and seeded start jitter.

#include <iosfwd>
#include <string>
#include <vector>

#include "navsim/executive.hpp"

namespace navsim {

struct Scenario {
    std::string name = "scenario";
    WorldConfig world{};
    ExecutiveConfig exec{};
    ObstacleMap map{};
    std::vector<Vec2> starts;
    std::vector<Vec2> goals;
    double start_jitter = 0.05;  // m, uniform per-axis, seeded per episode

    int agent_count() const { return static_cast<int>(starts.size()); }
};

// Wall with a 1.5 m opening splitting a 10 m x 6 m workspace; agents start on
// both sides with mirrored goals, forcing two-way traffic through the door.
Scenario make_doorway_scenario(int agents);

// 5 m x 1.5 m channel between two open rooms; half the agents start at each
// end with goals swapped end-to-end.
Scenario make_corridor_scenario(int agents);

// Builtin by name ("doorway" / "corridor"), empty result.name on failure.
Scenario make_builtin_scenario(const std::string& name, int agents);

// Jittered episode setup for one seeded trial.
EpisodeSetup make_setup(const Scenario& scenario, uint64_t seed);

// Plain-text round-trip.
void write_scenario(std::ostream& os, const Scenario& s);
bool read_scenario(std::istream& is, Scenario* out, std::string* error);
bool load_scenario_file(const std::string& path, Scenario* out, std::string* error);

}  // namespace navsim
