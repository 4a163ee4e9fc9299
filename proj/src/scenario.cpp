#include "navsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "navsim/rng.hpp"

namespace navsim {

namespace {

// Lateral start offsets around the workspace midline, 1.2 m spacing.
std::vector<double> lateral_offsets(int per_side, double center) {
    std::vector<double> ys;
    for (int k = 0; k < per_side; ++k) {
        ys.push_back(center + (k - 0.5 * (per_side - 1)) * 1.2);
    }
    return ys;
}

Scenario base_scenario(const std::string& name) {
    Scenario s;
    s.name = name;
    s.world = WorldConfig{};
    s.exec = ExecutiveConfig{};
    s.map.bounds = {0.0, 0.0, 10.0, 6.0};
    return s;
}

}  // namespace

Scenario make_doorway_scenario(int agents) {
    Scenario s = base_scenario("doorway");
    // Vertical wall at x ~ 5 with a 1.5 m opening centered on the midline.
    s.map.obstacles.push_back({4.85, 0.0, 5.15, 2.25});
    s.map.obstacles.push_back({4.85, 3.75, 5.15, 6.0});

    const int per_side = agents / 2;
    const std::vector<double> ys = lateral_offsets(agents - per_side, 3.0);
    const std::vector<double> ys_right = lateral_offsets(per_side, 3.0);
    for (int k = 0; k < agents - per_side; ++k) {
        s.starts.push_back({1.5, ys[k]});
        s.goals.push_back({8.5, ys[k]});
    }
    for (int k = 0; k < per_side; ++k) {
        s.starts.push_back({8.5, ys_right[k]});
        s.goals.push_back({1.5, ys_right[k]});
    }
    return s;
}

Scenario make_corridor_scenario(int agents) {
    Scenario s = base_scenario("corridor");
    // 5 m long channel, 1.5 m wide, blocked above and below.
    s.map.obstacles.push_back({2.5, 0.0, 7.5, 2.25});
    s.map.obstacles.push_back({2.5, 3.75, 7.5, 6.0});

    const int per_side = agents / 2;
    const std::vector<double> ys = lateral_offsets(agents - per_side, 3.0);
    const std::vector<double> ys_right = lateral_offsets(per_side, 3.0);
    for (int k = 0; k < agents - per_side; ++k) {
        s.starts.push_back({1.0, ys[k]});
        s.goals.push_back({9.0, ys[k]});
    }
    for (int k = 0; k < per_side; ++k) {
        s.starts.push_back({9.0, ys_right[k]});
        s.goals.push_back({1.0, ys_right[k]});
    }
    return s;
}

Scenario make_builtin_scenario(const std::string& name, int agents) {
    if (name == "doorway") return make_doorway_scenario(agents);
    if (name == "corridor") return make_corridor_scenario(agents);
    Scenario s;
    s.name.clear();
    return s;
}

EpisodeSetup make_setup(const Scenario& scenario, uint64_t seed) {
    EpisodeSetup setup;
    setup.world = scenario.world;
    setup.exec = scenario.exec;
    setup.map = scenario.map;
    setup.starts = scenario.starts;
    setup.goals = scenario.goals;
    SplitMix64 rng(seed ^ 0xA5C3E1D2B4F60789ULL);
    for (Vec2& p : setup.starts) {
        const double j = scenario.start_jitter;
        if (j > 0.0) {
            p.x += rng.uniform(-j, j);
            p.y += rng.uniform(-j, j);
        }
    }
    return setup;
}

void write_scenario(std::ostream& os, const Scenario& s) {
    os << "# navsim scenario\n";
    os << "name " << s.name << "\n";
    os << "jitter " << s.start_jitter << "\n";
    os << "[world]\n";
    os << "bounds " << s.map.bounds.xmin << ' ' << s.map.bounds.ymin << ' '
       << s.map.bounds.xmax << ' ' << s.map.bounds.ymax << "\n";
    os << "dt " << s.world.dt << "\n";
    os << "v_max " << s.world.v_max << "\n";
    os << "agent_radius " << s.world.agent_radius << "\n";
    os << "sense_radius " << s.world.sense_radius << "\n";
    os << "neighbor_cap " << s.world.neighbor_cap << "\n";
    os << "control_gain " << s.world.control_gain << "\n";
    os << "[obstacles]\n";
    for (const Rect& r : s.map.obstacles) {
        os << "rect " << r.xmin << ' ' << r.ymin << ' ' << r.xmax << ' ' << r.ymax << "\n";
    }
    os << "[agents]\n";
    for (size_t i = 0; i < s.starts.size(); ++i) {
        os << "agent " << s.starts[i].x << ' ' << s.starts[i].y << ' ' << s.goals[i].x
           << ' ' << s.goals[i].y << "\n";
    }
    os << "[executive]\n";
    os << "waypoint_spacing " << s.exec.waypoint_spacing << "\n";
    os << "reach_threshold " << s.exec.reach_threshold << "\n";
    os << "goal_tolerance " << s.exec.goal_tolerance << "\n";
    os << "plan_resolution " << s.exec.plan_resolution << "\n";
    os << "mapf_margin " << s.exec.mapf_margin << "\n";
    os << "mapf_resolution " << s.exec.mapf_resolution << "\n";
    os << "speed_cap_factor " << s.exec.speed_cap_factor << "\n";
    os << "[policy]\n";
    os << "k_p " << s.exec.policy.k_p << "\n";
    os << "time_horizon " << s.exec.policy.time_horizon << "\n";
    os << "obstacle_horizon " << s.exec.policy.obstacle_horizon << "\n";
    os << "obstacle_margin " << s.exec.policy.obstacle_margin << "\n";
    os << "goal_tolerance " << s.exec.policy.goal_tolerance << "\n";
    os << "[detector]\n";
    os << "v_low " << s.exec.detector.v_low << "\n";
    os << "window " << s.exec.detector.window << "\n";
    os << "t_wp " << s.exec.detector.t_wp << "\n";
    os << "tau_ttc " << s.exec.detector.tau_ttc << "\n";
    os << "delta_min " << s.exec.detector.delta_min << "\n";
    os << "eps_goal " << s.exec.detector.eps_goal << "\n";
    os << "t_warm " << s.exec.detector.t_warm << "\n";
    os << "t_cool " << s.exec.detector.t_cool << "\n";
    os << "t_lock " << s.exec.detector.t_lock << "\n";
    os << "eps_n " << s.exec.detector.eps_n << "\n";
    os << "end\n";
}

bool read_scenario(std::istream& is, Scenario* out, std::string* error) {
    Scenario s;
    s.map.obstacles.clear();
    std::string section;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        if (error) {
            std::ostringstream os;
            os << "line " << lineno << ": " << msg;
            *error = os.str();
        }
        return false;
    };
    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "end") break;
        if (key.front() == '[') {
            section = key;
            continue;
        }
        if (key == "name") {
            ls >> s.name;
        } else if (key == "jitter") {
            ls >> s.start_jitter;
        } else if (section == "[world]") {
            if (key == "bounds") {
                ls >> s.map.bounds.xmin >> s.map.bounds.ymin >> s.map.bounds.xmax >>
                    s.map.bounds.ymax;
            } else if (key == "dt") {
                ls >> s.world.dt;
            } else if (key == "v_max") {
                ls >> s.world.v_max;
            } else if (key == "agent_radius") {
                ls >> s.world.agent_radius;
            } else if (key == "sense_radius") {
                ls >> s.world.sense_radius;
            } else if (key == "neighbor_cap") {
                ls >> s.world.neighbor_cap;
            } else if (key == "control_gain") {
                ls >> s.world.control_gain;
            } else {
                return fail("unknown world key " + key);
            }
        } else if (section == "[obstacles]") {
            if (key != "rect") return fail("unknown obstacle key " + key);
            Rect r;
            ls >> r.xmin >> r.ymin >> r.xmax >> r.ymax;
            s.map.obstacles.push_back(r);
        } else if (section == "[agents]") {
            if (key != "agent") return fail("unknown agent key " + key);
            Vec2 start, goal;
            ls >> start.x >> start.y >> goal.x >> goal.y;
            s.starts.push_back(start);
            s.goals.push_back(goal);
        } else if (section == "[executive]") {
            if (key == "waypoint_spacing") {
                ls >> s.exec.waypoint_spacing;
            } else if (key == "reach_threshold") {
                ls >> s.exec.reach_threshold;
            } else if (key == "goal_tolerance") {
                ls >> s.exec.goal_tolerance;
            } else if (key == "plan_resolution") {
                ls >> s.exec.plan_resolution;
            } else if (key == "mapf_margin") {
                ls >> s.exec.mapf_margin;
            } else if (key == "mapf_resolution") {
                ls >> s.exec.mapf_resolution;
            } else if (key == "speed_cap_factor") {
                ls >> s.exec.speed_cap_factor;
            } else {
                return fail("unknown executive key " + key);
            }
        } else if (section == "[policy]") {
            if (key == "k_p") {
                ls >> s.exec.policy.k_p;
            } else if (key == "time_horizon") {
                ls >> s.exec.policy.time_horizon;
            } else if (key == "obstacle_horizon") {
                ls >> s.exec.policy.obstacle_horizon;
            } else if (key == "obstacle_margin") {
                ls >> s.exec.policy.obstacle_margin;
            } else if (key == "goal_tolerance") {
                ls >> s.exec.policy.goal_tolerance;
            } else {
                return fail("unknown policy key " + key);
            }
        } else if (section == "[detector]") {
            if (key == "v_low") {
                ls >> s.exec.detector.v_low;
            } else if (key == "window") {
                ls >> s.exec.detector.window;
            } else if (key == "t_wp") {
                ls >> s.exec.detector.t_wp;
            } else if (key == "tau_ttc") {
                ls >> s.exec.detector.tau_ttc;
            } else if (key == "delta_min") {
                ls >> s.exec.detector.delta_min;
            } else if (key == "eps_goal") {
                ls >> s.exec.detector.eps_goal;
            } else if (key == "t_warm") {
                ls >> s.exec.detector.t_warm;
            } else if (key == "t_cool") {
                ls >> s.exec.detector.t_cool;
            } else if (key == "t_lock") {
                ls >> s.exec.detector.t_lock;
            } else if (key == "eps_n") {
                ls >> s.exec.detector.eps_n;
            } else {
                return fail("unknown detector key " + key);
            }
        } else {
            return fail("key outside a section: " + key);
        }
    }
    if (s.starts.empty()) return fail("scenario has no agents");
    *out = s;
    return true;
}

bool load_scenario_file(const std::string& path, Scenario* out, std::string* error) {
    std::ifstream f(path);
    if (!f) {
        if (error) *error = "cannot open " + path;
        return false;
    }
    return read_scenario(f, out, error);
}

}  // namespace navsim
