#include "navsim/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace navsim {

const char* to_string(RunMethod m) {
    return m == RunMethod::BaseOnly ? "base-only" : "hybrid";
}

EpisodeResult run_episode(const Scenario& scenario, RunMethod method, uint64_t seed,
                          int t_max, bool record_trajectory) {
    EpisodeSetup setup = make_setup(scenario, seed);
    setup.exec.detector_enabled = (method == RunMethod::Hybrid);
    return navsim::run_episode(setup, t_max, record_trajectory);
}

std::vector<uint64_t> make_seeds(uint64_t base, int count) {
    std::vector<uint64_t> seeds(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) seeds[static_cast<size_t>(i)] = base + static_cast<uint64_t>(i);
    return seeds;
}

BatchResult run_batch(const Scenario& scenario, RunMethod method,
                      const std::vector<uint64_t>& seeds, int t_max, int threads) {
    BatchResult result;
    const int n = static_cast<int>(seeds.size());
    result.episodes.resize(static_cast<size_t>(n));

    int workers = threads > 0 ? threads
                              : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, std::max(1, n));

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            result.episodes[static_cast<size_t>(i)] =
                run_episode(scenario, method, seeds[static_cast<size_t>(i)], t_max);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    BatchRow& row = result.row;
    row.scenario = scenario.name;
    row.method = "";
    row.agents = scenario.agent_count();
    row.episodes = n;
    row.method = to_string(method);
    double triggers = 0.0, duty = 0.0, makespan = 0.0;
    // Aggregate in seed order for bit-exact results.
    for (const EpisodeResult& ep : result.episodes) {
        result.outcomes.push_back(ep.outcome);
        switch (ep.outcome) {
            case EpisodeOutcome::Success:
                ++row.successes;
                makespan += ep.makespan;
                break;
            case EpisodeOutcome::Timeout: ++row.timeouts; break;
            case EpisodeOutcome::Collision: ++row.collisions; break;
        }
        triggers += ep.triggers;
        duty += ep.duty_cycle;
    }
    row.mean_triggers = n > 0 ? triggers / n : 0.0;
    row.mean_duty_cycle = n > 0 ? duty / n : 0.0;
    row.mean_makespan_success = row.successes > 0 ? makespan / row.successes : 0.0;
    return result;
}

namespace {

std::string pct(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * fraction);
    return buf;
}

}  // namespace

std::string emit_table(const std::vector<BatchRow>& rows) {
    // Columns keyed by (scenario, agents); one table row per method.
    std::vector<std::pair<std::string, int>> columns;
    std::vector<std::string> methods;
    for (const BatchRow& r : rows) {
        const std::pair<std::string, int> col{r.scenario, r.agents};
        if (std::find(columns.begin(), columns.end(), col) == columns.end()) {
            columns.push_back(col);
        }
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
            methods.push_back(r.method);
        }
    }

    std::ostringstream os;
    os << "method";
    for (const auto& [scen, n] : columns) os << '\t' << scen << '/' << n;
    os << '\n';
    for (const std::string& m : methods) {
        os << m;
        for (const auto& [scen, n] : columns) {
            const BatchRow* found = nullptr;
            for (const BatchRow& r : rows) {
                if (r.method == m && r.scenario == scen && r.agents == n) {
                    found = &r;
                    break;
                }
            }
            os << '\t' << (found ? pct(found->success_rate()) : "-");
        }
        os << '\n';
    }
    return os.str();
}

std::string emit_csv(const std::vector<BatchRow>& rows) {
    std::ostringstream os;
    os << "method,scenario,agents,episodes,successes,timeouts,collisions,success_rate,"
          "mean_triggers,mean_duty_cycle,mean_makespan_success\n";
    for (const BatchRow& r : rows) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%.4f,%.4f,%.6f,%.2f", r.success_rate(),
                      r.mean_triggers, r.mean_duty_cycle, r.mean_makespan_success);
        os << r.method << ',' << r.scenario << ',' << r.agents << ',' << r.episodes << ','
           << r.successes << ',' << r.timeouts << ',' << r.collisions << ',' << buf << '\n';
    }
    return os.str();
}

void export_trajectories(std::ostream& os, const Scenario& scenario, RunMethod method,
                         uint64_t seed, const EpisodeResult& episode) {
    os << "# navsim trajectory\n";
    os << "# scenario " << scenario.name << " agents " << scenario.agent_count()
       << " method " << to_string(method) << " seed " << seed << " outcome "
       << to_string(episode.outcome) << "\n";

    size_t ei = 0;
    auto emit_events_through = [&](int step) {
        while (ei < episode.log.size() && episode.log[ei].step <= step) {
            os << "E " << episode.log[ei].to_line() << "\n";
            ++ei;
        }
    };

    char buf[256];
    int current = 0;
    for (const TrajectoryRow& row : episode.trajectory) {
        if (row.step != current) {
            emit_events_through(row.step - 1);
            current = row.step;
        }
        std::snprintf(buf, sizeof(buf), "S %d %d %.9g %.9g %.9g %.9g %.9g %s %d %.9g %.9g",
                      row.step, row.agent, row.position.x, row.position.y, row.velocity.x,
                      row.velocity.y, row.heading, to_string(row.mode),
                      row.has_target ? 1 : 0, row.target.x, row.target.y);
        os << buf << "\n";
    }
    emit_events_through(episode.steps + 1);
}

uint64_t trajectory_hash(const Scenario& scenario, RunMethod method, uint64_t seed,
                         const EpisodeResult& episode) {
    std::ostringstream os;
    export_trajectories(os, scenario, method, seed, episode);
    const std::string bytes = os.str();
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace navsim
