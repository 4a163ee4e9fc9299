// navsim command-line entry point: single episodes, benchmark sweeps, the
// verification suites, standalone solver benchmarking on MovingAI files, and
// scenario-file dumps.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "navsim/bench.hpp"
#include "navsim/movingai.hpp"
#include "navsim/pnr.hpp"
#include "navsim/scenario.hpp"
#include "navsim/verify.hpp"

namespace {

bool resolve_scenario(const std::string& name_or_path, int agents, navsim::Scenario* out) {
    navsim::Scenario builtin = navsim::make_builtin_scenario(name_or_path, agents);
    if (!builtin.name.empty()) {
        *out = builtin;
        return true;
    }
    std::string error;
    if (!navsim::load_scenario_file(name_or_path, out, &error)) {
        std::cerr << "error: " << error << "\n";
        return false;
    }
    return true;
}

navsim::RunMethod parse_method(const std::string& m) {
    return (m == "base" || m == "base-only") ? navsim::RunMethod::BaseOnly
                                             : navsim::RunMethod::Hybrid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"navsim - 2D multi-agent navigation with triggered local MAPF coordination"};
    app.require_subcommand(1);

    // --- run ------------------------------------------------------------------
    auto* run = app.add_subcommand("run", "Run one episode");
    std::string run_scenario = "doorway";
    int run_agents = 6;
    std::string run_method = "hybrid";
    uint64_t run_seed = 1;
    int run_tmax = 1000;
    std::string run_traj;
    bool run_log = false;
    run->add_option("--scenario", run_scenario, "builtin name (doorway, corridor) or file path");
    run->add_option("--agents", run_agents, "agent count for builtin scenarios");
    run->add_option("--method", run_method, "hybrid or base");
    run->add_option("--seed", run_seed, "episode seed");
    run->add_option("--tmax", run_tmax, "step budget");
    run->add_option("--trajectory", run_traj, "write trajectory + events to this file");
    run->add_flag("--log", run_log, "print the event log");

    // --- sweep ----------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "Run a benchmark batch");
    std::vector<std::string> sweep_scenarios{"doorway", "corridor"};
    std::vector<int> sweep_agents{4, 6, 8};
    std::vector<std::string> sweep_methods{"base", "hybrid"};
    int sweep_episodes = 100;
    uint64_t sweep_seed_base = 1000;
    int sweep_tmax = 1000;
    std::string sweep_out;
    sweep->add_option("--scenario", sweep_scenarios, "builtin names or file paths");
    sweep->add_option("--agents", sweep_agents, "agent counts");
    sweep->add_option("--methods", sweep_methods, "base and/or hybrid");
    sweep->add_option("--episodes", sweep_episodes, "episodes per cell");
    sweep->add_option("--seed-base", sweep_seed_base, "first seed; episodes use consecutive seeds");
    sweep->add_option("--tmax", sweep_tmax, "step budget per episode");
    sweep->add_option("--out", sweep_out, "directory for table.txt and results.csv");

    // --- verify ---------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "Run the oracle and property suites");
    bool verify_full = false;
    verify->add_flag("--full", verify_full,
                     "include the benchmark, null-intervention and determinism checks");

    // --- solver-bench -----------------------------------------------------------
    auto* sbench = app.add_subcommand("solver-bench", "Standalone solver run on MovingAI files");
    std::string sb_map, sb_scen;
    int sb_agents = 8;
    sbench->add_option("--map", sb_map, "MovingAI .map file")->required();
    sbench->add_option("--scen", sb_scen, "MovingAI .scen file")->required();
    sbench->add_option("--agents", sb_agents, "number of scen entries to use");

    // --- scenario-dump ------------------------------------------------------------
    auto* dump = app.add_subcommand("scenario-dump", "Write a builtin scenario file");
    std::string dump_name = "doorway";
    int dump_agents = 6;
    std::string dump_out = "-";
    dump->add_option("--scenario", dump_name, "builtin name");
    dump->add_option("--agents", dump_agents, "agent count");
    dump->add_option("--out", dump_out, "output path or - for stdout");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        navsim::Scenario scenario;
        if (!resolve_scenario(run_scenario, run_agents, &scenario)) return 2;
        const navsim::RunMethod method = parse_method(run_method);
        const navsim::EpisodeResult ep =
            navsim::run_episode(scenario, method, run_seed, run_tmax, !run_traj.empty());
        std::printf("outcome %s steps %d makespan %d collisions %d triggers %d solves %d/%d duty %.4f\n",
                    navsim::to_string(ep.outcome), ep.steps, ep.makespan, ep.collision_events,
                    ep.triggers, ep.solves_ok, ep.solves_ok + ep.solves_failed, ep.duty_cycle);
        if (run_log) {
            for (const navsim::EventRecord& e : ep.log) std::printf("%s\n", e.to_line().c_str());
        }
        if (!run_traj.empty()) {
            std::ofstream f(run_traj);
            if (!f) {
                std::cerr << "error: cannot write " << run_traj << "\n";
                return 2;
            }
            navsim::export_trajectories(f, scenario, method, run_seed, ep);
        }
        return 0;
    }

    if (sweep->parsed()) {
        std::vector<navsim::BatchRow> rows;
        const std::vector<uint64_t> seeds = navsim::make_seeds(sweep_seed_base, sweep_episodes);
        for (const std::string& m : sweep_methods) {
            for (const std::string& scen_name : sweep_scenarios) {
                for (int n : sweep_agents) {
                    navsim::Scenario scenario;
                    if (!resolve_scenario(scen_name, n, &scenario)) return 2;
                    const navsim::BatchResult batch =
                        navsim::run_batch(scenario, parse_method(m), seeds, sweep_tmax);
                    rows.push_back(batch.row);
                    std::printf("%s %s/%d: %.2f%% success (%d/%d), %d timeouts, %d collisions\n",
                                batch.row.method.c_str(), batch.row.scenario.c_str(), n,
                                100.0 * batch.row.success_rate(), batch.row.successes,
                                batch.row.episodes, batch.row.timeouts, batch.row.collisions);
                    std::fflush(stdout);
                }
            }
        }
        std::printf("\n%s", navsim::emit_table(rows).c_str());
        if (!sweep_out.empty()) {
            std::ofstream table(sweep_out + "/table.txt");
            std::ofstream csv(sweep_out + "/results.csv");
            if (!table || !csv) {
                std::cerr << "error: cannot write into " << sweep_out << "\n";
                return 2;
            }
            table << navsim::emit_table(rows);
            csv << navsim::emit_csv(rows);
        }
        return 0;
    }

    if (verify->parsed()) {
        bool all_pass = true;
        if (verify_full) {
            const std::vector<navsim::CheckResult> results = navsim::run_acceptance_suite(true);
            for (const navsim::CheckResult& r : results) all_pass = all_pass && r.pass;
        } else {
            int index = 1;
            for (const navsim::CheckResult& r :
                 {navsim::check_pnr_oracle_equivalence(), navsim::check_invariant_potential_suite(),
                  navsim::check_polynomial_envelope(), navsim::check_detector_truth_tables()}) {
                std::printf("[%s] %s: %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                            r.detail.c_str(), r.seconds);
                all_pass = all_pass && r.pass;
                ++index;
            }
        }
        return all_pass ? 0 : 1;
    }

    if (sbench->parsed()) {
        std::ifstream mapf(sb_map), scenf(sb_scen);
        navsim::MovingAiMap map;
        std::vector<navsim::ScenEntry> entries;
        std::string error;
        if (!mapf || !navsim::load_movingai_map(mapf, &map, &error)) {
            std::cerr << "error: map: " << error << "\n";
            return 2;
        }
        if (!scenf || !navsim::load_movingai_scen(scenf, &entries, &error)) {
            std::cerr << "error: scen: " << error << "\n";
            return 2;
        }
        navsim::LocalInstance inst;
        if (!navsim::movingai_instance(map, entries, sb_agents, &inst, &error)) {
            std::cerr << "error: " << error << "\n";
            return 2;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const navsim::SolveResult res = navsim::pnr_solve(inst);
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("map %dx%d agents %d status %s time %.3fs\n", map.width, map.height,
                    sb_agents, navsim::to_string(res.status), dt);
        if (res.ok()) {
            const auto violation = navsim::verify_plan(inst, res.plan);
            std::printf("horizon %d primitives %d (push %d swap %d rotate %d move %d) valid %s\n",
                        res.plan.horizon(), res.stats.primitive_count(), res.stats.pushes,
                        res.stats.swaps, res.stats.rotates, res.stats.advances,
                        violation ? navsim::to_string(violation->kind) : "yes");
            return violation ? 1 : 0;
        }
        return res.status == navsim::SolveStatus::Unsolvable ? 0 : 1;
    }

    if (dump->parsed()) {
        const navsim::Scenario scenario = navsim::make_builtin_scenario(dump_name, dump_agents);
        if (scenario.name.empty()) {
            std::cerr << "error: unknown builtin scenario " << dump_name << "\n";
            return 2;
        }
        if (dump_out == "-") {
            navsim::write_scenario(std::cout, scenario);
        } else {
            std::ofstream f(dump_out);
            if (!f) {
                std::cerr << "error: cannot write " << dump_out << "\n";
                return 2;
            }
            navsim::write_scenario(f, scenario);
        }
        return 0;
    }
    return 0;
}
