#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "navsim/pnr.hpp"
#include "navsim/rng.hpp"
#include "navsim/verify.hpp"

using namespace navsim;

namespace {

// Subgrid from ASCII rows ('.' free, '#' blocked); row 0 is y = 0.
Subgrid from_ascii(const std::vector<std::string>& rows) {
    Subgrid sg;
    const int h = static_cast<int>(rows.size());
    const int w = static_cast<int>(rows[0].size());
    sg.grid = Grid(w, h, 1.0, {0.0, 0.0});
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            sg.grid.set_blocked({x, y}, rows[static_cast<size_t>(y)][static_cast<size_t>(x)] == '#');
        }
    }
    label_components(sg);
    return sg;
}

LocalInstance make_instance(const Subgrid& sg, const std::vector<Cell>& starts,
                            const std::vector<Cell>& targets) {
    LocalInstance inst;
    inst.subgrid = sg;
    for (size_t i = 0; i < starts.size(); ++i) inst.agent_ids.push_back(static_cast<int>(i));
    inst.starts = starts;
    inst.targets = targets;
    return inst;
}

}  // namespace

TEST_CASE("single agent on an empty 3x3 crop walks the shortest path") {
    const Subgrid sg = from_ascii({"...", "...", "..."});
    const LocalInstance inst = make_instance(sg, {{0, 0}}, {{2, 2}});
    const SolveResult res = pnr_solve(inst);
    REQUIRE(res.ok());
    CHECK(!verify_plan(inst, res.plan).has_value());
    CHECK(res.plan.horizon() == 5);  // 4 moves plus the start row
    CHECK(res.stats.advances == 4);
    CHECK(res.stats.pushes == 0);
    CHECK(res.stats.swaps == 0);
}

TEST_CASE("two agents swap across a corridor with a spur") {
    // 3-cell corridor with a two-cell spur off the middle: 5 vertices, and
    // with 2 agents that leaves 3 blanks.
    const Subgrid sg = from_ascii({
        "...",
        "#.#",
        "#.#",
    });
    const LocalInstance inst = make_instance(sg, {{0, 0}, {2, 0}}, {{2, 0}, {0, 0}});
    REQUIRE(joint_bfs_solvable(sg, inst.starts, inst.targets));
    const SolveResult res = pnr_solve(inst);
    REQUIRE(res.ok());
    CHECK(!verify_plan(inst, res.plan).has_value());
    CHECK(res.plan.steps.back()[0] == Cell{2, 0});
    CHECK(res.plan.steps.back()[1] == Cell{0, 0});
    CHECK(res.stats.swaps + res.stats.rotates + res.stats.pushes > 0);
}

TEST_CASE("two agents swapping on a bare 3-cell path lack blanks") {
    const Subgrid sg = from_ascii({"..."});
    const LocalInstance inst = make_instance(sg, {{0, 0}, {2, 0}}, {{2, 0}, {0, 0}});
    const SolveResult res = pnr_solve(inst);
    CHECK(res.status == SolveStatus::PreconditionBlanks);
}

TEST_CASE("order swap on a path with enough blanks is unsolvable") {
    const Subgrid sg = from_ascii({"....."});
    const LocalInstance inst = make_instance(sg, {{0, 0}, {2, 0}}, {{2, 0}, {0, 0}});
    const SolveResult res = pnr_solve(inst);
    CHECK(res.status == SolveStatus::Unsolvable);
    CHECK(!joint_bfs_solvable(sg, inst.starts, inst.targets));
}

TEST_CASE("primitive_push shifts occupants toward the blank tail") {
    const Subgrid sg = from_ascii({"....."});
    SUBCASE("unit shift") {
        Configuration cfg = Configuration::from_starts(sg, {{0, 0}});
        MoveTrace trace;
        CHECK(primitive_push(sg, cfg, {{0, 0}, {1, 0}}, &trace) == PrimitiveStatus::Ok);
        CHECK(cfg.agent_cell[0] == Cell{1, 0});
        CHECK(cfg.blank(sg, {0, 0}));
        CHECK(trace.size() == 1);
    }
    SUBCASE("chain of three occupants") {
        Configuration cfg = Configuration::from_starts(sg, {{0, 0}, {1, 0}, {2, 0}});
        MoveTrace trace;
        CHECK(primitive_push(sg, cfg, {{0, 0}, {1, 0}, {2, 0}, {3, 0}}, &trace) ==
              PrimitiveStatus::Ok);
        CHECK(trace.size() == 3);
        CHECK(cfg.blank(sg, {0, 0}));
        CHECK(cfg.agent_cell[0] == Cell{1, 0});
        CHECK(cfg.agent_cell[1] == Cell{2, 0});
        CHECK(cfg.agent_cell[2] == Cell{3, 0});
    }
    SUBCASE("paths crossing a finished agent are rejected") {
        Configuration cfg = Configuration::from_starts(sg, {{0, 0}, {1, 0}});
        cfg.finished[1] = 1;
        MoveTrace trace;
        CHECK(primitive_push(sg, cfg, {{0, 0}, {1, 0}, {2, 0}}, &trace) ==
              PrimitiveStatus::Rejected);
    }
    SUBCASE("tail must be blank") {
        Configuration cfg = Configuration::from_starts(sg, {{0, 0}, {1, 0}});
        MoveTrace trace;
        CHECK(primitive_push(sg, cfg, {{0, 0}, {1, 0}}, &trace) == PrimitiveStatus::Rejected);
    }
}

TEST_CASE("primitive_rotate cyclic shift") {
    const Subgrid sg = from_ascii({"..", ".."});
    const std::vector<Cell> cycle{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

    SUBCASE("three agents advance one vertex each") {
        Configuration cfg = Configuration::from_starts(sg, {{0, 0}, {1, 0}, {1, 1}});
        MoveTrace trace;
        REQUIRE(primitive_rotate(sg, cfg, cycle, &trace) == PrimitiveStatus::Ok);
        CHECK(trace.size() == 1);
        CHECK(cfg.agent_cell[0] == Cell{1, 0});
        CHECK(cfg.agent_cell[1] == Cell{1, 1});
        CHECK(cfg.agent_cell[2] == Cell{0, 1});
    }
    SUBCASE("fully occupied cycle is rejected") {
        Configuration cfg =
            Configuration::from_starts(sg, {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
        MoveTrace trace;
        CHECK(primitive_rotate(sg, cfg, cycle, &trace) == PrimitiveStatus::NoBlankOnCycle);
    }
    SUBCASE("rotating twice equals a single rotation by two slots") {
        Configuration cfg = Configuration::from_starts(sg, {{0, 0}, {1, 0}});
        MoveTrace trace;
        REQUIRE(primitive_rotate(sg, cfg, cycle, &trace) == PrimitiveStatus::Ok);
        REQUIRE(primitive_rotate(sg, cfg, cycle, &trace) == PrimitiveStatus::Ok);
        CHECK(cfg.agent_cell[0] == Cell{1, 1});
        CHECK(cfg.agent_cell[1] == Cell{0, 1});
    }
    SUBCASE("cycles through finished agents are rejected") {
        Configuration cfg = Configuration::from_starts(sg, {{0, 0}, {1, 0}});
        cfg.finished[1] = 1;
        MoveTrace trace;
        CHECK(primitive_rotate(sg, cfg, cycle, &trace) == PrimitiveStatus::Rejected);
    }
}

TEST_CASE("primitive_swap exchanges adjacent agents") {
    SUBCASE("on a 4-cycle with two blanks in at most 6 moves") {
        const Subgrid sg = from_ascii({"..", ".."});
        Configuration cfg = Configuration::from_starts(sg, {{0, 0}, {1, 0}});
        MoveTrace trace;
        REQUIRE(primitive_swap(sg, cfg, 0, 1, &trace) == PrimitiveStatus::Ok);
        CHECK(cfg.agent_cell[0] == Cell{1, 0});
        CHECK(cfg.agent_cell[1] == Cell{0, 0});
        CHECK(trace.size() <= 6);
    }
    SUBCASE("third parties are restored") {
        const Subgrid sg = from_ascii({"...", "...", "..."});
        Configuration cfg =
            Configuration::from_starts(sg, {{0, 1}, {1, 1}, {2, 1}, {0, 0}});
        MoveTrace trace;
        REQUIRE(primitive_swap(sg, cfg, 0, 1, &trace) == PrimitiveStatus::Ok);
        CHECK(cfg.agent_cell[0] == Cell{1, 1});
        CHECK(cfg.agent_cell[1] == Cell{0, 1});
        CHECK(cfg.agent_cell[2] == Cell{2, 1});
        CHECK(cfg.agent_cell[3] == Cell{0, 0});
    }
    SUBCASE("finished partner is rejected") {
        const Subgrid sg = from_ascii({"..", ".."});
        Configuration cfg = Configuration::from_starts(sg, {{0, 0}, {1, 0}});
        cfg.finished[1] = 1;
        MoveTrace trace;
        CHECK(primitive_swap(sg, cfg, 0, 1, &trace) == PrimitiveStatus::Rejected);
    }
    SUBCASE("a single-edge block admits no exchange") {
        const Subgrid sg = from_ascii({".."});
        Configuration cfg = Configuration::from_starts(sg, {{0, 0}, {1, 0}});
        MoveTrace trace;
        CHECK(primitive_swap(sg, cfg, 0, 1, &trace) == PrimitiveStatus::NoCycleWithBlank);
    }
    SUBCASE("swap at a star hub without any cycle") {
        // Plus shape: hub (1,1) with arms; no cycle anywhere.
        const Subgrid sg = from_ascii({"#.#", "...", "#.#"});
        Configuration cfg = Configuration::from_starts(sg, {{0, 1}, {1, 1}});
        MoveTrace trace;
        REQUIRE(primitive_swap(sg, cfg, 0, 1, &trace) == PrimitiveStatus::Ok);
        CHECK(cfg.agent_cell[0] == Cell{1, 1});
        CHECK(cfg.agent_cell[1] == Cell{0, 1});
    }
}

TEST_CASE("verify_plan catches hand-built violations") {
    const Subgrid sg = from_ascii({"....", "...."});
    const LocalInstance inst =
        make_instance(sg, {{0, 0}, {3, 0}}, {{1, 0}, {2, 0}});

    SUBCASE("solver output verifies clean") {
        const SolveResult res = pnr_solve(inst);
        REQUIRE(res.ok());
        CHECK(!verify_plan(inst, res.plan).has_value());
    }
    SUBCASE("vertex conflict is reported with its step") {
        JointPlan plan;
        plan.agent_ids = {0, 1};
        plan.freeze_step = {-1, -1};
        plan.steps = {{{0, 0}, {3, 0}}, {{1, 0}, {2, 0}}, {{1, 0}, {2, 0}}, {{2, 0}, {2, 0}}};
        const auto v = verify_plan(inst, plan);
        REQUIRE(v.has_value());
        CHECK(v->kind == PlanViolation::Kind::VertexConflict);
        CHECK(v->step == 3);
    }
    SUBCASE("adjacent exchange is an edge swap") {
        JointPlan plan;
        plan.agent_ids = {0, 1};
        plan.freeze_step = {-1, -1};
        plan.steps = {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}};
        LocalInstance inst2 = make_instance(sg, {{0, 0}, {1, 0}}, {{1, 0}, {0, 0}});
        const auto v = verify_plan(inst2, plan);
        REQUIRE(v.has_value());
        CHECK(v->kind == PlanViolation::Kind::EdgeSwap);
        CHECK(v->step == 1);
    }
    SUBCASE("non-adjacent hop is rejected") {
        JointPlan plan;
        plan.agent_ids = {0, 1};
        plan.freeze_step = {-1, -1};
        plan.steps = {{{0, 0}, {3, 0}}, {{2, 0}, {3, 0}}};
        const auto v = verify_plan(inst, plan);
        REQUIRE(v.has_value());
        CHECK(v->kind == PlanViolation::Kind::NonAdjacent);
    }
}

TEST_CASE("mini oracle sweep (subset of the acceptance sweep)") {
    const OracleSweepOutcome sweep = run_pnr_oracle_sweep(6, 8, 300, 0xFEED);
    CHECK(sweep.instances_2 > 0);
    CHECK(sweep.instances_3 == 300);
    CHECK(sweep.mismatches == 0);
    CHECK(sweep.plan_violations == 0);
    CHECK(sweep.invariant_violations == 0);
    CHECK(sweep.potential_violations == 0);
}

TEST_CASE("plan serialization round trip") {
    const Subgrid sg = from_ascii({"...", "..#"});
    const LocalInstance inst = make_instance(sg, {{0, 0}, {2, 0}}, {{1, 1}, {0, 1}});
    const SolveResult res = pnr_solve(inst);
    REQUIRE(res.ok());

    std::stringstream buf;
    write_instance(buf, inst);
    write_plan(buf, res.plan);

    LocalInstance inst2;
    JointPlan plan2;
    REQUIRE(read_instance(buf, &inst2));
    REQUIRE(read_plan(buf, &plan2));
    CHECK(inst2.starts == inst.starts);
    CHECK(inst2.targets == inst.targets);
    CHECK(inst2.agent_ids == inst.agent_ids);
    CHECK(plan2.steps == res.plan.steps);
    CHECK(plan2.freeze_step == res.plan.freeze_step);
    CHECK(!verify_plan(inst2, plan2).has_value());
}
