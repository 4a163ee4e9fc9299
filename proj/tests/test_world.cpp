#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "navsim/rng.hpp"
#include "navsim/world.hpp"

using namespace navsim;

namespace {

AgentState make_agent(int id, Vec2 p, Vec2 v) {
    AgentState s;
    s.id = id;
    s.position = p;
    s.velocity = v;
    s.radius = 0.2;
    return s;
}

}  // namespace

TEST_CASE("step_kinematics clips to the speed bound") {
    WorldConfig cfg;
    AgentState s = make_agent(0, {0, 0}, {0, 0});
    const AgentState next = step_kinematics(s, {2.0, 0.0}, cfg);
    CHECK(next.velocity.x == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(next.velocity.y == 0.0);
}

TEST_CASE("step_kinematics integrates position") {
    WorldConfig cfg;
    AgentState s = make_agent(0, {0, 0}, {1.0, 0.0});
    const AgentState next = step_kinematics(s, {0.0, 0.0}, cfg);
    CHECK(next.position.x == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(next.position.y == 0.0);
}

TEST_CASE("step_kinematics hand-evaluated update") {
    WorldConfig cfg;
    AgentState s = make_agent(0, {0, 0}, {0.5, 0.5});
    const AgentState next = step_kinematics(s, {0.2, -0.1}, cfg);
    CHECK(next.velocity.x == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(next.velocity.y == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(next.velocity.norm() == doctest::Approx(std::sqrt(0.65)).epsilon(1e-12));
    CHECK(next.velocity.norm() < cfg.v_max);
}

TEST_CASE("speed bound holds under random increment sequences") {
    WorldConfig cfg;
    SplitMix64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        AgentState s = make_agent(0, {0, 0}, {0, 0});
        for (int i = 0; i < 200; ++i) {
            const Vec2 dv{rng.uniform(-3, 3), rng.uniform(-3, 3)};
            s = step_kinematics(s, dv, cfg);
            REQUIRE(s.velocity.norm() <= cfg.v_max + 1e-12);
            REQUIRE(std::isfinite(s.heading));
            REQUIRE(s.heading <= kPi);
            REQUIRE(s.heading > -kPi);
        }
    }
}

TEST_CASE("integration is deterministic") {
    WorldConfig cfg;
    AgentState s = make_agent(3, {1.25, -0.5}, {0.33, 0.77});
    s.heading = 0.4;
    const AgentState a = step_kinematics(s, {0.111, -0.222}, cfg);
    const AgentState b = step_kinematics(s, {0.111, -0.222}, cfg);
    CHECK(a.position == b.position);
    CHECK(a.velocity == b.velocity);
    CHECK(a.heading == b.heading);
}

TEST_CASE("collision_check pairs and obstacles") {
    ObstacleMap map;
    map.bounds = {0, 0, 10, 10};
    map.obstacles.push_back({4, 4, 6, 6});

    std::vector<AgentState> states{make_agent(0, {1.0, 1.0}, {}),
                                   make_agent(1, {1.5, 1.0}, {})};
    CHECK(collision_check(states, map).empty());  // 0.5 > 0.4

    states[1].position = {1.39, 1.0};  // 0.39 <= 0.4
    auto events = collision_check(states, map);
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == CollisionEvent::Kind::AgentPair);
    CHECK(events[0].agent_a == 0);
    CHECK(events[0].agent_b == 1);

    states[1].position = {5.0, 5.0};  // center inside the obstacle
    events = collision_check(states, map);
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == CollisionEvent::Kind::Obstacle);
    CHECK(events[0].agent_a == 1);
}

TEST_CASE("collision_check is symmetric in agent order") {
    ObstacleMap map;
    map.bounds = {0, 0, 10, 10};
    SplitMix64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<AgentState> states;
        for (int i = 0; i < 4; ++i) {
            states.push_back(make_agent(i, {rng.uniform(0.5, 9.5), rng.uniform(0.5, 9.5)}, {}));
        }
        auto events = collision_check(states, map);
        std::vector<AgentState> reversed(states.rbegin(), states.rend());
        auto reversed_events = collision_check(reversed, map);
        CHECK(events.size() == reversed_events.size());
        for (const auto& e : events) {
            bool found = false;
            for (const auto& r : reversed_events) {
                if ((r.agent_a == e.agent_a && r.agent_b == e.agent_b) ||
                    (r.agent_a == e.agent_b && r.agent_b == e.agent_a)) {
                    found = true;
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("neighbor_query range, order, cap") {
    WorldConfig cfg;
    std::vector<AgentState> states{make_agent(0, {0, 0}, {})};
    CHECK(neighbor_query(states[0], states, cfg).empty());

    states.push_back(make_agent(1, {5.1, 0}, {}));  // beyond R = 5
    CHECK(neighbor_query(states[0], states, cfg).empty());

    states.clear();
    states.push_back(make_agent(0, {0, 0}, {}));
    for (int i = 1; i <= 12; ++i) {
        states.push_back(make_agent(i, {0.3 * i, 0.0}, {}));
    }
    const auto nbs = neighbor_query(states[0], states, cfg);
    REQUIRE(static_cast<int>(nbs.size()) == cfg.neighbor_cap);
    for (size_t i = 1; i < nbs.size(); ++i) {
        CHECK(distance(nbs[i - 1].position, states[0].position) <=
              distance(nbs[i].position, states[0].position));
    }
    CHECK(nbs.front().id == 1);
    CHECK(nbs.back().id == 10);
}
