#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "navsim/policy.hpp"
#include "navsim/rng.hpp"

using namespace navsim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

AgentState make_agent(int id, Vec2 p, Vec2 v) {
    AgentState s;
    s.id = id;
    s.position = p;
    s.velocity = v;
    s.radius = 0.2;
    return s;
}

Vec2 reflect_x(const Vec2& v) { return {v.x, -v.y}; }

}  // namespace

TEST_CASE("desired_velocity direction, degeneracy, cap") {
    const auto v = desired_velocity({0, 0}, {3, 4}, 1.0, 1.5, 0.3);
    REQUIRE(v.has_value());
    CHECK(v->x == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(v->y == doctest::Approx(0.8).epsilon(1e-12));

    CHECK(!desired_velocity({0, 0}, {0.15, 0}, 1.0, 1.5, 0.3).has_value());

    const auto capped = desired_velocity({0, 0}, {10, 0}, 2.0, 1.5, 0.3);
    REQUIRE(capped.has_value());
    CHECK(capped->norm() == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("ttc_pair piecewise closed form") {
    const double eps = 1e-9;
    CHECK(ttc_pair({2, 0}, {-1, 0}, eps) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::isinf(ttc_pair({2, 0}, {1, 0}, eps)));
    CHECK(ttc_pair({2, 1}, {-1, -0.5}, eps) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::isinf(ttc_pair({1, 1}, {0, 0}, eps)));
}

TEST_CASE("dmin_pair closed form") {
    const double eps = 1e-9;
    double ttc = ttc_pair({2, 0}, {-1, 0}, eps);
    CHECK(dmin_pair({2, 0}, {-1, 0}, ttc) == doctest::Approx(0.0));
    ttc = ttc_pair({2, 0}, {1, 0}, eps);
    CHECK(dmin_pair({2, 0}, {1, 0}, ttc) == doctest::Approx(2.0));
    ttc = ttc_pair({3, 1}, {-1, 0}, eps);
    CHECK(ttc == doctest::Approx(3.0));
    CHECK(dmin_pair({3, 1}, {-1, 0}, ttc) == doctest::Approx(1.0));
}

TEST_CASE("build_observation geometry and risk") {
    WorldConfig wcfg;
    PolicyConfig pcfg;
    const AgentState ego = make_agent(0, {0, 0}, {0, 0});

    SUBCASE("no neighbors") {
        const Observation obs = build_observation(ego, {}, {3, 0}, wcfg, pcfg);
        CHECK(obs.neighbors.empty());
        CHECK(obs.self.combined_radius == doctest::Approx(0.4));
        CHECK(obs.self.desired_velocity.x == doctest::Approx(1.0));
    }

    SUBCASE("tangent rays at the hand-computed half angle") {
        const AgentState nb = make_agent(1, {2, 0}, {0, 0});
        const Observation obs = build_observation(ego, {nb}, {3, 0}, wcfg, pcfg);
        REQUIRE(obs.neighbors.size() == 1);
        const NeighborDescriptor& d = obs.neighbors[0];
        const double half = std::asin(0.4 / 2.0);  // ~0.2014 rad
        CHECK(d.left_ray.x == doctest::Approx(std::cos(half)).epsilon(1e-12));
        CHECK(d.left_ray.y == doctest::Approx(std::sin(half)).epsilon(1e-12));
        CHECK(d.right_ray.x == doctest::Approx(std::cos(half)).epsilon(1e-12));
        CHECK(d.right_ray.y == doctest::Approx(-std::sin(half)).epsilon(1e-12));
        CHECK(d.distance == doctest::Approx(2.0));
        CHECK(d.apex == nb.velocity);
    }

    SUBCASE("risk follows 1/(ttc+0.2)") {
        // Closing at 2 m/s from 2 m with combined radius 0.4: contact at 0.8 s.
        const AgentState nb = make_agent(1, {2, 0}, {-2, 0});
        const Observation obs = build_observation(ego, {nb}, {3, 0}, wcfg, pcfg);
        REQUIRE(obs.neighbors.size() == 1);
        CHECK(obs.neighbors[0].ttc == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(obs.neighbors[0].risk == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("overlap falls back to the half-plane with saturated risk") {
        const AgentState nb = make_agent(1, {0.3, 0}, {0, 0});
        const Observation obs = build_observation(ego, {nb}, {3, 0}, wcfg, pcfg);
        REQUIRE(obs.neighbors.size() == 1);
        const NeighborDescriptor& d = obs.neighbors[0];
        CHECK(d.risk == doctest::Approx(5.0));
        CHECK(d.ttc == 0.0);
        CHECK(dot(d.left_ray, Vec2{1, 0}) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(dot(d.right_ray, Vec2{1, 0}) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("risk is strictly decreasing in ttc with pinned endpoints") {
    WorldConfig wcfg;
    PolicyConfig pcfg;
    const AgentState ego = make_agent(0, {0, 0}, {0, 0});
    double prev_risk = 5.0 + 1.0;
    for (double speed : {4.0, 2.0, 1.0, 0.5, 0.25}) {
        const AgentState nb = make_agent(1, {2, 0}, {-speed, 0});
        const Observation obs = build_observation(ego, {nb}, {3, 0}, wcfg, pcfg);
        REQUIRE(obs.neighbors[0].risk < prev_risk);
        prev_risk = obs.neighbors[0].risk;
    }
    // Endpoints: overlap -> 5, receding -> 0.
    const AgentState on_top = make_agent(1, {0.2, 0}, {0, 0});
    CHECK(build_observation(ego, {on_top}, {3, 0}, wcfg, pcfg).neighbors[0].risk == 5.0);
    const AgentState receding = make_agent(1, {2, 0}, {1, 0});
    CHECK(build_observation(ego, {receding}, {3, 0}, wcfg, pcfg).neighbors[0].risk == 0.0);
}

TEST_CASE("reactive_policy tracks the desired velocity with no neighbors") {
    WorldConfig wcfg;
    PolicyConfig pcfg;
    SelfObservation self;
    self.velocity = {0, 0};
    self.desired_velocity = {1, 0};
    const PolicyAction a = reactive_policy(self, {}, pcfg, wcfg);
    CHECK(a.dv.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.dv.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("reactive_policy brakes when the feasible set is empty") {
    WorldConfig wcfg;
    PolicyConfig pcfg;
    const AgentState ego = make_agent(0, {0, 0}, {0.5, 0.2});
    // Surround the ego with overlapping neighbors: every direction blocked.
    std::vector<AgentState> ring;
    for (int k = 0; k < 6; ++k) {
        const double angle = 2.0 * kPi * k / 6.0;
        ring.push_back(make_agent(k + 1, {0.35 * std::cos(angle), 0.35 * std::sin(angle)},
                                  {-0.3 * std::cos(angle), -0.3 * std::sin(angle)}));
    }
    const Observation obs = build_observation(ego, ring, {3, 0}, wcfg, pcfg);
    const PolicyAction a = reactive_policy(obs.self, obs.neighbors, pcfg, wcfg);
    CHECK(a.dv.x == doctest::Approx(-ego.velocity.x));
    CHECK(a.dv.y == doctest::Approx(-ego.velocity.y));
}

TEST_CASE("head-on pair produces opposite lateral corrections") {
    WorldConfig wcfg;
    PolicyConfig pcfg;
    const AgentState a = make_agent(0, {0, 0}, {1, 0});
    const AgentState b = make_agent(1, {3, 0}, {-1, 0});
    const Observation oa = build_observation(a, {b}, {6, 0}, wcfg, pcfg);
    const Observation ob = build_observation(b, {a}, {-3, 0}, wcfg, pcfg);
    const Vec2 dva = reactive_policy(oa.self, oa.neighbors, pcfg, wcfg).dv;
    const Vec2 dvb = reactive_policy(ob.self, ob.neighbors, pcfg, wcfg).dv;
    // The scene maps to itself under a 180-degree rotation, so the actions
    // are opposite and laterally biased with equal magnitude.
    CHECK(dva.x == doctest::Approx(-dvb.x).epsilon(1e-9));
    CHECK(dva.y == doctest::Approx(-dvb.y).epsilon(1e-9));
    CHECK(std::abs(dva.y) > 0.0);
}

TEST_CASE("mirror symmetry of the policy across the x axis") {
    WorldConfig wcfg;
    PolicyConfig pcfg;
    SplitMix64 rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        const AgentState ego =
            make_agent(0, {rng.uniform(-1, 1), rng.uniform(-1, 1)},
                       {rng.uniform(-1, 1), rng.uniform(-1, 1)});
        std::vector<AgentState> nbs;
        const int k = 1 + static_cast<int>(rng.below(4));
        for (int i = 0; i < k; ++i) {
            nbs.push_back(make_agent(i + 1,
                                     {ego.position.x + rng.uniform(-3, 3),
                                      ego.position.y + rng.uniform(-3, 3)},
                                     {rng.uniform(-1, 1), rng.uniform(-1, 1)}));
        }
        const Vec2 waypoint{ego.position.x + rng.uniform(-4, 4),
                            ego.position.y + rng.uniform(-4, 4)};

        AgentState ego_m = ego;
        ego_m.position = reflect_x(ego.position);
        ego_m.velocity = reflect_x(ego.velocity);
        std::vector<AgentState> nbs_m;
        for (const AgentState& nb : nbs) {
            AgentState m = nb;
            m.position = reflect_x(nb.position);
            m.velocity = reflect_x(nb.velocity);
            nbs_m.push_back(m);
        }

        const Observation obs = build_observation(ego, nbs, waypoint, wcfg, pcfg);
        const Observation obs_m =
            build_observation(ego_m, nbs_m, reflect_x(waypoint), wcfg, pcfg);
        const Vec2 dv = reactive_policy(obs.self, obs.neighbors, pcfg, wcfg).dv;
        const Vec2 dv_m = reactive_policy(obs_m.self, obs_m.neighbors, pcfg, wcfg).dv;
        REQUIRE(dv_m.x == doctest::Approx(dv.x).epsilon(1e-9));
        REQUIRE(dv_m.y == doctest::Approx(-dv.y).epsilon(1e-9));
    }
}

TEST_CASE("rotation equivariance of the policy") {
    WorldConfig wcfg;
    PolicyConfig pcfg;
    SplitMix64 rng(777);
    for (int trial = 0; trial < 200; ++trial) {
        const double angle = rng.uniform(0, 2 * kPi);
        const AgentState ego =
            make_agent(0, {rng.uniform(-1, 1), rng.uniform(-1, 1)},
                       {rng.uniform(-1, 1), rng.uniform(-1, 1)});
        std::vector<AgentState> nbs;
        const int k = 1 + static_cast<int>(rng.below(4));
        for (int i = 0; i < k; ++i) {
            nbs.push_back(make_agent(i + 1,
                                     {ego.position.x + rng.uniform(-3, 3),
                                      ego.position.y + rng.uniform(-3, 3)},
                                     {rng.uniform(-1, 1), rng.uniform(-1, 1)}));
        }
        const Vec2 waypoint{ego.position.x + rng.uniform(-4, 4),
                            ego.position.y + rng.uniform(-4, 4)};

        AgentState ego_r = ego;
        ego_r.position = rotated(ego.position, angle);
        ego_r.velocity = rotated(ego.velocity, angle);
        std::vector<AgentState> nbs_r;
        for (const AgentState& nb : nbs) {
            AgentState r = nb;
            r.position = rotated(nb.position, angle);
            r.velocity = rotated(nb.velocity, angle);
            nbs_r.push_back(r);
        }

        const Observation obs = build_observation(ego, nbs, waypoint, wcfg, pcfg);
        const Observation obs_r =
            build_observation(ego_r, nbs_r, rotated(waypoint, angle), wcfg, pcfg);
        const Vec2 dv = rotated(reactive_policy(obs.self, obs.neighbors, pcfg, wcfg).dv, angle);
        const Vec2 dv_r = reactive_policy(obs_r.self, obs_r.neighbors, pcfg, wcfg).dv;
        REQUIRE(dv_r.x == doctest::Approx(dv.x).epsilon(1e-7));
        REQUIRE(dv_r.y == doctest::Approx(dv.y).epsilon(1e-7));
    }
}

TEST_CASE("two reciprocal agents never collide head-on in open space") {
    WorldConfig wcfg;
    PolicyConfig pcfg;
    SplitMix64 rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        const double offset = 0.05 + rng.uniform(0.0, 0.5);
        AgentState a = make_agent(0, {0, 0}, {0, 0});
        AgentState b = make_agent(1, {6, offset}, {0, 0});
        const Vec2 goal_a{12, 0};
        const Vec2 goal_b{-6, offset};
        double min_dist = distance(a.position, b.position);
        for (int step = 0; step < 1000; ++step) {
            const Observation oa = build_observation(a, {b}, goal_a, wcfg, pcfg);
            const Observation ob = build_observation(b, {a}, goal_b, wcfg, pcfg);
            const Vec2 dva = reactive_policy(oa.self, oa.neighbors, pcfg, wcfg).dv;
            const Vec2 dvb = reactive_policy(ob.self, ob.neighbors, pcfg, wcfg).dv;
            a = step_kinematics(a, dva, wcfg);
            b = step_kinematics(b, dvb, wcfg);
            min_dist = std::min(min_dist, distance(a.position, b.position));
        }
        REQUIRE(min_dist > 0.4);
    }
}

TEST_CASE("step_reward terms") {
    WorldConfig wcfg;
    PolicyConfig pcfg;
    RewardWeights w;

    AgentState prev = make_agent(0, {0, 0}, {1, 0});
    AgentState next = prev;
    next.position = {0.1, 0};

    SUBCASE("pure progress") {
        const double r = step_reward(prev, next, {5, 0}, {}, w, false, pcfg, wcfg);
        CHECK(r == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("collision penalty contributes -eta") {
        const double r0 = step_reward(prev, next, {5, 0}, {}, w, false, pcfg, wcfg);
        const double r1 = step_reward(prev, next, {5, 0}, {}, w, true, pcfg, wcfg);
        CHECK(r0 - r1 == doctest::Approx(10.0).epsilon(1e-12));
    }
    SUBCASE("penalties vanish for a receding neighbor") {
        const AgentState nb = make_agent(1, {3, 0}, {1.2, 0});  // moving away faster
        const Observation obs = build_observation(prev, {nb}, {5, 0}, wcfg, pcfg);
        REQUIRE(std::isinf(obs.neighbors[0].ttc));
        const double r = step_reward(prev, next, {5, 0}, obs.neighbors, w, false, pcfg, wcfg);
        CHECK(r == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("imminent contact is penalized") {
        const AgentState nb = make_agent(1, {0.6, 0}, {-1.5, 0});
        const Observation obs = build_observation(prev, {nb}, {5, 0}, wcfg, pcfg);
        const double r = step_reward(prev, next, {5, 0}, obs.neighbors, w, false, pcfg, wcfg);
        CHECK(r < step_reward(prev, next, {5, 0}, {}, w, false, pcfg, wcfg));
    }
}
