#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "navsim/deadlock.hpp"
#include "navsim/rng.hpp"

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

// Feed `steps` identical observations for a static scene.
void feed(DeadlockDetector& det, const std::vector<AgentState>& states,
          const std::vector<std::optional<Vec2>>& targets, int steps) {
    for (int t = 0; t < steps; ++t) det.observe(states, targets, t);
}

}  // namespace

TEST_CASE("trailing means and latest progress") {
    DetectorConfig cfg;
    DeadlockDetector det(1, cfg);
    std::vector<AgentState> states{make_agent(0, {0, 0}, {1, 0})};
    std::vector<std::optional<Vec2>> targets{Vec2{5, 0}};
    det.observe(states, targets, 0);
    CHECK(det.trailing_mean_speed(0) == doctest::Approx(1.0));
    CHECK(det.latest_progress(0) == doctest::Approx(1.0));

    states[0].velocity = {0, 0};
    for (int t = 1; t <= 4; ++t) det.observe(states, targets, t);
    // Mean over exactly min(K, samples) = 5 samples: (1+0+0+0+0)/5.
    CHECK(det.trailing_mean_speed(0) == doctest::Approx(0.2));
    CHECK(det.sample_count(0) == 5);

    for (int t = 5; t <= 30; ++t) det.observe(states, targets, t);
    CHECK(det.sample_count(0) == cfg.window);
    CHECK(det.trailing_mean_speed(0) == doctest::Approx(0.0));
}

TEST_CASE("detect honors the warm-up gate") {
    DetectorConfig cfg;
    WorldConfig wcfg;
    DeadlockDetector det(2, cfg);
    // Two stationary facing agents, outside goal tolerance.
    std::vector<AgentState> states{make_agent(0, {0, 0}, {0, 0}),
                                   make_agent(1, {1, 0}, {0, 0})};
    WaypointList wl0, wl1;
    wl0.points = {{5, 0}};
    wl1.points = {{-5, 0}};
    std::vector<const WaypointList*> lists{&wl0, &wl1};
    std::vector<std::optional<Vec2>> targets{Vec2{5, 0}, Vec2{-5, 0}};
    std::vector<int> locks{0, 0};

    for (int t = 0; t < cfg.t_warm; ++t) {
        det.observe(states, targets, t);
        CHECK(det.detect(states, lists, locks, t, wcfg).empty());
    }
    // Fires by t_warm + window once the buffers are warm.
    bool fired = false;
    for (int t = cfg.t_warm; t <= cfg.t_warm + cfg.window && !fired; ++t) {
        det.observe(states, targets, t);
        fired = !det.detect(states, lists, locks, t, wcfg).empty();
    }
    CHECK(fired);
}

TEST_CASE("detect honors goal, cooldown and lock gates") {
    DetectorConfig cfg;
    WorldConfig wcfg;
    DeadlockDetector det(2, cfg);
    std::vector<AgentState> states{make_agent(0, {0, 0}, {0, 0}),
                                   make_agent(1, {1, 0}, {0, 0})};
    WaypointList wl0, wl1;
    wl0.points = {{5, 0}};
    wl1.points = {{-5, 0}};
    std::vector<const WaypointList*> lists{&wl0, &wl1};
    std::vector<std::optional<Vec2>> targets{Vec2{5, 0}, Vec2{-5, 0}};
    std::vector<int> locks{0, 0};
    feed(det, states, targets, cfg.t_warm + cfg.window + 1);
    const int t = cfg.t_warm + cfg.window + 1;

    SUBCASE("fires and respects the cooldown afterward") {
        auto events = det.detect(states, lists, locks, t, wcfg);
        REQUIRE(!events.empty());
        det.mark_triggered({events[0].agent}, t);
        auto again = det.detect(states, lists, locks, t + 1, wcfg);
        for (const TriggerEvent& e : again) CHECK(e.agent != events[0].agent);
        auto later = det.detect(states, lists, locks, t + cfg.t_cool, wcfg);
        bool found = false;
        for (const TriggerEvent& e : later) found = found || e.agent == events[0].agent;
        CHECK(found);
    }
    SUBCASE("agents within goal tolerance of the waypoint never flag") {
        wl0.points = {{0.1, 0}};  // inside eps_goal of agent 0
        auto events = det.detect(states, lists, locks, t, wcfg);
        for (const TriggerEvent& e : events) CHECK(e.agent != 0);
    }
    SUBCASE("locked agents are skipped") {
        locks[0] = t + 10;
        locks[1] = t + 10;
        CHECK(det.detect(states, lists, locks, t, wcfg).empty());
    }
    SUBCASE("risk preferred over slower triggers and carries the core pair") {
        // Make the pair close mutually: ttc finite and small.
        states[0].velocity = {0.4, 0};
        states[1].velocity = {-0.4, 0};
        det.observe(states, targets, t);
        auto events = det.detect(states, lists, locks, t, wcfg);
        REQUIRE(!events.empty());
        CHECK(events[0].kind == TriggerKind::Risk);
        REQUIRE(events[0].core_pair.has_value());
        CHECK(events[0].core_pair->first == 0);
        CHECK(events[0].core_pair->second == 1);
    }
}

TEST_CASE("waypoint-stuck trigger fires through detect") {
    DetectorConfig cfg;
    WorldConfig wcfg;
    DeadlockDetector det(2, cfg);
    // One slow-but-progressing far agent (no spd/risk), one stuck list.
    std::vector<AgentState> states{make_agent(0, {0, 0}, {0.5, 0}),
                                   make_agent(1, {0, 3}, {0.5, 0})};
    WaypointList wl0, wl1;
    wl0.points = {{5, 0}};
    wl0.last_advance_step = 0;
    wl1.points = {{5, 3}};
    wl1.last_advance_step = 0;
    std::vector<const WaypointList*> lists{&wl0, &wl1};
    std::vector<std::optional<Vec2>> targets{Vec2{5, 0}, Vec2{5, 3}};
    std::vector<int> locks{0, 0};
    const int t = cfg.t_wp + 1;
    feed(det, states, targets, t + 1);
    auto events = det.detect(states, lists, locks, t, wcfg);
    REQUIRE(events.size() == 2);
    CHECK(events[0].kind == TriggerKind::Wp);
    CHECK(events[1].kind == TriggerKind::Wp);
}

TEST_CASE("build_participants closure over slow sensed neighbors") {
    DetectorConfig cfg;
    WorldConfig wcfg;
    DeadlockDetector det(6, cfg);
    // Seed 0 stalled; 1,2,3 slow nearby; 4 fast; 5 finished.
    std::vector<AgentState> states{
        make_agent(0, {0, 0}, {0, 0}),   make_agent(1, {0.8, 0}, {0.01, 0}),
        make_agent(2, {0, 0.8}, {0, 0}), make_agent(3, {1.2, 1.2}, {0.02, 0}),
        make_agent(4, {2, 0}, {1.2, 0}), make_agent(5, {0.5, 0.5}, {0, 0}),
    };
    states[5].mode = AgentMode::Finished;
    std::vector<std::optional<Vec2>> targets(6, Vec2{5, 5});
    feed(det, states, targets, cfg.window + 1);

    TriggerEvent seed;
    seed.agent = 0;
    seed.step = cfg.window + 1;
    seed.kind = TriggerKind::Spd;
    std::vector<int> locks(6, 0);
    const ParticipantSet set = det.build_participants(seed, states, locks, wcfg);
    CHECK(set.agents == std::vector<int>{0, 1, 2, 3});
    CHECK(set.lock_until == seed.step + cfg.t_lock);

    SUBCASE("core pair joins the set") {
        seed.kind = TriggerKind::Risk;
        seed.core_pair = std::make_pair(0, 4);
        const ParticipantSet with_pair = det.build_participants(seed, states, locks, wcfg);
        CHECK(with_pair.agents == std::vector<int>{0, 1, 2, 3, 4});
    }
    SUBCASE("locked agents are excluded") {
        locks[3] = seed.step + 5;
        const ParticipantSet locked = det.build_participants(seed, states, locks, wcfg);
        CHECK(locked.agents == std::vector<int>{0, 1, 2});
    }
    SUBCASE("isolated stalled agent yields a singleton") {
        std::vector<AgentState> lone{make_agent(0, {0, 0}, {0, 0}),
                                     make_agent(1, {20, 20}, {0, 0})};
        DeadlockDetector det2(2, cfg);
        std::vector<std::optional<Vec2>> tg(2, Vec2{5, 5});
        feed(det2, lone, tg, cfg.window + 1);
        const ParticipantSet single = det2.build_participants(seed, lone, {0, 0}, wcfg);
        CHECK(single.agents == std::vector<int>{0});
    }
}

TEST_CASE("identical histories yield identical event lists") {
    DetectorConfig cfg;
    WorldConfig wcfg;
    SplitMix64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<AgentState> states;
        std::vector<std::optional<Vec2>> targets;
        WaypointList wl;
        wl.points = {{9, 9}};
        for (int i = 0; i < 5; ++i) {
            states.push_back(make_agent(i, {rng.uniform(0, 3), rng.uniform(0, 3)},
                                        {rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1)}));
            targets.push_back(Vec2{9, 9});
        }
        std::vector<const WaypointList*> lists(5, &wl);
        std::vector<int> locks(5, 0);

        DeadlockDetector a(5, cfg), b(5, cfg);
        feed(a, states, targets, cfg.t_warm + cfg.window);
        feed(b, states, targets, cfg.t_warm + cfg.window);
        const int t = cfg.t_warm + cfg.window;
        const auto ea = a.detect(states, lists, locks, t, wcfg);
        const auto eb = b.detect(states, lists, locks, t, wcfg);
        REQUIRE(ea.size() == eb.size());
        for (size_t i = 0; i < ea.size(); ++i) {
            CHECK(ea[i].agent == eb[i].agent);
            CHECK(ea[i].kind == eb[i].kind);
        }
    }
}
