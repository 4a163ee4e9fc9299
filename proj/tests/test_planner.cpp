#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "navsim/planner.hpp"
#include "navsim/rng.hpp"
#include "navsim/verify.hpp"

using namespace navsim;

namespace {

Grid empty_grid(int n) { return Grid(n, n, 1.0, {0.0, 0.0}); }

}  // namespace

TEST_CASE("astar straight diagonal on an empty grid") {
    const Grid g = empty_grid(3);
    const AstarResult r = plan_astar(g, {0, 0}, {2, 2});
    REQUIRE(r.ok());
    CHECK(r.cost == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.path.front() == Cell{0, 0});
    CHECK(r.path.back() == Cell{2, 2});
}

TEST_CASE("astar walled-in start reports NoPath, blocked cells invalid") {
    Grid g = empty_grid(5);
    g.set_blocked({1, 0}, true);
    g.set_blocked({1, 1}, true);
    g.set_blocked({0, 1}, true);
    const AstarResult r = plan_astar(g, {0, 0}, {4, 4});
    CHECK(r.status == PlanStatus::NoPath);

    const AstarResult inv = plan_astar(g, {1, 0}, {4, 4});
    CHECK(inv.status == PlanStatus::InvalidCell);
    const AstarResult oob = plan_astar(g, {-1, 0}, {4, 4});
    CHECK(oob.status == PlanStatus::InvalidCell);
}

TEST_CASE("astar cost equals the Dijkstra oracle on random grids") {
    SplitMix64 rng(2024);
    int compared = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 6 + static_cast<int>(rng.below(25));  // up to 30x30
        Grid g(n, n, 1.0, {0.0, 0.0});
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                if (rng.next01() < 0.2) g.set_blocked({x, y}, true);
            }
        }
        const Cell start{static_cast<int>(rng.below(n)), static_cast<int>(rng.below(n))};
        const Cell goal{static_cast<int>(rng.below(n)), static_cast<int>(rng.below(n))};
        if (!g.free(start) || !g.free(goal)) continue;

        const AstarResult r = plan_astar(g, start, goal);
        const double oracle = dijkstra_grid_cost(g, start, goal);
        if (oracle < 0.0) {
            CHECK(r.status == PlanStatus::NoPath);
        } else {
            REQUIRE(r.ok());
            CHECK(r.cost == doctest::Approx(oracle).epsilon(1e-9));
            // Path legality: adjacent steps, free cells, no corner cutting.
            for (size_t i = 1; i < r.path.size(); ++i) {
                const Cell a = r.path[i - 1], b = r.path[i];
                REQUIRE(g.free(b));
                const int dx = b.x - a.x, dy = b.y - a.y;
                REQUIRE(std::abs(dx) <= 1);
                REQUIRE(std::abs(dy) <= 1);
                if (dx != 0 && dy != 0) {
                    REQUIRE(g.free({a.x + dx, a.y}));
                    REQUIRE(g.free({a.x, a.y + dy}));
                }
            }
        }
        ++compared;
    }
    CHECK(compared > 30);
}

TEST_CASE("resample uniform subdivision of a straight segment") {
    const WaypointList wl = resample_polyline({{0, 0}, {4, 0}}, 1.0);
    REQUIRE(wl.points.size() == 5);
    for (int i = 0; i <= 4; ++i) {
        CHECK(wl.points[static_cast<size_t>(i)].x == doctest::Approx(i).epsilon(1e-12));
        CHECK(wl.points[static_cast<size_t>(i)].y == 0.0);
    }
}

TEST_CASE("resample of a path shorter than the spacing keeps start and goal") {
    const WaypointList wl = resample_polyline({{0, 0}, {0.4, 0}}, 1.0);
    REQUIRE(wl.points.size() == 2);
    CHECK(wl.points[0] == Vec2{0, 0});
    CHECK(wl.points[1] == Vec2{0.4, 0});
}

TEST_CASE("resample places L-shaped points by arc length") {
    // 3 m + 3 m legs, spacing 2 -> samples at arc lengths 0, 2, 4, 6.
    const WaypointList wl = resample_polyline({{0, 0}, {3, 0}, {3, 3}}, 2.0);
    REQUIRE(wl.points.size() == 4);
    CHECK(wl.points[0] == Vec2{0, 0});
    CHECK(wl.points[1].x == doctest::Approx(2.0));
    CHECK(wl.points[1].y == doctest::Approx(0.0));
    CHECK(wl.points[2].x == doctest::Approx(3.0));
    CHECK(wl.points[2].y == doctest::Approx(1.0));
    CHECK(wl.points[3] == Vec2{3, 3});
}

TEST_CASE("resample covers the full arc length with bounded gaps") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Vec2> poly{{0, 0}};
        double total = 0.0;
        const int segs = 1 + static_cast<int>(rng.below(6));
        for (int i = 0; i < segs; ++i) {
            const Vec2 step{rng.uniform(-3, 3), rng.uniform(-3, 3)};
            if (step.norm() < 1e-6) continue;
            total += step.norm();
            poly.push_back(poly.back() + step);
        }
        if (poly.size() < 2) continue;
        const double spacing = rng.uniform(0.3, 2.0);
        const WaypointList wl = resample_polyline(poly, spacing);
        REQUIRE(wl.points.front() == poly.front());
        REQUIRE(wl.points.back() == poly.back());
        // Arc positions are monotone with gaps <= spacing; their total equals
        // the polyline length.
        const int intervals = static_cast<int>(wl.points.size()) - 1;
        CHECK(total / intervals <= spacing + 1e-9);
        for (size_t i = 1; i < wl.points.size(); ++i) {
            CHECK(distance(wl.points[i - 1], wl.points[i]) <= spacing + 1e-9);
        }
    }
}

TEST_CASE("waypoint_advance reach semantics") {
    WaypointList wl;
    wl.points = {{0, 0}, {1, 0}, {1.1, 0}, {1.2, 0}, {5, 0}};
    wl.reach_threshold = 0.3;

    waypoint_advance(wl, {0.0, 0.0}, 3);  // exactly on the waypoint
    CHECK(wl.active_index == 1);
    CHECK(wl.last_advance_step == 3);

    waypoint_advance(wl, {1.0 - 0.3 - 1e-6, 0.0}, 4);  // just outside reach
    CHECK(wl.active_index == 1);
    CHECK(wl.last_advance_step == 3);

    // Standing inside a cluster of near waypoints advances one index per call.
    waypoint_advance(wl, {1.05, 0.0}, 5);
    CHECK(wl.active_index == 2);
    waypoint_advance(wl, {1.05, 0.0}, 6);
    CHECK(wl.active_index == 3);
    waypoint_advance(wl, {1.05, 0.0}, 7);
    CHECK(wl.active_index == 4);
    waypoint_advance(wl, {1.05, 0.0}, 8);  // far waypoint, no advance
    CHECK(wl.active_index == 4);
    CHECK(wl.last_advance_step == 7);
}

TEST_CASE("active index is non-decreasing over random tracking runs") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        WaypointList wl;
        for (int i = 0; i < 8; ++i) wl.points.push_back({rng.uniform(0, 5), rng.uniform(0, 5)});
        wl.reach_threshold = 0.4;
        size_t prev = 0;
        Vec2 pos{rng.uniform(0, 5), rng.uniform(0, 5)};
        for (int step = 0; step < 100 && !wl.exhausted(); ++step) {
            pos = pos + (wl.active() - pos) * 0.3;
            waypoint_advance(wl, pos, step);
            REQUIRE(wl.active_index >= prev);
            prev = wl.active_index;
        }
    }
}
