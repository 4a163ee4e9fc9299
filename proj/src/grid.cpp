#include "navsim/grid.hpp"

#include <algorithm>
#include <cmath>

namespace navsim {

int Grid::free_cell_count() const {
    int n = 0;
    for (uint8_t b : blocked_) n += (b == 0);
    return n;
}

bool Grid::nearest_free_cell(const Vec2& p, Cell* out) const {
    const Cell c0 = world_to_cell(p);
    const int max_ring = std::max(width_, height_);
    double best_d = -1.0;
    Cell best{};
    for (int ring = 0; ring <= max_ring; ++ring) {
        bool any_in_bounds = false;
        for (int dy = -ring; dy <= ring; ++dy) {
            for (int dx = -ring; dx <= ring; ++dx) {
                if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                const Cell c{c0.x + dx, c0.y + dy};
                if (!in_bounds(c)) continue;
                any_in_bounds = true;
                if (blocked(c)) continue;
                const double d = distance(cell_center(c), p);
                if (best_d < 0.0 || d < best_d ||
                    (d == best_d && (c.y < best.y || (c.y == best.y && c.x < best.x)))) {
                    best_d = d;
                    best = c;
                }
            }
        }
        // One extra ring after the first hit: a cell in the next ring can
        // still be closer in euclidean distance.
        if (best_d >= 0.0 && ring > 0 && (ring - 1) * cell_size_ > best_d) break;
        if (!any_in_bounds && ring > 0 && best_d >= 0.0) break;
        if (!any_in_bounds && ring > std::max(width_, height_)) break;
    }
    if (best_d < 0.0) return false;
    *out = best;
    return true;
}

Grid build_occupancy_grid(const ObstacleMap& map, const Rect& region, double resolution,
                          double inflation) {
    // Snap the grid onto the global lattice so overlapping crops align.
    const double x0 = std::floor(region.xmin / resolution) * resolution;
    const double y0 = std::floor(region.ymin / resolution) * resolution;
    const int w = std::max(1, static_cast<int>(std::ceil((region.xmax - x0) / resolution - 1e-9)));
    const int h = std::max(1, static_cast<int>(std::ceil((region.ymax - y0) / resolution - 1e-9)));

    Grid grid(w, h, resolution, {x0, y0});
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Cell c{x, y};
            const Vec2 lo{x0 + x * resolution, y0 + y * resolution};
            const Rect cell_rect{lo.x, lo.y, lo.x + resolution, lo.y + resolution};
            const Rect inflated = cell_rect.inflated(inflation);
            bool blocked = inflated.xmin < map.bounds.xmin || inflated.xmax > map.bounds.xmax ||
                           inflated.ymin < map.bounds.ymin || inflated.ymax > map.bounds.ymax;
            if (!blocked) {
                for (const Rect& o : map.obstacles) {
                    if (inflated.intersects(o)) {
                        blocked = true;
                        break;
                    }
                }
            }
            grid.set_blocked(c, blocked);
        }
    }
    return grid;
}

Grid build_occupancy_grid(const ObstacleMap& map, double resolution, double inflation) {
    return build_occupancy_grid(map, map.bounds, resolution, inflation);
}

}  // namespace navsim
