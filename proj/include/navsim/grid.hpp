#pragma once
// grid.hpp - occupancy grids derived from the obstacle map. Cells are blocked
// when the cell inflated by the agent radius intersects an obstacle (or pokes
// out of the workspace), so every free cell center is reachable by the disc.

#include <cstdint>
#include <vector>

#include "navsim/geom.hpp"
#include "navsim/world.hpp"

namespace navsim {

struct Cell {
    int x = 0;
    int y = 0;
    constexpr bool operator==(const Cell& o) const { return x == o.x && y == o.y; }
    constexpr bool operator!=(const Cell& o) const { return !(*this == o); }
};

class Grid {
public:
    Grid() = default;
    Grid(int width, int height, double cell_size, Vec2 origin)
        : width_(width), height_(height), cell_size_(cell_size), origin_(origin),
          blocked_(static_cast<size_t>(width) * height, 0) {}

    int width() const { return width_; }
    int height() const { return height_; }
    double cell_size() const { return cell_size_; }
    const Vec2& origin() const { return origin_; }
    int cell_count() const { return width_ * height_; }

    bool in_bounds(const Cell& c) const {
        return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
    }
    bool blocked(const Cell& c) const { return blocked_[index(c)] != 0; }
    bool free(const Cell& c) const { return in_bounds(c) && !blocked(c); }
    void set_blocked(const Cell& c, bool b) { blocked_[index(c)] = b ? 1 : 0; }

    size_t index(const Cell& c) const {
        return static_cast<size_t>(c.y) * width_ + c.x;
    }
    Cell cell_at(size_t idx) const {
        return {static_cast<int>(idx % width_), static_cast<int>(idx / width_)};
    }

    Vec2 cell_center(const Cell& c) const {
        return {origin_.x + (c.x + 0.5) * cell_size_, origin_.y + (c.y + 0.5) * cell_size_};
    }
    Cell world_to_cell(const Vec2& p) const {
        return {static_cast<int>(std::floor((p.x - origin_.x) / cell_size_)),
                static_cast<int>(std::floor((p.y - origin_.y) / cell_size_))};
    }

    int free_cell_count() const;

    // Nearest free cell to a world point by scanning outward in rings; returns
    // false when the whole grid is blocked.
    bool nearest_free_cell(const Vec2& p, Cell* out) const;

private:
    int width_ = 0;
    int height_ = 0;
    double cell_size_ = 1.0;
    Vec2 origin_{};
    std::vector<uint8_t> blocked_;
};

// Occupancy grid covering `region` at `resolution`, with obstacle inflation by
// `inflation` (the agent radius). The grid origin is snapped outward onto the
// global lattice of multiples of `resolution`, so crops taken at different
// times agree on cell boundaries.
Grid build_occupancy_grid(const ObstacleMap& map, const Rect& region, double resolution,
                          double inflation);

// Convenience: grid over the whole workspace.
Grid build_occupancy_grid(const ObstacleMap& map, double resolution, double inflation);

}  // namespace navsim
