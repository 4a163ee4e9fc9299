#pragma once
// movingai.hpp - import of MovingAI-style .map / .scen files for standalone
// solver benchmarking.

#include <iosfwd>
#include <string>
#include <vector>

#include "navsim/mapf.hpp"

namespace navsim {

struct MovingAiMap {
    int width = 0;
    int height = 0;
    std::vector<std::string> rows;  // row 0 = first map line

    bool passable(int x, int y) const {
        if (x < 0 || x >= width || y < 0 || y >= height) return false;
        const char c = rows[static_cast<size_t>(y)][static_cast<size_t>(x)];
        return c == '.' || c == 'G';
    }
};

struct ScenEntry {
    int bucket = 0;
    std::string map_name;
    int width = 0;
    int height = 0;
    int start_x = 0;
    int start_y = 0;
    int goal_x = 0;
    int goal_y = 0;
    double optimal_length = 0.0;
};

bool load_movingai_map(std::istream& is, MovingAiMap* out, std::string* error);
bool load_movingai_scen(std::istream& is, std::vector<ScenEntry>* out, std::string* error);

// Local instance over the whole map (unit cells) using the first `agents`
// scenario entries.
bool movingai_instance(const MovingAiMap& map, const std::vector<ScenEntry>& entries,
                       int agents, LocalInstance* out, std::string* error);

}  // namespace navsim
