#include "navsim/movingai.hpp"

#include <istream>
#include <sstream>

namespace navsim {

bool load_movingai_map(std::istream& is, MovingAiMap* out, std::string* error) {
    auto fail = [&](const std::string& msg) {
        if (error) *error = msg;
        return false;
    };
    std::string tok;
    if (!(is >> tok) || tok != "type") return fail("expected 'type' header");
    is >> tok;  // octile
    int height = 0, width = 0;
    if (!(is >> tok >> height) || tok != "height") return fail("expected height");
    if (!(is >> tok >> width) || tok != "width") return fail("expected width");
    if (!(is >> tok) || tok != "map") return fail("expected map");
    out->width = width;
    out->height = height;
    out->rows.clear();
    for (int y = 0; y < height; ++y) {
        std::string row;
        if (!(is >> row) || static_cast<int>(row.size()) < width) {
            return fail("short map row");
        }
        out->rows.push_back(row.substr(0, static_cast<size_t>(width)));
    }
    return true;
}

bool load_movingai_scen(std::istream& is, std::vector<ScenEntry>* out, std::string* error) {
    auto fail = [&](const std::string& msg) {
        if (error) *error = msg;
        return false;
    };
    std::string line;
    if (!std::getline(is, line)) return fail("empty scen file");
    if (line.rfind("version", 0) != 0) {
        // Headerless variants put the first entry on line one.
        std::istringstream ls(line);
        ScenEntry e;
        if (ls >> e.bucket >> e.map_name >> e.width >> e.height >> e.start_x >> e.start_y >>
            e.goal_x >> e.goal_y >> e.optimal_length) {
            out->push_back(e);
        }
    }
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        ScenEntry e;
        if (ls >> e.bucket >> e.map_name >> e.width >> e.height >> e.start_x >> e.start_y >>
            e.goal_x >> e.goal_y >> e.optimal_length) {
            out->push_back(e);
        }
    }
    if (out->empty()) return fail("no scenario entries");
    return true;
}

bool movingai_instance(const MovingAiMap& map, const std::vector<ScenEntry>& entries,
                       int agents, LocalInstance* out, std::string* error) {
    auto fail = [&](const std::string& msg) {
        if (error) *error = msg;
        return false;
    };
    if (agents > static_cast<int>(entries.size())) return fail("not enough scen entries");

    Grid grid(map.width, map.height, 1.0, {0.0, 0.0});
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            grid.set_blocked({x, y}, !map.passable(x, y));
        }
    }
    out->subgrid.grid = grid;
    label_components(out->subgrid);

    out->agent_ids.clear();
    out->starts.clear();
    out->targets.clear();
    for (int k = 0; k < agents; ++k) {
        const ScenEntry& e = entries[static_cast<size_t>(k)];
        const Cell s{e.start_x, e.start_y};
        const Cell t{e.goal_x, e.goal_y};
        if (!out->subgrid.grid.free(s) || !out->subgrid.grid.free(t)) {
            return fail("scen entry on blocked cell");
        }
        out->agent_ids.push_back(k);
        out->starts.push_back(s);
        out->targets.push_back(t);
    }
    return true;
}

}  // namespace navsim
