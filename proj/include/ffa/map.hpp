#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ffa/config.hpp"

namespace ffa {

enum class TileKind : uint8_t {
    Grass = 0,   // passable
    Forest = 1,  // passable, harvestable food
    Water = 2,   // impassable, drinkable from adjacent tile
    Stone = 3,   // impassable
    Border = 4,  // impassable outer ring
};

inline bool passable(TileKind k) {
    return k == TileKind::Grass || k == TileKind::Forest;
}

struct GameMap {
    int size = 0;
    uint64_t seed = 0;
    std::vector<TileKind> tiles;        // row-major, size*size
    std::vector<Coord> anchors;         // one spawn anchor per team

    TileKind at(int r, int c) const { return tiles[static_cast<size_t>(r) * size + c]; }
    TileKind at(Coord p) const { return at(p.row, p.col); }
    void set(int r, int c, TileKind k) { tiles[static_cast<size_t>(r) * size + c] = k; }
    bool in_bounds(Coord p) const {
        return p.row >= 0 && p.row < size && p.col >= 0 && p.col < size;
    }
    bool walkable(Coord p) const { return in_bounds(p) && passable(at(p)); }
};

// Procedural map: seeded value noise thresholds for Forest/Water/Stone,
// team anchors spread uniformly on the inner perimeter with a seeded
// rotation. Retries with perturbed sub-seeds until every anchor has food
// and water within reach; throws std::runtime_error when the retry budget
// is exhausted (infeasible config).
GameMap generate_map(uint64_t seed, const ArenaConfig& config);

// Versioned text format: header {seed, size}, character rows, anchor list.
void write_map(std::ostream& out, const GameMap& map);
GameMap read_map(std::istream& in);
void save_map(const std::string& path, const GameMap& map);
GameMap load_map(const std::string& path);

}  // namespace ffa
