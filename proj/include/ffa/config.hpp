#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ffa {

enum class CombatStyle : uint8_t { Melee = 0, Range = 1, Mage = 2 };

inline const char* style_name(CombatStyle s) {
    switch (s) {
        case CombatStyle::Melee: return "melee";
        case CombatStyle::Range: return "range";
        case CombatStyle::Mage: return "mage";
    }
    return "?";
}

struct CombatEntry {
    int range;   // L-inf tiles
    int damage;  // hp
};

struct ArenaConfig {
    int map_size = 128;       // tiles per side, border ring included
    int team_count = 16;
    int team_size = 8;
    int horizon = 1024;       // ticks per episode
    int npc_count = 64;
    int max_hp = 100;
    int food_cap = 100;
    int water_cap = 100;
    // Monotone range/damage tradeoff across the three styles.
    std::array<CombatEntry, 3> combat = {{{1, 10}, {3, 7}, {4, 5}}};
    int forage_xp_per_level = 4;
    int starvation_damage = 5;
    int regen = 5;
    int forest_regrow_ticks = 20;
    int vision = 7;           // members see a (2*vision+1)^2 window: 15x15
    uint64_t seed = 0;

    const CombatEntry& style(CombatStyle s) const {
        return combat[static_cast<size_t>(s)];
    }

    int agent_count() const { return team_count * team_size; }

    void validate() const {
        if (map_size < 16) throw std::invalid_argument("map_size must be >= 16");
        if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
        if (team_count < 1 || team_size < 1)
            throw std::invalid_argument("team_count and team_size must be >= 1");
        long cells = static_cast<long>(map_size) * map_size;
        if (static_cast<long>(agent_count()) + npc_count >= cells)
            throw std::invalid_argument("entity count exceeds map capacity");
    }

    // Small fast configuration for tests and desk-scale corpora.
    static ArenaConfig desk() {
        ArenaConfig c;
        c.map_size = 64;
        c.team_count = 8;
        c.horizon = 256;
        c.npc_count = 24;
        return c;
    }
};

struct Coord {
    int row = 0;
    int col = 0;
    bool operator==(const Coord&) const = default;
};

inline int linf(Coord a, Coord b) {
    int dr = a.row > b.row ? a.row - b.row : b.row - a.row;
    int dc = a.col > b.col ? a.col - b.col : b.col - a.col;
    return dr > dc ? dr : dc;
}

}  // namespace ffa
