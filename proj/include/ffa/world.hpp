#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ffa/config.hpp"
#include "ffa/map.hpp"
#include "ffa/rng.hpp"

namespace ffa {

// Entity ids: player agents get 0..N-1 (team-major), NPCs get N..N+npc_count-1.

struct AgentState {
    int agent_id = -1;
    int team_id = -1;
    Coord position;
    Coord spawn_position;
    int hp = 0;
    int food = 0;
    int water = 0;
    int forage_xp = 0;
    int equipment_level = 0;   // 0..20, NPC drops only
    CombatStyle last_style = CombatStyle::Melee;
    bool alive = true;
    int player_kills = 0;
    int max_explore = 0;       // max L-inf distance from spawn over lifetime
};

enum class Disposition : uint8_t { Neutral = 0, Hostile = 1 };

struct NpcState {
    int npc_id = -1;           // global entity id
    Coord position;
    int hp = 0;
    int level = 1;             // 1..20, higher toward map center
    Disposition disposition = Disposition::Neutral;
    bool alive = true;
    int last_attacker = -1;    // player entity id
    int last_attacked_tick = -1;
};

enum class Move : uint8_t { N = 0, S = 1, E = 2, W = 3, Stay = 4 };

inline Coord step_to(Coord p, Move m) {
    switch (m) {
        case Move::N: return {p.row - 1, p.col};
        case Move::S: return {p.row + 1, p.col};
        case Move::E: return {p.row, p.col + 1};
        case Move::W: return {p.row, p.col - 1};
        case Move::Stay: return p;
    }
    return p;
}

struct Attack {
    CombatStyle style = CombatStyle::Melee;
    int target = -1;  // entity id (player or NPC)
};

struct AgentAction {
    Move move = Move::Stay;
    std::optional<Attack> attack;
};

// --- tick events (replay + invariant checks) -------------------------------

struct AttackEvent {
    int attacker;     // entity id
    int target;       // entity id
    CombatStyle style;
    int damage;       // 0 when illegal
    bool illegal;     // out of range / dead target
};

struct KillEvent {
    int killer;       // entity id (player for player_kill credit, NPC otherwise)
    int victim;       // entity id
    bool victim_is_player;
};

struct EquipEvent {
    int agent;        // player entity id
    int level;        // new equipment level
};

struct HarvestEvent {
    int agent;
    bool water;       // false = food (forest harvest)
};

struct HpDelta {
    int agent;
    int delta;        // + regen, - starvation
};

struct DeathEvent {
    int entity;
    bool starvation;  // false = combat
};

struct TickEvents {
    int tick = 0;
    std::vector<AttackEvent> attacks;
    std::vector<KillEvent> kills;
    std::vector<EquipEvent> equips;
    std::vector<HarvestEvent> harvests;
    std::vector<HpDelta> metabolism;
    std::vector<DeathEvent> deaths;
    std::vector<int> ignored_actions;  // actions addressed to dead/unknown agents
};

struct WorldState {
    ArenaConfig config;
    GameMap map;
    std::vector<AgentState> agents;     // team-major order, index == agent_id
    std::vector<NpcState> npcs;
    std::vector<int> forest_cooldown;   // per tile, >0 means depleted
    int tick = 0;
    Rng rng;                            // per-episode stream (NPC decisions)

    bool is_player(int entity_id) const {
        return entity_id >= 0 && entity_id < static_cast<int>(agents.size());
    }
    const NpcState* npc_by_id(int entity_id) const;
    NpcState* npc_by_id(int entity_id);
    int living_players() const;
    int forage_level(int agent_id) const;
};

// Forage skill level from xp: 1 + xp / per_level, capped at 50.
int forage_level(int forage_xp, const ArenaConfig& config);

// Seeded permutation assigns teams to anchors; agents fill the 8 passable
// tiles nearest their anchor; NPC levels rise toward the map center.
WorldState spawn_episode(const GameMap& map, const ArenaConfig& config, uint64_t seed);

// One simultaneous tick. Phases, in order: player attacks (resolved against
// the pre-phase state), player movement (conflicts to lowest agent_id),
// auto-forage, metabolism, deaths, NPC actions, exploration stat update.
// actions[i] applies to agent_id i; entries for dead agents are ignored and
// flagged.
TickEvents step(WorldState& state, const std::vector<AgentAction>& actions);

}  // namespace ffa
