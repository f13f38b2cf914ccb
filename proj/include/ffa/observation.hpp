#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffa/world.hpp"

namespace ffa {

// Occupancy codes inside a member's local crop.
enum class OccCode : uint8_t { Empty = 0, Teammate = 1, EnemyPlayer = 2, Npc = 3 };

struct MemberObs {
    bool present = false;  // dead members keep their slot as an absent marker
    int agent_id = -1;
    Coord position;
    Coord spawn_position;
    int hp = 0;
    int food = 0;
    int water = 0;
    int forage_level = 0;
    int equipment_level = 0;
    std::vector<uint8_t> tiles;      // (2v+1)^2 TileKind codes, Border-padded
    std::vector<uint8_t> occupancy;  // same shape, OccCode
};

struct EntityObs {
    bool is_npc = false;
    int id = -1;        // entity id
    int team_id = -1;   // -1 for NPCs
    Coord position;
    int hp = 0;
    int level = 0;      // NPC level; players report equipment level here
    uint8_t observer_mask = 0;  // bit i set <=> member i sees this entity
};

struct TeamObservation {
    int team_id = -1;
    int tick = 0;
    int horizon = 0;
    int map_size = 0;
    int vision = 7;
    int living_members = 0;
    std::vector<MemberObs> members;   // exactly team_size slots
    std::vector<EntityObs> entities;  // merged over all members, sorted by id
};

TeamObservation build_observation(const WorldState& state, int team_id);

// Flat numeric encoding of a TeamObservation (layout version 1). All
// values finite; positions normalized by map_size.
struct FeatureVectorBundle {
    int layout_version = 1;
    int member_width = 0;
    int map_channels = 0;
    int entity_width = 0;
    std::vector<float> member_features;  // team_size x member_width
    std::vector<float> local_maps;       // team_size x map_channels x (2v+1)^2
    std::vector<float> entity_features;  // N x entity_width
    std::vector<float> entity_masks;     // N x team_size
    std::vector<float> globals;
};

FeatureVectorBundle featurize(const TeamObservation& obs);

// Canonical single-line JSON forms used by the wire protocol.
std::string observation_to_json(const TeamObservation& obs);
TeamObservation observation_from_json(const std::string& line);
std::string actions_to_json(int tick, const std::vector<AgentAction>& actions);
// Throws std::runtime_error on malformed records.
std::vector<AgentAction> actions_from_json(const std::string& line, int expect_tick,
                                           int team_size);

}  // namespace ffa
