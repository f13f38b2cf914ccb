#include "ffa/observation.hpp"

#include <json.hpp>
#include <stdexcept>

namespace ffa {

using nlohmann::json;

TeamObservation build_observation(const WorldState& state, int team_id) {
    const ArenaConfig& cfg = state.config;
    if (team_id < 0 || team_id >= cfg.team_count)
        throw std::invalid_argument("unknown team id");
    const int v = cfg.vision;
    const int side = 2 * v + 1;

    TeamObservation obs;
    obs.team_id = team_id;
    obs.tick = state.tick;
    obs.horizon = cfg.horizon;
    obs.map_size = cfg.map_size;
    obs.vision = v;
    obs.members.resize(static_cast<size_t>(cfg.team_size));

    const int base = team_id * cfg.team_size;
    for (int m = 0; m < cfg.team_size; ++m) {
        const AgentState& a = state.agents[static_cast<size_t>(base + m)];
        MemberObs& mo = obs.members[static_cast<size_t>(m)];
        mo.agent_id = a.agent_id;
        if (!a.alive) continue;
        mo.present = true;
        obs.living_members += 1;
        mo.position = a.position;
        mo.spawn_position = a.spawn_position;
        mo.hp = a.hp;
        mo.food = a.food;
        mo.water = a.water;
        mo.forage_level = forage_level(a.forage_xp, cfg);
        mo.equipment_level = a.equipment_level;
        mo.tiles.assign(static_cast<size_t>(side) * side, static_cast<uint8_t>(TileKind::Border));
        mo.occupancy.assign(static_cast<size_t>(side) * side, static_cast<uint8_t>(OccCode::Empty));
        for (int dr = -v; dr <= v; ++dr)
            for (int dc = -v; dc <= v; ++dc) {
                Coord p{a.position.row + dr, a.position.col + dc};
                if (!state.map.in_bounds(p)) continue;
                size_t idx = static_cast<size_t>(dr + v) * side + (dc + v);
                mo.tiles[idx] = static_cast<uint8_t>(state.map.at(p));
            }
    }

    auto fill_occ = [&](Coord p, OccCode code) {
        for (int m = 0; m < cfg.team_size; ++m) {
            MemberObs& mo = obs.members[static_cast<size_t>(m)];
            if (!mo.present) continue;
            int dr = p.row - mo.position.row, dc = p.col - mo.position.col;
            if (dr < -v || dr > v || dc < -v || dc > v) continue;
            mo.occupancy[static_cast<size_t>(dr + v) * side + (dc + v)] =
                static_cast<uint8_t>(code);
        }
    };
    auto mask_for = [&](Coord p) {
        uint8_t mask = 0;
        for (int m = 0; m < cfg.team_size; ++m) {
            const MemberObs& mo = obs.members[static_cast<size_t>(m)];
            if (mo.present && linf(p, mo.position) <= v) mask |= static_cast<uint8_t>(1u << m);
        }
        return mask;
    };

    for (const auto& a : state.agents) {
        if (!a.alive) continue;
        if (a.team_id == team_id) {
            fill_occ(a.position, OccCode::Teammate);
            continue;
        }
        uint8_t mask = mask_for(a.position);
        if (!mask) continue;
        fill_occ(a.position, OccCode::EnemyPlayer);
        obs.entities.push_back(
            {false, a.agent_id, a.team_id, a.position, a.hp, a.equipment_level, mask});
    }
    for (const auto& n : state.npcs) {
        if (!n.alive) continue;
        uint8_t mask = mask_for(n.position);
        if (!mask) continue;
        fill_occ(n.position, OccCode::Npc);
        obs.entities.push_back({true, n.npc_id, -1, n.position, n.hp, n.level, mask});
    }
    return obs;
}

FeatureVectorBundle featurize(const TeamObservation& obs) {
    const int team_size = static_cast<int>(obs.members.size());
    const int side = 2 * obs.vision + 1;
    const float inv_size = 1.0f / static_cast<float>(obs.map_size);

    FeatureVectorBundle fb;
    fb.member_width = 11;
    fb.map_channels = 8;  // 5 tile kinds + teammate/enemy/npc occupancy
    fb.entity_width = 6;

    fb.member_features.assign(static_cast<size_t>(team_size) * fb.member_width, 0.0f);
    fb.local_maps.assign(
        static_cast<size_t>(team_size) * fb.map_channels * side * side, 0.0f);
    for (int m = 0; m < team_size; ++m) {
        const MemberObs& mo = obs.members[static_cast<size_t>(m)];
        float* f = &fb.member_features[static_cast<size_t>(m) * fb.member_width];
        f[0] = mo.present ? 1.0f : 0.0f;
        if (!mo.present) continue;
        f[1] = static_cast<float>(mo.position.row) * inv_size;
        f[2] = static_cast<float>(mo.position.col) * inv_size;
        f[3] = static_cast<float>(mo.spawn_position.row) * inv_size;
        f[4] = static_cast<float>(mo.spawn_position.col) * inv_size;
        f[5] = static_cast<float>(mo.hp) / 100.0f;
        f[6] = static_cast<float>(mo.food) / 100.0f;
        f[7] = static_cast<float>(mo.water) / 100.0f;
        f[8] = static_cast<float>(mo.forage_level) / 50.0f;
        f[9] = static_cast<float>(mo.equipment_level) / 20.0f;
        f[10] = static_cast<float>(mo.agent_id) / 128.0f;
        float* maps =
            &fb.local_maps[static_cast<size_t>(m) * fb.map_channels * side * side];
        for (int i = 0; i < side * side; ++i) {
            maps[static_cast<size_t>(mo.tiles[static_cast<size_t>(i)]) * side * side + i] = 1.0f;
            uint8_t occ = mo.occupancy[static_cast<size_t>(i)];
            if (occ != 0)
                maps[static_cast<size_t>(4 + occ) * side * side + i] = 1.0f;
        }
    }

    fb.entity_features.reserve(obs.entities.size() * static_cast<size_t>(fb.entity_width));
    fb.entity_masks.reserve(obs.entities.size() * static_cast<size_t>(team_size));
    for (const auto& e : obs.entities) {
        fb.entity_features.push_back(e.is_npc ? 1.0f : 0.0f);
        fb.entity_features.push_back(static_cast<float>(e.position.row) * inv_size);
        fb.entity_features.push_back(static_cast<float>(e.position.col) * inv_size);
        fb.entity_features.push_back(static_cast<float>(e.hp) / 100.0f);
        fb.entity_features.push_back(static_cast<float>(e.level) / 20.0f);
        fb.entity_features.push_back(e.is_npc ? 0.0f
                                              : static_cast<float>(e.team_id + 1) / 16.0f);
        for (int m = 0; m < team_size; ++m)
            fb.entity_masks.push_back((e.observer_mask >> m) & 1u ? 1.0f : 0.0f);
    }

    fb.globals = {static_cast<float>(obs.tick) / static_cast<float>(obs.horizon),
                  static_cast<float>(obs.living_members) / static_cast<float>(team_size)};
    return fb;
}

// --- wire protocol records -------------------------------------------------

namespace {

std::string pack_bytes(const std::vector<uint8_t>& v) {
    std::string s;
    s.reserve(v.size());
    for (uint8_t b : v) s.push_back(static_cast<char>('0' + b));
    return s;
}

std::vector<uint8_t> unpack_bytes(const std::string& s) {
    std::vector<uint8_t> v;
    v.reserve(s.size());
    for (char ch : s) v.push_back(static_cast<uint8_t>(ch - '0'));
    return v;
}

CombatStyle style_from_name(const std::string& s) {
    if (s == "melee") return CombatStyle::Melee;
    if (s == "range") return CombatStyle::Range;
    if (s == "mage") return CombatStyle::Mage;
    throw std::runtime_error("unknown combat style: " + s);
}

constexpr const char* kMoveChars = "NSEW.";

Move move_from_char(char ch) {
    for (int i = 0; i < 5; ++i)
        if (kMoveChars[i] == ch) return static_cast<Move>(i);
    throw std::runtime_error(std::string("unknown move: ") + ch);
}

}  // namespace

std::string observation_to_json(const TeamObservation& obs) {
    json members = json::array();
    for (const auto& m : obs.members) {
        if (!m.present) {
            members.push_back(json{{"present", false}, {"id", m.agent_id}});
            continue;
        }
        members.push_back(json{{"present", true},
                               {"id", m.agent_id},
                               {"pos", {m.position.row, m.position.col}},
                               {"spawn", {m.spawn_position.row, m.spawn_position.col}},
                               {"hp", m.hp},
                               {"food", m.food},
                               {"water", m.water},
                               {"forage", m.forage_level},
                               {"equip", m.equipment_level},
                               {"tiles", pack_bytes(m.tiles)},
                               {"occ", pack_bytes(m.occupancy)}});
    }
    json entities = json::array();
    for (const auto& e : obs.entities)
        entities.push_back(json::array({e.is_npc ? 1 : 0, e.id, e.team_id, e.position.row,
                                        e.position.col, e.hp, e.level, e.observer_mask}));
    json j{{"type", "obs"},
           {"tick", obs.tick},
           {"team", obs.team_id},
           {"horizon", obs.horizon},
           {"map_size", obs.map_size},
           {"vision", obs.vision},
           {"living", obs.living_members},
           {"members", members},
           {"entities", entities}};
    return j.dump();
}

TeamObservation observation_from_json(const std::string& line) {
    json j = json::parse(line);
    if (j.value("type", "") != "obs") throw std::runtime_error("record is not an obs");
    TeamObservation obs;
    obs.tick = j.at("tick").get<int>();
    obs.team_id = j.at("team").get<int>();
    obs.horizon = j.at("horizon").get<int>();
    obs.map_size = j.at("map_size").get<int>();
    obs.vision = j.at("vision").get<int>();
    obs.living_members = j.at("living").get<int>();
    for (const auto& m : j.at("members")) {
        MemberObs mo;
        mo.present = m.at("present").get<bool>();
        mo.agent_id = m.at("id").get<int>();
        if (mo.present) {
            mo.position = {m.at("pos")[0].get<int>(), m.at("pos")[1].get<int>()};
            mo.spawn_position = {m.at("spawn")[0].get<int>(), m.at("spawn")[1].get<int>()};
            mo.hp = m.at("hp").get<int>();
            mo.food = m.at("food").get<int>();
            mo.water = m.at("water").get<int>();
            mo.forage_level = m.at("forage").get<int>();
            mo.equipment_level = m.at("equip").get<int>();
            mo.tiles = unpack_bytes(m.at("tiles").get<std::string>());
            mo.occupancy = unpack_bytes(m.at("occ").get<std::string>());
        }
        obs.members.push_back(std::move(mo));
    }
    for (const auto& e : j.at("entities")) {
        EntityObs eo;
        eo.is_npc = e[0].get<int>() != 0;
        eo.id = e[1].get<int>();
        eo.team_id = e[2].get<int>();
        eo.position = {e[3].get<int>(), e[4].get<int>()};
        eo.hp = e[5].get<int>();
        eo.level = e[6].get<int>();
        eo.observer_mask = static_cast<uint8_t>(e[7].get<int>());
        obs.entities.push_back(eo);
    }
    return obs;
}

std::string actions_to_json(int tick, const std::vector<AgentAction>& actions) {
    json arr = json::array();
    for (const auto& a : actions) {
        json rec{{"move", std::string(1, kMoveChars[static_cast<int>(a.move)])}};
        if (a.attack)
            rec["attack"] = {{"style", style_name(a.attack->style)},
                             {"target", a.attack->target}};
        arr.push_back(rec);
    }
    return json{{"type", "act"}, {"tick", tick}, {"actions", arr}}.dump();
}

std::vector<AgentAction> actions_from_json(const std::string& line, int expect_tick,
                                           int team_size) {
    json j = json::parse(line);
    if (j.value("type", "") != "act") throw std::runtime_error("record is not an act");
    if (j.at("tick").get<int>() != expect_tick)
        throw std::runtime_error("act record for wrong tick");
    const json& arr = j.at("actions");
    if (static_cast<int>(arr.size()) != team_size)
        throw std::runtime_error("act record must carry exactly one action per member");
    std::vector<AgentAction> actions;
    for (const auto& rec : arr) {
        AgentAction a;
        std::string mv = rec.at("move").get<std::string>();
        if (mv.size() != 1) throw std::runtime_error("bad move field");
        a.move = move_from_char(mv[0]);
        if (rec.contains("attack"))
            a.attack = Attack{style_from_name(rec["attack"].at("style").get<std::string>()),
                              rec["attack"].at("target").get<int>()};
        actions.push_back(a);
    }
    return actions;
}

}  // namespace ffa
