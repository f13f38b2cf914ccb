#include "ffa/world.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace ffa {

const NpcState* WorldState::npc_by_id(int entity_id) const {
    int idx = entity_id - static_cast<int>(agents.size());
    if (idx < 0 || idx >= static_cast<int>(npcs.size())) return nullptr;
    return &npcs[idx];
}

NpcState* WorldState::npc_by_id(int entity_id) {
    return const_cast<NpcState*>(static_cast<const WorldState*>(this)->npc_by_id(entity_id));
}

int WorldState::living_players() const {
    int n = 0;
    for (const auto& a : agents) n += a.alive ? 1 : 0;
    return n;
}

int WorldState::forage_level(int agent_id) const {
    return ffa::forage_level(agents[agent_id].forage_xp, config);
}

int forage_level(int forage_xp, const ArenaConfig& config) {
    return std::min(50, 1 + forage_xp / config.forage_xp_per_level);
}

namespace {

// Occupancy grid of living entities; -1 = free.
struct Occupancy {
    int size;
    std::vector<int> grid;

    explicit Occupancy(const WorldState& s) : size(s.map.size) {
        grid.assign(static_cast<size_t>(size) * size, -1);
        for (const auto& a : s.agents)
            if (a.alive) set(a.position, a.agent_id);
        for (const auto& n : s.npcs)
            if (n.alive) set(n.position, n.npc_id);
    }
    int at(Coord p) const { return grid[static_cast<size_t>(p.row) * size + p.col]; }
    void set(Coord p, int id) { grid[static_cast<size_t>(p.row) * size + p.col] = id; }
    void clear(Coord p) { set(p, -1); }
};

int npc_damage(int level) { return 1 + level / 2; }

int config_npc_base(const WorldState& s) { return static_cast<int>(s.agents.size()); }

Coord entity_position(const WorldState& s, int id, bool& alive) {
    if (s.is_player(id)) {
        alive = s.agents[id].alive;
        return s.agents[id].position;
    }
    const NpcState* n = s.npc_by_id(id);
    if (!n) {
        alive = false;
        return {};
    }
    alive = n->alive;
    return n->position;
}

}  // namespace

WorldState spawn_episode(const GameMap& map, const ArenaConfig& config, uint64_t seed) {
    config.validate();
    if (static_cast<int>(map.anchors.size()) != config.team_count)
        throw std::invalid_argument("map anchor count does not match team_count");

    WorldState state;
    state.config = config;
    state.map = map;
    state.forest_cooldown.assign(map.tiles.size(), 0);
    state.rng = Rng(mix64(seed, 0xA11CE));

    // Seeded permutation of anchors: team t spawns at anchors[perm[t]].
    Rng setup(mix64(seed, 0x5BA41));
    std::vector<int> perm(static_cast<size_t>(config.team_count));
    for (int i = 0; i < config.team_count; ++i) perm[static_cast<size_t>(i)] = i;
    for (int i = config.team_count - 1; i > 0; --i)
        std::swap(perm[static_cast<size_t>(i)],
                  perm[static_cast<size_t>(setup.below(static_cast<uint64_t>(i + 1)))]);

    Occupancy occ_probe{state};  // empty world; reused as placement tracker
    state.agents.reserve(static_cast<size_t>(config.agent_count()));
    for (int t = 0; t < config.team_count; ++t) {
        Coord anchor = map.anchors[static_cast<size_t>(perm[static_cast<size_t>(t)])];
        // BFS outward from the anchor over passable tiles; first team_size
        // unoccupied tiles become the team slots.
        std::deque<Coord> queue{anchor};
        std::vector<char> seen(map.tiles.size(), 0);
        seen[static_cast<size_t>(anchor.row) * map.size + anchor.col] = 1;
        int placed = 0;
        while (!queue.empty() && placed < config.team_size) {
            Coord p = queue.front();
            queue.pop_front();
            if (occ_probe.at(p) < 0) {
                AgentState a;
                a.agent_id = static_cast<int>(state.agents.size());
                a.team_id = t;
                a.position = a.spawn_position = p;
                a.hp = config.max_hp;
                a.food = config.food_cap;
                a.water = config.water_cap;
                state.agents.push_back(a);
                occ_probe.set(p, a.agent_id);
                ++placed;
            }
            constexpr int dr[] = {-1, 1, 0, 0};
            constexpr int dc[] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                Coord q{p.row + dr[k], p.col + dc[k]};
                if (!map.walkable(q)) continue;
                size_t idx = static_cast<size_t>(q.row) * map.size + q.col;
                if (!seen[idx]) {
                    seen[idx] = 1;
                    queue.push_back(q);
                }
            }
        }
        if (placed < config.team_size)
            throw std::runtime_error("not enough passable tiles near anchor for team");
    }

    // NPCs: random free passable tiles; level rises toward the map center.
    Rng npc_rng(mix64(seed, 0x4BC5));
    int center = config.map_size / 2;
    int d_max = config.map_size / 2 - 1;
    for (int i = 0; i < config.npc_count; ++i) {
        Coord p;
        int guard = 0;
        do {
            p = {npc_rng.range(1, map.size - 2), npc_rng.range(1, map.size - 2)};
            if (++guard > 100000)
                throw std::runtime_error("could not place NPCs (map too dense)");
        } while (!map.walkable(p) || occ_probe.at(p) >= 0);
        NpcState n;
        n.npc_id = config.agent_count() + i;
        n.position = p;
        int d = std::min(linf(p, {center, center}), d_max);
        n.level = std::clamp(1 + static_cast<int>(19.0 * (1.0 - static_cast<double>(d) / d_max)), 1, 20);
        n.disposition = n.level >= 11 ? Disposition::Hostile : Disposition::Neutral;
        n.hp = 10 + 5 * n.level;
        state.npcs.push_back(n);
        occ_probe.set(p, n.npc_id);
    }
    return state;
}

TickEvents step(WorldState& state, const std::vector<AgentAction>& actions) {
    const ArenaConfig& cfg = state.config;
    if (state.tick >= cfg.horizon) throw std::logic_error("step past horizon");
    TickEvents ev;
    ev.tick = state.tick;

    // Phase 1: player attacks, simultaneous against the pre-phase state.
    struct PendingAttack {
        int attacker, target;
        CombatStyle style;
    };
    std::vector<PendingAttack> pending;
    for (size_t i = 0; i < actions.size(); ++i) {
        int id = static_cast<int>(i);
        if (!state.is_player(id) || !state.agents[id].alive) {
            ev.ignored_actions.push_back(id);
            continue;
        }
        const auto& act = actions[i];
        if (!act.attack) continue;
        const Attack& atk = *act.attack;
        bool target_alive = false;
        Coord tpos = entity_position(state, atk.target, target_alive);
        bool legal = target_alive && atk.target != id &&
                     linf(state.agents[id].position, tpos) <= cfg.style(atk.style).range;
        if (!legal) {
            ev.attacks.push_back({id, atk.target, atk.style, 0, true});
            continue;
        }
        state.agents[id].last_style = atk.style;
        pending.push_back({id, atk.target, atk.style});
    }
    // Apply damage; effective damage is clamped at remaining hp so that hp
    // deltas and recorded events always balance.
    std::vector<std::vector<int>> attackers_of_player(state.agents.size());
    std::vector<std::vector<int>> attackers_of_npc(state.npcs.size());
    for (const auto& pa : pending) {
        int dmg = cfg.style(pa.style).damage;
        if (state.is_player(pa.target)) {
            AgentState& victim = state.agents[pa.target];
            int eff = std::min(dmg, victim.hp);
            victim.hp -= eff;
            ev.attacks.push_back({pa.attacker, pa.target, pa.style, eff, false});
            attackers_of_player[static_cast<size_t>(pa.target)].push_back(pa.attacker);
        } else {
            NpcState* npc = state.npc_by_id(pa.target);
            int eff = std::min(dmg, npc->hp);
            npc->hp -= eff;
            ev.attacks.push_back({pa.attacker, pa.target, pa.style, eff, false});
            if (npc->last_attacked_tick != state.tick) {
                npc->last_attacker = pa.attacker;
                npc->last_attacked_tick = state.tick;
            }
            attackers_of_npc[static_cast<size_t>(pa.target - config_npc_base(state))].push_back(pa.attacker);
        }
    }
    // Kill credit goes to the lowest-id attacker of the victim this tick.
    for (size_t ni = 0; ni < state.npcs.size(); ++ni) {
        NpcState& npc = state.npcs[ni];
        if (npc.alive && npc.hp == 0) {
            npc.alive = false;
            ev.deaths.push_back({npc.npc_id, false});
            const auto& atks = attackers_of_npc[ni];
            int killer = *std::min_element(atks.begin(), atks.end());
            ev.kills.push_back({killer, npc.npc_id, false});
            AgentState& ka = state.agents[killer];
            if (npc.level > ka.equipment_level) {
                ka.equipment_level = npc.level;
                ev.equips.push_back({killer, ka.equipment_level});
            }
        }
    }
    for (auto& victim : state.agents) {
        if (victim.alive && victim.hp == 0) {
            victim.alive = false;
            ev.deaths.push_back({victim.agent_id, false});
            const auto& atks = attackers_of_player[static_cast<size_t>(victim.agent_id)];
            if (!atks.empty()) {
                int killer = *std::min_element(atks.begin(), atks.end());
                ev.kills.push_back({killer, victim.agent_id, true});
                if (state.is_player(killer)) state.agents[killer].player_kills += 1;
            }
        }
    }

    // Phase 2: movement, processed in ascending agent_id against a live
    // occupancy grid; contested destinations go to the lowest id.
    Occupancy occ(state);
    for (size_t i = 0; i < actions.size(); ++i) {
        int id = static_cast<int>(i);
        if (!state.is_player(id) || !state.agents[id].alive) continue;
        Move m = actions[i].move;
        if (m == Move::Stay) continue;
        AgentState& a = state.agents[id];
        Coord dest = step_to(a.position, m);
        if (!state.map.walkable(dest) || occ.at(dest) >= 0) continue;
        occ.clear(a.position);
        occ.set(dest, id);
        a.position = dest;
    }

    // Phase 3: auto-forage.
    for (auto& a : state.agents) {
        if (!a.alive) continue;
        size_t tidx = static_cast<size_t>(a.position.row) * state.map.size + a.position.col;
        if (state.map.at(a.position) == TileKind::Forest && state.forest_cooldown[tidx] == 0) {
            a.food = cfg.food_cap;
            a.forage_xp += 1;
            state.forest_cooldown[tidx] = cfg.forest_regrow_ticks;
            ev.harvests.push_back({a.agent_id, false});
        }
        bool drank = false;
        for (int dr = -1; dr <= 1 && !drank; ++dr)
            for (int dc = -1; dc <= 1 && !drank; ++dc) {
                Coord q{a.position.row + dr, a.position.col + dc};
                if (state.map.in_bounds(q) && state.map.at(q) == TileKind::Water) {
                    a.water = cfg.water_cap;
                    a.forage_xp += 1;
                    ev.harvests.push_back({a.agent_id, true});
                    drank = true;
                }
            }
    }
    for (auto& cd : state.forest_cooldown)
        if (cd > 0) --cd;

    // Phase 4: metabolism.
    for (auto& a : state.agents) {
        if (!a.alive) continue;
        a.food = std::max(0, a.food - 1);
        a.water = std::max(0, a.water - 1);
        int delta;
        if (a.food > 0 && a.water > 0) {
            delta = std::min(cfg.regen, cfg.max_hp - a.hp);
        } else {
            delta = -std::min(cfg.starvation_damage, a.hp);
        }
        if (delta != 0) {
            a.hp += delta;
            ev.metabolism.push_back({a.agent_id, delta});
        }
        if (a.hp == 0) {
            a.alive = false;  // phase 5: starvation deaths removed
            ev.deaths.push_back({a.agent_id, true});
        }
    }

    // Phase 6: NPC scripted actions. Attacks resolve sequentially here;
    // random walks consume exactly one rng draw each.
    Occupancy occ2(state);
    for (auto& npc : state.npcs) {
        if (!npc.alive) continue;
        int target = -1;
        if (npc.disposition == Disposition::Hostile) {
            int best = 5;  // strictly within 4 tiles
            for (const auto& a : state.agents) {
                if (!a.alive) continue;
                int d = linf(npc.position, a.position);
                if (d < best || (d == best && (target < 0 || a.agent_id < target))) {
                    best = d;
                    target = a.agent_id;
                }
            }
            if (best > 4) target = -1;
        } else if (npc.last_attacked_tick >= 0 && state.tick - npc.last_attacked_tick <= 10 &&
                   state.is_player(npc.last_attacker) && state.agents[npc.last_attacker].alive &&
                   linf(npc.position, state.agents[npc.last_attacker].position) <= 4) {
            target = npc.last_attacker;
        }
        if (target >= 0) {
            AgentState& victim = state.agents[target];
            int eff = std::min(npc_damage(npc.level), victim.hp);
            victim.hp -= eff;
            ev.attacks.push_back({npc.npc_id, target, CombatStyle::Melee, eff, false});
            if (victim.hp == 0 && victim.alive) {
                victim.alive = false;
                ev.deaths.push_back({victim.agent_id, false});
                ev.kills.push_back({npc.npc_id, victim.agent_id, true});
            }
        } else {
            Move m = static_cast<Move>(state.rng.below(5));
            Coord dest = step_to(npc.position, m);
            if (m != Move::Stay && state.map.walkable(dest) && occ2.at(dest) < 0) {
                occ2.clear(npc.position);
                occ2.set(dest, npc.npc_id);
                npc.position = dest;
            }
        }
    }

    // Phase 7: exploration stat (end-of-tick positions of the living).
    for (auto& a : state.agents)
        if (a.alive) a.max_explore = std::max(a.max_explore, linf(a.position, a.spawn_position));

    state.tick += 1;
    return ev;
}

}  // namespace ffa
