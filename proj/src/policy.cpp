#include "ffa/policy.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>

namespace ffa {
namespace {

constexpr int kFleeRadius = 5;

// Mirrors the level split at which npcs spawn hostile.
constexpr int kHostileNpcLevel = 11;

// Longest-range style whose reach covers the distance; the built-ins
// always attack with it.
CombatStyle longest_reaching_style(const ArenaConfig& cfg, int dist) {
    CombatStyle best = CombatStyle::Melee;
    int best_range = -1;
    for (int s = 0; s < 3; ++s) {
        const CombatEntry& e = cfg.combat[static_cast<size_t>(s)];
        if (e.range >= dist && e.range > best_range) {
            best_range = e.range;
            best = static_cast<CombatStyle>(s);
        }
    }
    return best;
}

int max_attack_range(const ArenaConfig& cfg) {
    int r = 0;
    for (const auto& e : cfg.combat) r = std::max(r, e.range);
    return r;
}

// Per-member view helpers. All decisions read only the member's crop and
// the merged entity list, so policies stay pure in the observation.
struct MemberView {
    const TeamObservation& obs;
    const MemberObs& me;
    int member_index;

    bool crop_walkable(Coord p) const {
        int v = obs.vision;
        int dr = p.row - me.position.row, dc = p.col - me.position.col;
        if (dr < -v || dr > v || dc < -v || dc > v) return false;
        size_t idx = static_cast<size_t>(dr + v) * (2 * v + 1) + (dc + v);
        TileKind k = static_cast<TileKind>(me.tiles[idx]);
        return passable(k) && me.occupancy[idx] == static_cast<uint8_t>(OccCode::Empty);
    }

    bool sees(const EntityObs& e) const {
        return (e.observer_mask >> member_index) & 1u;
    }

    // Nearest entity satisfying pred; ties to lowest id.
    template <typename Pred>
    const EntityObs* nearest(Pred pred, bool own_sight_only) const {
        const EntityObs* best = nullptr;
        int best_d = 1 << 20;
        for (const auto& e : obs.entities) {
            if (own_sight_only && !sees(e)) continue;
            if (!pred(e)) continue;
            int d = linf(me.position, e.position);
            if (d < best_d || (d == best_d && best && e.id < best->id)) {
                best_d = d;
                best = &e;
            }
        }
        return best;
    }

    // Nearest crop tile satisfying pred on kind; returns false if none.
    template <typename Pred>
    bool nearest_tile(Pred pred, Coord& out) const {
        int v = obs.vision;
        int side = 2 * v + 1;
        int best_d = 1 << 20;
        bool found = false;
        for (int dr = -v; dr <= v; ++dr)
            for (int dc = -v; dc <= v; ++dc) {
                TileKind k = static_cast<TileKind>(
                    me.tiles[static_cast<size_t>(dr + v) * side + (dc + v)]);
                if (!pred(k)) continue;
                int d = std::max(dr < 0 ? -dr : dr, dc < 0 ? -dc : dc);
                if (d < best_d) {
                    best_d = d;
                    out = {me.position.row + dr, me.position.col + dc};
                    found = true;
                }
            }
        return found;
    }

    // First step of a shortest path (BFS over the visible crop) toward
    // the reachable cell closest to the target, so members route around
    // water pockets and walls instead of deadlocking against them.
    Move toward(Coord target) const {
        int v = obs.vision;
        int side = 2 * v + 1;
        int tr = std::clamp(target.row - me.position.row, -v, v) + v;
        int tc = std::clamp(target.col - me.position.col, -v, v) + v;
        if (tr == v && tc == v) return Move::Stay;

        static constexpr Move kMoves[4] = {Move::N, Move::S, Move::E, Move::W};
        static constexpr int kDr[4] = {-1, 1, 0, 0};
        static constexpr int kDc[4] = {0, 0, 1, -1};
        std::vector<int8_t> first_move(static_cast<size_t>(side) * side, -1);
        std::vector<int> queue;
        queue.reserve(first_move.size());
        auto idx = [side](int r, int c) { return r * side + c; };
        auto goal_dist = [&](int cell) {
            int r = cell / side, c = cell % side;
            return std::max(std::abs(r - tr), std::abs(c - tc));
        };
        first_move[static_cast<size_t>(idx(v, v))] = 4;  // start marker
        queue.push_back(idx(v, v));
        int best_cell = idx(v, v);
        for (size_t head = 0; head < queue.size(); ++head) {
            int cell = queue[head];
            if (goal_dist(cell) < goal_dist(best_cell)) best_cell = cell;
            if (cell == idx(tr, tc)) break;
            int r = cell / side, c = cell % side;
            for (int m = 0; m < 4; ++m) {
                int nr = r + kDr[m], nc = c + kDc[m];
                if (nr < 0 || nr >= side || nc < 0 || nc >= side) continue;
                size_t ni = static_cast<size_t>(idx(nr, nc));
                if (first_move[ni] != -1) continue;
                if (!crop_walkable({me.position.row + nr - v, me.position.col + nc - v}))
                    continue;
                // Propagate the move that leaves the start cell.
                first_move[ni] = first_move[static_cast<size_t>(cell)] == 4
                                     ? static_cast<int8_t>(m)
                                     : first_move[static_cast<size_t>(cell)];
                queue.push_back(static_cast<int>(ni));
            }
        }
        int8_t m = first_move[static_cast<size_t>(best_cell)];
        if (m < 0 || m > 3) return Move::Stay;
        return kMoves[m];
    }

    Move away_from(Coord threat) const {
        Move best = Move::Stay;
        int best_d = linf(me.position, threat);
        for (Move m : {Move::N, Move::S, Move::E, Move::W}) {
            Coord q = step_to(me.position, m);
            if (!crop_walkable(q)) continue;
            int d = linf(q, threat);
            if (d > best_d) {
                best_d = d;
                best = m;
            }
        }
        return best;
    }

    Move away_from_spawn(Rng& rng) const {
        Move best = Move::Stay;
        int best_d = -1;
        for (Move m : {Move::N, Move::S, Move::E, Move::W}) {
            Coord q = step_to(me.position, m);
            if (!crop_walkable(q)) continue;
            int d = linf(q, me.spawn_position);
            if (d > best_d) {
                best_d = d;
                best = m;
            }
        }
        if (best == Move::Stay) return static_cast<Move>(rng.below(5));
        return best;
    }
};

AgentAction forage_action(const MemberView& mv, Rng& rng) {
    AgentAction act;
    // Only actual dangers are worth fleeing: enemy players and hostile
    // npcs (neutral ones never strike first). A starving member stops
    // running unless the danger is on top of it -- food beats fear.
    const EntityObs* threat = mv.nearest(
        [](const EntityObs& e) { return !e.is_npc || e.level >= kHostileNpcLevel; },
        /*own_sight_only=*/true);
    bool desperate = mv.me.food < 30 || mv.me.water < 30;
    int flee_radius = desperate ? 2 : kFleeRadius;
    if (threat && linf(mv.me.position, threat->position) <= flee_radius) {
        act.move = mv.away_from(threat->position);
        return act;
    }
    bool need_water = mv.me.water <= mv.me.food;
    Coord target;
    bool found =
        need_water
            ? mv.nearest_tile([](TileKind k) { return k == TileKind::Water; }, target)
            : mv.nearest_tile([](TileKind k) { return k == TileKind::Forest; }, target);
    if (!found) {
        // The other resource is only a useful stop if that reserve is
        // low too; otherwise camping it just postpones starvation.
        bool other_low = need_water ? mv.me.food < 60 : mv.me.water < 60;
        if (other_low)
            found = mv.nearest_tile(
                [](TileKind k) { return k == TileKind::Water || k == TileKind::Forest; },
                target);
    }
    if (found) {
        // Next to water is close enough (drinking is automatic); stepping
        // onto forest harvests it.
        if (linf(mv.me.position, target) <= 1 && !mv.crop_walkable(target))
            act.move = Move::Stay;
        else
            act.move = mv.toward(target);
        return act;
    }
    // Nothing useful in sight: search toward the map interior, where the
    // resource fields continue, with a random kick to break up lockstep.
    if (rng.below(4) == 0) {
        act.move = static_cast<Move>(1 + rng.below(4));
        return act;
    }
    int mid = mv.obs.map_size / 2;
    act.move = mv.toward({mid, mid});
    return act;
}

// Parks on a forest tile that touches water: the adjacent water refills
// (and trains) every tick while the forest harvest recurs on its cooldown,
// the fastest sustained forage-xp rate available. Falls back to plain
// foraging until such a tile is in view.
AgentAction camp_forage_action(const MemberView& mv, Rng& rng) {
    const MemberObs& me = mv.me;
    // Campers only fear what can actually hurt them: enemy players and
    // hostile npcs. Neutral npcs never strike first, so they are ignored
    // instead of scaring the camper off its tile. And a clustered camp
    // holds its ground against a lone intruder -- the group's combined
    // fire wins that trade easily -- fleeing only when outnumbered or
    // alone.
    const EntityObs* threat = mv.nearest(
        [](const EntityObs& e) { return !e.is_npc || e.level >= kHostileNpcLevel; },
        /*own_sight_only=*/true);
    if (threat && linf(me.position, threat->position) <= kFleeRadius) {
        int dangers = 0;
        for (const auto& e : mv.obs.entities)
            if ((!e.is_npc || e.level >= kHostileNpcLevel) &&
                linf(me.position, e.position) <= kFleeRadius + 1)
                ++dangers;
        int allies = 0;
        for (const auto& mb : mv.obs.members)
            if (mb.present && linf(me.position, mb.position) <= 3) ++allies;  // includes me
        if (dangers > 1 || allies < 3 || me.hp < 50) {
            AgentAction act;
            act.move = mv.away_from(threat->position);
            return act;
        }
    }
    int v = mv.obs.vision;
    int side = 2 * v + 1;
    auto kind_at = [&](int dr, int dc) {
        return static_cast<TileKind>(me.tiles[static_cast<size_t>(dr + v) * side + (dc + v)]);
    };
    Coord camp;
    int best_d = 1 << 20;
    for (int dr = -v; dr <= v; ++dr)
        for (int dc = -v; dc <= v; ++dc) {
            if (kind_at(dr, dc) != TileKind::Forest) continue;
            bool water_adjacent = false;
            for (int rr = -1; rr <= 1 && !water_adjacent; ++rr)
                for (int cc = -1; cc <= 1; ++cc) {
                    int nr = dr + rr, nc = dc + cc;
                    if (nr < -v || nr > v || nc < -v || nc > v) continue;
                    if (kind_at(nr, nc) == TileKind::Water) {
                        water_adjacent = true;
                        break;
                    }
                }
            if (!water_adjacent) continue;
            int d = std::max(dr < 0 ? -dr : dr, dc < 0 ? -dc : dc);
            if (d < best_d) {
                best_d = d;
                camp = {me.position.row + dr, me.position.col + dc};
            }
        }
    if (best_d == 0) return {};  // already camped; stay put
    if (best_d < (1 << 20)) {
        AgentAction act;
        act.move = mv.toward(camp);
        return act;
    }
    // No forest-by-water in sight. Second-best camp: any walkable tile
    // beside water still trains forage every tick through the automatic
    // drink, so park there while fed and only leave to harvest food.
    if (me.food >= 40) {
        int water_d = 1 << 20;
        Coord shore;
        for (int dr = -v; dr <= v; ++dr)
            for (int dc = -v; dc <= v; ++dc) {
                if (kind_at(dr, dc) == TileKind::Water) continue;
                bool beside_water = false;
                for (int rr = -1; rr <= 1 && !beside_water; ++rr)
                    for (int cc = -1; cc <= 1; ++cc) {
                        int nr = dr + rr, nc = dc + cc;
                        if (nr < -v || nr > v || nc < -v || nc > v) continue;
                        if (kind_at(nr, nc) == TileKind::Water) {
                            beside_water = true;
                            break;
                        }
                    }
                if (!beside_water) continue;
                Coord p{me.position.row + dr, me.position.col + dc};
                if (!(dr == 0 && dc == 0) && !mv.crop_walkable(p)) continue;
                int d = std::max(dr < 0 ? -dr : dr, dc < 0 ? -dc : dc);
                if (d < water_d) {
                    water_d = d;
                    shore = p;
                }
            }
        if (water_d == 0) return {};
        if (water_d < (1 << 20)) {
            AgentAction act;
            act.move = mv.toward(shore);
            return act;
        }
    }
    return forage_action(mv, rng);
}

AgentAction combat_action(const MemberView& mv, const ArenaConfig& cfg, Rng& rng,
                          bool own_sight_only) {
    const EntityObs* enemy =
        mv.nearest([](const EntityObs&) { return true; }, own_sight_only);
    if (enemy) {
        int d = linf(mv.me.position, enemy->position);
        AgentAction act;
        if (d <= max_attack_range(cfg)) {
            act.attack = Attack{longest_reaching_style(cfg, d), enemy->id};
            act.move = Move::Stay;
        } else {
            act.move = mv.toward(enemy->position);
        }
        return act;
    }
    return forage_action(mv, rng);
}

// Decentralized per-agent switcher: survive, then hunt low NPCs for
// equipment, then fight players, then push exploration outward.
AgentAction stage2_action(const MemberView& mv, const ArenaConfig& cfg, Rng& rng) {
    if (mv.me.food < 40 || mv.me.water < 40 || mv.me.hp < 40) return forage_action(mv, rng);
    int reach = max_attack_range(cfg);
    if (mv.me.equipment_level < 10) {
        const EntityObs* npc = mv.nearest(
            [](const EntityObs& e) { return e.is_npc && e.level <= 10; }, true);
        if (npc) {
            int d = linf(mv.me.position, npc->position);
            AgentAction act;
            if (d <= reach)
                act.attack = Attack{longest_reaching_style(cfg, d), npc->id};
            else
                act.move = mv.toward(npc->position);
            return act;
        }
    }
    const EntityObs* player = mv.nearest(
        [](const EntityObs& e) { return !e.is_npc; }, true);
    if (player) {
        int d = linf(mv.me.position, player->position);
        AgentAction act;
        if (d <= reach)
            act.attack = Attack{longest_reaching_style(cfg, d), player->id};
        else
            act.move = mv.toward(player->position);
        return act;
    }
    AgentAction act;
    act.move = mv.away_from_spawn(rng);
    return act;
}

class NoopPolicy final : public TeamPolicy {
  public:
    void reset(const EpisodeInfo& info) override { team_size_ = info.config.team_size; }
    std::vector<AgentAction> act(const TeamObservation&) override {
        return std::vector<AgentAction>(static_cast<size_t>(team_size_));
    }
    std::string name() const override { return "noop"; }

  private:
    int team_size_ = 8;
};

class RandomPolicy final : public TeamPolicy {
  public:
    void reset(const EpisodeInfo& info) override { rng_ = Rng(info.policy_seed); }
    std::vector<AgentAction> act(const TeamObservation& obs) override {
        // One draw per member slot, dead or alive, so the stream is easy
        // to reproduce from outside the process.
        std::vector<AgentAction> actions(obs.members.size());
        for (auto& a : actions) a.move = static_cast<Move>(rng_.below(5));
        return actions;
    }
    std::string name() const override { return "random"; }

  private:
    Rng rng_;
};

class ScriptedPolicy : public TeamPolicy {
  public:
    void reset(const EpisodeInfo& info) override {
        rng_ = Rng(info.policy_seed);
        cfg_ = info.config;
    }

  protected:
    Rng rng_;
    ArenaConfig cfg_;
};

class ForagePolicy final : public ScriptedPolicy {
  public:
    std::vector<AgentAction> act(const TeamObservation& obs) override {
        std::vector<AgentAction> actions(obs.members.size());
        for (size_t m = 0; m < obs.members.size(); ++m) {
            if (!obs.members[m].present) continue;
            MemberView mv{obs, obs.members[m], static_cast<int>(m)};
            actions[m] = forage_action(mv, rng_);
        }
        return actions;
    }
    std::string name() const override { return "forage"; }
};

class CombatPolicy final : public ScriptedPolicy {
  public:
    std::vector<AgentAction> act(const TeamObservation& obs) override {
        std::vector<AgentAction> actions(obs.members.size());
        for (size_t m = 0; m < obs.members.size(); ++m) {
            if (!obs.members[m].present) continue;
            MemberView mv{obs, obs.members[m], static_cast<int>(m)};
            actions[m] = combat_action(mv, cfg_, rng_, /*own_sight_only=*/false);
        }
        return actions;
    }
    std::string name() const override { return "combat"; }
};

class CompositePolicy final : public ScriptedPolicy {
  public:
    explicit CompositePolicy(int stage) : stage_(stage) {
        if (stage != 2 && stage != 3) throw std::invalid_argument("composite stage must be 2 or 3");
    }

    std::vector<AgentAction> act(const TeamObservation& obs) override {
        std::vector<AgentAction> actions(obs.members.size());
        // Stage 3 coordination: shared focus-fire target = lowest-HP enemy
        // player seen by at least two members.
        const EntityObs* focus = nullptr;
        if (stage_ == 3) {
            for (const auto& e : obs.entities) {
                if (e.is_npc) continue;
                int observers = std::popcount(static_cast<unsigned>(e.observer_mask));
                if (observers < 2) continue;
                if (!focus || e.hp < focus->hp || (e.hp == focus->hp && e.id < focus->id))
                    focus = &e;
            }
        }
        for (size_t m = 0; m < obs.members.size(); ++m) {
            if (!obs.members[m].present) continue;
            MemberView mv{obs, obs.members[m], static_cast<int>(m)};
            if (stage_ == 2) {
                actions[m] = stage2_action(mv, cfg_, rng_);
                continue;
            }
            actions[m] = stage3_action(mv, static_cast<int>(m), focus);
        }
        return actions;
    }

    std::string name() const override { return stage_ == 2 ? "stage2" : "stage3"; }

  private:
    // Stage 3 = the stage-2 switcher plus team coordination, tuned by desk
    // runs against the stage-1 field. Seven members roam with the stage-2
    // behavior: the sustained pressure on neighboring teams is what caps
    // how many tiers *they* can bank, and it feeds the exploration and
    // defeat tiers as a side effect. Roamers take the lowest slots because
    // kill credit goes to the lowest-id attacker, which concentrates the
    // defeat tally on one member. The last member camps forest-by-water to
    // bank the forage tier no matter what happens up front. On top of the
    // roles sit two coordination layers: a shared focus-fire target that
    // overrides individual target picks whenever it is in reach, and a
    // starvation rescue that routes a member with nothing edible in sight
    // toward its best-fed teammate.
    AgentAction stage3_action(const MemberView& mv, int m, const EntityObs* focus) {
        const MemberObs& me = mv.me;
        AgentAction act;
        // Rescue: a teammate with a full tank is standing proof of food.
        if (me.food < 50) {
            Coord here;
            bool forest_visible =
                mv.nearest_tile([](TileKind k) { return k == TileKind::Forest; }, here);
            if (!forest_visible) {
                const MemberObs* fed = nullptr;
                for (const auto& mb : mv.obs.members) {
                    if (!mb.present || mb.agent_id == me.agent_id || mb.food < 90) continue;
                    if (!fed || linf(me.position, mb.position) < linf(me.position, fed->position))
                        fed = &mb;
                }
                if (fed && linf(me.position, fed->position) > 2) {
                    act.move = mv.toward(fed->position);
                    act.attack = opportunistic_attack(mv, focus);
                    return act;
                }
            }
        }
        if (m + 1 < static_cast<int>(mv.obs.members.size()))
            act = stage2_action(mv, cfg_, rng_);
        else
            act = camp_forage_action(mv, rng_);
        // Focus fire trumps individual picks; otherwise take any free
        // shot at whatever is already in reach.
        int reach = max_attack_range(cfg_);
        if (focus && linf(me.position, focus->position) <= reach)
            act.attack =
                Attack{longest_reaching_style(cfg_, linf(me.position, focus->position)),
                       focus->id};
        else if (!act.attack)
            act.attack = opportunistic_attack(mv, focus);
        return act;
    }

    // Best target already in attack range, if any: the shared focus (so
    // kill credit concentrates and weakened enemies actually die), then
    // the lowest-HP enemy player, then the highest-level neutral npc
    // (equipment credit equals the npc's level), then -- only at solid
    // HP -- a hostile npc, which is attacking us anyway at this range.
    std::optional<Attack> opportunistic_attack(const MemberView& mv, const EntityObs* focus) {
        const MemberObs& me = mv.me;
        int reach = max_attack_range(cfg_);
        auto in_reach = [&](const EntityObs& e) {
            return linf(me.position, e.position) <= reach;
        };
        auto hit = [&](const EntityObs& e) {
            return Attack{longest_reaching_style(cfg_, linf(me.position, e.position)), e.id};
        };
        if (focus && in_reach(*focus) &&
            (!focus->is_npc || focus->level < kHostileNpcLevel || me.hp > 50))
            return hit(*focus);
        const EntityObs* best = nullptr;
        for (const auto& e : mv.obs.entities) {
            if (e.is_npc || !in_reach(e)) continue;
            if (!best || e.hp < best->hp || (e.hp == best->hp && e.id < best->id)) best = &e;
        }
        if (best) return hit(*best);
        for (const auto& e : mv.obs.entities) {
            if (!e.is_npc || e.level >= kHostileNpcLevel || !in_reach(e)) continue;
            if (!best || e.level > best->level || (e.level == best->level && e.id < best->id))
                best = &e;
        }
        if (best) return hit(*best);
        if (me.hp > 50) {
            for (const auto& e : mv.obs.entities) {
                if (!e.is_npc || e.level < kHostileNpcLevel || !in_reach(e)) continue;
                if (!best || e.hp < best->hp || (e.hp == best->hp && e.id < best->id)) best = &e;
            }
            if (best) return hit(*best);
        }
        return std::nullopt;
    }

    int stage_;
};

class MixPolicy final : public ScriptedPolicy {
  public:
    explicit MixPolicy(double aggressiveness)
        : aggressiveness_(std::clamp(aggressiveness, 0.0, 1.0)) {}

    std::vector<AgentAction> act(const TeamObservation& obs) override {
        std::vector<AgentAction> actions(obs.members.size());
        for (size_t m = 0; m < obs.members.size(); ++m) {
            bool competent = rng_.unit() < aggressiveness_;  // draw for every slot
            if (!obs.members[m].present) continue;
            MemberView mv{obs, obs.members[m], static_cast<int>(m)};
            if (competent)
                actions[m] = stage2_action(mv, cfg_, rng_);
            else
                actions[m].move = static_cast<Move>(rng_.below(5));
        }
        return actions;
    }

    std::string name() const override { return "mix:" + std::to_string(aggressiveness_); }

  private:
    double aggressiveness_;
};

}  // namespace

PolicyPtr make_noop_policy() { return std::make_unique<NoopPolicy>(); }
PolicyPtr make_random_policy() { return std::make_unique<RandomPolicy>(); }
PolicyPtr make_forage_policy() { return std::make_unique<ForagePolicy>(); }
PolicyPtr make_combat_policy() { return std::make_unique<CombatPolicy>(); }
PolicyPtr make_composite_policy(int stage) { return std::make_unique<CompositePolicy>(stage); }
PolicyPtr make_mix_policy(double a) { return std::make_unique<MixPolicy>(a); }

bool is_builtin_spec(const std::string& spec) {
    return spec == "noop" || spec == "random" || spec == "forage" || spec == "combat" ||
           spec == "stage2" || spec == "stage3" || spec.rfind("mix:", 0) == 0;
}

PolicyPtr make_policy(const std::string& spec) {
    if (spec == "noop") return make_noop_policy();
    if (spec == "random") return make_random_policy();
    if (spec == "forage") return make_forage_policy();
    if (spec == "combat") return make_combat_policy();
    if (spec == "stage2") return make_composite_policy(2);
    if (spec == "stage3") return make_composite_policy(3);
    if (spec.rfind("mix:", 0) == 0) return make_mix_policy(std::stod(spec.substr(4)));
    if (spec.rfind("ext:", 0) == 0) return make_external_policy(spec.substr(4));
    throw std::invalid_argument("unknown policy spec: " + spec);
}

}  // namespace ffa
