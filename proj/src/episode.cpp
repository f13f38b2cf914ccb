#include "ffa/episode.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace ffa {
namespace {

TeamTaskStats team_stats(const WorldState& state, int team) {
    TeamTaskStats ts;
    const ArenaConfig& cfg = state.config;
    for (int m = 0; m < cfg.team_size; ++m) {
        const AgentState& a = state.agents[static_cast<size_t>(team * cfg.team_size + m)];
        ts.best[kExplore] = std::max(ts.best[kExplore], a.max_explore);
        ts.best[kForage] = std::max(ts.best[kForage], forage_level(a.forage_xp, cfg));
        ts.best[kEquipment] = std::max(ts.best[kEquipment], a.equipment_level);
        ts.best[kDefeat] = std::max(ts.best[kDefeat], a.player_kills);
    }
    return ts;
}

}  // namespace

EpisodeOutcome run_episode(const GameMap& map, std::vector<PolicyPtr>& policies,
                           const ArenaConfig& config, uint64_t seed,
                           std::ostream* replay_out,
                           const std::vector<std::string>& entrant_labels) {
    if (static_cast<int>(policies.size()) != config.team_count)
        throw std::invalid_argument("need exactly one policy per team");
    if (!entrant_labels.empty() &&
        static_cast<int>(entrant_labels.size()) != config.team_count)
        throw std::invalid_argument("need exactly one entrant label per team");

    WorldState state = spawn_episode(map, config, seed);
    std::vector<bool> degraded(static_cast<size_t>(config.team_count), false);
    for (int t = 0; t < config.team_count; ++t) {
        EpisodeInfo info;
        info.policy_seed = mix64(seed, 0x90110, static_cast<uint64_t>(t));
        info.team_id = t;
        info.config = config;
        try {
            policies[static_cast<size_t>(t)]->reset(info);
        } catch (const std::exception&) {
            degraded[static_cast<size_t>(t)] = true;
        }
    }

    std::optional<ReplayWriter> writer;
    if (replay_out) {
        writer.emplace(*replay_out);
        ReplayHeader h;
        h.seed = seed;
        h.map_size = config.map_size;
        h.team_count = config.team_count;
        h.team_size = config.team_size;
        h.horizon = config.horizon;
        h.forage_xp_per_level = config.forage_xp_per_level;
        if (entrant_labels.empty())
            for (const auto& p : policies) h.entrants.push_back(p->name());
        else
            h.entrants = entrant_labels;
        for (const auto& a : state.agents)
            h.spawns.push_back({a.agent_id, a.team_id, a.spawn_position.row,
                                a.spawn_position.col});
        writer->write_header(h);
    }

    std::string early_stop;
    int length = 0;
    for (int tick = 0; tick < config.horizon; ++tick) {
        std::vector<AgentAction> actions(static_cast<size_t>(config.agent_count()));
        for (int t = 0; t < config.team_count; ++t) {
            size_t ti = static_cast<size_t>(t);
            if (degraded[ti]) continue;
            TeamObservation obs = build_observation(state, t);
            std::vector<AgentAction> team_actions;
            try {
                team_actions = policies[ti]->act(obs);
                if (static_cast<int>(team_actions.size()) != config.team_size)
                    throw std::runtime_error("policy returned wrong action count");
            } catch (const std::exception&) {
                degraded[ti] = true;
                continue;
            }
            if (policies[ti]->degraded()) degraded[ti] = true;
            for (int m = 0; m < config.team_size; ++m)
                actions[static_cast<size_t>(t * config.team_size + m)] =
                    team_actions[static_cast<size_t>(m)];
        }

        TickEvents ev = step(state, actions);
        length = state.tick;

        if (writer) {
            ReplayTick rt;
            rt.tick = ev.tick;
            for (const auto& a : state.agents)
                if (a.alive)
                    rt.positions.push_back({a.agent_id, a.position.row, a.position.col});
            for (const auto& a : state.agents) {
                if (!a.alive) continue;
                const AgentAction& act = actions[static_cast<size_t>(a.agent_id)];
                rt.actions.push_back({a.agent_id, static_cast<int>(act.move),
                                      act.attack ? static_cast<int>(act.attack->style) : -1,
                                      act.attack ? act.attack->target : -1});
            }
            rt.attacks = ev.attacks;
            rt.kills = ev.kills;
            rt.equips = ev.equips;
            rt.harvests = ev.harvests;
            rt.metabolism = ev.metabolism;
            rt.deaths = ev.deaths;
            for (int t = 0; t < config.team_count; ++t)
                rt.achievements.push_back(team_achievement(team_stats(state, t)));
            writer->write_tick(rt);
        }

        if (state.living_players() == 0) {
            early_stop = "all_players_dead";
            break;
        }
    }

    MatchResult result;
    result.seed = seed;
    result.episode_length = length;
    result.early_stop = early_stop;
    result.degraded = degraded;
    std::vector<int> achievements;
    for (int t = 0; t < config.team_count; ++t) {
        TeamScore ts;
        ts.stats = team_stats(state, t);
        ts.task_points = per_task_points(ts.stats);
        ts.achievement = team_achievement(ts.stats);
        achievements.push_back(ts.achievement);
        result.teams.push_back(ts);
    }
    std::vector<int> ranks = rank_teams(achievements);
    for (size_t i = 0; i < result.teams.size(); ++i) result.teams[i].rank = ranks[i];

    EpisodeOutcome out;
    out.result = result;
    if (writer) {
        writer->write_footer(result);
        out.replay_digest = writer->digest();
    }
    return out;
}

}  // namespace ffa
