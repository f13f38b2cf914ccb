#include "ffa/analytics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ffa {

uint64_t Heatmap::total() const {
    return std::accumulate(counts.begin(), counts.end(), uint64_t{0});
}

Heatmap visitation_heatmap(const std::vector<ReplayRecord>& replays,
                           const std::string& policy_name) {
    Heatmap h;
    for (const auto& rec : replays) {
        if (h.map_size == 0) {
            h.map_size = rec.header.map_size;
            h.counts.assign(static_cast<size_t>(h.map_size) * h.map_size, 0);
        } else if (rec.header.map_size != h.map_size) {
            throw std::invalid_argument("heatmap over mixed map sizes");
        }
        std::vector<bool> counted_team(rec.header.entrants.size(), false);
        for (size_t t = 0; t < rec.header.entrants.size(); ++t)
            counted_team[t] = rec.header.entrants[t] == policy_name;
        std::vector<bool> counted_agent(rec.header.spawns.size(), false);
        for (const auto& s : rec.header.spawns)
            counted_agent[static_cast<size_t>(s[0])] = counted_team[static_cast<size_t>(s[1])];
        for (const auto& tick : rec.ticks)
            for (const auto& p : tick.positions)
                if (counted_agent[static_cast<size_t>(p[0])])
                    h.counts[static_cast<size_t>(p[1]) * h.map_size + p[2]] += 1;
        h.episode_count += 1;
    }
    return h;
}

std::vector<AgentTrajectory> team_trajectories(const ReplayRecord& replay, int team) {
    if (team < 0 || team >= replay.header.team_count)
        throw std::invalid_argument("unknown team " + std::to_string(team));
    std::vector<AgentTrajectory> trajs;
    for (const auto& s : replay.header.spawns)
        if (s[1] == team) trajs.push_back({s[0], {Coord{s[2], s[3]}}});
    for (const auto& tick : replay.ticks)
        for (auto& tr : trajs)
            for (const auto& p : tick.positions)
                if (p[0] == tr.agent_id) tr.positions.push_back({p[1], p[2]});
    return trajs;
}

SubtaskBreakdown subtask_breakdown(const std::vector<MatchResult>& results, int team) {
    if (results.empty()) throw std::invalid_argument("breakdown needs at least one result");
    SubtaskBreakdown b;
    for (const auto& r : results) {
        const TeamScore& ts = r.teams.at(static_cast<size_t>(team));
        for (int k = 0; k < 4; ++k)
            b.mean_points[static_cast<size_t>(k)] += ts.task_points[static_cast<size_t>(k)];
        b.mean_achievement += ts.achievement;
    }
    b.match_count = static_cast<int>(results.size());
    for (auto& v : b.mean_points) v /= b.match_count;
    b.mean_achievement /= b.match_count;
    return b;
}

std::string heatmap_to_csv(const Heatmap& h) {
    std::ostringstream out;
    for (int r = 0; r < h.map_size; ++r) {
        for (int c = 0; c < h.map_size; ++c) {
            if (c) out << ",";
            out << h.at(r, c);
        }
        out << "\n";
    }
    return out.str();
}

std::string trajectories_to_csv(const std::vector<AgentTrajectory>& trajs) {
    std::ostringstream out;
    out << "agent,step,row,col\n";
    for (const auto& tr : trajs)
        for (size_t i = 0; i < tr.positions.size(); ++i)
            out << tr.agent_id << "," << i << "," << tr.positions[i].row << ","
                << tr.positions[i].col << "\n";
    return out.str();
}

std::string breakdown_to_csv(const SubtaskBreakdown& b) {
    std::ostringstream out;
    out << "task,mean_points\n";
    for (int k = 0; k < 4; ++k)
        out << kTaskNames[static_cast<size_t>(k)] << "," << b.mean_points[static_cast<size_t>(k)]
            << "\n";
    out << "achievement," << b.mean_achievement << "\n";
    return out.str();
}

}  // namespace ffa
