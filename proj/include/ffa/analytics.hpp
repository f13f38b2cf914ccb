#pragma once

#include <string>
#include <vector>

#include "ffa/replay.hpp"

namespace ffa {

struct Heatmap {
    int map_size = 0;
    int episode_count = 0;
    std::vector<uint64_t> counts;  // map_size^2 occupancy-ticks

    uint64_t at(int r, int c) const {
        return counts[static_cast<size_t>(r) * map_size + c];
    }
    uint64_t total() const;
};

// Occupancy-ticks per tile for every agent of teams whose entrant name
// matches `policy_name`, summed over episodes. Mixed map sizes are
// rejected.
Heatmap visitation_heatmap(const std::vector<ReplayRecord>& replays,
                           const std::string& policy_name);

struct AgentTrajectory {
    int agent_id = -1;
    std::vector<Coord> positions;  // spawn followed by end-of-tick positions
};

// Paths of the team's agents until death, spawn first.
std::vector<AgentTrajectory> team_trajectories(const ReplayRecord& replay, int team);

struct SubtaskBreakdown {
    std::array<double, 4> mean_points = {0, 0, 0, 0};
    double mean_achievement = 0.0;
    int match_count = 0;
};

// Mean per-task points for one team slot across match results (radar data).
SubtaskBreakdown subtask_breakdown(const std::vector<MatchResult>& results, int team);

// Plot-ready tables (CSV).
std::string heatmap_to_csv(const Heatmap& h);
std::string trajectories_to_csv(const std::vector<AgentTrajectory>& trajs);
std::string breakdown_to_csv(const SubtaskBreakdown& b);

}  // namespace ffa
