#pragma once

#include <array>
#include <string>
#include <vector>

namespace ffa {

// The four rated tasks, in canonical order.
enum Task : int { kExplore = 0, kForage = 1, kEquipment = 2, kDefeat = 3 };
inline constexpr std::array<const char*, 4> kTaskNames = {"explore", "forage",
                                                          "equipment", "defeat"};

struct TierThresholds {
    int easy;
    int medium;
    int hard;
};

struct TaskThresholds {
    std::array<TierThresholds, 4> tasks = {{
        {32, 64, 127},  // explore (tiles, L-inf from spawn)
        {20, 35, 50},   // forage skill level
        {1, 10, 20},    // equipment level
        {1, 3, 6},      // players defeated
    }};
    int easy_points = 4;
    int medium_points = 10;
    int hard_points = 21;
};

// Best value per task over all 8 team members, dead members included.
struct TeamTaskStats {
    std::array<int, 4> best = {0, 0, 0, 0};

    bool operator==(const TeamTaskStats&) const = default;
};

struct TeamScore {
    TeamTaskStats stats;
    std::array<int, 4> task_points = {0, 0, 0, 0};
    int achievement = 0;
    int rank = 0;  // competition ranking, 1-based; equal achievements share
};

struct MatchResult {
    uint64_t seed = 0;
    int episode_length = 0;
    std::string early_stop;       // empty when the full horizon ran
    std::vector<TeamScore> teams; // index == team id
    std::vector<bool> degraded;   // team policy degraded to no-ops mid-match
};

// Points for one task value: 0/4/10/21 by the highest tier reached.
int task_points(int value, const TierThresholds& tier, const TaskThresholds& t = {});

// Sum of task_points over the four tasks; range [0, 84].
int team_achievement(const TeamTaskStats& stats, const TaskThresholds& t = {});

std::array<int, 4> per_task_points(const TeamTaskStats& stats, const TaskThresholds& t = {});

// Competition ranks (1,2,2,4) by descending achievement.
std::vector<int> rank_teams(const std::vector<int>& achievements);

// Reward channel: achievement(new) - achievement(prev); nonnegative for
// monotone stats.
int achievement_delta(const TeamTaskStats& prev, const TeamTaskStats& next,
                      const TaskThresholds& t = {});

}  // namespace ffa
