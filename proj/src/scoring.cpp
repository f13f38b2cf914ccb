#include "ffa/scoring.hpp"

#include <algorithm>
#include <numeric>

namespace ffa {

int task_points(int value, const TierThresholds& tier, const TaskThresholds& t) {
    if (value >= tier.hard) return t.hard_points;
    if (value >= tier.medium) return t.medium_points;
    if (value >= tier.easy) return t.easy_points;
    return 0;
}

std::array<int, 4> per_task_points(const TeamTaskStats& stats, const TaskThresholds& t) {
    std::array<int, 4> pts{};
    for (int k = 0; k < 4; ++k)
        pts[static_cast<size_t>(k)] =
            task_points(stats.best[static_cast<size_t>(k)], t.tasks[static_cast<size_t>(k)], t);
    return pts;
}

int team_achievement(const TeamTaskStats& stats, const TaskThresholds& t) {
    auto pts = per_task_points(stats, t);
    return std::accumulate(pts.begin(), pts.end(), 0);
}

std::vector<int> rank_teams(const std::vector<int>& achievements) {
    size_t n = achievements.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return achievements[a] > achievements[b];
    });
    std::vector<int> ranks(n, 0);
    for (size_t i = 0; i < n; ++i) {
        if (i > 0 && achievements[order[i]] == achievements[order[i - 1]])
            ranks[order[i]] = ranks[order[i - 1]];
        else
            ranks[order[i]] = static_cast<int>(i) + 1;
    }
    return ranks;
}

int achievement_delta(const TeamTaskStats& prev, const TeamTaskStats& next,
                      const TaskThresholds& t) {
    return team_achievement(next, t) - team_achievement(prev, t);
}

}  // namespace ffa
