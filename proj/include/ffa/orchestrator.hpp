#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ffa/episode.hpp"
#include "ffa/rating.hpp"

namespace ffa {

enum class QualState : int { Registered = 0, Stage1 = 1, Stage2 = 2, Stage3 = 3 };

struct Submission {
    int id = -1;
    std::string name;
    std::string policy_spec;     // built-in name or ext:<command>
    QualState state = QualState::Registered;
    bool pvp_qualified = false;  // separate axis: stage-1 achievement >= threshold
    std::map<int, int> best_achievement;     // per stage
    std::map<int, double> best_top1_ratio;   // per stage
};

struct PvEResult {
    int stage = 0;
    std::vector<MatchResult> matches;  // 10 entries
    double top1_ratio = 0.0;           // ties count as top-1
    int best_achievement = 0;
};

struct StageGates {
    int pvp_achievement = 25;       // stage-1 best achievement for PvP entry
    double promote_top1 = 0.5;      // inclusive, both stage transitions
};

struct PvEOptions {
    ArenaConfig config;
    uint64_t seed = 1;
    int match_count = 10;
    int parallelism = 1;
    StageGates gates;
};

// 10 matches of the submission vs 15 built-in teams for the stage
// (stage 1: 5x combat, 5x forage, 5x random; stages 2/3: composites).
PvEResult evaluate_pve(const Submission& submission, int stage, const PvEOptions& options);

// Monotone state advance from a fresh PvE result.
void advance_stage(Submission& submission, const PvEResult& result,
                   const StageGates& gates = {});

struct TournamentState {
    std::vector<Submission> roster;        // PvP-qualified entrants
    std::vector<int> match_counts;         // aligned with roster
    std::vector<Rating> ratings;           // aligned with roster
    uint64_t next_seq = 0;
};

// 16 distinct entrants, lowest match counts first, seeded shuffle breaking
// ties; slots beyond the roster are filled with built-in stand-ins (-1).
std::vector<int> sample_match(const TournamentState& state, int team_count, Rng& rng);

struct MatchWork {
    uint64_t seq = 0;
    uint64_t seed = 0;
    std::vector<int> entrants;              // roster index per team, -1 = stand-in
    std::vector<std::string> policy_specs;  // one per team
};

struct MatchCompletion {
    uint64_t seq = 0;
    MatchResult result;
    std::string replay_digest;
    std::string replay_path;  // empty unless replays are being kept
    bool failed = false;      // worker threw twice; match skipped and logged
    std::string error;
};

// Executes descriptors concurrently (at most `parallelism` in flight) and
// invokes `sink` for every completion in ascending sequence order, from a
// single thread. A match whose worker throws is retried once with the same
// seed, then surfaced as an error.
void worker_pool(const std::vector<MatchWork>& work, const ArenaConfig& config,
                 int parallelism, const std::string& replay_dir,
                 const std::function<void(const MatchCompletion&)>& sink);

struct LeaderboardRow {
    int submission_id;
    std::string name;
    Rating rating;
    int matches = 0;
    double score = 0.0;  // mu - 3 sigma
};

struct TournamentOptions {
    ArenaConfig config;
    RatingConfig rating;
    uint64_t master_seed = 1;
    int target_matches_per_submission = 100;
    int parallelism = 1;
    std::string replay_dir;  // keep replays here when nonempty
    // Observer for progress/persistence; called in sequence order.
    std::function<void(const MatchWork&, const MatchCompletion&,
                       const TournamentState&)> on_match;
};

struct TournamentOutcome {
    TournamentState state;
    std::vector<LeaderboardRow> leaderboard;
    std::vector<uint64_t> failed_matches;
};

// Deterministic schedule built upfront from the master seed; rating
// updates applied in ascending sequence order so the result is identical
// at any parallelism.
TournamentOutcome run_tournament(TournamentState state, const TournamentOptions& options);

std::vector<LeaderboardRow> build_leaderboard(const TournamentState& state);

}  // namespace ffa
