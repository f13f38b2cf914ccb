#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffa/orchestrator.hpp"

namespace ffa {

// Plain-file registry directory:
//   lock               single-writer lock (pid inside)
//   submissions.jsonl  one submission record per line, last record wins
//   matchlog.jsonl     append-only match log with strictly increasing seq
//   ratings.jsonl      snapshot, rewritten atomically (tmp + rename)
// A corrupt trailing record (torn append) is skipped with a warning; all
// prior records stay intact.
class Registry {
  public:
    // Opens (creating if needed). write=true takes the lock.
    explicit Registry(const std::string& dir, bool write = true);
    ~Registry();
    Registry(const Registry&) = delete;
    Registry& operator=(const Registry&) = delete;

    const std::string& dir() const { return dir_; }

    void upsert_submission(const Submission& s);
    std::vector<Submission> load_submissions() const;
    std::optional<Submission> find_submission(const std::string& name) const;

    struct MatchLogEntry {
        uint64_t seq = 0;
        uint64_t seed = 0;
        std::vector<int> entrant_ids;  // submission id per team, -1 stand-in
        std::vector<int> achievements;
        std::vector<int> ranks;
        std::string replay_digest;
    };
    void append_match(const MatchLogEntry& e);  // fsync'd append
    std::vector<MatchLogEntry> load_match_log() const;

    struct RatingRow {
        int submission_id = -1;
        Rating rating;
        int matches = 0;
        uint64_t last_seq = 0;
    };
    void write_ratings(const std::vector<RatingRow>& rows);  // atomic snapshot
    std::vector<RatingRow> load_ratings() const;

    // Rebuilds tournament progress for the given roster: ratings replayed
    // from the match log on top of fresh priors.
    TournamentState reconstruct_state(const std::vector<Submission>& roster,
                                      const RatingConfig& rating_config) const;

    int warnings() const { return warnings_; }

  private:
    std::string dir_;
    int lock_fd_ = -1;
    mutable int warnings_ = 0;
};

std::string submission_to_json(const Submission& s);
Submission submission_from_json(const std::string& line);

}  // namespace ffa
