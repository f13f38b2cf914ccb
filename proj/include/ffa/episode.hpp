#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ffa/policy.hpp"
#include "ffa/replay.hpp"

namespace ffa {

struct EpisodeOutcome {
    MatchResult result;
    std::string replay_digest;  // empty when no replay stream was given
};

// Full episode: spawn -> step loop over the horizon (early stop when every
// player is dead), one policy call per team per tick. A policy that throws
// or returns a malformed action set is degraded to no-ops for the rest of
// the match; the match itself never aborts. Policies are reset with seeds
// derived from (seed, team slot) before the first tick.
// `entrant_labels` overrides the replay-header entrant names (default: the
// policy names); the labels are metadata and take part in the digest, so
// equivalence checks across implementations should pin them.
EpisodeOutcome run_episode(const GameMap& map, std::vector<PolicyPtr>& policies,
                           const ArenaConfig& config, uint64_t seed,
                           std::ostream* replay_out = nullptr,
                           const std::vector<std::string>& entrant_labels = {});

}  // namespace ffa
