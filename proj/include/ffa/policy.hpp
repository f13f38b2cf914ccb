#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ffa/observation.hpp"
#include "ffa/rng.hpp"

namespace ffa {

struct EpisodeInfo {
    uint64_t policy_seed = 0;
    int team_id = -1;
    ArenaConfig config;
};

// One decision function per 8-agent team. Implementations must be
// deterministic given (observation stream, policy seed).
class TeamPolicy {
  public:
    virtual ~TeamPolicy() = default;
    virtual void reset(const EpisodeInfo& info) = 0;
    virtual std::vector<AgentAction> act(const TeamObservation& obs) = 0;
    virtual std::string name() const = 0;
    // External policies flip this when they hit the violation budget.
    virtual bool degraded() const { return false; }
};

using PolicyPtr = std::unique_ptr<TeamPolicy>;

// Built-in policy specs:
//   noop | random | forage | combat | stage2 | stage3 | mix:<0..1>
// External process: ext:<command line>
PolicyPtr make_policy(const std::string& spec);
bool is_builtin_spec(const std::string& spec);

PolicyPtr make_noop_policy();
PolicyPtr make_random_policy();
PolicyPtr make_forage_policy();
PolicyPtr make_combat_policy();
// Stand-ins of graded strength for PvE stages 2 and 3.
PolicyPtr make_composite_policy(int stage);
// Stage-2 behavior with probability `aggressiveness` per member per tick,
// random otherwise; strength is monotone in the parameter.
PolicyPtr make_mix_policy(double aggressiveness);

// Defined in external_policy.cpp: child process speaking the line protocol.
PolicyPtr make_external_policy(const std::string& command, int tick_budget_ms = 100);

}  // namespace ffa
