#include <doctest.h>

#include <sstream>

#include "ffa/episode.hpp"

using namespace ffa;

namespace {

struct FaultyPolicy final : TeamPolicy {
    int throw_at_tick;
    bool wrong_count;
    explicit FaultyPolicy(int tick, bool bad_count = false)
        : throw_at_tick(tick), wrong_count(bad_count) {}
    void reset(const EpisodeInfo&) override {}
    std::vector<AgentAction> act(const TeamObservation& obs) override {
        if (obs.tick >= throw_at_tick) {
            if (wrong_count) return std::vector<AgentAction>(3);
            throw std::runtime_error("scripted fault");
        }
        return std::vector<AgentAction>(obs.members.size());
    }
    std::string name() const override { return "faulty"; }
};

EpisodeOutcome run_specs(const std::vector<std::string>& specs, uint64_t seed,
                         std::string* replay_text = nullptr) {
    ArenaConfig cfg = ArenaConfig::desk();
    GameMap map = generate_map(seed, cfg);
    std::vector<PolicyPtr> policies;
    for (const auto& s : specs) policies.push_back(make_policy(s));
    std::ostringstream out;
    EpisodeOutcome outcome = run_episode(map, policies, cfg, seed, &out);
    if (replay_text) *replay_text = out.str();
    return outcome;
}

std::vector<std::string> mixed_specs() {
    return {"combat", "forage", "random", "stage2", "stage3", "mix:0.5", "noop", "combat"};
}

}  // namespace

TEST_CASE("identical inputs give identical results and replay digests") {
    std::string ra, rb;
    EpisodeOutcome a = run_specs(mixed_specs(), 61, &ra);
    EpisodeOutcome b = run_specs(mixed_specs(), 61, &rb);
    CHECK(a.replay_digest == b.replay_digest);
    CHECK(ra == rb);
    REQUIRE(a.result.teams.size() == b.result.teams.size());
    for (size_t t = 0; t < a.result.teams.size(); ++t) {
        CHECK(a.result.teams[t].stats == b.result.teams[t].stats);
        CHECK(a.result.teams[t].achievement == b.result.teams[t].achievement);
        CHECK(a.result.teams[t].rank == b.result.teams[t].rank);
    }
    // A different seed changes the outcome.
    EpisodeOutcome c = run_specs(mixed_specs(), 62);
    CHECK(a.replay_digest != run_specs(mixed_specs(), 62, &ra).replay_digest);
    (void)c;
}

TEST_CASE("ranks come from achievements and the result is well-formed") {
    EpisodeOutcome out = run_specs(mixed_specs(), 63);
    const MatchResult& r = out.result;
    CHECK(r.seed == 63);
    CHECK(r.episode_length > 0);
    CHECK(r.teams.size() == 8);
    CHECK(r.degraded.size() == 8);
    std::vector<int> ach;
    for (const auto& t : r.teams) ach.push_back(t.achievement);
    std::vector<int> expect = rank_teams(ach);
    for (size_t t = 0; t < r.teams.size(); ++t) CHECK(r.teams[t].rank == expect[t]);
}

TEST_CASE("all-noop field starves out and stops early") {
    std::vector<std::string> specs(8, "noop");
    EpisodeOutcome out = run_specs(specs, 64);
    CHECK(out.result.early_stop == "all_players_dead");
    // Reserves hit zero on tick 100 (the first damage tick), so 100 hp at
    // 5 per tick runs out on tick 119.
    CHECK(out.result.episode_length == 119);
    for (const auto& t : out.result.teams) CHECK(t.stats.best[kExplore] == 0);
}

TEST_CASE("a policy that throws mid-match is degraded, match completes") {
    ArenaConfig cfg = ArenaConfig::desk();
    GameMap map = generate_map(65, cfg);
    std::vector<PolicyPtr> policies;
    policies.push_back(std::make_unique<FaultyPolicy>(10));
    policies.push_back(std::make_unique<FaultyPolicy>(20, /*bad_count=*/true));
    for (int t = 2; t < cfg.team_count; ++t) policies.push_back(make_policy("forage"));
    EpisodeOutcome out = run_episode(map, policies, cfg, 65);
    CHECK(out.result.degraded[0]);
    CHECK(out.result.degraded[1]);
    for (size_t t = 2; t < out.result.degraded.size(); ++t) CHECK(!out.result.degraded[t]);
    CHECK(out.result.episode_length == cfg.horizon);
}

TEST_CASE("custom entrant labels land in the replay header") {
    ArenaConfig cfg = ArenaConfig::desk();
    GameMap map = generate_map(66, cfg);
    std::vector<PolicyPtr> policies;
    for (int t = 0; t < cfg.team_count; ++t) policies.push_back(make_policy("noop"));
    std::vector<std::string> labels;
    for (int t = 0; t < cfg.team_count; ++t) labels.push_back("entrant_" + std::to_string(t));
    std::ostringstream buf;
    run_episode(map, policies, cfg, 66, &buf, labels);
    std::istringstream in(buf.str());
    ReplayRecord rec = read_replay(in);
    CHECK(rec.header.entrants == labels);

    std::vector<PolicyPtr> p2;
    for (int t = 0; t < cfg.team_count; ++t) p2.push_back(make_policy("noop"));
    CHECK_THROWS_AS(run_episode(map, p2, cfg, 66, nullptr, {"just_one"}),
                    std::invalid_argument);
}

TEST_CASE("policy count must match the team count") {
    ArenaConfig cfg = ArenaConfig::desk();
    GameMap map = generate_map(67, cfg);
    std::vector<PolicyPtr> policies;
    policies.push_back(make_policy("noop"));
    CHECK_THROWS_AS(run_episode(map, policies, cfg, 67), std::invalid_argument);
}
