#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "ffa/orchestrator.hpp"
#include "ffa/rng.hpp"

using namespace ffa;

namespace {

Submission make_submission(int id, const std::string& name, const std::string& spec) {
    Submission s;
    s.id = id;
    s.name = name;
    s.policy_spec = spec;
    return s;
}

PvEOptions desk_pve(uint64_t seed, int parallelism = 2) {
    PvEOptions opt;
    opt.config = ArenaConfig::desk();
    opt.seed = seed;
    opt.parallelism = parallelism;
    return opt;
}

double recompute_top1(const PvEResult& r) {
    int wins = 0;
    for (const auto& m : r.matches) {
        int best_other = 0;
        for (size_t t = 1; t < m.teams.size(); ++t)
            best_other = std::max(best_other, m.teams[t].achievement);
        if (m.teams[0].achievement >= best_other) ++wins;
    }
    return static_cast<double>(wins) / static_cast<double>(r.matches.size());
}

}  // namespace

TEST_CASE("pve evaluation runs ten matches and summarizes them") {
    Submission s = make_submission(1, "challenger", "combat");
    PvEResult r = evaluate_pve(s, 1, desk_pve(81));
    CHECK(r.stage == 1);
    REQUIRE(r.matches.size() == 10);
    int best = 0;
    for (const auto& m : r.matches) {
        CHECK(m.teams.size() == 8);
        best = std::max(best, m.teams[0].achievement);
    }
    CHECK(r.best_achievement == best);
    CHECK(r.top1_ratio == recompute_top1(r));

    // Same options, same outcome.
    PvEResult again = evaluate_pve(s, 1, desk_pve(81, /*parallelism=*/1));
    CHECK(again.top1_ratio == r.top1_ratio);
    CHECK(again.best_achievement == r.best_achievement);
    for (size_t i = 0; i < r.matches.size(); ++i)
        CHECK(again.matches[i].teams[0].achievement == r.matches[i].teams[0].achievement);
}

TEST_CASE("ties count as top-1") {
    // With a one-tick horizon nobody scores, so every match is an 8-way tie.
    Submission s = make_submission(2, "sleeper", "noop");
    PvEOptions opt = desk_pve(82);
    opt.config.horizon = 1;
    opt.config.npc_count = 0;  // no tick-1 equipment pickups from npc kills
    PvEResult r = evaluate_pve(s, 1, opt);
    for (const auto& m : r.matches) {
        for (const auto& t : m.teams) CHECK(t.achievement == 0);
    }
    CHECK(r.top1_ratio == 1.0);
}

TEST_CASE("stage gates: achievement 25 and top-1 ratio 0.5 are inclusive") {
    StageGates gates;

    Submission a = make_submission(3, "a", "combat");
    PvEResult just_in;
    just_in.stage = 1;
    just_in.best_achievement = 25;
    just_in.top1_ratio = 0.5;
    advance_stage(a, just_in, gates);
    CHECK(a.pvp_qualified);
    CHECK(a.state == QualState::Stage2);

    Submission b = make_submission(4, "b", "combat");
    PvEResult just_out;
    just_out.stage = 1;
    just_out.best_achievement = 24;
    just_out.top1_ratio = 0.49;
    advance_stage(b, just_out, gates);
    CHECK(!b.pvp_qualified);
    CHECK(b.state == QualState::Stage1);

    // A later worse run never regresses state or bests.
    advance_stage(a, just_out, gates);
    CHECK(a.pvp_qualified);
    CHECK(a.state == QualState::Stage2);
    CHECK(a.best_achievement[1] == 25);
    CHECK(a.best_top1_ratio[1] == 0.5);
}

TEST_CASE("a submission cannot enter a stage it has not unlocked") {
    Submission s = make_submission(5, "impatient", "combat");
    CHECK_THROWS_AS(evaluate_pve(s, 2, desk_pve(83)), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_pve(s, 4, desk_pve(83)), std::invalid_argument);

    s.best_top1_ratio[1] = 0.5;
    CHECK_NOTHROW(evaluate_pve(s, 2, desk_pve(83)));
}

TEST_CASE("match sampling favors the least-played entrants") {
    TournamentState st;
    for (int i = 0; i < 3; ++i)
        st.roster.push_back(make_submission(i, "r" + std::to_string(i), "random"));
    st.match_counts = {5, 0, 3};
    st.ratings.assign(3, Rating{});

    Rng rng(99);
    std::vector<int> entrants = sample_match(st, 8, rng);
    REQUIRE(entrants.size() == 8);
    CHECK(entrants[0] == 1);
    CHECK(entrants[1] == 2);
    CHECK(entrants[2] == 0);
    for (size_t i = 3; i < entrants.size(); ++i) CHECK(entrants[i] == -1);

    // Deterministic under the same rng state.
    Rng rng2(99);
    CHECK(sample_match(st, 8, rng2) == entrants);

    TournamentState tiny;
    tiny.roster.push_back(make_submission(0, "solo", "random"));
    tiny.match_counts = {0};
    Rng rng3(1);
    CHECK_THROWS_AS(sample_match(tiny, 8, rng3), std::runtime_error);
}

TEST_CASE("worker pool rejects duplicate sequence numbers") {
    std::vector<MatchWork> work(2);
    work[0].seq = 7;
    work[1].seq = 7;
    CHECK_THROWS_AS(
        worker_pool(work, ArenaConfig::desk(), 2, "", [](const MatchCompletion&) {}),
        std::invalid_argument);
}

TEST_CASE("worker pool delivers completions in sequence order at any parallelism") {
    ArenaConfig cfg = ArenaConfig::desk();
    cfg.horizon = 32;
    std::vector<MatchWork> work;
    for (uint64_t i = 0; i < 6; ++i) {
        MatchWork w;
        w.seq = 5 - i;  // deliberately unsorted seqs
        w.seed = 800 + w.seq;
        w.policy_specs.assign(8, "random");
        w.entrants.assign(8, -1);
        work.push_back(std::move(w));
    }

    auto collect = [&](int parallelism) {
        std::vector<uint64_t> seqs;
        std::vector<std::string> digests;
        worker_pool(work, cfg, parallelism, "", [&](const MatchCompletion& c) {
            CHECK(!c.failed);
            seqs.push_back(c.seq);
            digests.push_back(c.replay_digest);
        });
        return std::make_pair(seqs, digests);
    };

    auto serial = collect(1);
    auto wide = collect(8);
    std::vector<uint64_t> expect{0, 1, 2, 3, 4, 5};
    CHECK(serial.first == expect);
    CHECK(wide.first == expect);
    CHECK(serial.second == wide.second);
}

TEST_CASE("a match that keeps failing is surfaced, not fatal") {
    TournamentState st;
    st.roster.push_back(make_submission(0, "good", "random"));
    st.roster.push_back(make_submission(1, "broken", "no-such-policy"));

    TournamentOptions opt;
    opt.config = ArenaConfig::desk();
    opt.config.horizon = 16;
    opt.master_seed = 84;
    opt.target_matches_per_submission = 1;
    TournamentOutcome out = run_tournament(st, opt);

    REQUIRE(out.failed_matches.size() == 1);
    CHECK(out.failed_matches[0] == 0);
    CHECK(out.state.match_counts == std::vector<int>{0, 0});
    // Ratings stay at the prior when every match failed.
    CHECK(out.state.ratings[0].mu == doctest::Approx(opt.rating.mu0));
}

TEST_CASE("tournament outcome is identical at parallelism 1 and 8") {
    TournamentState st;
    st.roster.push_back(make_submission(0, "alpha", "combat"));
    st.roster.push_back(make_submission(1, "beta", "forage"));
    st.roster.push_back(make_submission(2, "gamma", "stage2"));
    st.roster.push_back(make_submission(3, "delta", "random"));

    TournamentOptions opt;
    opt.config = ArenaConfig::desk();
    opt.config.horizon = 64;
    opt.master_seed = 85;
    opt.target_matches_per_submission = 3;

    std::vector<uint64_t> seen_seqs;
    opt.on_match = [&](const MatchWork& w, const MatchCompletion& c,
                       const TournamentState&) {
        CHECK(w.seq == c.seq);
        seen_seqs.push_back(c.seq);
    };
    TournamentOutcome serial = run_tournament(st, opt);
    CHECK(std::is_sorted(seen_seqs.begin(), seen_seqs.end()));

    opt.parallelism = 8;
    opt.on_match = nullptr;
    TournamentOutcome wide = run_tournament(st, opt);

    CHECK(serial.failed_matches.empty());
    REQUIRE(serial.leaderboard.size() == 4);
    REQUIRE(wide.leaderboard.size() == 4);
    for (size_t i = 0; i < 4; ++i) {
        CHECK(serial.leaderboard[i].submission_id == wide.leaderboard[i].submission_id);
        CHECK(serial.leaderboard[i].rating.mu ==
              doctest::Approx(wide.leaderboard[i].rating.mu).epsilon(1e-12));
        CHECK(serial.leaderboard[i].rating.sigma ==
              doctest::Approx(wide.leaderboard[i].rating.sigma).epsilon(1e-12));
        CHECK(serial.leaderboard[i].matches == wide.leaderboard[i].matches);
        CHECK(serial.leaderboard[i].matches >= 3);
        CHECK(serial.leaderboard[i].score ==
              doctest::Approx(leaderboard_score(serial.leaderboard[i].rating)));
    }
    CHECK(std::is_sorted(serial.leaderboard.begin(), serial.leaderboard.end(),
                         [](const LeaderboardRow& a, const LeaderboardRow& b) {
                             return a.score > b.score;
                         }));
}

TEST_CASE("a target of zero schedules nothing") {
    TournamentState st;
    st.roster.push_back(make_submission(0, "a", "random"));
    st.roster.push_back(make_submission(1, "b", "random"));

    TournamentOptions opt;
    opt.config = ArenaConfig::desk();
    opt.master_seed = 86;
    opt.target_matches_per_submission = 0;
    TournamentOutcome out = run_tournament(st, opt);
    CHECK(out.state.next_seq == 0);
    CHECK(out.state.match_counts == std::vector<int>{0, 0});
    for (const auto& row : out.leaderboard) {
        CHECK(row.rating.mu == doctest::Approx(opt.rating.mu0));
        CHECK(row.matches == 0);
    }
}
