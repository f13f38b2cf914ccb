#include <doctest.h>

#include <sstream>

#include "ffa/episode.hpp"
#include "ffa/replay.hpp"

using namespace ffa;

namespace {

// One real desk-scale episode captured as replay text.
std::string sample_replay_text(uint64_t seed, std::string* digest_out = nullptr) {
    ArenaConfig cfg = ArenaConfig::desk();
    GameMap map = generate_map(seed, cfg);
    std::vector<PolicyPtr> policies;
    for (int t = 0; t < cfg.team_count; ++t)
        policies.push_back(make_policy(t % 2 ? "forage" : "combat"));
    std::ostringstream out;
    EpisodeOutcome outcome = run_episode(map, policies, cfg, seed, &out);
    if (digest_out) *digest_out = outcome.replay_digest;
    return out.str();
}

}  // namespace

TEST_CASE("replay round-trips and the footer digest matches the body") {
    std::string digest;
    std::string text = sample_replay_text(51, &digest);
    std::istringstream in(text);
    ReplayRecord rec = read_replay(in);
    CHECK(rec.digest == digest);
    CHECK(rec.header.version == 1);
    CHECK(rec.header.seed == 51);
    CHECK(rec.header.team_count == 8);
    CHECK(rec.header.spawns.size() == 64);
    CHECK(static_cast<int>(rec.ticks.size()) == rec.result.episode_length);
    CHECK(rec.result.teams.size() == 8);

    // save_replay regenerates byte-identical content.
    std::ostringstream re;
    {
        ReplayWriter w(re);
        w.write_header(rec.header);
        for (const auto& t : rec.ticks) w.write_tick(t);
        w.write_footer(rec.result);
        CHECK(w.digest() == digest);
    }
    CHECK(re.str() == text);
}

TEST_CASE("replay reader classifies corruption precisely") {
    std::string text = sample_replay_text(52);

    SUBCASE("empty stream -> truncated") {
        std::istringstream in("");
        try {
            read_replay(in);
            FAIL("expected ReplayError");
        } catch (const ReplayError& e) {
            CHECK(e.kind == ReplayError::Kind::Truncated);
        }
    }
    SUBCASE("missing footer -> truncated") {
        size_t footer = text.rfind("\"type\":\"footer\"");
        REQUIRE(footer != std::string::npos);
        std::string cut = text.substr(0, text.rfind('\n', footer) + 1);
        std::istringstream in(cut);
        try {
            read_replay(in);
            FAIL("expected ReplayError");
        } catch (const ReplayError& e) {
            CHECK(e.kind == ReplayError::Kind::Truncated);
        }
    }
    SUBCASE("tampered tick byte -> digest mismatch") {
        std::string bad = text;
        size_t pos = bad.find("\"t\":3");
        REQUIRE(pos != std::string::npos);
        bad[pos + 4] = '7';  // tick 3 claims to be tick 7
        std::istringstream in(bad);
        try {
            read_replay(in);
            FAIL("expected ReplayError");
        } catch (const ReplayError& e) {
            CHECK(e.kind == ReplayError::Kind::Digest);
        }
    }
    SUBCASE("future version -> version error") {
        std::string bad = text;
        size_t pos = bad.find("\"version\":1");
        REQUIRE(pos != std::string::npos);
        bad[pos + 10] = '9';
        std::istringstream in(bad);
        try {
            read_replay(in);
            FAIL("expected ReplayError");
        } catch (const ReplayError& e) {
            CHECK(e.kind == ReplayError::Kind::Version);
        }
    }
    SUBCASE("non-json garbage line -> malformed") {
        size_t first_nl = text.find('\n');
        std::string bad = text.substr(0, first_nl + 1) + "%%%%\n" + text.substr(first_nl + 1);
        std::istringstream in(bad);
        try {
            read_replay(in);
            FAIL("expected ReplayError");
        } catch (const ReplayError& e) {
            CHECK(e.kind == ReplayError::Kind::Malformed);
        }
    }
}

TEST_CASE("independent scorer agrees with the recorded result") {
    for (uint64_t seed : {53u, 54u, 55u}) {
        CAPTURE(seed);
        std::istringstream in(sample_replay_text(seed));
        ReplayRecord rec = read_replay(in);
        MatchResult again = recompute_result(rec);
        REQUIRE(again.teams.size() == rec.result.teams.size());
        for (size_t t = 0; t < rec.result.teams.size(); ++t) {
            CAPTURE(t);
            CHECK(again.teams[t].stats == rec.result.teams[t].stats);
            CHECK(again.teams[t].task_points == rec.result.teams[t].task_points);
            CHECK(again.teams[t].achievement == rec.result.teams[t].achievement);
            CHECK(again.teams[t].rank == rec.result.teams[t].rank);
        }
    }
}

TEST_CASE("match result json round-trips") {
    std::istringstream in(sample_replay_text(56));
    ReplayRecord rec = read_replay(in);
    MatchResult back = match_result_from_json(match_result_to_json(rec.result));
    CHECK(back.seed == rec.result.seed);
    CHECK(back.episode_length == rec.result.episode_length);
    CHECK(back.early_stop == rec.result.early_stop);
    REQUIRE(back.teams.size() == rec.result.teams.size());
    for (size_t t = 0; t < back.teams.size(); ++t) {
        CHECK(back.teams[t].stats == rec.result.teams[t].stats);
        CHECK(back.teams[t].rank == rec.result.teams[t].rank);
    }
    CHECK(back.degraded == rec.result.degraded);
}
