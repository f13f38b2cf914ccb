// Acceptance suite: one end-to-end check per shipping criterion, printed as
// a single PASS/FAIL line each. The exit code is the number of failures, so
// ctest treats any red line as a suite failure. Checks use only public
// headers plus the independent quadrature oracles under tests/support/.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ffa/analytics.hpp"
#include "ffa/orchestrator.hpp"
#include "ffa/store.hpp"
#include "support/quadrature.hpp"

#ifndef RANDOM_AGENT_PATH
#error "RANDOM_AGENT_PATH must be defined"
#endif

using namespace ffa;

namespace {

int g_failures = 0;

// Runs one criterion, times it, prints PASS/FAIL plus the first recorded
// detail on failure.
void criterion(int index, const std::string& name,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %-34s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", index,
                name.c_str(), secs, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

bool approx(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0u);
        std::sort(idx.begin(), idx.end(), [&](size_t x, size_t y) { return v[x] < v[y]; });
        std::vector<double> r(v.size());
        for (size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
        return r;
    };
    std::vector<double> ra = ranks(a), rb = ranks(b);
    double n = static_cast<double>(a.size()), ma = 0, mb = 0;
    for (size_t i = 0; i < a.size(); ++i) { ma += ra[i]; mb += rb[i]; }
    ma /= n;
    mb /= n;
    double num = 0, da = 0, db = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        da += (ra[i] - ma) * (ra[i] - ma);
        db += (rb[i] - mb) * (rb[i] - mb);
    }
    return num / std::sqrt(da * db);
}

// Shared fixture for criteria 9 and 11: a 50-episode desk-scale corpus with
// a mixed-policy field, kept both as raw text and parsed records.
struct Corpus {
    std::vector<std::string> texts;
    std::vector<ReplayRecord> records;
    std::vector<std::string> specs;  // distinct policy names in play
};

Corpus build_corpus() {
    Corpus c;
    c.specs = {"forage", "random", "combat", "stage2"};
    ArenaConfig cfg = ArenaConfig::desk();
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        GameMap map = generate_map(seed, cfg);
        std::vector<PolicyPtr> policies;
        for (int t = 0; t < cfg.team_count; ++t)
            policies.push_back(make_policy(c.specs[static_cast<size_t>(t) % c.specs.size()]));
        std::ostringstream out;
        run_episode(map, policies, cfg, seed, &out);
        c.texts.push_back(out.str());
        std::istringstream in(c.texts.back());
        c.records.push_back(read_replay(in));
    }
    return c;
}

// Top-1 ratio of the slot-0 team over 10 ladder matches against a cycling
// field, at full arena scale. Ties count as top-1.
double ladder_top1(const std::string& hero, const std::vector<std::string>& field,
                   uint64_t master_seed) {
    ArenaConfig cfg;  // full scale
    std::vector<MatchWork> work;
    for (int i = 0; i < 10; ++i) {
        MatchWork w;
        w.seq = static_cast<uint64_t>(i);
        w.seed = mix64(master_seed, 0xB0E, static_cast<uint64_t>(i));
        w.entrants.assign(static_cast<size_t>(cfg.team_count), -1);
        w.policy_specs.push_back(hero);
        for (int t = 1; t < cfg.team_count; ++t)
            w.policy_specs.push_back(field[static_cast<size_t>(t - 1) % field.size()]);
        work.push_back(w);
    }
    int wins = 0;
    worker_pool(work, cfg, 1, "", [&](const MatchCompletion& c) {
        int own = c.result.teams[0].achievement, best_other = 0;
        for (size_t t = 1; t < c.result.teams.size(); ++t)
            best_other = std::max(best_other, c.result.teams[t].achievement);
        if (own >= best_other) ++wins;
    });
    return wins / 10.0;
}

EpisodeOutcome run_with_slot0(const std::string& slot0_spec, uint64_t seed) {
    ArenaConfig cfg = ArenaConfig::desk();
    cfg.horizon = 64;
    GameMap map = generate_map(seed, cfg);
    std::vector<PolicyPtr> policies;
    policies.push_back(make_policy(slot0_spec));
    for (int t = 1; t < cfg.team_count; ++t) policies.push_back(make_policy("forage"));
    std::vector<std::string> labels{"candidate"};
    for (int t = 1; t < cfg.team_count; ++t) labels.push_back("forage");
    return run_episode(map, policies, cfg, seed, nullptr, labels);
}

// ---------------------------------------------------------------------------

bool c1_scoring_table(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    TaskThresholds t;
    // Independent tier table, restated here rather than read from the
    // library, so a transcription error in either copy is caught.
    const int thresholds[4][3] = {{32, 64, 127}, {20, 35, 50}, {1, 10, 20}, {1, 3, 6}};
    const int points[4] = {0, 4, 10, 21};
    for (int k = 0; k < 4; ++k) {
        for (int v = 0; v <= 200; ++v) {
            int tier = 0;
            for (int j = 0; j < 3; ++j)
                if (v >= thresholds[k][j]) tier = j + 1;
            int got = task_points(v, t.tasks[static_cast<size_t>(k)], t);
            if (got != points[tier]) {
                detail = "task " + std::string(kTaskNames[static_cast<size_t>(k)]) + " value " +
                         std::to_string(v) + ": got " + std::to_string(got) + " expected " +
                         std::to_string(points[tier]);
                return false;
            }
        }
    }
    // Achievement is the plain sum of per-task points; probe a dense grid of
    // combinations around every boundary.
    std::vector<int> probes[4];
    for (int k = 0; k < 4; ++k) {
        std::set<int> s{0, 200};
        for (int j = 0; j < 3; ++j) {
            s.insert(thresholds[k][j] - 1);
            s.insert(thresholds[k][j]);
            s.insert(thresholds[k][j] + 1);
        }
        probes[k].assign(s.begin(), s.end());
    }
    for (int a : probes[0])
        for (int b : probes[1])
            for (int c : probes[2])
                for (int d : probes[3]) {
                    TeamTaskStats stats;
                    stats.best = {a, b, c, d};
                    int expected = 0;
                    const int vals[4] = {a, b, c, d};
                    for (int k = 0; k < 4; ++k) {
                        int tier = 0;
                        for (int j = 0; j < 3; ++j)
                            if (vals[k] >= thresholds[k][j]) tier = j + 1;
                        expected += points[tier];
                    }
                    if (team_achievement(stats, t) != expected) {
                        detail = "achievement sum mismatch";
                        return false;
                    }
                }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 1.0) {
        detail = "scoring sweep took " + std::to_string(secs) + "s (limit 1s)";
        return false;
    }
    return true;
}

bool c2_bound_and_gate(std::string& detail) {
    // 84 is the ceiling and it is attained.
    TeamTaskStats maxed;
    maxed.best = {127, 50, 20, 6};
    if (team_achievement(maxed) != 84) {
        detail = "maxed stats do not score 84";
        return false;
    }
    int best_seen = 0;
    for (int a : {0, 31, 32, 64, 127, 1000})
        for (int b : {0, 19, 20, 35, 50, 1000})
            for (int c : {0, 1, 10, 20, 1000})
                for (int d : {0, 1, 3, 6, 1000}) {
                    TeamTaskStats s;
                    s.best = {a, b, c, d};
                    best_seen = std::max(best_seen, team_achievement(s));
                }
    if (best_seen != 84) {
        detail = "achievement exceeded 84: " + std::to_string(best_seen);
        return false;
    }
    // The PvP gate flips exactly at best achievement 25.
    auto gate = [](int best_achievement) {
        Submission s;
        PvEResult r;
        r.stage = 1;
        r.best_achievement = best_achievement;
        r.top1_ratio = 0.0;
        advance_stage(s, r);
        return s.pvp_qualified;
    };
    if (!gate(25)) {
        detail = "best achievement 25 did not qualify";
        return false;
    }
    if (gate(24)) {
        detail = "best achievement 24 incorrectly qualified";
        return false;
    }
    return true;
}

bool c3_rating_vs_quadrature(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    int saved = qo::simpson_intervals;
    qo::simpson_intervals = 1 << 18;  // wide grid; integrands are smooth
    bool ok = true;
    // 110 exceeds-case points across x = t - alpha in [-40, 6], deep tail
    // included, plus 90 within-case points over t in [0, 40] x three draw
    // margins: 200 grid points in all.
    for (int i = 0; ok && i < 110; ++i) {
        double x = -40.0 + 46.0 * i / 109.0;
        if (!approx(v_exceeds(x, 0.0), qo::v_exc_oracle(x, 0.0), 1e-9)) {
            detail = "v_exceeds mismatch at x=" + std::to_string(x);
            ok = false;
            break;
        }
        double w = w_exceeds(x, 0.0);
        if (x <= 0.0) {
            if (!approx(w, qo::w_exc_oracle_tail(x, 0.0), 1e-9)) {
                detail = "w_exceeds mismatch at x=" + std::to_string(x);
                ok = false;
            }
        } else {
            // Positive x: the moment form cancels catastrophically, so
            // validate through the variance identity with the quadrature v.
            double vo = qo::v_exc_oracle(x, 0.0);
            if (!approx(w, vo * (vo + x), 1e-9)) {
                detail = "w_exceeds identity mismatch at x=" + std::to_string(x);
                ok = false;
            }
        }
    }
    for (int i = 0; ok && i < 30; ++i) {
        double t = 40.0 * i / 29.0;
        for (double alpha : {0.1, 0.7435, 2.0}) {
            qo::Trunc oracle = qo::within_oracle(t, alpha);
            if (!approx(v_within(t, alpha), oracle.mean, 1e-9) ||
                !approx(1.0 - w_within(t, alpha), oracle.var, 1e-9)) {
                detail = "within-case mismatch at t=" + std::to_string(t) +
                         " alpha=" + std::to_string(alpha);
                ok = false;
                break;
            }
        }
    }
    qo::simpson_intervals = saved;
    // 1000 fuzzed two-entity matches: the factor graph must agree with the
    // closed form to 1e-6 in both posterior moments.
    RatingConfig cfg;
    std::mt19937_64 gen(20260824);
    std::uniform_real_distribution<double> mu_d(0.0, 50.0), sigma_d(0.5, 9.0);
    std::bernoulli_distribution draw_d(0.25);
    for (int i = 0; ok && i < 1000; ++i) {
        Rating a{mu_d(gen), sigma_d(gen)};
        Rating b{mu_d(gen), sigma_d(gen)};
        bool is_draw = draw_d(gen);
        auto [ow, ol] = update_two_player(a, b, cfg, is_draw);
        FfaUpdateResult ffa = update_ffa(
            {a, b},
            RankedOutcome{is_draw ? std::vector<int>{1, 1} : std::vector<int>{1, 2}}, cfg);
        if (!ffa.converged || !approx(ffa.ratings[0].mu, ow.mu, 1e-6) ||
            !approx(ffa.ratings[0].sigma, ow.sigma, 1e-6) ||
            !approx(ffa.ratings[1].mu, ol.mu, 1e-6) ||
            !approx(ffa.ratings[1].sigma, ol.sigma, 1e-6)) {
            detail = "factor graph / closed form divergence at fuzz case " + std::to_string(i);
            ok = false;
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && secs >= 30.0) {
        detail = "rating checks took " + std::to_string(secs) + "s (limit 30s)";
        ok = false;
    }
    return ok;
}

bool c4_canonical_first_match(std::string& detail) {
    RatingConfig cfg;
    // Closed form assembled here from first principles (prior inflation,
    // pooled performance variance, quadrature truncation moments) with no
    // calls into the library's correction functions.
    double sigma2 = cfg.sigma0 * cfg.sigma0 + cfg.tau * cfg.tau;
    double c = std::sqrt(2.0 * cfg.beta * cfg.beta + 2.0 * sigma2);
    double alpha = cfg.epsilon() / c;
    double t = 0.0;  // equal fresh priors
    double v = qo::v_exc_oracle(t, alpha);
    double w = qo::w_exc_oracle_tail(t, alpha);  // alpha - t >= 0
    double mu_w = cfg.mu0 + sigma2 / c * v;
    double sigma_w = std::sqrt(sigma2 * (1.0 - sigma2 / (c * c) * w));
    if (std::abs(mu_w - 29.396) > 0.001 || std::abs(sigma_w - 7.171) > 0.001) {
        detail = "independent closed form gives (" + std::to_string(mu_w) + ", " +
                 std::to_string(sigma_w) + ")";
        return false;
    }
    auto [winner, loser] = update_two_player({}, {}, cfg, /*is_draw=*/false);
    if (std::abs(winner.mu - 29.396) > 0.001 || std::abs(winner.sigma - 7.171) > 0.001) {
        detail = "library update gives (" + std::to_string(winner.mu) + ", " +
                 std::to_string(winner.sigma) + ")";
        return false;
    }
    if (std::abs(loser.mu - (2.0 * cfg.mu0 - 29.396)) > 0.001) {
        detail = "loser posterior is not the mirror image";
        return false;
    }
    return true;
}

bool c5_skill_recovery(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    TournamentState st;
    std::vector<double> truth;
    for (int k = 1; k <= 20; ++k) {
        Submission s;
        s.id = k;
        char buf[32];
        std::snprintf(buf, sizeof buf, "mix:%.2f", 0.05 * k);
        s.name = buf;
        s.policy_spec = buf;
        st.roster.push_back(s);
        truth.push_back(0.05 * k);
    }
    TournamentOptions opt;
    opt.config = ArenaConfig::desk();
    opt.master_seed = 20260824;
    opt.target_matches_per_submission = 100;
    TournamentOutcome out = run_tournament(st, opt);
    std::vector<double> mu(20);
    for (size_t i = 0; i < 20; ++i) mu[i] = out.state.ratings[i].mu;
    double rho = spearman(mu, truth);
    size_t best = static_cast<size_t>(
        std::max_element(mu.begin(), mu.end()) - mu.begin());
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (rho < 0.9) {
        detail = "spearman " + std::to_string(rho) + " < 0.9";
        return false;
    }
    if (best != 19) {
        detail = "top mu went to " + st.roster[best].name + " instead of mix:1.00";
        return false;
    }
    if (secs >= 900.0) {
        detail = "tournament took " + std::to_string(secs) + "s (limit 900s)";
        return false;
    }
    return true;
}

bool c6_parallel_reproducibility(std::string& detail) {
    auto run = [](int parallelism) {
        TournamentState st;
        const char* specs[6] = {"combat", "forage", "random", "stage2", "mix:0.5", "stage3"};
        for (int k = 0; k < 6; ++k) {
            Submission s;
            s.id = k + 1;
            s.name = specs[k];
            s.policy_spec = specs[k];
            st.roster.push_back(s);
        }
        TournamentOptions opt;
        opt.config = ArenaConfig::desk();
        opt.master_seed = 424242;
        opt.target_matches_per_submission = 8;
        opt.parallelism = parallelism;
        std::map<uint64_t, std::string> digests;
        opt.on_match = [&](const MatchWork& w, const MatchCompletion& c, const TournamentState&) {
            digests[w.seq] = c.replay_digest;
        };
        TournamentOutcome out = run_tournament(st, opt);
        return std::make_pair(out, digests);
    };
    auto [serial, serial_digests] = run(1);
    auto [parallel, parallel_digests] = run(8);
    if (serial_digests.empty() || serial_digests != parallel_digests) {
        detail = "replay digests differ across parallelism";
        return false;
    }
    if (serial.leaderboard.size() != parallel.leaderboard.size()) {
        detail = "leaderboard sizes differ";
        return false;
    }
    for (size_t i = 0; i < serial.leaderboard.size(); ++i) {
        const LeaderboardRow &a = serial.leaderboard[i], &b = parallel.leaderboard[i];
        if (a.submission_id != b.submission_id || a.matches != b.matches ||
            a.rating.mu != b.rating.mu || a.rating.sigma != b.rating.sigma) {
            detail = "leaderboard row " + std::to_string(i) + " differs";
            return false;
        }
    }
    return true;
}

bool c7_throughput(std::string& detail) {
    // Single full-scale match on one core.
    ArenaConfig cfg;  // 16 teams x 8 agents, 1024 ticks
    GameMap map = generate_map(7001, cfg);
    std::vector<PolicyPtr> policies;
    const char* specs[4] = {"forage", "random", "combat", "stage2"};
    for (int t = 0; t < cfg.team_count; ++t)
        policies.push_back(make_policy(specs[static_cast<size_t>(t) % 4]));
    auto t0 = std::chrono::steady_clock::now();
    EpisodeOutcome one = run_episode(map, policies, cfg, 7001);
    double single = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (one.result.episode_length < 1 || single > 5.0) {
        detail = "full-scale match took " + std::to_string(single) + "s (limit 5s)";
        return false;
    }
    // 100-match batch: parallelism 8 against serial. The required speedup
    // scales with the cores actually present (capped at the 4x target and
    // floored just below parity so a single-core host can still validate
    // correctness of the pool).
    ArenaConfig desk = ArenaConfig::desk();
    std::vector<MatchWork> work;
    for (int i = 0; i < 100; ++i) {
        MatchWork w;
        w.seq = static_cast<uint64_t>(i);
        w.seed = mix64(7100, 0xB0E, static_cast<uint64_t>(i));
        w.entrants.assign(static_cast<size_t>(desk.team_count), -1);
        for (int t = 0; t < desk.team_count; ++t)
            w.policy_specs.push_back(specs[static_cast<size_t>(t) % 4]);
        work.push_back(w);
    }
    auto timed = [&](int parallelism) {
        auto s0 = std::chrono::steady_clock::now();
        int done = 0;
        worker_pool(work, desk, parallelism, "", [&](const MatchCompletion&) { ++done; });
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - s0).count();
        return std::make_pair(secs, done);
    };
    auto [serial_secs, serial_done] = timed(1);
    auto [parallel_secs, parallel_done] = timed(8);
    if (serial_done != 100 || parallel_done != 100) {
        detail = "batch did not complete";
        return false;
    }
    double cores = static_cast<double>(std::thread::hardware_concurrency());
    double required = std::clamp(0.5 * cores, 0.9, 4.0);
    double speedup = serial_secs / parallel_secs;
    if (speedup < required) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "speedup %.2fx < required %.2fx (%d cores)", speedup,
                      required, static_cast<int>(cores));
        detail = buf;
        return false;
    }
    return true;
}

bool c8_ladder_strength(std::string& detail) {
    // Pinned ladder seeds: both halves run the standard 10-match PvE layout
    // at full arena scale with the candidate in slot 0.
    const uint64_t master = 3101;
    double combat = ladder_top1("combat", {"random"}, master);
    if (combat < 0.8) {
        detail = "combat vs random top-1 ratio " + std::to_string(combat) + " < 0.8";
        return false;
    }
    double composite = ladder_top1("stage3", {"combat", "forage", "random"}, master);
    if (composite < 0.5) {
        detail = "composite vs stage-1 field top-1 ratio " + std::to_string(composite) +
                 " < 0.5";
        return false;
    }
    return true;
}

bool c9_replay_integrity(const Corpus& corpus, std::string& detail) {
    TaskThresholds t;
    for (size_t i = 0; i < corpus.records.size(); ++i) {
        const ReplayRecord& rec = corpus.records[i];
        MatchResult re = recompute_result(rec, t);
        if (re.teams.size() != rec.result.teams.size()) {
            detail = "replay " + std::to_string(i) + ": team count mismatch on rescore";
            return false;
        }
        for (size_t team = 0; team < re.teams.size(); ++team) {
            const TeamScore &a = re.teams[team], &b = rec.result.teams[team];
            if (a.stats.best != b.stats.best || a.task_points != b.task_points ||
                a.achievement != b.achievement || a.rank != b.rank) {
                detail = "replay " + std::to_string(i) + " team " + std::to_string(team) +
                         ": independent rescore disagrees with footer";
                return false;
            }
        }
    }
    // Single-byte corruption anywhere in the digest-covered prefix (header
    // and tick lines) must be rejected; footer tampering is covered by the
    // rescore comparison above.
    std::mt19937_64 gen(90210);
    int flips = 0;
    for (const std::string& text : corpus.texts) {
        size_t footer = text.rfind("\"type\":\"footer\"");
        size_t covered = text.rfind('\n', footer);  // digest ends before the footer line
        for (int k = 0; k < 4; ++k) {
            std::string bad = text;
            size_t pos = gen() % covered;
            bad[pos] = static_cast<char>(bad[pos] ^ 0x01);
            ++flips;
            try {
                std::istringstream in(bad);
                read_replay(in);
                detail = "corruption at byte " + std::to_string(pos) + " went undetected";
                return false;
            } catch (const ReplayError&) {
                // expected
            }
        }
    }
    if (flips != 200) {
        detail = "expected 200 corruption probes, ran " + std::to_string(flips);
        return false;
    }
    return true;
}

bool c10_external_parity(std::string& detail) {
    EpisodeOutcome builtin = run_with_slot0("random", 81);
    EpisodeOutcome external = run_with_slot0(std::string("ext:") + RANDOM_AGENT_PATH, 81);
    if (external.result.degraded[0]) {
        detail = "reference agent was degraded";
        return false;
    }
    if (builtin.replay_digest != external.replay_digest) {
        detail = "external reference agent digest diverges from the builtin";
        return false;
    }
    // Fault injection: protocol violations and silence degrade only the
    // offending team while the match itself completes.
    EpisodeOutcome garbage = run_with_slot0(
        std::string("ext:") + RANDOM_AGENT_PATH + " --misbehave garbage --from-tick 5", 82);
    if (!garbage.result.degraded[0] || garbage.result.episode_length != 64) {
        detail = "garbage output did not degrade cleanly";
        return false;
    }
    for (size_t t = 1; t < garbage.result.degraded.size(); ++t)
        if (garbage.result.degraded[t]) {
            detail = "degradation leaked to an unrelated team";
            return false;
        }
    EpisodeOutcome mute = run_with_slot0(
        std::string("ext:") + RANDOM_AGENT_PATH + " --misbehave mute --from-tick 2", 83);
    if (!mute.result.degraded[0] || mute.result.episode_length != 64) {
        detail = "mute agent did not time out into degradation";
        return false;
    }
    return true;
}

bool c11_analytics_conservation(const Corpus& corpus, std::string& detail) {
    // Mass conservation: summed over the distinct policy names, the heatmap
    // occupancy-ticks must equal every living-agent tick in the corpus.
    uint64_t expected = 0;
    for (const ReplayRecord& rec : corpus.records)
        for (const ReplayTick& tick : rec.ticks) expected += tick.positions.size();
    uint64_t total = 0;
    for (const std::string& name : corpus.specs)
        total += visitation_heatmap(corpus.records, name).total();
    if (total != expected) {
        detail = "heatmap mass " + std::to_string(total) + " != occupancy-ticks " +
                 std::to_string(expected);
        return false;
    }
    // Trajectory consistency: per team, the largest L-inf displacement from
    // spawn across members equals the recorded explore statistic.
    for (size_t i = 0; i < corpus.records.size(); ++i) {
        const ReplayRecord& rec = corpus.records[i];
        for (int team = 0; team < rec.header.team_count; ++team) {
            int max_disp = 0;
            for (const AgentTrajectory& traj : team_trajectories(rec, team)) {
                if (traj.positions.empty()) continue;
                Coord spawn = traj.positions.front();
                for (const Coord& p : traj.positions)
                    max_disp = std::max(max_disp, linf(p, spawn));
            }
            int recorded =
                rec.result.teams[static_cast<size_t>(team)].stats.best[kExplore];
            if (max_disp != recorded) {
                detail = "replay " + std::to_string(i) + " team " + std::to_string(team) +
                         ": trajectory displacement " + std::to_string(max_disp) +
                         " != recorded explore " + std::to_string(recorded);
                return false;
            }
        }
    }
    return true;
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion(1, "scoring table fidelity", c1_scoring_table);
    criterion(2, "achievement bound and PvP gate", c2_bound_and_gate);
    criterion(3, "rating corrections vs quadrature", c3_rating_vs_quadrature);
    criterion(4, "canonical first-match posterior", c4_canonical_first_match);
    criterion(5, "skill recovery tournament", c5_skill_recovery);
    criterion(6, "parallel reproducibility", c6_parallel_reproducibility);
    criterion(7, "throughput and scaling", c7_throughput);
    criterion(8, "ladder policy strength", c8_ladder_strength);
    Corpus corpus = build_corpus();
    criterion(9, "replay integrity and tamper detection",
              [&](std::string& d) { return c9_replay_integrity(corpus, d); });
    criterion(10, "external agent parity and faults", c10_external_parity);
    criterion(11, "analytics mass conservation",
              [&](std::string& d) { return c11_analytics_conservation(corpus, d); });
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
