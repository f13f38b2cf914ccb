#include "ffa/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ffa/map.hpp"

namespace ffa {

namespace {

const char* kStandinSpecs[] = {"combat", "forage", "random"};

bool eligible_for_stage(const Submission& s, int stage, const StageGates& gates) {
    if (stage == 1) return true;
    auto it = s.best_top1_ratio.find(stage - 1);
    return it != s.best_top1_ratio.end() && it->second >= gates.promote_top1;
}

std::vector<std::string> pve_opponents(int stage) {
    std::vector<std::string> specs;
    if (stage == 1) {
        for (int i = 0; i < 5; ++i) specs.push_back("combat");
        for (int i = 0; i < 5; ++i) specs.push_back("forage");
        for (int i = 0; i < 5; ++i) specs.push_back("random");
    } else if (stage == 2 || stage == 3) {
        specs.assign(15, stage == 2 ? "stage2" : "stage3");
    } else {
        throw std::invalid_argument("PvE stage must be 1, 2, or 3");
    }
    return specs;
}

}  // namespace

PvEResult evaluate_pve(const Submission& submission, int stage, const PvEOptions& options) {
    if (!eligible_for_stage(submission, stage, options.gates))
        throw std::invalid_argument(submission.name + " has not passed stage " +
                                    std::to_string(stage - 1));
    ArenaConfig config = options.config;
    std::vector<std::string> opponents = pve_opponents(stage);
    if (static_cast<int>(opponents.size()) + 1 != config.team_count)
        opponents.resize(static_cast<size_t>(config.team_count - 1),
                         opponents.empty() ? "random" : opponents.back());

    std::vector<MatchWork> work;
    for (int i = 0; i < options.match_count; ++i) {
        MatchWork w;
        w.seq = static_cast<uint64_t>(i);
        w.seed = mix64(options.seed, 0xB0E, static_cast<uint64_t>(i));
        w.entrants.assign(static_cast<size_t>(config.team_count), -1);
        w.entrants[0] = 0;  // submission rides team slot 0; spawn permutes anchors
        w.policy_specs.push_back(submission.policy_spec);
        for (const auto& o : opponents) w.policy_specs.push_back(o);
        work.push_back(std::move(w));
    }

    PvEResult out;
    out.stage = stage;
    out.matches.resize(work.size());
    worker_pool(work, config, options.parallelism, "",
                [&](const MatchCompletion& c) {
                    out.matches[static_cast<size_t>(c.seq)] = c.result;
                });

    int wins = 0;
    for (const auto& m : out.matches) {
        int own = m.teams[0].achievement;
        int best_other = 0;
        for (size_t t = 1; t < m.teams.size(); ++t)
            best_other = std::max(best_other, m.teams[t].achievement);
        if (own >= best_other) ++wins;  // ties count as top-1
        out.best_achievement = std::max(out.best_achievement, own);
    }
    out.top1_ratio = static_cast<double>(wins) / static_cast<double>(out.matches.size());
    return out;
}

void advance_stage(Submission& submission, const PvEResult& result, const StageGates& gates) {
    auto& ach = submission.best_achievement[result.stage];
    ach = std::max(ach, result.best_achievement);
    auto& t1 = submission.best_top1_ratio[result.stage];
    t1 = std::max(t1, result.top1_ratio);

    // States only move forward.
    submission.state = std::max(submission.state, static_cast<QualState>(result.stage));
    if (result.stage == 1 && ach >= gates.pvp_achievement) submission.pvp_qualified = true;
    if (result.stage < 3 && t1 >= gates.promote_top1)
        submission.state = std::max(submission.state, static_cast<QualState>(result.stage + 1));
}

std::vector<int> sample_match(const TournamentState& state, int team_count, Rng& rng) {
    size_t roster = state.roster.size();
    if (roster < 2) throw std::runtime_error("tournament needs a roster of at least 2");
    std::vector<size_t> order(roster);
    std::iota(order.begin(), order.end(), 0u);
    std::vector<uint64_t> key(roster);
    for (auto& k : key) k = rng.next();
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (state.match_counts[a] != state.match_counts[b])
            return state.match_counts[a] < state.match_counts[b];
        return key[a] < key[b];
    });
    std::vector<int> entrants(static_cast<size_t>(team_count), -1);
    for (size_t i = 0; i < order.size() && i < entrants.size(); ++i)
        entrants[i] = static_cast<int>(order[i]);
    return entrants;
}

void worker_pool(const std::vector<MatchWork>& work, const ArenaConfig& config,
                 int parallelism, const std::string& replay_dir,
                 const std::function<void(const MatchCompletion&)>& sink) {
    {
        std::set<uint64_t> seqs;
        for (const auto& w : work)
            if (!seqs.insert(w.seq).second)
                throw std::invalid_argument("duplicate sequence number in work batch");
    }
    if (parallelism < 1) parallelism = 1;

    auto run_one = [&](const MatchWork& w) {
        GameMap map = generate_map(w.seed, config);
        std::vector<PolicyPtr> policies;
        for (const auto& spec : w.policy_specs) policies.push_back(make_policy(spec));
        std::ostringstream replay;
        EpisodeOutcome ep = run_episode(map, policies, config, w.seed, &replay);
        MatchCompletion c;
        c.seq = w.seq;
        c.result = ep.result;
        c.replay_digest = ep.replay_digest;
        if (!replay_dir.empty()) {
            c.replay_path = replay_dir + "/match_" + std::to_string(w.seq) + ".jsonl";
            std::ofstream out(c.replay_path);
            if (!out) throw std::runtime_error("cannot write replay " + c.replay_path);
            out << replay.str();
        }
        return c;
    };

    std::mutex mu;
    std::condition_variable cv;
    std::map<uint64_t, MatchCompletion> done;  // buffered out-of-order results
    std::atomic<size_t> cursor{0};

    auto worker = [&] {
        for (;;) {
            size_t i = cursor.fetch_add(1);
            if (i >= work.size()) return;
            MatchCompletion c;
            try {
                c = run_one(work[i]);
            } catch (const std::exception& first) {
                try {
                    c = run_one(work[i]);  // deterministic retry, same seed
                } catch (const std::exception& second) {
                    c.seq = work[i].seq;
                    c.failed = true;
                    c.error = second.what();
                }
            }
            std::lock_guard<std::mutex> lock(mu);
            done.emplace(c.seq, std::move(c));
            cv.notify_all();
        }
    };

    std::vector<std::thread> threads;
    int thread_count = std::min<int>(parallelism, static_cast<int>(work.size()));
    threads.reserve(static_cast<size_t>(thread_count));
    for (int i = 0; i < thread_count; ++i) threads.emplace_back(worker);

    // Deliver in ascending sequence order from this single thread.
    std::vector<uint64_t> order;
    for (const auto& w : work) order.push_back(w.seq);
    std::sort(order.begin(), order.end());
    for (uint64_t seq : order) {
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] { return done.count(seq) > 0; });
        MatchCompletion c = std::move(done.at(seq));
        done.erase(seq);
        lock.unlock();
        sink(c);
    }
    for (auto& t : threads) t.join();
}

TournamentOutcome run_tournament(TournamentState state, const TournamentOptions& options) {
    if (state.roster.size() < 2)
        throw std::runtime_error("tournament refuses to start with roster < 2");
    if (state.match_counts.empty()) state.match_counts.assign(state.roster.size(), 0);
    if (state.ratings.empty())
        state.ratings.assign(state.roster.size(),
                             Rating{options.rating.mu0, options.rating.sigma0});

    const int team_count = options.config.team_count;
    std::vector<MatchWork> schedule;
    {
        // The schedule is a pure function of (master seed, counts, next_seq),
        // so an interrupted tournament resumes onto the identical plan.
        std::vector<int> counts = state.match_counts;
        uint64_t seq = state.next_seq;
        auto min_count = [&] { return *std::min_element(counts.begin(), counts.end()); };
        while (min_count() < options.target_matches_per_submission) {
            TournamentState view;
            view.roster = state.roster;
            view.match_counts = counts;
            Rng rng(mix64(options.master_seed, 0x5eed, seq));
            MatchWork w;
            w.seq = seq;
            w.seed = mix64(options.master_seed, 0xC0FFEE, seq);
            w.entrants = sample_match(view, team_count, rng);
            for (size_t slot = 0; slot < w.entrants.size(); ++slot) {
                int e = w.entrants[slot];
                if (e >= 0) {
                    counts[static_cast<size_t>(e)] += 1;
                    w.policy_specs.push_back(state.roster[static_cast<size_t>(e)].policy_spec);
                } else {
                    w.policy_specs.push_back(kStandinSpecs[(seq + slot) % 3]);
                }
            }
            schedule.push_back(std::move(w));
            ++seq;
        }
    }

    TournamentOutcome out;
    std::map<uint64_t, const MatchWork*> by_seq;
    for (const auto& w : schedule) by_seq[w.seq] = &w;

    worker_pool(schedule, options.config, options.parallelism, options.replay_dir,
                [&](const MatchCompletion& c) {
                    const MatchWork& w = *by_seq.at(c.seq);
                    if (c.failed) {
                        out.failed_matches.push_back(c.seq);
                        state.next_seq = c.seq + 1;
                        return;
                    }
                    // Ratings update over the rated entrants only.
                    std::vector<size_t> rated;
                    std::vector<int> achievements;
                    for (size_t slot = 0; slot < w.entrants.size(); ++slot) {
                        if (w.entrants[slot] < 0) continue;
                        rated.push_back(static_cast<size_t>(w.entrants[slot]));
                        achievements.push_back(
                            c.result.teams[slot].achievement);
                    }
                    if (rated.size() >= 2) {
                        std::vector<Rating> before;
                        for (size_t r : rated) before.push_back(state.ratings[r]);
                        RankedOutcome outcome{rank_teams(achievements)};
                        FfaUpdateResult upd = update_ffa(before, outcome, options.rating);
                        for (size_t i = 0; i < rated.size(); ++i)
                            state.ratings[rated[i]] = upd.ratings[i];
                    }
                    for (size_t r : rated) state.match_counts[r] += 1;
                    state.next_seq = c.seq + 1;
                    if (options.on_match) options.on_match(w, c, state);
                });

    out.state = std::move(state);
    out.leaderboard = build_leaderboard(out.state);
    return out;
}

std::vector<LeaderboardRow> build_leaderboard(const TournamentState& state) {
    std::vector<LeaderboardRow> rows;
    for (size_t i = 0; i < state.roster.size(); ++i) {
        LeaderboardRow row;
        row.submission_id = state.roster[i].id;
        row.name = state.roster[i].name;
        row.rating = state.ratings[i];
        row.matches = state.match_counts[i];
        row.score = leaderboard_score(row.rating);
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(), [](const LeaderboardRow& a, const LeaderboardRow& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.submission_id < b.submission_id;
    });
    return rows;
}

}  // namespace ffa
