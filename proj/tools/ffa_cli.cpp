// Operator CLI for the arena platform: maps, matches, PvE gating,
// tournaments, leaderboards, replay verification, analytics exports.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ffa/analytics.hpp"
#include "ffa/episode.hpp"
#include "ffa/map.hpp"
#include "ffa/orchestrator.hpp"
#include "ffa/store.hpp"

namespace {

using namespace ffa;

struct ConfigFlags {
    int map_size = 128;
    int team_count = 16;
    int horizon = 1024;
    int npc_count = 64;

    void attach(CLI::App* cmd) {
        cmd->add_option("--map-size", map_size, "Tiles per side");
        cmd->add_option("--team-count", team_count, "Teams per match");
        cmd->add_option("--horizon", horizon, "Ticks per episode");
        cmd->add_option("--npc-count", npc_count, "NPCs per map");
    }
    ArenaConfig to_config() const {
        ArenaConfig c;
        c.map_size = map_size;
        c.team_count = team_count;
        c.horizon = horizon;
        c.npc_count = npc_count;
        return c;
    }
};

std::vector<Submission> load_roster_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open roster file " + path);
    std::vector<Submission> roster;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        Submission s;
        if (!(ls >> s.id >> s.name)) throw std::runtime_error("bad roster line: " + line);
        std::getline(ls, s.policy_spec);
        size_t start = s.policy_spec.find_first_not_of(" \t");
        if (start == std::string::npos) throw std::runtime_error("bad roster line: " + line);
        s.policy_spec = s.policy_spec.substr(start);
        s.pvp_qualified = true;
        roster.push_back(std::move(s));
    }
    return roster;
}

void print_match_result(const MatchResult& r) {
    printf("seed=%llu length=%d%s\n", static_cast<unsigned long long>(r.seed),
           r.episode_length, r.early_stop.empty() ? "" : (" early_stop=" + r.early_stop).c_str());
    printf("team rank ach explore forage equip defeat degraded\n");
    for (size_t t = 0; t < r.teams.size(); ++t) {
        const TeamScore& ts = r.teams[t];
        printf("%4zu %4d %3d %7d %6d %5d %6d %s\n", t, ts.rank, ts.achievement,
               ts.stats.best[kExplore], ts.stats.best[kForage], ts.stats.best[kEquipment],
               ts.stats.best[kDefeat], r.degraded[t] ? "yes" : "no");
    }
}

std::vector<ReplayRecord> load_replays(const std::vector<std::string>& paths) {
    std::vector<ReplayRecord> recs;
    for (const auto& p : paths) recs.push_back(load_replay(p));
    return recs;
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
}

int run(int argc, char** argv) {
    CLI::App app{"free-for-all tournament evaluation platform"};
    app.require_subcommand(1);

    // gen-map
    auto* gen = app.add_subcommand("gen-map", "Generate a procedural map file");
    uint64_t gen_seed = 1;
    std::string gen_out = "map.txt";
    ConfigFlags gen_cfg;
    gen->add_option("--seed", gen_seed, "Map seed")->required();
    gen->add_option("--size", gen_cfg.map_size, "Tiles per side");
    gen->add_option("--out", gen_out, "Output path")->required();
    gen->add_option("--team-count", gen_cfg.team_count, "Spawn anchors");

    // run-match
    auto* runm = app.add_subcommand("run-match", "Run one free-for-all episode");
    uint64_t match_seed = 1;
    std::vector<std::string> team_specs;
    std::string replay_path;
    ConfigFlags match_cfg;
    runm->add_option("--seed", match_seed, "Match seed")->required();
    runm->add_option("--teams", team_specs, "Policy spec per team")->required()->expected(-1);
    runm->add_option("--replay", replay_path, "Replay output path");
    match_cfg.attach(runm);

    // eval-pve
    auto* pve = app.add_subcommand("eval-pve", "Run the PvE gate for a submission");
    std::string pve_spec, pve_name = "submission", pve_registry;
    int pve_stage = 1, pve_parallelism = 1;
    uint64_t pve_seed = 1;
    ConfigFlags pve_cfg;
    pve->add_option("--submission", pve_spec, "Policy spec of the submission")->required();
    pve->add_option("--name", pve_name, "Submission name for the registry");
    pve->add_option("--stage", pve_stage, "PvE stage (1-3)")->required();
    pve->add_option("--seed", pve_seed, "Evaluation seed");
    pve->add_option("--parallelism", pve_parallelism, "Concurrent matches");
    pve->add_option("--registry", pve_registry, "Registry dir to record the outcome");
    pve_cfg.attach(pve);

    // tournament
    auto* tour = app.add_subcommand("tournament", "Run a PvP tournament");
    std::string roster_path, tour_registry, tour_replay_dir;
    int tour_target = 100, tour_parallelism = 1;
    uint64_t tour_seed = 1;
    ConfigFlags tour_cfg;
    tour->add_option("--roster", roster_path, "Roster file: id name policy-spec")->required();
    tour->add_option("--target", tour_target, "Matches per submission");
    tour->add_option("--parallelism", tour_parallelism, "Concurrent matches");
    tour->add_option("--seed", tour_seed, "Master seed");
    tour->add_option("--registry", tour_registry, "Registry dir (enables resume)");
    tour->add_option("--replay-dir", tour_replay_dir, "Keep match replays here");
    tour_cfg.attach(tour);

    // leaderboard
    auto* board = app.add_subcommand("leaderboard", "Print the stored leaderboard");
    std::string board_registry;
    board->add_option("--registry", board_registry, "Registry dir")->required();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Replay analytics exports");
    analyze->require_subcommand(1);
    std::vector<std::string> an_in;
    std::string an_out = "-", an_policy;
    int an_team = 0;
    auto* heat = analyze->add_subcommand("heatmap", "Per-tile visitation counts");
    heat->add_option("--in", an_in, "Replay files")->required()->expected(-1);
    heat->add_option("--policy", an_policy, "Policy name to aggregate")->required();
    heat->add_option("--out", an_out, "Output CSV ('-' = stdout)");
    auto* traj = analyze->add_subcommand("trajectory", "Team movement paths");
    traj->add_option("--in", an_in, "Replay file")->required()->expected(1);
    traj->add_option("--team", an_team, "Team index")->required();
    traj->add_option("--out", an_out, "Output CSV");
    auto* radar = analyze->add_subcommand("radar", "Per-task point breakdown");
    radar->add_option("--in", an_in, "Replay files")->required()->expected(-1);
    radar->add_option("--team", an_team, "Team index")->required();
    radar->add_option("--out", an_out, "Output CSV");

    // replay verify
    auto* replay = app.add_subcommand("replay", "Replay utilities");
    replay->require_subcommand(1);
    auto* verify = replay->add_subcommand("verify", "Digest + scorer equivalence check");
    std::string verify_path;
    verify->add_option("file", verify_path, "Replay file")->required();

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        ArenaConfig cfg = gen_cfg.to_config();
        save_map(gen_out, generate_map(gen_seed, cfg));
        printf("wrote %s (seed=%llu size=%d)\n", gen_out.c_str(),
               static_cast<unsigned long long>(gen_seed), cfg.map_size);
        return 0;
    }

    if (runm->parsed()) {
        ArenaConfig cfg = match_cfg.to_config();
        if (static_cast<int>(team_specs.size()) != cfg.team_count)
            throw std::runtime_error("need exactly " + std::to_string(cfg.team_count) +
                                     " team specs, got " + std::to_string(team_specs.size()));
        GameMap map = generate_map(match_seed, cfg);
        std::vector<PolicyPtr> policies;
        for (const auto& s : team_specs) policies.push_back(make_policy(s));
        std::ofstream replay_out;
        std::ostream* rp = nullptr;
        if (!replay_path.empty()) {
            replay_out.open(replay_path);
            if (!replay_out) throw std::runtime_error("cannot open " + replay_path);
            rp = &replay_out;
        }
        EpisodeOutcome out = run_episode(map, policies, cfg, match_seed, rp);
        print_match_result(out.result);
        if (!out.replay_digest.empty()) printf("replay_digest=%s\n", out.replay_digest.c_str());
        return 0;
    }

    if (pve->parsed()) {
        Submission sub;
        sub.id = 0;
        sub.name = pve_name;
        sub.policy_spec = pve_spec;
        if (!pve_registry.empty()) {
            Registry reg(pve_registry, /*write=*/false);
            if (auto existing = reg.find_submission(pve_name)) sub = *existing;
            sub.policy_spec = pve_spec;
        }
        PvEOptions opts;
        opts.config = pve_cfg.to_config();
        opts.seed = pve_seed;
        opts.parallelism = pve_parallelism;
        PvEResult res = evaluate_pve(sub, pve_stage, opts);
        StageGates gates;
        advance_stage(sub, res, gates);
        printf("stage=%d top1_ratio=%.1f best_achievement=%d\n", pve_stage, res.top1_ratio,
               res.best_achievement);
        printf("gate_top1=%.1f -> %s\n", gates.promote_top1,
               res.top1_ratio >= gates.promote_top1 ? "PASS" : "FAIL");
        if (pve_stage == 1)
            printf("pvp_qualification(>=%d): %s\n", gates.pvp_achievement,
                   sub.pvp_qualified ? "QUALIFIED" : "NOT QUALIFIED");
        if (!pve_registry.empty()) {
            Registry reg(pve_registry);
            reg.upsert_submission(sub);
        }
        return 0;
    }

    if (tour->parsed()) {
        std::vector<Submission> roster = load_roster_file(roster_path);
        TournamentOptions opts;
        opts.config = tour_cfg.to_config();
        opts.master_seed = tour_seed;
        opts.target_matches_per_submission = tour_target;
        opts.parallelism = tour_parallelism;
        opts.replay_dir = tour_replay_dir;

        std::unique_ptr<Registry> reg;
        TournamentState state;
        if (!tour_registry.empty()) {
            reg = std::make_unique<Registry>(tour_registry);
            state = reg->reconstruct_state(roster, opts.rating);
            for (const auto& s : roster) reg->upsert_submission(s);
        } else {
            state.roster = roster;
        }
        if (reg) {
            opts.on_match = [&](const MatchWork& w, const MatchCompletion& c,
                                const TournamentState& st) {
                Registry::MatchLogEntry e;
                e.seq = c.seq;
                e.seed = w.seed;
                for (int idx : w.entrants)
                    e.entrant_ids.push_back(idx >= 0 ? st.roster[static_cast<size_t>(idx)].id
                                                     : -1);
                for (const auto& t : c.result.teams) {
                    e.achievements.push_back(t.achievement);
                    e.ranks.push_back(t.rank);
                }
                e.replay_digest = c.replay_digest;
                reg->append_match(e);
                std::vector<Registry::RatingRow> rows;
                for (size_t i = 0; i < st.roster.size(); ++i)
                    rows.push_back({st.roster[i].id, st.ratings[i], st.match_counts[i], c.seq});
                reg->write_ratings(rows);
                printf("match seq=%llu seed=%llu done\n",
                       static_cast<unsigned long long>(c.seq),
                       static_cast<unsigned long long>(w.seed));
            };
        }
        TournamentOutcome out = run_tournament(std::move(state), opts);
        printf("rank name mu sigma score matches\n");
        int pos = 1;
        for (const auto& row : out.leaderboard)
            printf("%4d %s %.3f %.3f %.3f %d\n", pos++, row.name.c_str(), row.rating.mu,
                   row.rating.sigma, row.score, row.matches);
        for (uint64_t s : out.failed_matches)
            fprintf(stderr, "warning: match %llu failed and was skipped\n",
                    static_cast<unsigned long long>(s));
        return 0;
    }

    if (board->parsed()) {
        Registry reg(board_registry, /*write=*/false);
        auto subs = reg.load_submissions();
        auto ratings = reg.load_ratings();
        std::sort(ratings.begin(), ratings.end(),
                  [](const Registry::RatingRow& a, const Registry::RatingRow& b) {
                      return leaderboard_score(a.rating) > leaderboard_score(b.rating);
                  });
        printf("rank id name mu sigma score matches\n");
        int pos = 1;
        for (const auto& r : ratings) {
            std::string name = "?";
            for (const auto& s : subs)
                if (s.id == r.submission_id) name = s.name;
            printf("%4d %3d %s %.3f %.3f %.3f %d\n", pos++, r.submission_id, name.c_str(),
                   r.rating.mu, r.rating.sigma, leaderboard_score(r.rating), r.matches);
        }
        return 0;
    }

    if (heat->parsed()) {
        Heatmap h = visitation_heatmap(load_replays(an_in), an_policy);
        write_text(an_out, heatmap_to_csv(h));
        fprintf(stderr, "episodes=%d total_counts=%llu\n", h.episode_count,
                static_cast<unsigned long long>(h.total()));
        return 0;
    }
    if (traj->parsed()) {
        ReplayRecord rec = load_replay(an_in[0]);
        write_text(an_out, trajectories_to_csv(team_trajectories(rec, an_team)));
        return 0;
    }
    if (radar->parsed()) {
        std::vector<MatchResult> results;
        for (const auto& rec : load_replays(an_in)) results.push_back(rec.result);
        write_text(an_out, breakdown_to_csv(subtask_breakdown(results, an_team)));
        return 0;
    }

    if (verify->parsed()) {
        ReplayRecord rec = load_replay(verify_path);  // throws on digest mismatch
        MatchResult recomputed = recompute_result(rec);
        for (size_t t = 0; t < rec.result.teams.size(); ++t) {
            if (recomputed.teams[t].achievement != rec.result.teams[t].achievement ||
                recomputed.teams[t].stats != rec.result.teams[t].stats)
                throw std::runtime_error("scorer mismatch for team " + std::to_string(t));
        }
        printf("ok digest=%s teams=%zu ticks=%zu\n", rec.digest.c_str(),
               rec.result.teams.size(), rec.ticks.size());
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
