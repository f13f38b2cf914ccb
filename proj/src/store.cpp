#include "ffa/store.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace ffa {

using nlohmann::json;

namespace {

// 17 significant digits round-trips any double bit-exactly.
std::string f17(double x) {
    char buf[64];
    snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void append_line_fsync(const std::string& path, const std::string& line) {
    int fd = open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0) throw std::runtime_error("cannot open " + path);
    std::string buf = line + "\n";
    if (write(fd, buf.data(), buf.size()) != static_cast<ssize_t>(buf.size())) {
        close(fd);
        throw std::runtime_error("short write to " + path);
    }
    fsync(fd);
    close(fd);
}

// Reads JSONL, skipping a corrupt trailing record. Corruption anywhere
// else is surfaced as a warning too, but the line is simply dropped.
std::vector<json> read_jsonl(const std::string& path, int& warnings) {
    std::vector<json> out;
    std::ifstream in(path);
    if (!in) return out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::exception&) {
            fprintf(stderr, "warning: skipping corrupt record in %s\n", path.c_str());
            ++warnings;
        }
    }
    return out;
}

}  // namespace

std::string submission_to_json(const Submission& s) {
    json ach = json::object(), t1 = json::object();
    for (const auto& [stage, v] : s.best_achievement) ach[std::to_string(stage)] = v;
    for (const auto& [stage, v] : s.best_top1_ratio) t1[std::to_string(stage)] = v;
    return json{{"id", s.id},
                {"name", s.name},
                {"spec", s.policy_spec},
                {"state", static_cast<int>(s.state)},
                {"pvp", s.pvp_qualified},
                {"best_achievement", ach},
                {"best_top1", t1}}
        .dump();
}

Submission submission_from_json(const std::string& line) {
    json j = json::parse(line);
    Submission s;
    s.id = j.at("id").get<int>();
    s.name = j.at("name").get<std::string>();
    s.policy_spec = j.at("spec").get<std::string>();
    s.state = static_cast<QualState>(j.at("state").get<int>());
    s.pvp_qualified = j.at("pvp").get<bool>();
    for (const auto& [k, v] : j.at("best_achievement").items())
        s.best_achievement[std::stoi(k)] = v.get<int>();
    for (const auto& [k, v] : j.at("best_top1").items())
        s.best_top1_ratio[std::stoi(k)] = v.get<double>();
    return s;
}

Registry::Registry(const std::string& dir, bool write) : dir_(dir) {
    mkdir(dir.c_str(), 0755);  // fine if it already exists
    if (write) {
        std::string lock = dir_ + "/lock";
        lock_fd_ = open(lock.c_str(), O_WRONLY | O_CREAT, 0644);
        if (lock_fd_ < 0) throw std::runtime_error("cannot open lock file in " + dir_);
        struct flock fl{};
        fl.l_type = F_WRLCK;
        fl.l_whence = SEEK_SET;
        if (fcntl(lock_fd_, F_SETLK, &fl) != 0) {
            close(lock_fd_);
            lock_fd_ = -1;
            throw std::runtime_error("registry " + dir_ + " is locked by another process");
        }
        std::string pid = std::to_string(getpid()) + "\n";
        if (ftruncate(lock_fd_, 0) == 0) {
            ssize_t n = ::write(lock_fd_, pid.data(), pid.size());
            (void)n;
        }
    }
}

Registry::~Registry() {
    if (lock_fd_ >= 0) close(lock_fd_);
}

void Registry::upsert_submission(const Submission& s) {
    append_line_fsync(dir_ + "/submissions.jsonl", submission_to_json(s));
}

std::vector<Submission> Registry::load_submissions() const {
    std::vector<Submission> out;
    for (const json& j : read_jsonl(dir_ + "/submissions.jsonl", warnings_)) {
        Submission s = submission_from_json(j.dump());
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const Submission& x) { return x.id == s.id; });
        if (it != out.end())
            *it = s;  // last record wins
        else
            out.push_back(s);
    }
    return out;
}

std::optional<Submission> Registry::find_submission(const std::string& name) const {
    for (const Submission& s : load_submissions())
        if (s.name == name) return s;
    return std::nullopt;
}

void Registry::append_match(const MatchLogEntry& e) {
    json j{{"seq", e.seq},
           {"seed", e.seed},
           {"entrants", e.entrant_ids},
           {"achievements", e.achievements},
           {"ranks", e.ranks},
           {"digest", e.replay_digest}};
    append_line_fsync(dir_ + "/matchlog.jsonl", j.dump());
}

std::vector<Registry::MatchLogEntry> Registry::load_match_log() const {
    std::vector<MatchLogEntry> out;
    uint64_t last_seq = 0;
    for (const json& j : read_jsonl(dir_ + "/matchlog.jsonl", warnings_)) {
        MatchLogEntry e;
        try {
            e.seq = j.at("seq").get<uint64_t>();
            e.seed = j.at("seed").get<uint64_t>();
            e.entrant_ids = j.at("entrants").get<std::vector<int>>();
            e.achievements = j.at("achievements").get<std::vector<int>>();
            e.ranks = j.at("ranks").get<std::vector<int>>();
            e.replay_digest = j.at("digest").get<std::string>();
        } catch (const json::exception&) {
            fprintf(stderr, "warning: skipping malformed match log record\n");
            ++warnings_;
            continue;
        }
        if (!out.empty() && e.seq <= last_seq) {
            fprintf(stderr, "warning: non-increasing seq %" PRIu64 " in match log\n", e.seq);
            ++warnings_;
            continue;  // no double counting
        }
        last_seq = e.seq;
        out.push_back(std::move(e));
    }
    return out;
}

void Registry::write_ratings(const std::vector<RatingRow>& rows) {
    std::string tmp = dir_ + "/ratings.jsonl.tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        for (const auto& r : rows) {
            json j{{"id", r.submission_id},
                   {"mu", f17(r.rating.mu)},
                   {"sigma", f17(r.rating.sigma)},
                   {"matches", r.matches},
                   {"last_seq", r.last_seq}};
            out << j.dump() << "\n";
        }
    }
    if (rename(tmp.c_str(), (dir_ + "/ratings.jsonl").c_str()) != 0)
        throw std::runtime_error("cannot publish ratings snapshot");
}

std::vector<Registry::RatingRow> Registry::load_ratings() const {
    std::vector<RatingRow> out;
    for (const json& j : read_jsonl(dir_ + "/ratings.jsonl", warnings_)) {
        RatingRow r;
        r.submission_id = j.at("id").get<int>();
        r.rating.mu = std::stod(j.at("mu").get<std::string>());
        r.rating.sigma = std::stod(j.at("sigma").get<std::string>());
        r.matches = j.at("matches").get<int>();
        r.last_seq = j.at("last_seq").get<uint64_t>();
        out.push_back(r);
    }
    return out;
}

TournamentState Registry::reconstruct_state(const std::vector<Submission>& roster,
                                            const RatingConfig& rating_config) const {
    TournamentState state;
    state.roster = roster;
    state.match_counts.assign(roster.size(), 0);
    state.ratings.assign(roster.size(), Rating{rating_config.mu0, rating_config.sigma0});
    std::map<int, size_t> by_id;
    for (size_t i = 0; i < roster.size(); ++i) by_id[roster[i].id] = i;

    for (const MatchLogEntry& e : load_match_log()) {
        std::vector<size_t> rated;
        std::vector<int> achievements;
        for (size_t slot = 0; slot < e.entrant_ids.size(); ++slot) {
            auto it = by_id.find(e.entrant_ids[slot]);
            if (e.entrant_ids[slot] < 0 || it == by_id.end()) continue;
            rated.push_back(it->second);
            achievements.push_back(e.achievements[slot]);
        }
        if (rated.size() >= 2) {
            std::vector<Rating> before;
            for (size_t r : rated) before.push_back(state.ratings[r]);
            FfaUpdateResult upd =
                update_ffa(before, RankedOutcome{rank_teams(achievements)}, rating_config);
            for (size_t i = 0; i < rated.size(); ++i)
                state.ratings[rated[i]] = upd.ratings[i];
        }
        for (size_t r : rated) state.match_counts[r] += 1;
        state.next_seq = e.seq + 1;
    }
    return state;
}

}  // namespace ffa
