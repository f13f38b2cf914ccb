#include "ffa/replay.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace ffa {

using nlohmann::json;

// --- sha256 ----------------------------------------------------------------

Sha256::Sha256() {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    ctx_ = ctx;
}

Sha256::~Sha256() {
    if (ctx_) EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_));
}

void Sha256::update(const std::string& bytes) {
    EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), bytes.data(), bytes.size());
}

std::string Sha256::hex_digest() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), md, &len);
    static const char* hexd = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hexd[md[i] >> 4]);
        out.push_back(hexd[md[i] & 0xf]);
    }
    return out;
}

std::string sha256_hex(const std::string& bytes) {
    Sha256 h;
    h.update(bytes);
    return h.hex_digest();
}

// --- json helpers ----------------------------------------------------------

namespace {

json header_to_json(const ReplayHeader& h) {
    return json{{"type", "header"},   {"version", h.version},
                {"seed", h.seed},     {"map_size", h.map_size},
                {"team_count", h.team_count}, {"team_size", h.team_size},
                {"horizon", h.horizon},       {"xp_per_level", h.forage_xp_per_level},
                {"entrants", h.entrants},     {"spawns", h.spawns}};
}

ReplayHeader header_from_json(const json& j) {
    ReplayHeader h;
    h.version = j.at("version").get<int>();
    h.seed = j.at("seed").get<uint64_t>();
    h.map_size = j.at("map_size").get<int>();
    h.team_count = j.at("team_count").get<int>();
    h.team_size = j.at("team_size").get<int>();
    h.horizon = j.at("horizon").get<int>();
    h.forage_xp_per_level = j.at("xp_per_level").get<int>();
    h.entrants = j.at("entrants").get<std::vector<std::string>>();
    h.spawns = j.at("spawns").get<std::vector<std::array<int, 4>>>();
    return h;
}

json tick_to_json(const ReplayTick& t) {
    json atk = json::array(), kill = json::array(), eq = json::array(),
         hv = json::array(), mb = json::array(), death = json::array();
    for (const auto& a : t.attacks)
        atk.push_back({a.attacker, a.target, static_cast<int>(a.style), a.damage,
                       a.illegal ? 1 : 0});
    for (const auto& k : t.kills)
        kill.push_back({k.killer, k.victim, k.victim_is_player ? 1 : 0});
    for (const auto& e : t.equips) eq.push_back({e.agent, e.level});
    for (const auto& h : t.harvests) hv.push_back({h.agent, h.water ? 1 : 0});
    for (const auto& m : t.metabolism) mb.push_back({m.agent, m.delta});
    for (const auto& d : t.deaths) death.push_back({d.entity, d.starvation ? 1 : 0});
    return json{{"type", "tick"}, {"t", t.tick},      {"pos", t.positions},
                {"act", t.actions}, {"atk", atk},     {"kill", kill},
                {"eq", eq},         {"hv", hv},       {"mb", mb},
                {"death", death},   {"ach", t.achievements}};
}

ReplayTick tick_from_json(const json& j) {
    ReplayTick t;
    t.tick = j.at("t").get<int>();
    t.positions = j.at("pos").get<std::vector<std::array<int, 3>>>();
    t.actions = j.at("act").get<std::vector<std::array<int, 4>>>();
    for (const auto& a : j.at("atk"))
        t.attacks.push_back({a[0].get<int>(), a[1].get<int>(),
                             static_cast<CombatStyle>(a[2].get<int>()), a[3].get<int>(),
                             a[4].get<int>() != 0});
    for (const auto& k : j.at("kill"))
        t.kills.push_back({k[0].get<int>(), k[1].get<int>(), k[2].get<int>() != 0});
    for (const auto& e : j.at("eq")) t.equips.push_back({e[0].get<int>(), e[1].get<int>()});
    for (const auto& h : j.at("hv")) t.harvests.push_back({h[0].get<int>(), h[1].get<int>() != 0});
    for (const auto& m : j.at("mb")) t.metabolism.push_back({m[0].get<int>(), m[1].get<int>()});
    for (const auto& d : j.at("death"))
        t.deaths.push_back({d[0].get<int>(), d[1].get<int>() != 0});
    t.achievements = j.at("ach").get<std::vector<int>>();
    return t;
}

}  // namespace

std::string match_result_to_json(const MatchResult& r) {
    json teams = json::array();
    for (const auto& ts : r.teams)
        teams.push_back(json{{"stats", ts.stats.best},
                             {"points", ts.task_points},
                             {"achievement", ts.achievement},
                             {"rank", ts.rank}});
    std::vector<int> degraded(r.degraded.begin(), r.degraded.end());
    return json{{"seed", r.seed},
                {"length", r.episode_length},
                {"early_stop", r.early_stop},
                {"teams", teams},
                {"degraded", degraded}}
        .dump();
}

MatchResult match_result_from_json(const std::string& line) {
    json j = json::parse(line);
    MatchResult r;
    r.seed = j.at("seed").get<uint64_t>();
    r.episode_length = j.at("length").get<int>();
    r.early_stop = j.at("early_stop").get<std::string>();
    for (const auto& t : j.at("teams")) {
        TeamScore ts;
        ts.stats.best = t.at("stats").get<std::array<int, 4>>();
        ts.task_points = t.at("points").get<std::array<int, 4>>();
        ts.achievement = t.at("achievement").get<int>();
        ts.rank = t.at("rank").get<int>();
        r.teams.push_back(ts);
    }
    for (int d : j.at("degraded").get<std::vector<int>>()) r.degraded.push_back(d != 0);
    return r;
}

// --- writer ----------------------------------------------------------------

ReplayWriter::ReplayWriter(std::ostream& out) : out_(out) {}

void ReplayWriter::write_header(const ReplayHeader& header) {
    std::string line = header_to_json(header).dump();
    line.push_back('\n');
    hash_.update(line);
    out_ << line;
    header_written_ = true;
}

void ReplayWriter::write_tick(const ReplayTick& tick) {
    std::string line = tick_to_json(tick).dump();
    line.push_back('\n');
    hash_.update(line);
    out_ << line;
}

void ReplayWriter::write_footer(const MatchResult& result) {
    digest_ = hash_.hex_digest();
    json j{{"type", "footer"},
           {"result", json::parse(match_result_to_json(result))},
           {"digest", digest_}};
    out_ << j.dump() << "\n";
    out_.flush();
}

// --- reader ----------------------------------------------------------------

ReplayRecord read_replay(std::istream& in) {
    ReplayRecord rec;
    Sha256 hash;
    std::string line;
    if (!std::getline(in, line))
        throw ReplayError(ReplayError::Kind::Truncated, "empty replay stream");
    json jh;
    try {
        jh = json::parse(line);
    } catch (const json::exception& e) {
        throw ReplayError(ReplayError::Kind::Malformed,
                          std::string("bad header line: ") + e.what());
    }
    if (jh.value("type", "") != "header")
        throw ReplayError(ReplayError::Kind::Malformed, "first line is not a header");
    if (jh.value("version", -1) != 1)
        throw ReplayError(ReplayError::Kind::Version,
                          "unsupported replay version " + jh.value("version", json()).dump());
    rec.header = header_from_json(jh);
    hash.update(line + "\n");

    bool footer_seen = false;
    int last_tick = -1;
    while (std::getline(in, line)) {
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception&) {
            throw ReplayError(ReplayError::Kind::Malformed,
                              "malformed record after tick " + std::to_string(last_tick));
        }
        std::string type = j.value("type", "");
        if (type == "tick") {
            try {
                rec.ticks.push_back(tick_from_json(j));
            } catch (const json::exception&) {
                throw ReplayError(ReplayError::Kind::Malformed,
                                  "malformed tick after tick " + std::to_string(last_tick));
            }
            last_tick = rec.ticks.back().tick;
            hash.update(line + "\n");
        } else if (type == "footer") {
            rec.result = match_result_from_json(j.at("result").dump());
            rec.digest = j.at("digest").get<std::string>();
            footer_seen = true;
            break;
        } else {
            throw ReplayError(ReplayError::Kind::Malformed,
                              "unexpected record type '" + type + "'");
        }
    }
    if (!footer_seen)
        throw ReplayError(ReplayError::Kind::Truncated,
                          "replay truncated; last complete tick " + std::to_string(last_tick));
    std::string computed = hash.hex_digest();
    if (computed != rec.digest)
        throw ReplayError(ReplayError::Kind::Digest,
                          "digest mismatch: recorded " + rec.digest + ", computed " + computed);
    return rec;
}

ReplayRecord load_replay(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open replay " + path);
    return read_replay(in);
}

void save_replay(const std::string& path, const ReplayRecord& rec) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    ReplayWriter w(out);
    w.write_header(rec.header);
    for (const auto& t : rec.ticks) w.write_tick(t);
    w.write_footer(rec.result);
}

// --- independent scorer ----------------------------------------------------

MatchResult recompute_result(const ReplayRecord& rec, const TaskThresholds& thresholds) {
    const ReplayHeader& h = rec.header;
    int agent_count = h.team_count * h.team_size;
    std::vector<Coord> spawn(static_cast<size_t>(agent_count));
    std::vector<int> team_of(static_cast<size_t>(agent_count), -1);
    for (const auto& s : h.spawns) {
        spawn[static_cast<size_t>(s[0])] = {s[2], s[3]};
        team_of[static_cast<size_t>(s[0])] = s[1];
    }
    std::vector<int> explore(static_cast<size_t>(agent_count), 0);
    std::vector<int> xp(static_cast<size_t>(agent_count), 0);
    std::vector<int> equip(static_cast<size_t>(agent_count), 0);
    std::vector<int> kills(static_cast<size_t>(agent_count), 0);
    for (const auto& t : rec.ticks) {
        for (const auto& p : t.positions) {
            int id = p[0];
            explore[static_cast<size_t>(id)] =
                std::max(explore[static_cast<size_t>(id)],
                         linf({p[1], p[2]}, spawn[static_cast<size_t>(id)]));
        }
        for (const auto& hv : t.harvests) xp[static_cast<size_t>(hv.agent)] += 1;
        for (const auto& e : t.equips)
            equip[static_cast<size_t>(e.agent)] =
                std::max(equip[static_cast<size_t>(e.agent)], e.level);
        for (const auto& k : t.kills)
            if (k.victim_is_player && k.killer < agent_count)
                kills[static_cast<size_t>(k.killer)] += 1;
    }
    MatchResult out;
    out.seed = h.seed;
    out.episode_length = static_cast<int>(rec.ticks.size());
    out.early_stop = rec.result.early_stop;
    out.degraded = rec.result.degraded;
    std::vector<int> achievements;
    for (int team = 0; team < h.team_count; ++team) {
        TeamScore ts;
        for (int a = 0; a < agent_count; ++a) {
            if (team_of[static_cast<size_t>(a)] != team) continue;
            size_t i = static_cast<size_t>(a);
            int level = std::min(50, 1 + xp[i] / h.forage_xp_per_level);
            ts.stats.best[kExplore] = std::max(ts.stats.best[kExplore], explore[i]);
            ts.stats.best[kForage] = std::max(ts.stats.best[kForage], level);
            ts.stats.best[kEquipment] = std::max(ts.stats.best[kEquipment], equip[i]);
            ts.stats.best[kDefeat] = std::max(ts.stats.best[kDefeat], kills[i]);
        }
        ts.task_points = per_task_points(ts.stats, thresholds);
        ts.achievement = team_achievement(ts.stats, thresholds);
        achievements.push_back(ts.achievement);
        out.teams.push_back(ts);
    }
    std::vector<int> ranks = rank_teams(achievements);
    for (size_t i = 0; i < out.teams.size(); ++i) out.teams[i].rank = ranks[i];
    return out;
}

}  // namespace ffa
