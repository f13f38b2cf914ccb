#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ffa/scoring.hpp"
#include "ffa/world.hpp"

namespace ffa {

struct ReplayHeader {
    int version = 1;
    uint64_t seed = 0;
    int map_size = 0;
    int team_count = 0;
    int team_size = 0;
    int horizon = 0;
    int forage_xp_per_level = 4;
    std::vector<std::string> entrants;          // policy/submission name per team
    std::vector<std::array<int, 4>> spawns;     // [agent_id, team, row, col]
};

struct ReplayTick {
    int tick = 0;
    std::vector<std::array<int, 3>> positions;      // living players, end of tick
    std::vector<std::array<int, 4>> actions;        // [id, move, style(-1), target(-1)]
    std::vector<AttackEvent> attacks;
    std::vector<KillEvent> kills;
    std::vector<EquipEvent> equips;
    std::vector<HarvestEvent> harvests;
    std::vector<HpDelta> metabolism;
    std::vector<DeathEvent> deaths;
    std::vector<int> achievements;                  // running, per team
};

struct ReplayRecord {
    ReplayHeader header;
    std::vector<ReplayTick> ticks;
    MatchResult result;
    std::string digest;  // sha256 hex over header + tick lines as written
};

// Incremental SHA-256 (OpenSSL-backed).
class Sha256 {
  public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;
    void update(const std::string& bytes);
    std::string hex_digest();  // finalizes

  private:
    void* ctx_;
};

std::string sha256_hex(const std::string& bytes);

// Streaming writer: one JSON line per tick, constant memory; the footer
// carries the MatchResult and the digest over everything before it.
class ReplayWriter {
  public:
    explicit ReplayWriter(std::ostream& out);
    void write_header(const ReplayHeader& header);
    void write_tick(const ReplayTick& tick);
    void write_footer(const MatchResult& result);
    const std::string& digest() const { return digest_; }

  private:
    std::ostream& out_;
    Sha256 hash_;
    std::string digest_;
    bool header_written_ = false;
};

// Throws ReplayError with kind Version / Digest / Truncated on bad input.
struct ReplayError : std::runtime_error {
    enum class Kind { Version, Digest, Truncated, Malformed };
    Kind kind;
    ReplayError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

ReplayRecord read_replay(std::istream& in);
ReplayRecord load_replay(const std::string& path);
void save_replay(const std::string& path, const ReplayRecord& rec);

// Independent scorer: rebuilds per-agent task stats from replay events and
// positions, then rescores. Used to verify footer results.
MatchResult recompute_result(const ReplayRecord& rec, const TaskThresholds& t = {});

std::string match_result_to_json(const MatchResult& r);
MatchResult match_result_from_json(const std::string& line);

}  // namespace ffa
