#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <json.hpp>
#include <stdexcept>

#include "ffa/policy.hpp"

namespace ffa {

using nlohmann::json;

namespace {

constexpr int kProtocolVersion = 1;
constexpr int kHandshakeBudgetMs = 2000;
constexpr int kViolationBudget = 3;  // consecutive timeouts/garbage before degrade

int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// Child process with line-oriented stdin/stdout and deadline reads.
class ChildProcess {
  public:
    explicit ChildProcess(const std::string& command) {
        int to_child[2], from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0)
            throw std::runtime_error("pipe failed");
        pid_ = fork();
        if (pid_ < 0) throw std::runtime_error("fork failed");
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        in_fd_ = to_child[1];
        out_fd_ = from_child[0];
        fcntl(out_fd_, F_SETFL, O_NONBLOCK);
        signal(SIGPIPE, SIG_IGN);
    }

    ~ChildProcess() { shutdown(); }

    void shutdown() {
        if (in_fd_ >= 0) close(in_fd_);
        if (out_fd_ >= 0) close(out_fd_);
        in_fd_ = out_fd_ = -1;
        if (pid_ > 0) {
            kill(pid_, SIGKILL);
            waitpid(pid_, nullptr, 0);
            pid_ = -1;
        }
    }

    bool alive() const { return pid_ > 0; }

    bool write_line(const std::string& line) {
        std::string buf = line + "\n";
        size_t off = 0;
        while (off < buf.size()) {
            ssize_t n = write(in_fd_, buf.data() + off, buf.size() - off);
            if (n <= 0) return false;
            off += static_cast<size_t>(n);
        }
        return true;
    }

    // Reads one line or returns false on deadline/EOF.
    bool read_line(std::string& out, int budget_ms) {
        int64_t deadline = now_ms() + budget_ms;
        for (;;) {
            auto nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                out = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                return true;
            }
            int64_t remain = deadline - now_ms();
            if (remain <= 0) return false;
            pollfd pfd{out_fd_, POLLIN, 0};
            int pr = poll(&pfd, 1, static_cast<int>(remain));
            if (pr <= 0) return false;
            char chunk[4096];
            ssize_t n = read(out_fd_, chunk, sizeof chunk);
            if (n <= 0) return false;  // EOF or error
            buffer_.append(chunk, static_cast<size_t>(n));
        }
    }

  private:
    pid_t pid_ = -1;
    int in_fd_ = -1;
    int out_fd_ = -1;
    std::string buffer_;
};

class ExternalPolicy final : public TeamPolicy {
  public:
    ExternalPolicy(std::string command, int tick_budget_ms)
        : command_(std::move(command)), tick_budget_ms_(tick_budget_ms) {}

    void reset(const EpisodeInfo& info) override {
        team_size_ = info.config.team_size;
        degraded_ = false;
        violations_ = 0;
        child_.reset();
        try {
            child_ = std::make_unique<ChildProcess>(command_);
        } catch (const std::exception&) {
            degrade();
            return;
        }
        json hello{{"type", "hello"},
                   {"protocol", kProtocolVersion},
                   {"team_id", info.team_id},
                   {"policy_seed", info.policy_seed},
                   {"config",
                    {{"team_size", info.config.team_size},
                     {"map_size", info.config.map_size},
                     {"horizon", info.config.horizon},
                     {"vision", info.config.vision}}}};
        std::string reply;
        if (!child_->write_line(hello.dump()) ||
            !child_->read_line(reply, kHandshakeBudgetMs)) {
            degrade();
            return;
        }
        try {
            json j = json::parse(reply);
            if (j.value("type", "") != "hello" ||
                j.value("protocol", -1) != kProtocolVersion) {
                degrade();  // version mismatch aborts the handshake
            }
        } catch (const json::exception&) {
            degrade();
        }
    }

    std::vector<AgentAction> act(const TeamObservation& obs) override {
        std::vector<AgentAction> noop(static_cast<size_t>(team_size_));
        if (degraded_) return noop;
        if (!child_->write_line(observation_to_json(obs))) {
            violation();
            return noop;
        }
        std::string reply;
        if (!child_->read_line(reply, tick_budget_ms_)) {
            violation();  // per-tick timeout: no-op this tick
            return noop;
        }
        try {
            std::vector<AgentAction> actions =
                actions_from_json(reply, obs.tick, team_size_);
            violations_ = 0;
            return actions;
        } catch (const std::exception&) {
            violation();  // malformed record
            return noop;
        }
    }

    std::string name() const override { return "ext:" + command_; }
    bool degraded() const override { return degraded_; }

  private:
    void violation() {
        if (++violations_ >= kViolationBudget) degrade();
    }
    void degrade() {
        degraded_ = true;
        if (child_) child_->shutdown();
    }

    std::string command_;
    int tick_budget_ms_;
    int team_size_ = 8;
    bool degraded_ = false;
    int violations_ = 0;
    std::unique_ptr<ChildProcess> child_;
};

}  // namespace

PolicyPtr make_external_policy(const std::string& command, int tick_budget_ms) {
    return std::make_unique<ExternalPolicy>(command, tick_budget_ms);
}

}  // namespace ffa
