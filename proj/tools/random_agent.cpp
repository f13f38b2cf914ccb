// Reference external team policy speaking the stdio line protocol. With no
// flags it reproduces the built-in random policy exactly (same seed, same
// draw sequence), so replays must match digest-for-digest. The --misbehave
// modes exist for fault-injection tests.

#include <unistd.h>

#include <cstring>
#include <iostream>
#include <json.hpp>
#include <string>

#include "ffa/observation.hpp"
#include "ffa/rng.hpp"

using nlohmann::json;

int main(int argc, char** argv) {
    std::string misbehave;
    int misbehave_from_tick = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--misbehave") == 0 && i + 1 < argc)
            misbehave = argv[++i];
        else if (std::strcmp(argv[i], "--from-tick") == 0 && i + 1 < argc)
            misbehave_from_tick = std::atoi(argv[++i]);
    }

    std::string line;
    if (!std::getline(std::cin, line)) return 1;
    json hello = json::parse(line);
    if (hello.value("type", "") != "hello" || hello.value("protocol", -1) != 1) {
        std::cout << json{{"type", "error"}, {"reason", "bad handshake"}}.dump() << std::endl;
        return 1;
    }
    uint64_t seed = hello.at("policy_seed").get<uint64_t>();
    int team_size = hello.at("config").at("team_size").get<int>();
    std::cout << json{{"type", "hello"}, {"protocol", 1}}.dump() << std::endl;

    ffa::Rng rng(seed);
    while (std::getline(std::cin, line)) {
        json obs = json::parse(line);
        int tick = obs.at("tick").get<int>();
        if (!misbehave.empty() && tick >= misbehave_from_tick) {
            if (misbehave == "glitch" && tick == misbehave_from_tick) {
                // Exactly one bad line, then back to normal output.
                std::cout << "%%% glitch %%%" << std::endl;
                continue;
            }
            if (misbehave == "garbage") {
                std::cout << "%%% not json %%%" << std::endl;
                continue;
            }
            if (misbehave == "mute") continue;  // never answers again
            if (misbehave == "timeout") {
                sleep(3600);
                continue;
            }
        }
        std::vector<ffa::AgentAction> actions(static_cast<size_t>(team_size));
        for (auto& a : actions) a.move = static_cast<ffa::Move>(rng.below(5));
        std::cout << ffa::actions_to_json(tick, actions) << std::endl;
    }
    return 0;
}
