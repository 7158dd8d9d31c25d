#pragma once

#include <cmath>
#include <cstdint>

#include <nlohmann/json.hpp>

#include "echo/error.hpp"

namespace echo {

/// Global model parameters. Defaults are the harsh-environment baseline:
/// a 19x19 torus with plantoid capacity 10 and 10 + 10 initial agents.
struct Config {
    int r = 9;
    int alphabetSize = 4;
    int maxGen = 20;
    double maxPlantoidCapacity = 10;
    double agentBaseReservoir = 10;
    double mutationP = 0.001;
    double replenishRate = 2;
    double replicationP = 0.9;
    int initialAgents = 20;
    bool cog1Only = false;
    bool cog0Only = false;
    std::int64_t maxTicks = 5000;
    std::uint64_t seed = 1;
    int replicates = 1;

    int side() const noexcept { return 2 * r + 1; }
    int cog0Initial() const noexcept { return cog1Only ? 0 : (cog0Only ? initialAgents : initialAgents / 2); }
    int cog1Initial() const noexcept { return initialAgents - cog0Initial(); }

    /// Throws ConfigError naming the first offending key.
    void validate() const {
        auto require = [](bool ok, const char* key, const char* msg) {
            if (!ok) throw ConfigError(key, msg);
        };
        require(r >= 1, "r", "must be >= 1");
        require(alphabetSize >= 2 && alphabetSize <= 256, "alphabet", "must be in [2, 256]");
        require(maxGen >= 1, "max-gen", "must be >= 1");
        require(std::isfinite(maxPlantoidCapacity) && maxPlantoidCapacity >= 1, "plantoid-cap", "must be >= 1");
        require(std::isfinite(agentBaseReservoir) && agentBaseReservoir > 0, "agent-base", "must be > 0");
        require(mutationP >= 0 && mutationP <= 1, "mutation-p", "must be a probability");
        require(std::isfinite(replenishRate) && replenishRate > 0, "replenish", "must be > 0");
        require(replicationP >= 0 && replicationP <= 1, "replication-p", "must be a probability");
        require(initialAgents >= 0, "agents", "must be >= 0");
        require(!(cog1Only && cog0Only), "cog1-only", "cannot be combined with --cog0-only");
        require(cog1Only || cog0Only || initialAgents % 2 == 0, "agents",
                "must be even when both cognitive types are present");
        require(maxTicks >= 1, "max-ticks", "must be >= 1");
        require(replicates >= 1, "replicates", "must be >= 1");
    }

    friend bool operator==(const Config&, const Config&) = default;
};

// Keys match the command-line flag names.
inline void to_json(nlohmann::json& j, const Config& c) {
    j = nlohmann::json{{"r", c.r},
                       {"alphabet", c.alphabetSize},
                       {"max-gen", c.maxGen},
                       {"plantoid-cap", c.maxPlantoidCapacity},
                       {"agent-base", c.agentBaseReservoir},
                       {"mutation-p", c.mutationP},
                       {"replenish", c.replenishRate},
                       {"replication-p", c.replicationP},
                       {"agents", c.initialAgents},
                       {"cog1-only", c.cog1Only},
                       {"cog0-only", c.cog0Only},
                       {"max-ticks", c.maxTicks},
                       {"seed", c.seed},
                       {"replicates", c.replicates}};
}

/// Missing keys keep the current value; unknown keys are rejected.
inline void from_json(const nlohmann::json& j, Config& c) {
    if (!j.is_object()) throw ConfigError("config", "config file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "r") c.r = value.get<int>();
            else if (key == "alphabet") c.alphabetSize = value.get<int>();
            else if (key == "max-gen") c.maxGen = value.get<int>();
            else if (key == "plantoid-cap") c.maxPlantoidCapacity = value.get<double>();
            else if (key == "agent-base") c.agentBaseReservoir = value.get<double>();
            else if (key == "mutation-p") c.mutationP = value.get<double>();
            else if (key == "replenish") c.replenishRate = value.get<double>();
            else if (key == "replication-p") c.replicationP = value.get<double>();
            else if (key == "agents") c.initialAgents = value.get<int>();
            else if (key == "cog1-only") c.cog1Only = value.get<bool>();
            else if (key == "cog0-only") c.cog0Only = value.get<bool>();
            else if (key == "max-ticks") c.maxTicks = value.get<std::int64_t>();
            else if (key == "seed") c.seed = value.get<std::uint64_t>();
            else if (key == "replicates") c.replicates = value.get<int>();
            else throw ConfigError(key, "unknown config key");
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(key, e.what());
        }
    }
}

}  // namespace echo
