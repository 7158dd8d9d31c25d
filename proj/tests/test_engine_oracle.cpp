#include <string>

#include <gtest/gtest.h>

#include "support/straight_line_oracle.hpp"

using echo::Config;
using oracle::Oracle;

namespace {

struct OracleCase {
    const char* name;
    int alphabet, maxGen, agents;
    double plantCap, base, mutation, replication, replenish;
    bool cog1Only, cog0Only;
};

const OracleCase kCases[] = {
    {"baseline", 4, 20, 2, 10, 10, 0.001, 0.9, 2, false, false},
    {"short-binary-mutating", 2, 3, 2, 10, 10, 0.5, 0.5, 2, false, false},
    {"starving", 2, 2, 2, 2, 1, 0.3, 0.9, 0.25, false, false},
    {"cog1-pair", 2, 2, 2, 6, 3, 0.2, 0.7, 1, true, false},
    {"cog0-pair", 3, 3, 2, 6, 3, 0.2, 0.7, 1, false, true},
    {"crowded", 2, 2, 6, 8, 4, 0.5, 1.0, 1.5, false, false},
};

}  // namespace

TEST(StraightLineOracle, ThreeByThreeTwoTicks) {
    int compared = 0;
    for (const auto& k : kCases) {
        Config c;
        c.r = 1;
        c.alphabetSize = k.alphabet;
        c.maxGen = k.maxGen;
        c.initialAgents = k.agents;
        c.maxPlantoidCapacity = k.plantCap;
        c.agentBaseReservoir = k.base;
        c.mutationP = k.mutation;
        c.replicationP = k.replication;
        c.replenishRate = k.replenish;
        c.cog1Only = k.cog1Only;
        c.cog0Only = k.cog0Only;
        for (std::uint64_t seed = 0; seed < 400; ++seed) {
            Oracle o(c, seed);
            echo::World w = echo::initWorld(c, seed);
            const std::string tag = std::string(k.name) + " seed " + std::to_string(seed);
            ASSERT_EQ(oracle::firstDifference(o, w), "") << tag << " init";
            for (int t = 1; t <= 2; ++t) {
                o.step();
                echo::runTick(w);
                ASSERT_EQ(oracle::firstDifference(o, w), "") << tag << " tick " << t;
                ++compared;
            }
        }
    }
    EXPECT_EQ(compared, 6 * 400 * 2);
}

TEST(StraightLineOracle, LongerRunsOnThreeByThree) {
    Config c;
    c.r = 1;
    c.alphabetSize = 2;
    c.maxGen = 4;
    c.initialAgents = 4;
    c.agentBaseReservoir = 4;
    c.mutationP = 0.2;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Oracle o(c, seed);
        echo::World w = echo::initWorld(c, seed);
        for (int t = 1; t <= 30; ++t) {
            o.step();
            echo::runTick(w);
            ASSERT_EQ(oracle::firstDifference(o, w), "") << "seed " << seed << " tick " << t;
        }
    }
}
