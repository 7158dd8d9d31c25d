#include <set>

#include <gtest/gtest.h>

#include "echo/world.hpp"

using namespace echo;

namespace {

Config smallConfig(int r = 3) {
    Config c;
    c.r = r;
    c.initialAgents = 4;
    return c;
}

/// World with uniform patches built by hand; no agents.
World flatWorld(int r, double capacity, double energy, std::uint64_t seed = 1) {
    Config c = smallConfig(r);
    c.initialAgents = 0;
    World w(c, seed);
    for (int y = 0; y < c.side(); ++y)
        for (int x = 0; x < c.side(); ++x)
            w.patches().push_back(Patch{{x, y}, capacity, Plantoid{Chromosome::fromDigits("01", 4), energy}});
    return w;
}

MAgent agentAt(World& w, Coord at, double energy) {
    auto a = makeAgent(w.takeId(), TagPair{Chromosome::fromDigits("0", 4), Chromosome::fromDigits("1", 4)},
                       CognitiveType::Cog0, 10, at);
    a.energy = energy;
    return a;
}

}  // namespace

TEST(InitWorld, PatchesStartFull) {
    Config c = smallConfig(3);
    const World w = initWorld(c, 99);
    ASSERT_EQ(w.patchCount(), 49u);
    for (const auto& p : w.patches()) {
        EXPECT_GE(p.capacity, 1);
        EXPECT_LE(p.capacity, 10);
        EXPECT_EQ(p.capacity, std::floor(p.capacity));
        EXPECT_DOUBLE_EQ(p.plantoid.energy, p.capacity);
        EXPECT_GE(p.plantoid.chromosome.length(), 1u);
        EXPECT_LE(p.plantoid.chromosome.length(), static_cast<std::size_t>(c.maxGen));
    }
    ASSERT_EQ(w.agents().size(), 4u);
    EXPECT_EQ(w.agents()[0].cogType, CognitiveType::Cog0);
    EXPECT_EQ(w.agents()[3].cogType, CognitiveType::Cog1);
    for (const auto& a : w.agents()) {
        EXPECT_TRUE(w.valid(a.position));
        EXPECT_DOUBLE_EQ(a.energy, a.capacity);
    }
}

TEST(InitWorld, DeterministicPerSeed) {
    const Config c = smallConfig(4);
    const World a = initWorld(c, 5), b = initWorld(c, 5), other = initWorld(c, 6);
    bool differs = false;
    for (std::size_t i = 0; i < a.patchCount(); ++i) {
        ASSERT_EQ(a.patches()[i].capacity, b.patches()[i].capacity);
        ASSERT_EQ(a.patches()[i].plantoid.chromosome, b.patches()[i].plantoid.chromosome);
        differs |= !(a.patches()[i].plantoid.chromosome == other.patches()[i].plantoid.chromosome);
    }
    EXPECT_TRUE(differs);
}

TEST(Torus, WrapAndNeighbors) {
    World w = flatWorld(2, 5, 5);
    const int n = w.side();
    Coord c{0, 0};
    for (int i = 0; i < n; ++i) c = w.offset(c, {1, 0});
    EXPECT_EQ(c, (Coord{0, 0}));
    for (int i = 0; i < n; ++i) c = w.offset(c, {-1, -1});
    EXPECT_EQ(c, (Coord{0, 0}));

    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            std::set<std::size_t> seen;
            for (const Coord& nb : w.mooreNeighbors({x, y})) {
                ASSERT_TRUE(w.valid(nb));
                seen.insert(w.index(nb));
            }
            ASSERT_EQ(seen.size(), 8u);
            ASSERT_EQ(seen.count(w.index({x, y})), 0u);
        }
}

TEST(Replenish, CapsAtCapacity) {
    World w = flatWorld(1, 10, 3);
    w.patches()[1].plantoid.energy = 10;
    w.patches()[2].plantoid.energy = 9.5;
    const double added = replenish(w, 2);
    EXPECT_DOUBLE_EQ(w.patches()[0].plantoid.energy, 5);
    EXPECT_DOUBLE_EQ(w.patches()[1].plantoid.energy, 10);
    EXPECT_DOUBLE_EQ(w.patches()[2].plantoid.energy, 10);
    EXPECT_DOUBLE_EQ(added, 2 * 7 + 0 + 0.5);
}

TEST(Poison, KillsAtOrBelowZero) {
    World w = flatWorld(1, 10, 3);
    w.agents().push_back(agentAt(w, {0, 0}, 1));
    w.agents().push_back(agentAt(w, {1, 1}, 5));
    w.agents().push_back(agentAt(w, {2, 2}, 0.25));
    const auto r = poisonRelease(w);
    EXPECT_EQ(r.killed, 2);
    ASSERT_EQ(w.agents().size(), 1u);
    EXPECT_DOUBLE_EQ(w.agents()[0].energy, 4);
    EXPECT_DOUBLE_EQ(r.unitsApplied, 3);
    EXPECT_DOUBLE_EQ(r.deathResidual, -0.75);
    EXPECT_DOUBLE_EQ(r.energyRemoved(), 6.25 - 4);
}

TEST(BestNeighborPatch, NoneWhenCenterIsBest) {
    World w = flatWorld(2, 10, 4);
    EXPECT_FALSE(bestNeighborPatch(w, {2, 2}).has_value());
    w.patch({2, 2}).plantoid.energy = 9;
    w.patch({3, 3}).plantoid.energy = 8;
    EXPECT_FALSE(bestNeighborPatch(w, {2, 2}).has_value());
}

TEST(BestNeighborPatch, UniqueBestConsumesNoDraw) {
    World w = flatWorld(2, 10, 4);
    w.patch({1, 2}).plantoid.energy = 7;
    w.patch({3, 1}).plantoid.energy = 6;
    const Rng before = w.rng();
    EXPECT_EQ(bestNeighborPatch(w, {2, 2}), (Coord{1, 2}));
    EXPECT_TRUE(w.rng() == before);
}

TEST(BestNeighborPatch, TiesAreBrokenUniformly) {
    World w = flatWorld(2, 10, 4);
    w.patch({1, 1}).plantoid.energy = 9;
    w.patch({3, 3}).plantoid.energy = 9;
    int first = 0;
    constexpr int kTrials = 10000;
    for (int i = 0; i < kTrials; ++i) {
        const auto c = bestNeighborPatch(w, {2, 2});
        ASSERT_TRUE(c.has_value());
        ASSERT_TRUE(*c == (Coord{1, 1}) || *c == (Coord{3, 3}));
        first += *c == (Coord{1, 1});
    }
    // 4.5 standard deviations of a fair binomial.
    EXPECT_NEAR(first / double(kTrials), 0.5, 0.0225);
}

TEST(PlantoidCompetition, ReplacesNeighborBelowHalf) {
    World w = flatWorld(1, 10, 10);
    w.patch({1, 1}).plantoid.chromosome = Chromosome::fromDigits("3333", 4);
    w.patch({0, 0}).plantoid.energy = 4.9;  // strictly below half of 10
    const auto r = plantoidCompetition(w, 0.0);
    EXPECT_GE(r.replications, 1);
    EXPECT_DOUBLE_EQ(w.patch({0, 0}).plantoid.energy, 10);
    EXPECT_DOUBLE_EQ(r.energyAdjustment, 10 - 4.9);
}

TEST(PlantoidCompetition, ExactlyHalfIsNotEligible) {
    World w = flatWorld(1, 10, 10);
    w.patch({0, 0}).plantoid.energy = 5;
    const auto r = plantoidCompetition(w, 0.0);
    EXPECT_EQ(r.replications, 0);
    EXPECT_DOUBLE_EQ(w.patch({0, 0}).plantoid.energy, 5);
}

TEST(PlantoidCompetition, HandTraceOnThreeByThree) {
    // Every patch is a Moore neighbor of every other on a 3x3 torus. One
    // full patch and eight empty ones: the full patch's replica lands on
    // one empty patch, which then is full too, and so on until all
    // remaining parents with energy find a victim.
    World w = flatWorld(1, 6, 0);
    w.patch({1, 1}).plantoid = Plantoid{Chromosome::fromDigits("21", 4), 6};
    const auto r = plantoidCompetition(w, 0.0);
    int full = 0;
    for (const auto& p : w.patches()) {
        if (p.plantoid.energy == 6) {
            ++full;
            EXPECT_EQ(p.plantoid.chromosome, Chromosome::fromDigits("21", 4));
        } else {
            EXPECT_EQ(p.plantoid.energy, 0);
        }
    }
    EXPECT_EQ(full, 1 + r.replications);
    EXPECT_GE(r.replications, 1);
    EXPECT_DOUBLE_EQ(r.energyAdjustment, 6.0 * r.replications);
}

TEST(PlantoidCompetition, PlantoidCountIsConstant) {
    World w = initWorld(smallConfig(3), 21);
    for (int t = 0; t < 50; ++t) {
        for (auto& p : w.patches()) p.plantoid.energy *= w.rng().uniform01();
        plantoidCompetition(w, 0.5);
        ASSERT_EQ(w.patchCount(), 49u);
        for (const auto& p : w.patches()) ASSERT_LE(p.plantoid.energy, p.capacity);
    }
}
