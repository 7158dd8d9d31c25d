#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "echo/agents.hpp"
#include "echo/config.hpp"
#include "echo/genome.hpp"
#include "echo/rng.hpp"

namespace echo {

struct Plantoid {
    Chromosome chromosome;
    double energy = 0;
};

struct Patch {
    Coord coord;
    double capacity = 1;
    Plantoid plantoid;
};

/// Moore offsets in scan order; neighbor lists always follow this order.
inline constexpr std::array<Coord, 8> kMooreOffsets{{
    {-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1},
}};

/// (2r+1) x (2r+1) torus of patches plus the m-agents living on it.
class World {
public:
    World(Config cfg, std::uint64_t seed) : cfg_(std::move(cfg)), rng_(seed) {}

    const Config& config() const noexcept { return cfg_; }
    int side() const noexcept { return cfg_.side(); }
    std::size_t patchCount() const noexcept { return patches_.size(); }

    std::size_t index(Coord c) const noexcept { return static_cast<std::size_t>(c.y * side() + c.x); }
    Coord wrap(Coord c) const noexcept {
        const int n = side();
        return {((c.x % n) + n) % n, ((c.y % n) + n) % n};
    }
    Coord offset(Coord c, Coord d) const noexcept { return wrap({c.x + d.x, c.y + d.y}); }
    bool valid(Coord c) const noexcept { return c.x >= 0 && c.y >= 0 && c.x < side() && c.y < side(); }

    std::array<Coord, 8> mooreNeighbors(Coord c) const noexcept {
        std::array<Coord, 8> out;
        for (std::size_t i = 0; i < 8; ++i) out[i] = offset(c, kMooreOffsets[i]);
        return out;
    }

    Patch& patch(Coord c) { return patches_[index(c)]; }
    const Patch& patch(Coord c) const { return patches_[index(c)]; }
    std::vector<Patch>& patches() noexcept { return patches_; }
    const std::vector<Patch>& patches() const noexcept { return patches_; }

    std::vector<MAgent>& agents() noexcept { return agents_; }
    const std::vector<MAgent>& agents() const noexcept { return agents_; }

    Rng& rng() noexcept { return rng_; }
    const Rng& rng() const noexcept { return rng_; }
    std::int64_t tick() const noexcept { return tick_; }
    void advanceTick() noexcept { ++tick_; }
    std::uint64_t takeId() noexcept { return nextId_++; }

    double plantoidEnergy() const {
        return std::accumulate(patches_.begin(), patches_.end(), 0.0,
                               [](double s, const Patch& p) { return s + p.plantoid.energy; });
    }
    double agentEnergy() const {
        double s = 0;
        for (const auto& a : agents_)
            if (a.alive) s += a.energy;
        return s;
    }

    /// Drops agents flagged dead. Order of survivors is preserved.
    std::size_t removeDead() {
        const auto before = agents_.size();
        std::erase_if(agents_, [](const MAgent& a) { return !a.alive; });
        return before - agents_.size();
    }

private:
    Config cfg_;
    std::vector<Patch> patches_;
    std::vector<MAgent> agents_;
    Rng rng_;
    std::int64_t tick_ = 0;
    std::uint64_t nextId_ = 1;
};

/// Draw order: per patch in row-major order (capacity, chromosome length,
/// letters); then cog-0 agents, then cog-1 agents, each as (offense
/// length, offense letters, defense length, defense letters, x, y).
inline World initWorld(const Config& cfg, std::uint64_t seed) {
    cfg.validate();
    World w(cfg, seed);
    Rng& rng = w.rng();
    const int n = cfg.side();
    const auto maxCap = static_cast<std::int64_t>(std::floor(cfg.maxPlantoidCapacity));
    w.patches().reserve(static_cast<std::size_t>(n * n));
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const auto cap = static_cast<double>(rng.uniformInt(1, maxCap));
            const auto len = static_cast<int>(rng.uniformInt(1, cfg.maxGen));
            Chromosome chrom = randomChromosome(len, cfg.alphabetSize, rng);
            w.patches().push_back(Patch{{x, y}, cap, Plantoid{std::move(chrom), cap}});
        }
    }
    auto spawn = [&](CognitiveType type) {
        const auto offLen = static_cast<int>(rng.uniformInt(1, cfg.maxGen));
        Chromosome off = randomChromosome(offLen, cfg.alphabetSize, rng);
        const auto defLen = static_cast<int>(rng.uniformInt(1, cfg.maxGen));
        Chromosome def = randomChromosome(defLen, cfg.alphabetSize, rng);
        const auto x = static_cast<int>(rng.uniformIndex(static_cast<std::size_t>(n)));
        const auto y = static_cast<int>(rng.uniformIndex(static_cast<std::size_t>(n)));
        MAgent a = makeAgent(w.takeId(), TagPair{std::move(off), std::move(def)}, type,
                             cfg.agentBaseReservoir, {x, y});
        if (a.isCog1()) {
            a.emotion->desireToReplicate = 0;
            evaluateInternalState(a);
        }
        w.agents().push_back(std::move(a));
    };
    for (int i = 0; i < cfg.cog0Initial(); ++i) spawn(CognitiveType::Cog0);
    for (int i = 0; i < cfg.cog1Initial(); ++i) spawn(CognitiveType::Cog1);
    return w;
}

/// Adds `rate` to every plantoid, capped at its patch capacity. Returns
/// the energy actually added.
inline double replenish(World& w, double rate) {
    double added = 0;
    for (auto& p : w.patches()) {
        const double next = std::min(p.plantoid.energy + rate, p.capacity);
        added += next - p.plantoid.energy;
        p.plantoid.energy = next;
    }
    return added;
}

struct PoisonReport {
    int killed = 0;
    double unitsApplied = 0;   // one per agent alive before the release
    double deathResidual = 0;  // sum of post-release energies of the killed (<= 0)
    /// Drop in living-agent energy: unitsApplied + deathResidual.
    double energyRemoved() const noexcept { return unitsApplied + deathResidual; }
};

/// Every living agent loses one unit; those at or below zero die and are
/// removed.
inline PoisonReport poisonRelease(World& w) {
    PoisonReport r;
    for (auto& a : w.agents()) {
        if (!a.alive) continue;
        a.energy -= 1.0;
        r.unitsApplied += 1.0;
        if (a.energy <= 0) {
            a.alive = false;
            ++r.killed;
            r.deathResidual += a.energy;
        }
    }
    w.removeDead();
    return r;
}

/// Neighbor whose plantoid holds strictly the most energy, if that beats
/// the plantoid at `c`. Ties are broken uniformly; no draw without a tie.
inline std::optional<Coord> bestNeighborPatch(World& w, Coord c) {
    const double here = w.patch(c).plantoid.energy;
    const auto neighbors = w.mooreNeighbors(c);
    double best = here;
    std::array<Coord, 8> ties;
    std::size_t nTies = 0;
    for (const Coord& nb : neighbors) {
        const double e = w.patch(nb).plantoid.energy;
        if (e > best) {
            best = e;
            nTies = 0;
            ties[nTies++] = nb;
        } else if (nTies > 0 && e == best) {
            ties[nTies++] = nb;
        }
    }
    if (nTies == 0) return std::nullopt;
    if (nTies == 1) return ties[0];
    return ties[w.rng().uniformIndex(nTies)];
}

struct CompetitionReport {
    int replications = 0;
    /// Sum of (replica energy - replaced plantoid energy).
    double energyAdjustment = 0;
};

/// Each plantoid, in shuffled order, replaces one neighbor holding less
/// than half its energy with a (possibly mutated) replica at full patch
/// capacity.
inline CompetitionReport plantoidCompetition(World& w, double mutationP) {
    CompetitionReport r;
    std::vector<std::size_t> order(w.patchCount());
    std::iota(order.begin(), order.end(), std::size_t{0});
    w.rng().shuffle(std::span(order));
    std::array<Coord, 8> eligible;
    for (std::size_t idx : order) {
        const Patch& parent = w.patches()[idx];
        const double threshold = 0.5 * parent.plantoid.energy;
        std::size_t nEligible = 0;
        for (const Coord& nb : w.mooreNeighbors(parent.coord))
            if (w.patch(nb).plantoid.energy < threshold) eligible[nEligible++] = nb;
        if (nEligible == 0) continue;
        const Coord target = nEligible == 1 ? eligible[0] : eligible[w.rng().uniformIndex(nEligible)];
        Chromosome child = mutateOnePoint(parent.plantoid.chromosome, mutationP, w.rng());
        Patch& dst = w.patch(target);
        r.energyAdjustment += dst.capacity - dst.plantoid.energy;
        dst.plantoid = Plantoid{std::move(child), dst.capacity};
        ++r.replications;
    }
    return r;
}

}  // namespace echo
