#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "echo/agents.hpp"
#include "echo/config.hpp"
#include "echo/genome.hpp"
#include "echo/world.hpp"

namespace echo {

/// Energy flows of one tick. Both pools reconcile exactly:
///   plantoidEnd = plantoidStart + replenished - withdrawn + replicaAdjustment
///   agentEnd    = agentStart + withdrawn - moveCost - conflictOverflow
///                 - poisonLoss - deathResidual
/// deathResidual is the (non-positive) energy an agent holds when it dies.
struct EnergyLedger {
    double plantoidStart = 0;
    double replenished = 0;
    double withdrawn = 0;
    double replicaAdjustment = 0;
    double plantoidEnd = 0;

    double agentStart = 0;
    double moveCost = 0;
    double conflictOverflow = 0;
    double poisonLoss = 0;
    double deathResidual = 0;
    double agentEnd = 0;

    double plantoidImbalance() const {
        return plantoidEnd - (plantoidStart + replenished - withdrawn + replicaAdjustment);
    }
    double agentImbalance() const {
        return agentEnd - (agentStart + withdrawn - moveCost - conflictOverflow - poisonLoss - deathResidual);
    }
};

struct TickReport {
    std::int64_t tick = 0;
    int cog0Count = 0;
    int cog1Count = 0;
    double plantoidEnergyTotal = 0;
    double agentEnergyTotal = 0;
    int births = 0;
    int deaths = 0;
    int conflicts = 0;
    int avoidedConflicts = 0;
    int plantoidReplications = 0;
    EnergyLedger ledger;
};

struct ConflictOutcome {
    double tij = 0;  // predator -> prey
    double tji = 0;  // prey -> predator
    double predatorNewEnergy = 0;
    double preyNewEnergy = 0;
    double overflow = 0;  // discarded above capacity, both parties
    bool predatorDied = false;
    bool preyDied = false;
};

/// Bits in MAgent::phaseFlags; each may be set at most once per tick.
enum PhaseFlag : std::uint8_t {
    kFed = 1 << 0,
    kDeliberationMove = 1 << 1,
    kPredated = 1 << 2,
    kReplicated = 1 << 3,
    kRoundMove = 1 << 4,
};

namespace detail {

inline void markPhase(MAgent& a, PhaseFlag f) {
    if (a.phaseFlags & f) throw ContractViolation("agent acted twice in one phase");
    a.phaseFlags |= f;
}

inline void killIfEmpty(MAgent& a, EnergyLedger& ledger, int& deaths) {
    if (a.alive && a.energy <= 0) {
        a.alive = false;
        ledger.deathResidual += a.energy;
        ++deaths;
    }
}

/// Indices of living agents in shuffled order.
inline std::vector<std::size_t> shuffledLiving(World& w) {
    std::vector<std::size_t> order;
    order.reserve(w.agents().size());
    for (std::size_t i = 0; i < w.agents().size(); ++i)
        if (w.agents()[i].alive) order.push_back(i);
    w.rng().shuffle(std::span(order));
    return order;
}

/// Living agents bucketed by patch, each bucket in agent-vector order.
struct Occupancy {
    std::vector<std::size_t> start;  // patchCount + 1 offsets
    std::vector<std::size_t> items;

    explicit Occupancy(const World& w) : start(w.patchCount() + 1, 0) {
        const auto& agents = w.agents();
        for (const auto& a : agents)
            if (a.alive) ++start[w.index(a.position) + 1];
        std::partial_sum(start.begin(), start.end(), start.begin());
        items.resize(start.back());
        std::vector<std::size_t> fill(start.begin(), start.end() - 1);
        for (std::size_t i = 0; i < agents.size(); ++i)
            if (agents[i].alive) items[fill[w.index(agents[i].position)]++] = i;
    }

    std::span<const std::size_t> at(std::size_t patch) const {
        return std::span(items).subspan(start[patch], start[patch + 1] - start[patch]);
    }
};

}  // namespace detail

/// Cog-1 agents deliberate (and possibly take one step toward greener
/// pastures); then every patch splits its plantoid's energy among the
/// agents on it in proportion to their feeding scores.
inline void feedingPhase(World& w, TickReport& report) {
    auto& agents = w.agents();
    for (std::size_t i : detail::shuffledLiving(w)) {
        MAgent& a = agents[i];
        if (!a.isCog1()) continue;
        evaluateInternalState(a);
        if (!mayStep(a.emotion->desireToFeed, a.capacity)) continue;
        if (auto target = bestNeighborPatch(w, a.position)) {
            detail::markPhase(a, kDeliberationMove);
            a.position = *target;
            a.energy -= 1.0;
            report.ledger.moveCost += 1.0;
            evaluateInternalState(a);
        }
    }

    const detail::Occupancy occ(w);
    std::vector<double> scores;
    for (std::size_t p = 0; p < w.patchCount(); ++p) {
        const auto here = occ.at(p);
        Plantoid& plantoid = w.patches()[p].plantoid;
        if (here.empty() || !(plantoid.energy > 0)) continue;
        scores.clear();
        double total = 0;
        for (std::size_t i : here) {
            scores.push_back(plantoidScore(agents[i].tags.offense, plantoid.chromosome));
            total += scores.back();
        }
        const double available = plantoid.energy;
        double taken = 0;
        for (std::size_t k = 0; k < here.size(); ++k) {
            MAgent& a = agents[here[k]];
            detail::markPhase(a, kFed);
            const double share = std::min(available * scores[k] / total, a.capacity - a.energy);
            a.energy += share;
            taken += share;
        }
        plantoid.energy = std::max(0.0, available - taken);
        report.ledger.withdrawn += taken;
    }
}

/// Applies the energy transfers of one confrontation. Transfers are
/// computed from the pre-conflict reservoirs.
inline ConflictOutcome resolveConflict(MAgent& predator, MAgent& prey) {
    if (!predator.alive || !prey.alive) throw ContractViolation("conflict requires two living agents");
    if (!(predator.position == prey.position)) throw ContractViolation("conflict requires co-located agents");
    const CombatScores s = combatScores(predator.tags, prey.tags);
    const double sum = s.predator + s.prey;
    ConflictOutcome out;
    out.tji = prey.energy * s.predator / sum;
    out.tij = predator.energy * s.prey / sum;

    const double predRaw = predator.energy + out.tji - out.tij;
    const double preyRaw = prey.energy + out.tij - out.tji;
    out.predatorNewEnergy = std::min(predRaw, predator.capacity);
    out.preyNewEnergy = std::min(preyRaw, prey.capacity);
    out.overflow = (predRaw - out.predatorNewEnergy) + (preyRaw - out.preyNewEnergy);
    predator.energy = out.predatorNewEnergy;
    prey.energy = out.preyNewEnergy;
    out.predatorDied = predator.energy <= 0;
    out.preyDied = prey.energy <= 0;

    if (prey.isCog1() && out.tij + out.tji > 0) {
        const FearDesire fd = preyFearDesire(out.tji, out.tij);
        prey.emotion->lastFear = fd.fear;
        prey.emotion->lastDesire = fd.desire;
        prey.display.kind = attackDecision(fd.fear, fd.desire) == Decision::Avoid ? DisplayKind::FearYellow
                                                                                 : DisplayKind::AttackRed;
    }
    return out;
}

/// Agents below capacity pick a random co-located prey. Cog-0 always
/// fight; cog-1 anticipate the transfers and attack only when they expect
/// to receive at least as much as they give.
inline void predationPhase(World& w, TickReport& report) {
    auto& agents = w.agents();
    const auto order = detail::shuffledLiving(w);
    const detail::Occupancy occ(w);
    std::vector<std::size_t> candidates;
    for (std::size_t i : order) {
        if (!agents[i].alive || !(agents[i].energy < agents[i].capacity)) continue;
        candidates.clear();
        for (std::size_t j : occ.at(w.index(agents[i].position)))
            if (j != i && agents[j].alive) candidates.push_back(j);
        if (candidates.empty()) continue;
        const std::size_t j =
            candidates.size() == 1 ? candidates[0] : candidates[w.rng().uniformIndex(candidates.size())];
        MAgent& predator = agents[i];
        MAgent& prey = agents[j];
        detail::markPhase(predator, kPredated);

        if (predator.isCog1()) {
            const CombatScores s = combatScores(predator.tags, prey.tags);
            const double sum = s.predator + s.prey;
            const double tji = prey.energy * s.predator / sum;
            const double tij = predator.energy * s.prey / sum;
            Decision d = Decision::Avoid;
            if (tij + tji > 0) {
                const FearDesire fd = predatorFearDesire(tij, tji);
                predator.emotion->lastFear = fd.fear;
                predator.emotion->lastDesire = fd.desire;
                d = attackDecision(fd.fear, fd.desire);
            }
            if (d == Decision::Avoid) {
                predator.display.kind = DisplayKind::FearYellow;
                ++report.avoidedConflicts;
                continue;
            }
            predator.display.kind = DisplayKind::AttackRed;
        }

        const ConflictOutcome out = resolveConflict(predator, prey);
        ++report.conflicts;
        report.ledger.conflictOverflow += out.overflow;
        detail::killIfEmpty(predator, report.ledger, report.deaths);
        detail::killIfEmpty(prey, report.ledger, report.deaths);
    }
}

/// Agents above their replication threshold replicate with probability
/// replicationP, splitting their energy evenly with the newborn.
inline void replicationPhase(World& w, TickReport& report) {
    const Config& cfg = w.config();
    const auto order = detail::shuffledLiving(w);
    std::vector<MAgent> newborns;
    for (std::size_t i : order) {
        MAgent& parent = w.agents()[i];
        if (!parent.alive || !(parent.energy > parent.replicationThreshold)) continue;
        if (parent.isCog1()) {
            parent.emotion->desireToReplicate = 1;
            parent.display = {DisplayKind::ReplicatePink, 0};
        }
        if (!w.rng().bernoulli(cfg.replicationP)) continue;
        detail::markPhase(parent, kReplicated);

        const Chromosome chain = mutateOnePoint(parent.tags.fullChain(), cfg.mutationP, w.rng());
        MAgent child = makeAgent(w.takeId(), TagPair::split(chain, parent.tags.offense.length()), parent.cogType,
                                 cfg.agentBaseReservoir, parent.position);
        const double half = parent.energy / 2;
        child.energy = parent.energy - half;
        parent.energy = half;
        if (parent.isCog1()) {
            parent.emotion->desireToReplicate = 0;
            evaluateInternalState(parent);
            evaluateInternalState(child);
        }
        newborns.push_back(std::move(child));
        ++report.births;
    }
    for (auto& c : newborns) w.agents().push_back(std::move(c));
}

/// End-of-round moves. Cog-0 step to a random neighbor regardless of
/// cost; cog-1 step toward greener pastures only with energy above one.
inline void movementPhase(World& w, TickReport& report) {
    auto& agents = w.agents();
    for (std::size_t i : detail::shuffledLiving(w)) {
        MAgent& a = agents[i];
        std::optional<Coord> target;
        if (a.isCog1()) {
            if (a.energy > 1.0) target = bestNeighborPatch(w, a.position);
        } else {
            target = w.offset(a.position, kMooreOffsets[w.rng().uniformIndex(kMooreOffsets.size())]);
        }
        if (!target) continue;
        detail::markPhase(a, kRoundMove);
        a.position = *target;
        a.energy -= 1.0;
        report.ledger.moveCost += 1.0;
        detail::killIfEmpty(a, report.ledger, report.deaths);
    }
    w.removeDead();
}

/// One full round: replenish, feed, predate, replicate, clear the dead,
/// poison, move, plantoid competition. Statistics are sampled at the end.
inline TickReport runTick(World& w) {
    const Config& cfg = w.config();
    TickReport report;
    EnergyLedger& ledger = report.ledger;
    for (auto& a : w.agents()) a.phaseFlags = 0;
    ledger.plantoidStart = w.plantoidEnergy();
    ledger.agentStart = w.agentEnergy();

    ledger.replenished = replenish(w, cfg.replenishRate);
    feedingPhase(w, report);
    predationPhase(w, report);
    replicationPhase(w, report);
    w.removeDead();

    const PoisonReport poison = poisonRelease(w);
    report.deaths += poison.killed;
    ledger.poisonLoss += poison.unitsApplied;
    ledger.deathResidual += poison.deathResidual;

    movementPhase(w, report);
    const CompetitionReport comp = plantoidCompetition(w, cfg.mutationP);
    ledger.replicaAdjustment = comp.energyAdjustment;
    report.plantoidReplications = comp.replications;
    w.advanceTick();

    report.tick = w.tick();
    for (const auto& a : w.agents()) (a.isCog1() ? report.cog1Count : report.cog0Count)++;
    report.plantoidEnergyTotal = ledger.plantoidEnd = w.plantoidEnergy();
    report.agentEnergyTotal = ledger.agentEnd = w.agentEnergy();
    return report;
}

enum class StopReason : std::uint8_t { NoAgents, Cog0Extinct, AllExtinct, MaxTicks };

inline const char* toString(StopReason r) {
    switch (r) {
        case StopReason::NoAgents: return "no-agents";
        case StopReason::Cog0Extinct: return "cog0-extinct";
        case StopReason::AllExtinct: return "all-extinct";
        case StopReason::MaxTicks: return "max-ticks";
    }
    return "unknown";
}

struct RunResult {
    Config config;
    std::uint64_t seed = 0;
    std::vector<TickReport> series;
    std::optional<std::int64_t> cog0ExtinctionTick;
    std::optional<std::int64_t> cog1ExtinctionTick;
    std::int64_t ticksRun = 0;
    StopReason stop = StopReason::MaxTicks;
    int finalCog0 = 0;
    int finalCog1 = 0;
    double finalPlantoidEnergy = 0;
};

/// Called after every tick; lets callers take snapshots mid-run.
using TickObserver = std::function<void(const World&, const TickReport&)>;

/// Runs until cog-0 extinction (when cog-0 were present), total
/// extinction, or cfg.maxTicks.
inline RunResult runSimulation(const Config& cfg, std::uint64_t seed, const TickObserver& observer = {}) {
    World w = initWorld(cfg, seed);
    RunResult res;
    res.config = cfg;
    res.seed = seed;
    res.finalPlantoidEnergy = w.plantoidEnergy();
    if (w.agents().empty()) {
        res.stop = StopReason::NoAgents;
        return res;
    }
    const bool trackCog0 = cfg.cog0Initial() > 0;
    const bool trackCog1 = cfg.cog1Initial() > 0;
    res.series.reserve(static_cast<std::size_t>(std::min<std::int64_t>(cfg.maxTicks, 1 << 16)));
    while (w.tick() < cfg.maxTicks) {
        const TickReport rep = runTick(w);
        res.series.push_back(rep);
        if (observer) observer(w, rep);
        if (trackCog1 && !res.cog1ExtinctionTick && rep.cog1Count == 0) res.cog1ExtinctionTick = rep.tick;
        if (trackCog0 && !res.cog0ExtinctionTick && rep.cog0Count == 0) res.cog0ExtinctionTick = rep.tick;
        if (rep.cog0Count + rep.cog1Count == 0) {
            res.stop = StopReason::AllExtinct;
            break;
        }
        if (res.cog0ExtinctionTick) {
            res.stop = StopReason::Cog0Extinct;
            break;
        }
    }
    res.ticksRun = w.tick();
    if (!res.series.empty()) {
        res.finalCog0 = res.series.back().cog0Count;
        res.finalCog1 = res.series.back().cog1Count;
        res.finalPlantoidEnergy = res.series.back().plantoidEnergyTotal;
    }
    return res;
}

}  // namespace echo
