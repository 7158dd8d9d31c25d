#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>

#include "echo/error.hpp"
#include "echo/genome.hpp"

namespace echo {

enum class CognitiveType : std::uint8_t { Cog0, Cog1 };

enum class DisplayKind : std::uint8_t { Normal, FearYellow, AttackRed, ReplicatePink };

struct DisplayState {
    DisplayKind kind = DisplayKind::Normal;
    int paleness = 0;  // 0 (dark, sated) .. 9 (pale, starving); Normal only

    friend bool operator==(const DisplayState&, const DisplayState&) = default;
};

struct Coord {
    int x = 0;
    int y = 0;
    friend bool operator==(const Coord&, const Coord&) = default;
};

/// Emotional state carried by cog-1 agents only.
struct Emotion {
    double desireToFeed = 0;
    int desireToReplicate = 0;
    double lastFear = 0;    // most recent conflict, display/logging only
    double lastDesire = 0;
};

struct MAgent {
    std::uint64_t id = 0;
    TagPair tags;
    CognitiveType cogType = CognitiveType::Cog0;
    double energy = 0;
    double capacity = 0;
    int replicationThreshold = 0;
    Coord position;
    std::optional<Emotion> emotion;  // engaged iff cogType == Cog1
    DisplayState display;
    bool alive = true;
    std::uint8_t phaseFlags = 0;  // engine bookkeeping, reset every tick

    constexpr bool isCog1() const noexcept { return cogType == CognitiveType::Cog1; }
};

/// Builds an agent at full reservoir. Capacity is the base reservoir plus
/// the chain length; the replication threshold is the chain length.
inline MAgent makeAgent(std::uint64_t id, TagPair tags, CognitiveType type, double baseReservoir, Coord at) {
    const auto chain = static_cast<int>(tags.totalLength());
    const double capacity = baseReservoir + chain;
    return MAgent{.id = id,
                  .tags = std::move(tags),
                  .cogType = type,
                  .energy = capacity,
                  .capacity = capacity,
                  .replicationThreshold = chain,
                  .position = at,
                  .emotion = type == CognitiveType::Cog1 ? std::optional<Emotion>(Emotion{}) : std::nullopt,
                  .display = {},
                  .alive = true,
                  .phaseFlags = 0};
}

/// Proportion of the reservoir that is empty: D = 1 - R/Rc.
inline double desireToFeed(double energy, double capacity) {
    if (!(capacity > 0)) throw ContractViolation("reservoir capacity must be positive");
    return 1.0 - energy / capacity;
}

inline constexpr int kPalenessLevels = 10;

constexpr int palenessLevel(double desire) noexcept {
    const int level = static_cast<int>(desire * kPalenessLevels);
    return std::clamp(level, 0, kPalenessLevels - 1);
}

/// Relative slack on the step gate; one unit exactly never steps.
inline constexpr double kStepTolerance = 1e-12;

/// A step costs one unit; it is allowed only if the reconstructed energy
/// (1 - D) Rc leaves something after paying for it.
inline bool mayStep(double desire, double capacity) {
    return (1.0 - desire) * capacity - 1.0 > kStepTolerance * std::max(1.0, capacity);
}

struct FearDesire {
    double fear = 0;
    double desire = 0;
};

/// Predator view: fear of what it gives away (tij), desire for what it takes (tji).
inline FearDesire predatorFearDesire(double tij, double tji) {
    const double total = tij + tji;
    if (!(total > 0)) throw DegenerateConflict();
    return {tij / total, tji / total};
}

/// Prey view of the same conflict: fear of losing tji, desire for tij.
inline FearDesire preyFearDesire(double tji, double tij) {
    const double total = tij + tji;
    if (!(total > 0)) throw DegenerateConflict();
    return {tji / total, tij / total};
}

enum class Decision : std::uint8_t { Attack, Avoid };

constexpr Decision attackDecision(double fear, double desire) noexcept {
    return fear > desire ? Decision::Avoid : Decision::Attack;
}

/// Recomputes the desire to feed and the paleness display. Cog-1 only.
inline void evaluateInternalState(MAgent& agent) {
    if (!agent.emotion) throw ContractViolation("internal state evaluation requires a cog-1 agent");
    agent.emotion->desireToFeed = desireToFeed(agent.energy, agent.capacity);
    if (agent.emotion->desireToReplicate == 1)
        agent.display = {DisplayKind::ReplicatePink, 0};
    else
        agent.display = {DisplayKind::Normal, palenessLevel(agent.emotion->desireToFeed)};
}

}  // namespace echo
