#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "echo/error.hpp"
#include "echo/rng.hpp"

namespace echo {

using Letter = std::uint8_t;

/// A word over an n-letter formal alphabet. Letters are stored as indices
/// in [0, alphabetSize).
class Chromosome {
public:
    Chromosome(std::vector<Letter> letters, int alphabetSize)
        : letters_(std::move(letters)), alphabetSize_(alphabetSize) {
        if (alphabetSize_ < 2 || alphabetSize_ > 256)
            throw ConfigError("alphabet", "alphabet size must be in [2, 256]");
        if (letters_.empty()) throw ConfigError("length", "chromosome length must be >= 1");
        for (Letter l : letters_)
            if (l >= alphabetSize_) throw ContractViolation("letter outside alphabet");
    }

    /// "0110" style construction, one decimal digit per letter.
    static Chromosome fromDigits(std::string_view digits, int alphabetSize) {
        std::vector<Letter> letters;
        letters.reserve(digits.size());
        for (char c : digits) letters.push_back(static_cast<Letter>(c - '0'));
        return Chromosome(std::move(letters), alphabetSize);
    }

    std::size_t length() const noexcept { return letters_.size(); }
    int alphabetSize() const noexcept { return alphabetSize_; }
    std::span<const Letter> letters() const noexcept { return letters_; }
    Letter operator[](std::size_t i) const { return letters_[i]; }

    /// Display form over {a, b, c, ...}.
    std::string toString() const {
        std::string s;
        s.reserve(letters_.size());
        for (Letter l : letters_) s.push_back(static_cast<char>('a' + l));
        return s;
    }

    friend bool operator==(const Chromosome&, const Chromosome&) = default;

private:
    std::vector<Letter> letters_;
    int alphabetSize_;
};

/// Offense and defense tags of an m-agent. The full chain is offense
/// followed by defense.
struct TagPair {
    Chromosome offense;
    Chromosome defense;

    std::size_t totalLength() const noexcept { return offense.length() + defense.length(); }

    Chromosome fullChain() const {
        std::vector<Letter> all(offense.letters().begin(), offense.letters().end());
        all.insert(all.end(), defense.letters().begin(), defense.letters().end());
        return Chromosome(std::move(all), offense.alphabetSize());
    }

    /// Splits a full chain back into tags at `offenseLength`.
    static TagPair split(const Chromosome& chain, std::size_t offenseLength) {
        auto l = chain.letters();
        if (offenseLength == 0 || offenseLength >= l.size())
            throw ContractViolation("tag split point must leave both tags non-empty");
        return {Chromosome({l.begin(), l.begin() + static_cast<std::ptrdiff_t>(offenseLength)},
                           chain.alphabetSize()),
                Chromosome({l.begin() + static_cast<std::ptrdiff_t>(offenseLength), l.end()},
                           chain.alphabetSize())};
    }

    friend bool operator==(const TagPair&, const TagPair&) = default;
};

struct MatchResult {
    int nPlus = 0;
    int nMinus = 0;

    int compared() const noexcept { return nPlus + nMinus; }
    friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

inline Chromosome randomChromosome(int length, int alphabetSize, Rng& rng) {
    if (length < 1) throw ConfigError("length", "chromosome length must be >= 1");
    if (alphabetSize < 2) throw ConfigError("alphabet", "alphabet size must be >= 2");
    std::vector<Letter> letters(static_cast<std::size_t>(length));
    for (auto& l : letters) l = static_cast<Letter>(rng.uniformIndex(static_cast<std::size_t>(alphabetSize)));
    return Chromosome(std::move(letters), alphabetSize);
}

/// With probability p, one uniformly chosen position is replaced by a
/// different letter. No draw beyond the Bernoulli trial when p == 0.
inline Chromosome mutateOnePoint(const Chromosome& c, double p, Rng& rng) {
    if (p <= 0.0 || !rng.bernoulli(p)) return c;
    std::vector<Letter> letters(c.letters().begin(), c.letters().end());
    const std::size_t pos = rng.uniformIndex(letters.size());
    // Draw from the n-1 other letters and skip over the current one.
    auto replacement = static_cast<Letter>(rng.uniformIndex(static_cast<std::size_t>(c.alphabetSize() - 1)));
    if (replacement >= letters[pos]) ++replacement;
    letters[pos] = replacement;
    return Chromosome(std::move(letters), c.alphabetSize());
}

inline MatchResult matchPrefix(const Chromosome& a, const Chromosome& b) {
    const std::size_t k = std::min(a.length(), b.length());
    MatchResult m;
    for (std::size_t i = 0; i < k; ++i) {
        if (a[i] == b[i])
            ++m.nPlus;
        else
            ++m.nMinus;
    }
    return m;
}

/// The bracketed interface term 0.5 (n+ - n- + k) + 1.
constexpr double interfaceTerm(const MatchResult& m, std::size_t k) noexcept {
    return 0.5 * (m.nPlus - m.nMinus + static_cast<double>(k)) + 1.0;
}

/// Feeding score of an offense tag against a plantoid chromosome. The
/// first k = min length letters are compared; a tag shorter than the
/// chromosome has its score halved.
inline double plantoidScore(const Chromosome& offense, const Chromosome& plantoid) {
    const std::size_t k = std::min(offense.length(), plantoid.length());
    const double raw = interfaceTerm(matchPrefix(offense, plantoid), k);
    return offense.length() >= plantoid.length() ? raw : 0.5 * raw;
}

struct CombatScores {
    double predator = 0;     // attack score: predator offense vs prey defense
    double prey = 0;         // counterattack score: prey offense vs predator defense
    double predatorRaw = 0;  // bracketed terms before the length penalty
    double preyRaw = 0;
};

/// Attack and counterattack scores. k is the longer tag length in each
/// comparison. Equal lengths favor the predator: its attack is unpenalized
/// and the prey's counterattack is halved unless strictly longer.
inline CombatScores combatScores(const Chromosome& predOffense, const Chromosome& predDefense,
                                 const Chromosome& preyOffense, const Chromosome& preyDefense) {
    CombatScores s;
    const std::size_t kij = std::max(predOffense.length(), preyDefense.length());
    s.predatorRaw = interfaceTerm(matchPrefix(predOffense, preyDefense), kij);
    s.predator = s.predatorRaw * (predOffense.length() < preyDefense.length() ? 0.5 : 1.0);

    const std::size_t kji = std::max(preyOffense.length(), predDefense.length());
    s.preyRaw = interfaceTerm(matchPrefix(preyOffense, predDefense), kji);
    s.prey = s.preyRaw * (preyOffense.length() > predDefense.length() ? 1.0 : 0.5);
    return s;
}

inline CombatScores combatScores(const TagPair& predator, const TagPair& prey) {
    return combatScores(predator.offense, predator.defense, prey.offense, prey.defense);
}

}  // namespace echo
