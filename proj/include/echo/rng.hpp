#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace echo {

inline constexpr const char* kGeneratorName = "mt19937_64";
inline constexpr const char* kSeedMixerName = "splitmix64";

/// SplitMix64 finalizer. Used to derive well-separated seeds from
/// (base seed, index) pairs.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mixSeed(std::uint64_t base, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(base) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Run-owned random stream. Every draw is defined here (no std
/// distributions) so a given seed produces the same sequence with any
/// standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(splitmix64(seed)) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::size_t uniformIndex(std::size_t n) {
        const std::uint64_t bound = n;
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
        std::uint64_t x = engine_();
        while (x > limit) x = engine_();
        return static_cast<std::size_t>(x % bound);
    }

    /// Uniform integer in [lo, hi].
    std::int64_t uniformInt(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(uniformIndex(static_cast<std::size_t>(hi - lo + 1)));
    }

    /// Uniform real in [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform01() < p;
    }

    /// Fisher-Yates, last element first.
    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = uniformIndex(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    /// Derive an independent child stream.
    Rng split(std::uint64_t streamIndex) { return Rng(mixSeed(engine_(), streamIndex)); }

    friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace echo
