#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "echo/config.hpp"
#include "echo/engine.hpp"
#include "echo/rng.hpp"

namespace echo {

/// Descriptive statistics in summary column order, plus the quartiles
/// used for boxplots.
struct SummaryStats {
    std::size_t n = 0;
    double mean = 0;
    double ci95Low = 0;
    double ci95High = 0;
    double median = 0;
    double skewness = 0;          // g1 = m3 / m2^(3/2)
    double skewnessAdjusted = 0;  // G1 = g1 sqrt(n(n-1)) / (n-2)
    double min = 0;
    double max = 0;
    double stddev = 0;  // n-1 denominator
    double q1 = 0;
    double q3 = 0;
};

inline constexpr double kZ95 = 1.96;

/// Linear interpolation between order statistics (Hyndman-Fan type 7).
inline double quantileSorted(std::span<const double> sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline SummaryStats describe(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("describe: empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    SummaryStats s;
    s.n = sorted.size();
    const auto n = static_cast<double>(s.n);
    // Summed in sorted order.
    double sum = 0;
    for (double x : sorted) sum += x;
    s.mean = sum / n;

    double m2 = 0, m3 = 0;
    for (double x : sorted) {
        const double d = x - s.mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    s.stddev = s.n > 1 ? std::sqrt(m2 / (n - 1)) : 0.0;
    m2 /= n;
    m3 /= n;
    if (m2 > 0) {
        s.skewness = m3 / std::pow(m2, 1.5);
        if (s.n > 2) s.skewnessAdjusted = s.skewness * std::sqrt(n * (n - 1)) / (n - 2);
    }
    const double half = kZ95 * s.stddev / std::sqrt(n);
    s.ci95Low = s.mean - half;
    s.ci95High = s.mean + half;

    const std::size_t mid = s.n / 2;
    s.median = s.n % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = quantileSorted(sorted, 0.25);
    s.q3 = quantileSorted(sorted, 0.75);
    return s;
}

/// Runs `count` independent jobs on up to `jobs` threads. Results land at
/// their job index, so output never depends on the thread count.
template <typename Result, typename Fn>
std::vector<Result> parallelMap(std::size_t count, unsigned jobs, Fn&& fn) {
    std::vector<Result> out(count);
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failureMutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(failureMutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

inline unsigned defaultJobs() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Seed of run `index` in a batch started from `base`.
inline std::uint64_t runSeed(std::uint64_t base, std::uint64_t index) { return mixSeed(base, index); }

inline std::vector<std::uint64_t> batchSeeds(std::uint64_t base, std::size_t count) {
    std::vector<std::uint64_t> seeds(count);
    for (std::size_t i = 0; i < count; ++i) seeds[i] = runSeed(base, i);
    return seeds;
}

/// One row of the per-run CSV.
struct RunRow {
    std::size_t runIndex = 0;
    std::uint64_t seed = 0;
    std::optional<std::int64_t> cog0ExtinctionTick;
    std::optional<std::int64_t> cog1ExtinctionTick;
    std::int64_t ticksRun = 0;
    int finalCog0 = 0;
    int finalCog1 = 0;
    StopReason stop = StopReason::MaxTicks;
};

inline RunRow summarizeRun(std::size_t index, const RunResult& r) {
    return {index, r.seed, r.cog0ExtinctionTick, r.cog1ExtinctionTick, r.ticksRun, r.finalCog0, r.finalCog1, r.stop};
}

struct BatchResult {
    std::vector<RunRow> runs;
    std::vector<double> samples;  // cog-0 time to extinction, in run order
    std::size_t censored = 0;     // runs that hit maxTicks with cog-0 alive
    std::optional<SummaryStats> stats;
};

/// One simulation per seed; collects the cog-0 time to extinction.
inline BatchResult batchExtinction(const Config& cfg, std::span<const std::uint64_t> seeds,
                                   unsigned jobs = defaultJobs()) {
    cfg.validate();
    BatchResult b;
    b.runs = parallelMap<RunRow>(seeds.size(), jobs,
                                 [&](std::size_t i) { return summarizeRun(i, runSimulation(cfg, seeds[i])); });
    for (const auto& row : b.runs) {
        if (row.cog0ExtinctionTick)
            b.samples.push_back(static_cast<double>(*row.cog0ExtinctionTick));
        else if (row.finalCog0 > 0)
            ++b.censored;
    }
    if (!b.samples.empty()) b.stats = describe(b.samples);
    return b;
}

}  // namespace echo
