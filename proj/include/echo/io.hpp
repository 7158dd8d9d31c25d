#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "echo/agents.hpp"
#include "echo/engine.hpp"
#include "echo/rng.hpp"
#include "echo/stats.hpp"
#include "echo/world.hpp"

namespace echo {

/// Output could not be written. Maps to exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- csv

/// Minimal RFC 4180 writer: CRLF records, fields quoted only when needed.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    CsvWriter& field(std::string_view s) {
        sep();
        if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
            out_ << s;
        } else {
            out_ << '"';
            for (char c : s) {
                if (c == '"') out_ << '"';
                out_ << c;
            }
            out_ << '"';
        }
        return *this;
    }
    CsvWriter& field(double v) {
        sep();
        std::array<char, 32> buf;
        auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        out_ << std::string_view(buf.data(), static_cast<std::size_t>(end - buf.data()));
        return *this;
    }
    template <std::integral T>
    CsvWriter& field(T v) {
        sep();
        out_ << v;
        return *this;
    }
    template <typename T>
    CsvWriter& field(const std::optional<T>& v) {
        if (v) return field(*v);
        return field(std::string_view{});
    }
    CsvWriter& row(std::span<const std::string_view> names) {
        for (auto n : names) field(n);
        return end();
    }
    CsvWriter& end() {
        out_ << "\r\n";
        first_ = true;
        return *this;
    }

private:
    void sep() {
        if (!first_) out_ << ',';
        first_ = false;
    }
    std::ostream& out_;
    bool first_ = true;
};

/// Parses one RFC 4180 record set. Used by tests and by tooling that reads
/// our own outputs back.
inline std::vector<std::vector<std::string>> parseCsv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                cell.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(cell));
            cell.clear();
            any = true;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(std::move(cell));
            rows.push_back(std::move(row));
            row.clear();
            cell.clear();
            any = false;
        } else {
            cell.push_back(c);
            any = true;
        }
    }
    if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline constexpr std::array<std::string_view, 10> kTickColumns{
    "tick", "cog0", "cog1", "plantoid_energy", "agent_energy", "births", "deaths", "conflicts",
    "avoided_conflicts", "plantoid_replications"};

inline void writeTickCsv(std::ostream& out, std::span<const TickReport> series, std::size_t stride = 1) {
    CsvWriter csv(out);
    csv.row(kTickColumns);
    stride = std::max<std::size_t>(stride, 1);
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i % stride != 0 && i + 1 != series.size()) continue;
        const auto& t = series[i];
        csv.field(t.tick).field(t.cog0Count).field(t.cog1Count).field(t.plantoidEnergyTotal)
            .field(t.agentEnergyTotal).field(t.births).field(t.deaths).field(t.conflicts)
            .field(t.avoidedConflicts).field(t.plantoidReplications).end();
    }
}

inline constexpr std::array<std::string_view, 8> kRunColumns{
    "run_index", "seed", "cog0_extinction_tick", "cog1_extinction_tick",
    "ticks_run", "final_cog0", "final_cog1", "stop_reason"};

inline void writeRunsCsv(std::ostream& out, std::span<const RunRow> runs) {
    CsvWriter csv(out);
    csv.row(kRunColumns);
    for (const auto& r : runs)
        csv.field(r.runIndex).field(r.seed).field(r.cog0ExtinctionTick).field(r.cog1ExtinctionTick)
            .field(r.ticksRun).field(r.finalCog0).field(r.finalCog1).field(std::string_view(toString(r.stop))).end();
}

/// Summary column order: headline statistics first, then extras.
inline constexpr std::array<std::string_view, 17> kSummaryColumns{
    "lattice", "mean", "ci95_low", "ci95_high", "median", "skewness", "minimum", "maximum",
    "n", "censored", "skewness_adjusted", "stddev", "q1", "q3", "r", "max_gen", "plantoid_cap"};

inline void writeSummaryHeader(CsvWriter& csv) { csv.row(kSummaryColumns); }

inline void writeSummaryRow(CsvWriter& csv, const Config& cfg, const BatchResult& b) {
    const std::string lattice = std::to_string(cfg.side()) + "x" + std::to_string(cfg.side());
    csv.field(std::string_view(lattice));
    if (b.stats) {
        const auto& s = *b.stats;
        csv.field(s.mean).field(s.ci95Low).field(s.ci95High).field(s.median).field(s.skewness)
            .field(s.min).field(s.max).field(s.n);
    } else {
        for (int i = 0; i < 7; ++i) csv.field(std::string_view{});
        csv.field(std::size_t{0});
    }
    csv.field(b.censored);
    if (b.stats) {
        const auto& s = *b.stats;
        csv.field(s.skewnessAdjusted).field(s.stddev).field(s.q1).field(s.q3);
    } else {
        for (int i = 0; i < 4; ++i) csv.field(std::string_view{});
    }
    csv.field(cfg.r).field(cfg.maxGen).field(cfg.maxPlantoidCapacity).end();
}

// ---------------------------------------------------------------- ppm

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kFearYellow{255, 255, 0};
inline constexpr Rgb kAttackRed{255, 0, 0};
inline constexpr Rgb kReplicatePink{255, 105, 180};
inline constexpr Rgb kCog0Blue{0, 0, 255};

/// Gray ramp: paleness 0 is dark, the top level is near white.
constexpr Rgb paleGray(int paleness) noexcept {
    const int level = std::clamp(paleness, 0, kPalenessLevels - 1);
    const auto v = static_cast<std::uint8_t>(60 + level * (255 - 60) / (kPalenessLevels - 1));
    return {v, v, v};
}

constexpr Rgb displayColor(const MAgent& a) noexcept {
    if (!a.isCog1()) return kCog0Blue;
    switch (a.display.kind) {
        case DisplayKind::FearYellow: return kFearYellow;
        case DisplayKind::AttackRed: return kAttackRed;
        case DisplayKind::ReplicatePink: return kReplicatePink;
        case DisplayKind::Normal: break;
    }
    return paleGray(a.display.paleness);
}

/// One pixel per patch, row y = 0 first. Green encodes plantoid energy as
/// a fraction of patch capacity; occupied patches show the color of the
/// last living agent on them.
inline std::vector<Rgb> renderSnapshot(const World& w) {
    std::vector<Rgb> px(w.patchCount());
    for (std::size_t i = 0; i < px.size(); ++i) {
        const Patch& p = w.patches()[i];
        const double f = std::clamp(p.plantoid.energy / p.capacity, 0.0, 1.0);
        px[i] = {0, static_cast<std::uint8_t>(std::lround(255.0 * f)), 0};
    }
    for (const auto& a : w.agents())
        if (a.alive) px[w.index(a.position)] = displayColor(a);
    return px;
}

inline void writePpm(std::ostream& out, int width, int height, std::span<const Rgb> pixels) {
    out << "P6\n" << width << ' ' << height << "\n255\n";
    for (const Rgb& p : pixels) {
        const char bytes[3] = {static_cast<char>(p.r), static_cast<char>(p.g), static_cast<char>(p.b)};
        out.write(bytes, 3);
    }
}

inline void writeSnapshot(const std::filesystem::path& file, const World& w) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot open " + file.string());
    const auto px = renderSnapshot(w);
    writePpm(out, w.side(), w.side(), px);
    if (!out) throw IoError("write failed: " + file.string());
}

// ---------------------------------------------------------------- json

inline nlohmann::json metadataJson() {
    return {{"generator", kGeneratorName}, {"seed_mixer", kSeedMixerName}};
}

inline nlohmann::json toJson(const TickReport& t) {
    return {{"tick", t.tick},
            {"cog0", t.cog0Count},
            {"cog1", t.cog1Count},
            {"plantoid_energy", t.plantoidEnergyTotal},
            {"agent_energy", t.agentEnergyTotal},
            {"births", t.births},
            {"deaths", t.deaths},
            {"conflicts", t.conflicts},
            {"avoided_conflicts", t.avoidedConflicts},
            {"plantoid_replications", t.plantoidReplications}};
}

template <typename T>
nlohmann::json optionalJson(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

/// Config echo, seed, extinction times and the tick series sampled every
/// `stride` ticks (the last tick is always kept).
inline nlohmann::json toJson(const RunResult& r, std::size_t stride = 1) {
    stride = std::max<std::size_t>(stride, 1);
    nlohmann::json series = nlohmann::json::array();
    for (std::size_t i = 0; i < r.series.size(); ++i)
        if (i % stride == 0 || i + 1 == r.series.size()) series.push_back(toJson(r.series[i]));
    return {{"metadata", metadataJson()},
            {"config", r.config},
            {"seed", r.seed},
            {"stop_reason", toString(r.stop)},
            {"ticks_run", r.ticksRun},
            {"cog0_extinction_tick", optionalJson(r.cog0ExtinctionTick)},
            {"cog1_extinction_tick", optionalJson(r.cog1ExtinctionTick)},
            {"final", {{"cog0", r.finalCog0}, {"cog1", r.finalCog1}, {"plantoid_energy", r.finalPlantoidEnergy}}},
            {"series_stride", stride},
            {"series", std::move(series)}};
}

inline nlohmann::json toJson(const SummaryStats& s) {
    return {{"n", s.n},           {"mean", s.mean},     {"ci95_low", s.ci95Low},
            {"ci95_high", s.ci95High}, {"median", s.median}, {"skewness", s.skewness},
            {"skewness_adjusted", s.skewnessAdjusted}, {"minimum", s.min}, {"maximum", s.max},
            {"stddev", s.stddev}, {"q1", s.q1},          {"q3", s.q3}};
}

}  // namespace echo
