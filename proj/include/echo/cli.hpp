#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "echo/config.hpp"
#include "echo/engine.hpp"
#include "echo/error.hpp"
#include "echo/io.hpp"
#include "echo/stats.hpp"

namespace echo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

struct Options {
    std::string command;  // run | batch | sweep
    Config config;
    unsigned jobs = defaultJobs();
    std::int64_t snapshotEvery = 0;
    bool tickCsv = false;
    std::size_t seriesStride = 1;
    std::filesystem::path out = "out";
    std::vector<int> sweepR;
    std::vector<int> sweepMaxGen;
    std::vector<double> sweepPlantoidCap;
    std::optional<std::string> helpText;  // set when --help was requested
};

namespace detail {

/// Flag values as given; unset flags leave the file/default value alone.
struct FlagValues {
    std::optional<std::string> configFile;
    std::optional<int> r, alphabet, maxGen, agents, replicates;
    std::optional<double> plantoidCap, agentBase, mutationP, replenish, replicationP;
    std::optional<std::int64_t> maxTicks;
    std::optional<std::uint64_t> seed;
    bool cog1Only = false, cog0Only = false;
};

inline void addModelFlags(CLI::App& app, FlagValues& v, Options& o) {
    app.add_option("--config", v.configFile, "JSON file with config values (flags override it)");
    app.add_option("--r", v.r, "lattice radius; the torus is (2r+1)x(2r+1)");
    app.add_option("--alphabet", v.alphabet, "formal alphabet size");
    app.add_option("--max-gen", v.maxGen, "maximum chromosome length");
    app.add_option("--plantoid-cap", v.plantoidCap, "maximum plantoid reservoir capacity");
    app.add_option("--agent-base", v.agentBase, "base m-agent reservoir capacity");
    app.add_option("--mutation-p", v.mutationP, "one-point mutation probability");
    app.add_option("--replenish", v.replenish, "plantoid replenishment rate per tick");
    app.add_option("--replication-p", v.replicationP, "m-agent replication probability");
    app.add_option("--agents", v.agents, "initial number of m-agents");
    app.add_flag("--cog1-only", v.cog1Only, "all initial agents are cog-1");
    app.add_flag("--cog0-only", v.cog0Only, "all initial agents are cog-0");
    app.add_option("--max-ticks", v.maxTicks, "tick limit per run");
    app.add_option("--seed", v.seed, "base seed");
    app.add_option("--replicates", v.replicates, "runs per batch or sweep cell");
    app.add_option("--jobs", o.jobs, "worker threads");
    app.add_option("--out", o.out, "output root; results go to <out>/<timestamp>/");
}

inline Config loadConfigFile(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("config", "cannot read " + file.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", e.what());
    }
    Config c;
    from_json(j, c);
    return c;
}

template <typename T, typename U>
void overlay(T& target, const std::optional<U>& value) {
    if (value) target = *value;
}

}  // namespace detail

/// Parses `args` (without the program name). Precedence: flags, then the
/// --config file, then built-in defaults. Throws ConfigError on any
/// invalid or out-of-range value.
inline Options parseArgs(const std::vector<std::string>& args) {
    Options o;
    detail::FlagValues v;
    CLI::App app{"Echo-style artificial life world with cog-0 and cog-1 agents", "echo_sim"};
    app.require_subcommand(1, 1);
    CLI::App* run = app.add_subcommand("run", "single simulation");
    CLI::App* batch = app.add_subcommand("batch", "replicated runs with cog-0 extinction statistics");
    CLI::App* sweep = app.add_subcommand("sweep", "cartesian sweep over r, max-gen and plantoid-cap");
    for (CLI::App* sub : {run, batch, sweep}) detail::addModelFlags(*sub, v, o);
    run->add_option("--snapshot-every", o.snapshotEvery, "write a PPM snapshot every k ticks (0 = off)");
    run->add_flag("--tick-csv", o.tickCsv, "write the per-tick series as ticks.csv");
    run->add_option("--series-stride", o.seriesStride, "tick stride of the series in run.json");
    sweep->add_option("--sweep-r", o.sweepR, "comma-separated r values")->delimiter(',');
    sweep->add_option("--sweep-max-gen", o.sweepMaxGen, "comma-separated max-gen values")->delimiter(',');
    sweep->add_option("--sweep-plantoid-cap", o.sweepPlantoidCap, "comma-separated plantoid-cap values")
        ->delimiter(',');

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        std::ostringstream text;
        app.exit(e, text, text);
        o.helpText = text.str();
        return o;
    } catch (const CLI::ParseError& e) {
        throw ConfigError("args", e.what());
    }
    for (CLI::App* sub : {run, batch, sweep})
        if (sub->parsed()) o.command = sub->get_name();

    Config c = v.configFile ? detail::loadConfigFile(*v.configFile) : Config{};
    detail::overlay(c.r, v.r);
    detail::overlay(c.alphabetSize, v.alphabet);
    detail::overlay(c.maxGen, v.maxGen);
    detail::overlay(c.maxPlantoidCapacity, v.plantoidCap);
    detail::overlay(c.agentBaseReservoir, v.agentBase);
    detail::overlay(c.mutationP, v.mutationP);
    detail::overlay(c.replenishRate, v.replenish);
    detail::overlay(c.replicationP, v.replicationP);
    detail::overlay(c.initialAgents, v.agents);
    detail::overlay(c.maxTicks, v.maxTicks);
    detail::overlay(c.seed, v.seed);
    detail::overlay(c.replicates, v.replicates);
    if (v.cog1Only) c.cog1Only = true;
    if (v.cog0Only) c.cog0Only = true;
    c.validate();

    if (o.jobs < 1) throw ConfigError("jobs", "must be >= 1");
    if (o.snapshotEvery < 0) throw ConfigError("snapshot-every", "must be >= 0");
    if (o.seriesStride < 1) throw ConfigError("series-stride", "must be >= 1");
    for (int r : o.sweepR)
        if (r < 1) throw ConfigError("sweep-r", "values must be >= 1");
    for (int g : o.sweepMaxGen)
        if (g < 1) throw ConfigError("sweep-max-gen", "values must be >= 1");
    for (double cap : o.sweepPlantoidCap)
        if (!(cap >= 1)) throw ConfigError("sweep-plantoid-cap", "values must be >= 1");
    o.config = c;
    return o;
}

/// Creates <root>/<YYYYmmdd-HHMMSS>[-k]/ and returns it.
inline std::filesystem::path makeRunDirectory(const std::filesystem::path& root) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    localtime_r(&now, &tm);
    std::ostringstream stamp;
    stamp << std::put_time(&tm, "%Y%m%d-%H%M%S");
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) throw IoError("cannot create " + root.string() + ": " + ec.message());
    for (int k = 0;; ++k) {
        auto dir = root / (k == 0 ? stamp.str() : stamp.str() + "-" + std::to_string(k));
        if (std::filesystem::create_directory(dir, ec)) return dir;
        if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
}

inline std::ofstream openOutput(const std::filesystem::path& file, bool binary = false) {
    std::ofstream out(file, binary ? std::ios::binary : std::ios::out);
    if (!out) throw IoError("cannot open " + file.string());
    return out;
}

inline void writeJsonFile(const std::filesystem::path& file, const nlohmann::json& j) {
    auto out = openOutput(file);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + file.string());
}

inline nlohmann::json configEcho(const Options& o) {
    nlohmann::json j = {{"command", o.command}, {"config", o.config}, {"metadata", metadataJson()}, {"jobs", o.jobs}};
    if (o.command == "sweep")
        j["sweep"] = {{"r", o.sweepR}, {"max-gen", o.sweepMaxGen}, {"plantoid-cap", o.sweepPlantoidCap}};
    return j;
}

inline int cmdRun(const Options& o, std::ostream& log) {
    const auto dir = makeRunDirectory(o.out);
    writeJsonFile(dir / "config.json", configEcho(o));
    const std::uint64_t seed = o.config.seed;
    std::filesystem::path snapDir;
    if (o.snapshotEvery > 0) {
        snapDir = dir / "snapshots";
        std::filesystem::create_directories(snapDir);
    }
    auto snapName = [&](std::int64_t tick) {
        std::ostringstream s;
        s << "tick_" << std::setw(6) << std::setfill('0') << tick << ".ppm";
        return snapDir / s.str();
    };
    if (o.snapshotEvery > 0) writeSnapshot(snapName(0), initWorld(o.config, seed));
    TickObserver observer;
    if (o.snapshotEvery > 0)
        observer = [&](const World& w, const TickReport& t) {
            if (t.tick % o.snapshotEvery == 0) writeSnapshot(snapName(t.tick), w);
        };
    const RunResult r = runSimulation(o.config, seed, observer);

    writeJsonFile(dir / "run.json", toJson(r, o.seriesStride));
    {
        auto out = openOutput(dir / "runs.csv");
        const RunRow row = summarizeRun(0, r);
        writeRunsCsv(out, std::span(&row, 1));
    }
    if (o.tickCsv) {
        auto out = openOutput(dir / "ticks.csv");
        writeTickCsv(out, r.series);
    }
    log << "stop: " << toString(r.stop) << " after " << r.ticksRun << " ticks; cog0 " << r.finalCog0 << ", cog1 "
        << r.finalCog1 << "\n"
        << "output: " << dir.string() << "\n";
    return kExitOk;
}

inline void printSummary(std::ostream& log, const Config& c, const BatchResult& b) {
    log << c.side() << "x" << c.side() << " max-gen " << c.maxGen << " plantoid-cap " << c.maxPlantoidCapacity << ": ";
    if (b.stats)
        log << "n " << b.stats->n << " mean " << b.stats->mean << " [" << b.stats->ci95Low << ", " << b.stats->ci95High
            << "] median " << b.stats->median << " skew " << b.stats->skewness << " min " << b.stats->min << " max "
            << b.stats->max;
    else
        log << "no extinctions";
    log << " censored " << b.censored << "\n";
}

inline int cmdBatch(const Options& o, std::ostream& log) {
    const auto dir = makeRunDirectory(o.out);
    writeJsonFile(dir / "config.json", configEcho(o));
    const auto seeds = batchSeeds(o.config.seed, static_cast<std::size_t>(o.config.replicates));
    const BatchResult b = batchExtinction(o.config, seeds, o.jobs);
    {
        auto out = openOutput(dir / "runs.csv");
        writeRunsCsv(out, b.runs);
    }
    {
        auto out = openOutput(dir / "summary.csv");
        CsvWriter csv(out);
        writeSummaryHeader(csv);
        writeSummaryRow(csv, o.config, b);
    }
    printSummary(log, o.config, b);
    log << "output: " << dir.string() << "\n";
    return kExitOk;
}

inline int cmdSweep(const Options& o, std::ostream& log) {
    const auto dir = makeRunDirectory(o.out);
    writeJsonFile(dir / "config.json", configEcho(o));
    const std::vector<int> rs = o.sweepR.empty() ? std::vector<int>{o.config.r} : o.sweepR;
    const std::vector<int> gens = o.sweepMaxGen.empty() ? std::vector<int>{o.config.maxGen} : o.sweepMaxGen;
    const std::vector<double> caps =
        o.sweepPlantoidCap.empty() ? std::vector<double>{o.config.maxPlantoidCapacity} : o.sweepPlantoidCap;
    auto summaryOut = openOutput(dir / "summary.csv");
    CsvWriter summary(summaryOut);
    writeSummaryHeader(summary);
    const auto seeds = batchSeeds(o.config.seed, static_cast<std::size_t>(o.config.replicates));
    for (int r : rs) {
        for (int gen : gens) {
            for (double cap : caps) {
                Config c = o.config;
                c.r = r;
                c.maxGen = gen;
                c.maxPlantoidCapacity = cap;
                const BatchResult b = batchExtinction(c, seeds, o.jobs);
                std::ostringstream name;
                name << "runs_r" << r << "_g" << gen << "_c" << cap << ".csv";
                auto out = openOutput(dir / name.str());
                writeRunsCsv(out, b.runs);
                writeSummaryRow(summary, c, b);
                printSummary(log, c, b);
            }
        }
    }
    log << "output: " << dir.string() << "\n";
    return kExitOk;
}

/// Entry point shared by the executable and the tests.
inline int main(const std::vector<std::string>& args, std::ostream& log = std::cout, std::ostream& err = std::cerr) {
    try {
        const Options o = parseArgs(args);
        if (o.helpText) {
            log << *o.helpText;
            return kExitOk;
        }
        if (o.command == "run") return cmdRun(o, log);
        if (o.command == "batch") return cmdBatch(o, log);
        return cmdSweep(o, log);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    }
}

}  // namespace echo::cli
