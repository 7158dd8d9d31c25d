#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "echo/cli.hpp"

using namespace echo;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("echo_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string configKey(const std::vector<std::string>& args) {
    try {
        cli::parseArgs(args);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "";
}

fs::path onlyChild(const fs::path& dir) {
    std::vector<fs::path> kids;
    for (const auto& e : fs::directory_iterator(dir)) kids.push_back(e.path());
    EXPECT_EQ(kids.size(), 1u);
    return kids.empty() ? dir : kids[0];
}

}  // namespace

TEST(ParseArgs, Defaults) {
    const auto o = cli::parseArgs({"run"});
    EXPECT_EQ(o.command, "run");
    EXPECT_EQ(o.config, Config{});
    EXPECT_EQ(o.config.side(), 19);
}

TEST(ParseArgs, RadiusFlag) {
    const auto o = cli::parseArgs({"batch", "--r", "10", "--replicates", "3"});
    EXPECT_EQ(o.config.side(), 21);
    EXPECT_EQ(o.config.replicates, 3);
}

TEST(ParseArgs, OddAgentCountRejectedInMixedMode) {
    EXPECT_EQ(configKey({"run", "--agents", "7"}), "agents");
    EXPECT_NO_THROW(cli::parseArgs({"run", "--agents", "7", "--cog1-only"}));
}

TEST(ParseArgs, OutOfRangeValuesNameTheirKey) {
    EXPECT_EQ(configKey({"run", "--r", "0"}), "r");
    EXPECT_EQ(configKey({"run", "--mutation-p", "1.5"}), "mutation-p");
    EXPECT_EQ(configKey({"run", "--cog1-only", "--cog0-only"}), "cog1-only");
    EXPECT_EQ(configKey({"run", "--no-such-flag"}), "args");
    EXPECT_EQ(configKey({}), "args");
    EXPECT_EQ(configKey({"sweep", "--sweep-r", "3,0"}), "sweep-r");
}

TEST(ParseArgs, FlagsOverrideConfigFile) {
    TempDir tmp;
    const auto file = tmp.path() / "c.json";
    std::ofstream(file) << R"({"r": 4, "max-gen": 7, "seed": 99})";
    const auto o = cli::parseArgs({"run", "--config", file.string(), "--max-gen", "5"});
    EXPECT_EQ(o.config.r, 4);
    EXPECT_EQ(o.config.maxGen, 5);
    EXPECT_EQ(o.config.seed, 99u);
}

TEST(ParseArgs, BadConfigFile) {
    TempDir tmp;
    const auto file = tmp.path() / "bad.json";
    std::ofstream(file) << R"({"r": "wide"})";
    EXPECT_EQ(configKey({"run", "--config", file.string()}), "r");
    EXPECT_EQ(configKey({"run", "--config", (tmp.path() / "missing.json").string()}), "config");
}

TEST(ParseArgs, SweepLists) {
    const auto o = cli::parseArgs({"sweep", "--sweep-r", "3,9,10", "--sweep-max-gen", "5,20"});
    EXPECT_EQ(o.sweepR, (std::vector<int>{3, 9, 10}));
    EXPECT_EQ(o.sweepMaxGen, (std::vector<int>{5, 20}));
}

TEST(ParseArgs, Help) {
    const auto o = cli::parseArgs({"--help"});
    ASSERT_TRUE(o.helpText.has_value());
    EXPECT_NE(o.helpText->find("batch"), std::string::npos);
}

TEST(Main, ConfigErrorExitsTwo) {
    std::ostringstream log, err;
    EXPECT_EQ(cli::main({"run", "--agents", "7"}, log, err), cli::kExitConfig);
    EXPECT_NE(err.str().find("agents"), std::string::npos);
}

TEST(Main, UnwritableOutputExitsThree) {
    TempDir tmp;
    const auto blocker = tmp.path() / "file";
    std::ofstream(blocker) << "x";
    std::ostringstream log, err;
    EXPECT_EQ(cli::main({"run", "--r", "2", "--max-ticks", "3", "--out", (blocker / "sub").string()}, log, err),
              cli::kExitIo);
}

TEST(Main, RunWritesOutputs) {
    TempDir tmp;
    std::ostringstream log, err;
    ASSERT_EQ(cli::main({"run", "--r", "2", "--max-ticks", "6", "--snapshot-every", "2", "--tick-csv", "--out",
                         tmp.path().string()},
                        log, err),
              cli::kExitOk)
        << err.str();
    const auto dir = onlyChild(tmp.path());
    for (const char* f : {"config.json", "run.json", "runs.csv", "ticks.csv", "snapshots/tick_000000.ppm"})
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    std::ifstream runs(dir / "runs.csv");
    std::stringstream text;
    text << runs.rdbuf();
    const auto rows = parseCsv(text.str());
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][0], "run_index");
}

TEST(Main, BatchWritesSummary) {
    TempDir tmp;
    std::ostringstream log, err;
    ASSERT_EQ(cli::main({"batch", "--r", "2", "--max-ticks", "20", "--replicates", "4", "--jobs", "2", "--out",
                         tmp.path().string()},
                        log, err),
              cli::kExitOk)
        << err.str();
    const auto dir = onlyChild(tmp.path());
    for (const char* f : {"config.json", "runs.csv", "summary.csv"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
    std::ifstream in(dir / "runs.csv");
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_EQ(parseCsv(text.str()).size(), 5u);
}

TEST(Main, SweepWritesOneRowPerCell) {
    TempDir tmp;
    std::ostringstream log, err;
    ASSERT_EQ(cli::main({"sweep", "--sweep-r", "1,2", "--sweep-max-gen", "3,5", "--max-ticks", "10", "--replicates",
                         "2", "--out", tmp.path().string()},
                        log, err),
              cli::kExitOk)
        << err.str();
    const auto dir = onlyChild(tmp.path());
    std::ifstream in(dir / "summary.csv");
    std::stringstream text;
    text << in.rdbuf();
    const auto rows = parseCsv(text.str());
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[1][0], "3x3");
    EXPECT_TRUE(fs::exists(dir / "runs_r2_g5_c10.csv"));
}
