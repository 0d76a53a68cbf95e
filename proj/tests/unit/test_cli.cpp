#include <gtest/gtest.h>

#include <cmath>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "schaake/panel.hpp"
#include "synthetic.hpp"

namespace schaake {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("schaake_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args) const {
        const std::string cmd = std::string(SCHAAKE_CLI_PATH) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                                " 2> " + (dir_ / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string read(const std::string& name) const {
        std::ifstream in(dir_ / name, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write_panels(std::size_t days) const {
        const auto data = testing::argarch_copula_panels(days, {0.0, 0.5, 0.5, 0.1, 0.8}, 0.7, 1);
        std::ofstream r(dir_ / "real.csv");
        write_panel_csv(r, data.real);
        std::ofstream f(dir_ / "fc.csv");
        write_panel_csv(f, data.forecast);
        std::ofstream c(dir_ / "cfg.json");
        c << R"({"error_window": 120, "margin_window": 30, "dependence_window": 30})";
    }

    fs::path dir_;
};

TEST_F(Cli, ToyExample) {
    ASSERT_EQ(run("toy-example"), 0);
    const auto out = read("stdout.txt");
    EXPECT_NE(out.find("toy,1,6.1,31.6,27.2,36.5"), std::string::npos);
    EXPECT_NE(out.find("toy,6,54.5,69.6,64.8,50.5"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("frobnicate"), 1);
    EXPECT_EQ(run("backtest --real " + (dir_ / "missing.csv").string() + " --forecast x"), 1);
    EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, DataErrorExitCode) {
    std::ofstream(dir_ / "bad.csv") << "date,hour,value\n2020-01-01,30,1\n";
    EXPECT_EQ(run("backtest --real " + (dir_ / "bad.csv").string() + " --forecast " + (dir_ / "bad.csv").string()), 2);
    EXPECT_NE(read("stderr.txt").find("bad.csv:2"), std::string::npos);
}

TEST_F(Cli, InsufficientHistoryIsADataError) {
    write_panels(60);
    EXPECT_EQ(run("backtest --real " + (dir_ / "real.csv").string() + " --forecast " + (dir_ / "fc.csv").string() +
                  " --config " + (dir_ / "cfg.json").string() + " --out-dir " + (dir_ / "out").string()),
              2);
}

TEST_F(Cli, BacktestThenEvaluateAndSlp) {
    write_panels(124);
    const auto out = (dir_ / "out").string();
    ASSERT_EQ(run("backtest --real " + (dir_ / "real.csv").string() + " --forecast " + (dir_ / "fc.csv").string() +
                  " --config " + (dir_ / "cfg.json").string() + " --out-dir " + out +
                  " --settings Schaake-NP,I-NP --seed 5 --jobs 2"),
              0)
        << read("stderr.txt");
    EXPECT_TRUE(fs::exists(dir_ / "out" / "forecasts" / "Schaake-NP.csv"));
    EXPECT_FALSE(fs::exists(dir_ / "out" / "forecasts" / "I-P.csv"));
    EXPECT_NE(read("out/config.json").find("\"seed\": 5"), std::string::npos);

    const auto fcs = out + "/forecasts/Schaake-NP.csv " + out + "/forecasts/I-NP.csv";
    ASSERT_EQ(run("evaluate --real " + (dir_ / "real.csv").string() + " --forecasts " + fcs), 0) << read("stderr.txt");
    const auto eval = read("stdout.txt");
    EXPECT_NE(eval.find("setting,days,mean_es,mean_crps"), std::string::npos);
    EXPECT_NE(eval.find("Schaake-NP,4,"), std::string::npos);

    ASSERT_EQ(run("slp --real " + (dir_ / "real.csv").string() + " --forecasts " + fcs), 0) << read("stderr.txt");
    EXPECT_NE(read("stdout.txt").find("I-NP,0.9333,1,4,"), std::string::npos);
}

TEST_F(Cli, ShuffleReordersOneDay) {
    std::ofstream(dir_ / "ens.csv") << "date,member,h1,h2\nd,1,3,10\nd,2,1,30\nd,3,2,20\n";
    std::ofstream(dir_ / "ranks.csv") << "h1,h2\n3,1\n1,3\n2,2\n";
    ASSERT_EQ(run("shuffle --ensembles " + (dir_ / "ens.csv").string() + " --ranks " + (dir_ / "ranks.csv").string()),
              0)
        << read("stderr.txt");
    EXPECT_EQ(read("stdout.txt"), "date,member,h1,h2\nd,1,3,10\nd,2,1,30\nd,3,2,20\n");
    std::ofstream(dir_ / "bad_ranks.csv") << "1,1\n2,2\n2,3\n";
    EXPECT_EQ(run("shuffle --ensembles " + (dir_ / "ens.csv").string() + " --ranks " +
                  (dir_ / "bad_ranks.csv").string()),
              2);
}

}  // namespace
}  // namespace schaake
