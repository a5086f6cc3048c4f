#include "due/bench.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace due;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("due_bench_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

SimulateConfig small_simulation(const fs::path& out, int days) {
    SimulateConfig c;
    c.household = fs::path(DUE_SOURCE_DIR) / "data/households/ukdale_house1.profile";
    c.simulation.days = days;
    c.simulation.seed = 11;
    c.out = out;
    return c;
}

int run_cli(const std::string& args) {
    const auto cmd = std::string(DUE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Bench, SimulateThenRunProducesReports) {
    TempDir dir("closure");
    cmd_simulate(small_simulation(dir.path, 6));
    for (const char* f : {"channel_map.csv", "household.profile", "activity_model.txt", "run.conf", "aggregate.csv",
                          "cooking.csv", "standby.csv"}) {
        EXPECT_TRUE(fs::exists(dir.path / f)) << f;
    }
    const auto cfg = load_run_config(dir.path / "run.conf");
    EXPECT_EQ(cfg.algorithms, (std::vector<std::string>{"due", "co"}));
    const auto outcome = cmd_run(cfg);
    EXPECT_EQ(outcome.split.train_days, 4);
    EXPECT_EQ(outcome.split.test_days, 2);
    ASSERT_EQ(outcome.reports.size(), 2u);
    for (const auto& r : outcome.reports) {
        ASSERT_TRUE(r.overall_est_acc.has_value()) << r.algorithm;
        EXPECT_GE(*r.overall_est_acc, 0.0);
        EXPECT_LE(*r.overall_est_acc, 1.0);
    }
    for (const char* f : {"metrics.tsv", "metrics.json", "energy_share.tsv", "estimates_due.csv", "estimates_co.csv",
                          "timing.tsv"}) {
        EXPECT_TRUE(fs::exists(dir.path / "reports" / f)) << f;
    }
}

TEST(Bench, RepeatedRunsAreByteIdentical) {
    TempDir dir("determinism");
    cmd_simulate(small_simulation(dir.path, 4));
    auto cfg = load_run_config(dir.path / "run.conf");
    cfg.out = dir.path / "a";
    cmd_run(cfg);
    cfg.out = dir.path / "b";
    cmd_run(cfg);
    for (const char* f : {"metrics.tsv", "metrics.json", "energy_share.tsv", "estimates_due.csv", "estimates_co.csv"}) {
        EXPECT_EQ(slurp(dir.path / "a" / f), slurp(dir.path / "b" / f)) << f;
    }
}

TEST(Bench, ConfigErrors) {
    TempDir dir("config");
    { std::ofstream(dir.path / "bad.conf") << "dataset.dir = .\nhousehold = h.profile\ncolour = blue\n"; }
    EXPECT_THROW(load_run_config(dir.path / "bad.conf"), ConfigError);
    { std::ofstream(dir.path / "algo.conf") << "dataset.dir = .\nhousehold = h.profile\nalgorithms = due, fhmm\n"; }
    EXPECT_THROW(load_run_config(dir.path / "algo.conf"), ConfigError);
    EXPECT_THROW(load_run_config(dir.path / "missing.conf"), ConfigError);
}

TEST(Bench, ModelDescription) {
    std::ostringstream out;
    describe_model(out, ModelSource{}.build());
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
              "stratum\tinitial_n\tinitial_fallback\ttransition_rows\tduration_cells");
}

TEST(Cli, ExitCodes) {
    TempDir dir("cli");
    EXPECT_EQ(run_cli("run --config " + (dir.path / "missing.conf").string()), 2);
    { std::ofstream(dir.path / "bad.conf") << "dataset.dir = .\nhousehold = h.profile\nbogus = 1\n"; }
    EXPECT_EQ(run_cli("run --config " + (dir.path / "bad.conf").string()), 2);
    // A config pointing at a dataset with a corrupt channel is a data error.
    cmd_simulate(small_simulation(dir.path / "sim", 3));
    { std::ofstream(dir.path / "sim" / "cooking.csv", std::ios::app) << "not,a,row\n"; }
    EXPECT_EQ(run_cli("run --config " + (dir.path / "sim" / "run.conf").string()), 3);
    EXPECT_EQ(run_cli("inspect-model --config " + (dir.path / "sim" / "run.conf").string()), 0);
}
