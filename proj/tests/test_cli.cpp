#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "modnet/experiment.hpp"
#include "modnet/io.hpp"
#include "modnet/rng.hpp"

using namespace modnet;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("modnet_cli_" + std::to_string(std::random_device{}()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the CLI with stdout captured to a file; returns the exit code.
  int run(const std::string& args, std::string* out = nullptr) {
    const fs::path o = dir_ / "stdout.txt";
    const std::string cmd = std::string(MODNET_CLI) + " " + args + " > " + o.string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    if (out) *out = slurp(o);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string slurp(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  std::string p(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SynthIsByteIdentical) {
  ASSERT_EQ(run("synth --independent --n 100 --seed 7 -o " + p("a.csv")), 0);
  ASSERT_EQ(run("synth --independent --n 100 --seed 7 -o " + p("b.csv")), 0);
  EXPECT_EQ(slurp(p("a.csv")), slurp(p("b.csv")));
  std::string stdout_copy;
  ASSERT_EQ(run("synth --independent --n 100 --seed 7", &stdout_copy), 0);
  EXPECT_EQ(stdout_copy, slurp(p("a.csv")));
  ASSERT_EQ(run("synth --independent --n 100 --seed 8 -o " + p("c.csv")), 0);
  EXPECT_NE(slurp(p("a.csv")), slurp(p("c.csv")));
}

TEST_F(Cli, UsageAndConfigExitCodes) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("synth --bogus"), 2);
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("synth --alpha 2 --n 5"), 3);
  std::ofstream(p("cfg.json")) << R"({"lamda": 1})";
  EXPECT_EQ(run("--config " + p("cfg.json") + " synth --n 5"), 3);
  EXPECT_EQ(run("extract-graph --network " + p("missing.json") + " -o " + p("g.json")), 5);
  std::ofstream(p("bad.json")) << "{\"format\": \"modnet-net";
  EXPECT_EQ(run("extract-graph --network " + p("bad.json") + " -o " + p("g.json")), 5);
}

TEST_F(Cli, NumericExitCode) {
  // A constant column has zero range and cannot be normalized.
  std::ofstream(p("flat.csv")) << "x1,y1\n1,0\n1,1\n1,2\n";
  EXPECT_EQ(run("train --data " + p("flat.csv") + " -o " + p("n.json") + " --a1 1"), 4);
}

TEST_F(Cli, StepwisePipelineMatchesHarness) {
  ExperimentConfig cfg = ExperimentConfig::decomposition();
  cfg.n = 150;
  cfg.training.a1 = 20;
  cfg.restarts = 3;
  cfg.em_iterations = 30;
  const std::uint64_t seed = 11;

  PipelineResult ref;
  const ExperimentRecord rec = run_synthetic_trial(cfg, seed, 0, {}, &ref);
  ASSERT_TRUE(rec.ok) << rec.error;

  // The harness draws trial data from sub-stream 0 of the trial seed.
  SynthOptions so;
  so.samples = cfg.n;
  so.block_size = cfg.block_size;
  write_dataset(p("d.csv"), generate_synthetic(so, derive_seed(seed, 0)).first);

  const std::string common = "--seed " + std::to_string(seed) + " ";
  ASSERT_EQ(run(common + "train --data " + p("d.csv") + " -o " + p("net.json") + " --a1 20"), 0);
  EXPECT_EQ(load_network(p("net.json")), ref.network);
  ASSERT_EQ(run(common + "extract-graph --network " + p("net.json") + " -o " + p("g.json")), 0);
  ASSERT_EQ(run(common + "detect --graph " + p("g.json") + " -o " + p("c.json") +
                " --restarts 3 --em-iterations 30"),
            0);
  ASSERT_EQ(run(common + "bundle --graph " + p("g.json") + " --communities " + p("c.json") +
                " -o " + p("r.json")),
            0);
  const ModularRepresentation repr = load_representation(p("r.json"));
  EXPECT_EQ(repr.connections, ref.representation.connections);
  EXPECT_EQ(repr.communities, ref.representation.communities);

  std::string out;
  ASSERT_EQ(run("modularity --graph " + p("g.json") + " --single", &out), 0);
  EXPECT_EQ(out, "Q = 0\n");
  ASSERT_EQ(run("modularity --graph " + p("g.json") + " --communities " + p("c.json"), &out), 0);
  EXPECT_EQ(out.rfind("Q = ", 0), 0u);

  ASSERT_EQ(run("export-graph --representation " + p("r.json") + " -o " + p("r.dot")), 0);
  EXPECT_NE(slurp(p("r.dot")).find("digraph"), std::string::npos);
  EXPECT_NE(slurp(p("r.dot")).find("label=\"x1"), std::string::npos);
  ASSERT_EQ(run("export-graph --format edges --graph " + p("g.json"), &out), 0);
  EXPECT_EQ(out.rfind("# layer source target", 0), 0u);
}

TEST_F(Cli, ExperimentWritesReports) {
  ASSERT_EQ(run("--seed 3 experiment decomposition --trials 2 --n 80 --a1 5 --restarts 2 "
                "--em-iterations 10 --out-dir " + p("exp")),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "exp" / "records.tsv"));
  EXPECT_NE(slurp(p("exp/summary.txt")).find("decomposition: 2 trials"), std::string::npos);
  const std::string first = slurp(p("exp/records.tsv"));
  ASSERT_EQ(run("--seed 3 experiment decomposition --trials 2 --n 80 --a1 5 --restarts 2 "
                "--em-iterations 10 --out-dir " + p("exp")),
            0);
  EXPECT_EQ(slurp(p("exp/records.tsv")), first);
}

TEST_F(Cli, TabularExperiment) {
  ASSERT_EQ(run("--seed 2 synth --independent --n 60 -o " + p("t.csv")), 0);
  ASSERT_EQ(run("experiment tabular --table " + p("t.csv") +
                " --trials 2 --a1 2 --restarts 2 --em-iterations 10 -C 3 --out-dir " + p("tab")),
            0);
  EXPECT_NE(slurp(p("tab/summary.txt")).find("train/test split: 30/30"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "tab" / "best_representation.dot"));
  EXPECT_EQ(run("experiment tabular --trials 2"), 3);
}
