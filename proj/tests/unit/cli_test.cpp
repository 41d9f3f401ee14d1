#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "criteria.hpp"
#include "semem/persistence.hpp"
#include "semem/seed.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
};

std::string quoted(const std::string& s) { return "'" + s + "'"; }

// Runs the CLI with `input` on stdin; stderr is dropped.
Run run_cli(const std::string& args, const std::string& input = "") {
  fs::path in = fs::temp_directory_path() / ("semem_cli_in_" + std::to_string(::getpid()));
  std::ofstream(in) << input;
  std::string command = quoted(SEMEM_CLI) + " " + args + " < " + quoted(in.string()) + " 2>/dev/null";
  Run run;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) return run;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) run.out.append(buffer, n);
  int status = ::pclose(pipe);
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  fs::remove(in);
  return run;
}

std::string data(const std::string& rel) { return quoted((criteria::source_dir() / "data" / rel).string()); }

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST(Cli, ReplayExitCodesFollowExpectations) {
  auto ok = run_cli("--replay " + data("scenarios/exp1.scenario.json"));
  EXPECT_EQ(ok.exit_code, 0) << ok.out;
  EXPECT_EQ(ok.out, semem::read_text_file(criteria::source_dir() / "data" / "transcripts" / "exp1.txt"));
  auto bad = run_cli("--replay " + data("scenarios/bad_expectation.scenario.json"));
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_EQ(run_cli("--replay /nonexistent.scenario.json").exit_code, 2);
  EXPECT_EQ(run_cli("--replay " + data("scenarios/exp1.scenario.json") + " --strategy srl").exit_code, 2);
}

TEST(Cli, ReplayWithTripletStrategyStillPasses) {
  auto run = run_cli("--replay " + data("scenarios/exp2.scenario.json") + " --strategy triplet");
  EXPECT_EQ(run.exit_code, 0) << run.out;
}

TEST(Cli, ReplRunsInstructionsAndCommands) {
  auto run = run_cli("--lexicon " + data("lexicon.json") + " --scene " + data("scenes/exp1.json"),
                     "YuMi, pick the screw!\n:scene\n:dance\n\n:strategy triplet\nYuMi, frobnicate!\n:quit\n");
  EXPECT_EQ(run.exit_code, 0);
  EXPECT_TRUE(contains(run.out, "scene: box_1, nut_1, yumi_1")) << run.out;
  EXPECT_TRUE(contains(run.out, "! unknown command ':dance'")) << run.out;
  EXPECT_TRUE(contains(run.out, "strategy: triplet")) << run.out;
  EXPECT_TRUE(contains(run.out, "! error NoTripletFound")) << run.out;
}

TEST(Cli, ReplAnswersPromptsAndSavesOnExit) {
  fs::path saved = fs::temp_directory_path() / "semem_cli_saved.semem.json";
  fs::remove(saved);
  auto run = run_cli("--lexicon " + data("lexicon.json") + " --scene " + data("scenes/closest_match.json") +
                         " --save-on-exit " + quoted(saved.string()),
                     "YuMi, pick the green nut!\n:accept\n:accept\n:scene\n");
  EXPECT_EQ(run.exit_code, 0);
  EXPECT_TRUE(contains(run.out, "! error UnknownPrompt")) << run.out;  // second :accept has nothing to answer
  EXPECT_TRUE(contains(run.out, "scene: box_1, yumi_1")) << run.out;
  ASSERT_TRUE(fs::exists(saved));
  EXPECT_NO_THROW(semem::load(saved));
  fs::remove(saved);
}

TEST(Cli, WriteSeedMatchesTheBuiltInSeed) {
  fs::path out = fs::temp_directory_path() / "semem_cli_seed.semem.json";
  auto run = run_cli("--write-seed " + quoted(out.string()));
  EXPECT_EQ(run.exit_code, 0);
  EXPECT_EQ(semem::read_text_file(out), semem::serialize(semem::seed_world()));
  fs::remove(out);
}

TEST(Cli, MissingLexiconIsAUsageError) { EXPECT_EQ(run_cli("").exit_code, 2); }
