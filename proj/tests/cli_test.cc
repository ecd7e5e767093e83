// Drives the rpsai binary through the shell.
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rpsai/session.h"
#include "rpsai/session_log.h"

#ifndef RPSAI_CLI_PATH
#error "RPSAI_CLI_PATH must point at the rpsai binary"
#endif

namespace rpsai {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun Exec(const std::string& args, const std::string& stdin_text = "") {
  const fs::path in = fs::temp_directory_path() / "rpsai_cli_stdin.txt";
  std::ofstream(in) << stdin_text;
  const std::string cmd =
      std::string(RPSAI_CLI_PATH) + " " + args + " < " + in.string() + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rpsai_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Exec("").code, 1);
  EXPECT_EQ(Exec("frobnicate").code, 1);
  EXPECT_EQ(Exec("simulate --opponent nope --out " + dir_.string()).code, 1);
  EXPECT_EQ(Exec("simulate --orders 3,2 --out " + dir_.string()).code, 1);
  EXPECT_EQ(Exec("--help").code, 0);
}

TEST_F(CliTest, PlayWritesAReplayableLog) {
  const fs::path log = dir_ / "s.log";
  const CliRun r = Exec("play --rounds 6 --seed 4 --out " + log.string(), "r\nP\nx\ns\nR\nR\nP\n");
  EXPECT_EQ(r.code, 0);
  const SessionLog parsed = ReadLogFile(log.string());
  EXPECT_EQ(parsed.rounds.size(), 6u);
  EXPECT_TRUE(parsed.complete());
  EXPECT_EQ(parsed.rounds[2].player_move, Move::kScissors);
  EXPECT_NE(r.out.find("RMB"), std::string::npos) << r.out;
  EXPECT_EQ(Exec("replay " + log.string()).code, 0);
}

TEST_F(CliTest, QuitLeavesAnIncompleteLog) {
  const fs::path log = dir_ / "q.log";
  EXPECT_EQ(Exec("play --rounds 10 --seed 4 --out " + log.string(), "R\nP\nq\n").code, 0);
  const std::string text = Slurp(log);
  EXPECT_NE(text.find("#incomplete"), std::string::npos);
  EXPECT_EQ(ReadLogFile(log.string()).rounds.size(), 2u);
  EXPECT_EQ(Exec("replay " + log.string()).code, 0);
}

TEST_F(CliTest, ReplayExitCodes) {
  SessionConfig c;
  c.rounds = 5;
  c.ensemble.seed = 1;
  Session s(c);
  for (Move m : MovesFromString("RPSRP")) s.PlayRound(m);
  SessionLog log = s.log();
  std::ofstream(dir_ / "good.log") << FormatLog(log);
  log.rounds[3].multi_move = Beats(log.rounds[3].multi_move);
  std::ofstream(dir_ / "bad.log") << FormatLog(log);
  std::ofstream(dir_ / "junk.log") << "hello\n";
  EXPECT_EQ(Exec("replay " + (dir_ / "good.log").string()).code, 0);
  const CliRun bad = Exec("replay " + (dir_ / "bad.log").string());
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.out.find("round 4"), std::string::npos) << bad.out;
  EXPECT_EQ(Exec("replay " + (dir_ / "junk.log").string()).code, 2);
}

TEST_F(CliTest, SimulateWritesTables) {
  const CliRun r = Exec("simulate --opponent cycle:RPS --opponent uniform --reps 3 --rounds 50 "
                     "--seed 2 --logs --out " + dir_.string());
  ASSERT_EQ(r.code, 0);
  for (const char* f : {"table4.csv", "table5.csv", "fig2.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
  int logs = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "logs")) {
    ++logs;
    EXPECT_EQ(Exec("replay " + e.path().string()).code, 0);
  }
  EXPECT_EQ(logs, 6);
  // Same seed, same tables.
  const fs::path again = dir_ / "again";
  Exec("simulate --opponent cycle:RPS --opponent uniform --reps 3 --rounds 50 --seed 2 --out " +
       again.string());
  EXPECT_EQ(Slurp(dir_ / "table5.csv"), Slurp(again / "table5.csv"));
}

TEST_F(CliTest, AnalyzeAndSweep) {
  Exec("simulate --opponent wsls --reps 2 --rounds 40 --seed 3 --logs --no-series --out " +
       dir_.string());
  std::string files;
  for (const auto& e : fs::directory_iterator(dir_ / "logs")) files += " " + e.path().string();
  const fs::path out = dir_ / "an";
  ASSERT_EQ(Exec("analyze" + files + " --internals --out " + out.string()).code, 0);
  EXPECT_TRUE(fs::exists(out / "summary.csv"));
  bool trace = false;
  bool table = false;
  for (const auto& e : fs::directory_iterator(out)) {
    const std::string name = e.path().filename().string();
    trace |= name.starts_with("trace_");
    table |= name.starts_with("table_") && name.find("_ai") != std::string::npos;
  }
  EXPECT_TRUE(trace);
  EXPECT_TRUE(table);

  const fs::path sw = dir_ / "sw";
  ASSERT_EQ(Exec("sweep --orders 1,2 --opponent cycle:RPS --reps 2 --rounds 40 --seed 1 --out " +
                 sw.string())
                .code,
            0);
  const std::string csv = Slurp(sw / "sweep.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "order,n,mean,stdev");
}

}  // namespace
}  // namespace rpsai
