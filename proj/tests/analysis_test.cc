#include "rpsai/analysis.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rpsai/opponents.h"

namespace rpsai {
namespace {

BatchSpec SmallSpec(int threads) {
  BatchSpec spec;
  spec.threads = threads;
  spec.keep_logs = true;
  BatchCell a{"cyc", "cycle:RPS", EnsembleConfig{{1, 2, 3}, 5, 0}, 60, 6, 11};
  BatchCell b{"react", "reactor:2", EnsembleConfig{{1, 2}, 3, 0}, 60, 5, 12};
  spec.cells = {a, b};
  return spec;
}

TEST(DescribeTest, SampleStatistics) {
  const std::vector<double> v = {2, 4, 4, 4, 5, 5, 7, 9};
  const Stat s = Describe(v);
  EXPECT_EQ(s.n, 8);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  ASSERT_TRUE(s.stdev.has_value());
  EXPECT_NEAR(*s.stdev, std::sqrt(32.0 / 7.0), 1e-12);
  EXPECT_FALSE(Describe(std::vector<double>{1}).stdev.has_value());
  EXPECT_EQ(Describe(std::vector<double>{}).n, 0);
}

TEST(BatchTest, IndependentOfThreadCount) {
  const BatchReport one = RunBatch(SmallSpec(1));
  const BatchReport four = RunBatch(SmallSpec(4));
  ASSERT_EQ(one.cells.size(), 2u);
  for (std::size_t c = 0; c < 2; ++c) {
    EXPECT_EQ(one.cells[c].seeds, four.cells[c].seeds);
    EXPECT_EQ(one.cells[c].logs, four.cells[c].logs);
    EXPECT_EQ(one.cells[c].total.mean, four.cells[c].total.mean);
  }
  EXPECT_EQ(one.cells[0].labels.front(), "cyc-1");
  EXPECT_EQ(one.cells[0].seeds[2], ReplicationSeed(11, 2));
}

TEST(BatchTest, EachSessionMatchesASoloRun) {
  const BatchReport r = RunBatch(SmallSpec(2));
  const CellReport& cyc = r.cells[0];
  for (std::size_t i = 0; i < cyc.sessions.size(); ++i) {
    EnsembleConfig e = cyc.cell.ensemble;
    const SessionSummary solo =
        RunMatch(e, strategy::Cycle{MovesFromString("RPS")}, 60, cyc.seeds[i]);
    EXPECT_EQ(solo.total_ai_score, cyc.sessions[i].total_ai_score);
    EXPECT_TRUE(Replay(cyc.logs[i]).match);
  }
}

TEST(BatchTest, ReportFromLogsAgrees) {
  const BatchReport r = RunBatch(SmallSpec(1));
  std::vector<std::pair<std::string, SessionLog>> logs;
  for (std::size_t i = 0; i < r.cells[0].logs.size(); ++i) {
    logs.emplace_back(r.cells[0].labels[i], r.cells[0].logs[i]);
  }
  const BatchReport back = ReportFromLogs(logs);
  ASSERT_EQ(back.cells.size(), 1u);
  EXPECT_DOUBLE_EQ(back.cells[0].total.mean, r.cells[0].total.mean);
  EXPECT_EQ(back.cells[0].per_member.size(), 3u);
}

TEST(BatchTest, RejectsInvalidCellsBeforeRunning) {
  BatchSpec spec = SmallSpec(1);
  spec.cells[1].opponent = "cycle:";
  EXPECT_THROW(RunBatch(spec), std::invalid_argument);
}

TEST(TablesTest, Layouts) {
  const BatchReport r = RunBatch(SmallSpec(1));
  std::ostringstream t4, t5, f2;
  WriteTable4(r, t4);
  WriteTable5(r, t5);
  WriteFig2(r, f2);
  EXPECT_EQ(t4.str().substr(0, t4.str().find('\n')), "cell,session,R,P,S");
  EXPECT_NE(t4.str().find("\ncyc,MEAN,"), std::string::npos);
  EXPECT_NE(t4.str().find("\ncyc,STDEV.S,"), std::string::npos);
  // Cycle RPS over 60 rounds is exactly 20 of each.
  EXPECT_NE(t4.str().find("\ncyc,cyc-1,20,20,20\n"), std::string::npos) << t4.str();
  EXPECT_EQ(t5.str().substr(0, t5.str().find('\n')),
            "cell,session,AI1,AI2,AI3,single_models_average,multi_score");
  EXPECT_NE(t5.str().find("\ncyc,STDEVA,"), std::string::npos);
  EXPECT_EQ(f2.str().substr(0, f2.str().find('\n')), "session,total_score");
}

TEST(TablesTest, Fig1Series) {
  const SessionSummary s = RunMatch(EnsembleConfig{}, strategy::UniformRandom{}, 10, 1);
  std::ostringstream out;
  WriteFig1(s, out);
  int lines = 0;
  for (char c : out.str()) lines += c == '\n';
  EXPECT_EQ(lines, 11);
}

TEST(SweepTest, SingleModels) {
  const SweepResult r = SingleModelSweep({1, 2, 3}, "cycle:RPS", 100, 3, 5, 2);
  ASSERT_EQ(r.totals.size(), 3u);
  for (const Stat& s : r.totals) {
    EXPECT_EQ(s.n, 3);
    EXPECT_GT(s.mean, 50);
  }
  std::ostringstream out;
  WriteSweep(r, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "order,n,mean,stdev");
}

TEST(OutputsTest, WritesFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "rpsai_analysis_test";
  std::filesystem::remove_all(dir);
  WriteBatchOutputs(RunBatch(SmallSpec(1)), dir, true);
  for (const char* f : {"table4.csv", "table5.csv", "fig2.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::filesystem::remove_all(dir);
}

TEST(OutputsTest, SafeLabel) {
  EXPECT_EQ(SafeLabel("a b/c:1"), SafeLabel("a b/c:1"));
  EXPECT_EQ(SafeLabel("a b/c:1").find_first_of(" /:"), std::string::npos);
}

}  // namespace
}  // namespace rpsai
