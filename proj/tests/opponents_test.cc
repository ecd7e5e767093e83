#include "rpsai/opponents.h"

#include <gtest/gtest.h>

#include "fixtures.h"

namespace rpsai {
namespace {

std::string Play(Agent& agent, const std::string& opponent_moves) {
  std::string out;
  for (char c : opponent_moves) {
    const Move own = agent.NextMove();
    out.push_back(MoveCode(own));
    agent.Record(own, *ParseMove(c));
  }
  return out;
}

TEST(OpponentsTest, Cycle) {
  Agent a(strategy::Cycle{MovesFromString("RPS")}, 0);
  EXPECT_EQ(Play(a, "RRRRRRR"), "RPSRPSR");
}

TEST(OpponentsTest, MimicCopiesTheLastOpponentMove) {
  Agent a(strategy::MimicLastAIMove{}, 3);
  const std::string out = Play(a, "PSSRPR");
  EXPECT_EQ(out.substr(1), "PSSRP");
}

TEST(OpponentsTest, WinStayLoseShift) {
  Agent a(strategy::WinStayLoseShift{}, 1);
  const Move first = a.NextMove();
  a.Record(first, Beats(first));  // loss: shift to what beats own
  EXPECT_EQ(a.NextMove(), Beats(first));
  const Move second = Beats(first);
  a.Record(second, Beats(Beats(second)));  // win: stay
  EXPECT_EQ(a.NextMove(), second);
  a.Record(second, second);  // draw: shift
  EXPECT_EQ(a.NextMove(), Beats(second));
}

TEST(OpponentsTest, ReactorLooksUpOwnHistoryOldestFirst) {
  // k = 2, table index = 3 * older + newer.
  std::vector<Move> rules(9, Move::kRock);
  rules[3 * Index(Move::kPaper) + Index(Move::kScissors)] = Move::kPaper;
  rules[3 * Index(Move::kScissors) + Index(Move::kPaper)] = Move::kScissors;
  Agent a(strategy::FixedMemoryReactor{2, rules}, 0);
  a.Record(Move::kPaper, Move::kRock);
  a.Record(Move::kScissors, Move::kRock);
  EXPECT_EQ(a.NextMove(), Move::kPaper);
  a.Record(Move::kPaper, Move::kRock);
  EXPECT_EQ(a.NextMove(), Move::kScissors);
}

TEST(OpponentsTest, BiasedFrequencies) {
  const StrategyKind kind = ParseStrategy("biased:0.6,0.3,0.1");
  Agent a(kind, 5);
  std::array<int, 3> hits{};
  for (int i = 0; i < 100000; ++i) ++hits[Index(a.NextMove())];
  EXPECT_NEAR(hits[0] / 1e5, 0.6, 0.01);
  EXPECT_NEAR(hits[1] / 1e5, 0.3, 0.01);
  EXPECT_NEAR(hits[2] / 1e5, 0.1, 0.01);
}

TEST(OpponentsTest, UniformFrequencies) {
  Agent a(strategy::UniformRandom{}, 8);
  std::array<int, 3> hits{};
  for (int i = 0; i < 60000; ++i) ++hits[Index(a.NextMove())];
  EXPECT_LT(testing::ChiSquareUniform(hits), testing::kChiSquare2Df_p001);
}

TEST(OpponentsTest, HumanPreferenceCalibration) {
  const auto b = std::get<strategy::BiasedRandom>(ParseStrategy("biased:human"));
  EXPECT_NEAR(b.probs[0], 0.3554, 5e-4);
  EXPECT_NEAR(b.probs[1], 0.3210, 5e-4);
  EXPECT_NEAR(b.probs[2], 0.3237, 5e-4);
  EXPECT_DOUBLE_EQ(b.probs[0] + b.probs[1] + b.probs[2], 1.0);
}

TEST(OpponentsTest, ParseAndPrint) {
  for (const char* spec : {"uniform", "wsls", "mimic", "cycle:RPS", "reactor:1:PSR"}) {
    EXPECT_EQ(StrategyToString(ParseStrategy(spec)), spec);
  }
  const auto r = std::get<strategy::FixedMemoryReactor>(ParseStrategy("reactor:3", 4));
  EXPECT_EQ(r.rules.size(), 27u);
  EXPECT_EQ(r, MakeRandomReactor(3, 4));
  EXPECT_NE(r, MakeRandomReactor(3, 5));
}

TEST(OpponentsTest, ParseRejectsBadSpecs) {
  for (const char* spec : {"", "nope", "cycle:", "cycle:RX", "biased:0.5,0.5", "biased:2,-1,0",
                           "reactor:0", "reactor:9", "reactor:2:RPS", "uniform:1"}) {
    EXPECT_THROW(ParseStrategy(spec), std::invalid_argument) << spec;
  }
}

TEST(OpponentsTest, ValidationHappensAtConstruction) {
  EXPECT_THROW((Agent{strategy::Cycle{}, 0}), std::invalid_argument);
  EXPECT_THROW((Agent{strategy::FixedMemoryReactor{2, {}}, 0}), std::invalid_argument);
}

TEST(MatchTest, Deterministic) {
  const EnsembleConfig e;
  const auto a = PlayMatch(e, strategy::UniformRandom{}, 100, 3).log();
  const auto b = PlayMatch(e, strategy::UniformRandom{}, 100, 3).log();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.config.label, "uniform");
  EXPECT_NE(a, PlayMatch(e, strategy::UniformRandom{}, 100, 4).log());
}

TEST(MatchTest, CycleIsExploited) {
  const SessionSummary s = RunMatch(EnsembleConfig{}, strategy::Cycle{MovesFromString("RPS")},
                                    300, 1);
  EXPECT_GT(s.total_ai_score, 250);
}

}  // namespace
}  // namespace rpsai
