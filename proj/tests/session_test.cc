#include "rpsai/session.h"

#include <gtest/gtest.h>

#include "fixtures.h"
#include "reference_engine.h"
#include "rpsai/session_log.h"

namespace rpsai {
namespace {

using testing::ContextRule;
using testing::kWalkthroughPlayer;
using testing::RandomHistory;
using testing::ReferenceLog;

SessionConfig SmallConfig(std::uint64_t seed, int rounds = 30) {
  SessionConfig c;
  c.ensemble = EnsembleConfig{{1, 2, 3}, 4, seed};
  c.rounds = rounds;
  return c;
}

Session PlayAll(const SessionConfig& c, const std::string& moves) {
  Session s(c);
  for (char m : moves) s.PlayRound(*ParseMove(m), 100);
  return s;
}

TEST(SessionConfigTest, ValidateListsEveryField) {
  SessionConfig c;
  c.rounds = 0;
  c.move_time_limit_s = 10;
  c.warn_time_s = 50;
  c.ensemble.orders = {};
  c.scheme.win_points = 1;
  std::vector<std::string> fields;
  for (const auto& e : c.Validate()) fields.push_back(e.field);
  for (const char* f : {"rounds", "move_time_limit_s", "warn_time_s", "orders", "a"}) {
    EXPECT_NE(std::find(fields.begin(), fields.end(), f), fields.end()) << f;
  }
  EXPECT_THROW(Session{c}, ConfigError);
}

TEST(SessionTest, RecordsAndCumulatives) {
  Rng rng(1);
  Session s = PlayAll(SmallConfig(3), RandomHistory(rng, 30));
  ASSERT_TRUE(s.finished());
  int points = 0;
  int score = 0;
  for (const auto& r : s.log().rounds) {
    const Outcome o = Judge(r.multi_move, r.player_move);
    EXPECT_EQ(r.outcome_ai, o);
    EXPECT_EQ(r.player_points, PlayerPoints(Flip(o), s.config().scheme));
    points += r.player_points;
    score += AiScore(o);
    EXPECT_EQ(r.cumulative_player_points, points);
    EXPECT_EQ(r.cumulative_ai_score, score);
  }
  EXPECT_EQ(s.cumulative_ai_score(), score);
  EXPECT_THROW(s.PlayRound(Move::kRock), SessionError);
}

TEST(SessionTest, OutOfOrderRound) {
  Session s(SmallConfig(1));
  EXPECT_THROW(s.PlayRound(2, Move::kRock), SessionError);
  s.PlayRound(1, Move::kRock);
  EXPECT_THROW(s.PlayRound(1, Move::kRock), SessionError);
}

TEST(SessionLogTest, RoundTrip) {
  SessionConfig c = SmallConfig(99);
  c.label = "pilot 3, a=2%";
  Session s = PlayAll(c, "RPSSPRRPSSRRPSPSRPSRSSPPRRSPSR");
  s.MarkLate(4, 41234);
  const std::string text = FormatLog(s.log());
  const SessionLog parsed = ParseLog(text);
  EXPECT_EQ(parsed, s.log());
  EXPECT_EQ(FormatLog(parsed), text);
  EXPECT_NE(text.find("#late round=4 server_ms=41234\n"), std::string::npos);
  EXPECT_NE(text.find("label=pilot%203%2C%20a%3D2%25"), std::string::npos) << text;
}

TEST(SessionLogTest, Header) {
  const Session s(SmallConfig(5));
  EXPECT_EQ(FormatHeader(s.log()),
            "#rpslog v1 seed=5 orders=1,2,3 F=4 a=2 rounds=30\n"
            "#engine rpsai/1.0.0 convention=player-context-chronological\n"
            "#meta limit_s=40 warn_s=20 label=\n");
}

TEST(SessionLogTest, ParseErrorsCarryLineNumbers) {
  const std::string header = "#rpslog v1 seed=1 orders=1 F=1 a=2 rounds=3\n";
  auto line_of = [](const std::string& text) {
    try {
      ParseLog(text);
    } catch (const LogParseError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("1,R,P,1,P,1,0,0,1,0\n"), 1);
  EXPECT_EQ(line_of(header + "1,R,P,1,P,1,0,0,1\n"), 2);
  EXPECT_EQ(line_of(header + "1,R,P,1,P;R,1,0,0,1,0\n"), 2);
  EXPECT_EQ(line_of(header + "1,R,P,1,P,1,0,0,1,0\n3,R,P,1,P,1,0,0,2,0\n"), 3);
  EXPECT_EQ(line_of(header + "1,R,X,1,P,1,0,0,1,0\n"), 2);
  EXPECT_EQ(line_of(header + "1,R,P,1,P,2,0,0,1,0\n"), 2);
  EXPECT_EQ(line_of(header + "#incomplete\n1,R,P,1,P,1,0,0,1,0\n"), 3);
  EXPECT_EQ(line_of("#rpslog v1 orders=1 F=1 a=2 rounds=3\n"), 1);
}

TEST(SessionLogTest, ReadsIncompleteLogs) {
  Session s = PlayAll(SmallConfig(2), "RPS");
  s.Abort();
  const SessionLog parsed = ParseLog(FormatLog(s.log()));
  EXPECT_TRUE(parsed.aborted);
  EXPECT_FALSE(parsed.complete());
  EXPECT_TRUE(Replay(parsed).match);
}

TEST(SessionLogTest, PercentCoding) {
  for (const std::string s : {"", "plain", "a b,c=d%e\n\xff"}) {
    EXPECT_EQ(PercentDecode(PercentEncode(s)), s);
    EXPECT_EQ(PercentEncode(s).find_first_of(" ,=\n"), std::string::npos);
  }
}

TEST(ReplayTest, MatchesItsOwnLogs) {
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const Session s = PlayAll(SmallConfig(rng.NextU64()), RandomHistory(rng, 30));
    const ReplayVerdict v = Replay(ParseLog(FormatLog(s.log())));
    EXPECT_TRUE(v.match) << v.Describe();
  }
}

TEST(ReplayTest, ReferenceEngineLogReplays) {
  Rng rng(21);
  for (int i = 0; i < 10; ++i) {
    const std::uint64_t seed = rng.NextU64();
    const std::string moves = RandomHistory(rng, 120);
    const std::string text = ReferenceLog({1, 2, 3, 4, 5}, 5, seed, moves);
    const SessionLog log = ParseLog(text);
    const ReplayVerdict v = Replay(log);
    EXPECT_TRUE(v.match) << v.Describe();
    // And the library writes the same bytes.
    SessionConfig c;
    c.ensemble = EnsembleConfig{{1, 2, 3, 4, 5}, 5, seed};
    c.rounds = 120;
    Session s(c);
    for (char m : moves) s.PlayRound(*ParseMove(m), 0);
    EXPECT_EQ(FormatLog(s.log()), text);
  }
}

TEST(ReplayTest, WalkthroughMovesReplayThroughTheReference) {
  const std::string text = ReferenceLog({1, 2, 3, 4, 5}, 5, 2024, kWalkthroughPlayer);
  EXPECT_TRUE(Replay(ParseLog(text)).match);
}

TEST(ReplayTest, OtherContextRulesMismatch) {
  Rng rng(31);
  const std::string moves = RandomHistory(rng, 150);
  for (ContextRule rule : {ContextRule::kPlayerLagged, ContextRule::kAiMoves}) {
    const std::string text = ReferenceLog({1, 2, 3, 4, 5}, 5, 6, moves, rule);
    const ReplayVerdict v = Replay(ParseLog(text));
    EXPECT_FALSE(v.match);
    EXPECT_FALSE(v.mismatches.empty());
  }
}

TEST(ReplayTest, ForeignConventionIsRejected) {
  const std::string text =
      ReferenceLog({1, 2}, 5, 6, "RPSRPS", ContextRule::kAiMoves, "ai-context-chronological");
  EXPECT_THROW(Replay(ParseLog(text)), IncompatibleLogError);
}

TEST(ReplayTest, TamperedRoundsAreLocated) {
  Session s = PlayAll(SmallConfig(4), "RPSSPRRPSSRRPSPSRPSRSSPPRRSPSR");
  SessionLog log = s.log();
  log.rounds[9].multi_move = Beats(log.rounds[9].multi_move);
  const ReplayVerdict v = Replay(log);
  ASSERT_FALSE(v.match);
  EXPECT_EQ(v.mismatches.front().round, 10);
  EXPECT_EQ(v.mismatches.front().field, "multi");
}

// Changing the round-n player move never changes the round-n multi move.
TEST(ReplayTest, CommitmentAcrossLogs) {
  Rng rng(13);
  for (int probe = 0; probe < 25; ++probe) {
    const std::string moves = RandomHistory(rng, 40);
    const std::uint64_t seed = rng.NextU64();
    const std::size_t n = rng.UniformIndex(40);
    std::string altered = moves;
    altered[n] = MoveCode(Beats(*ParseMove(moves[n])));
    const Session a = PlayAll(SmallConfig(seed, 40), moves);
    const Session b = PlayAll(SmallConfig(seed, 40), altered);
    for (std::size_t r = 0; r <= n; ++r) {
      EXPECT_EQ(a.log().rounds[r].multi_move, b.log().rounds[r].multi_move);
      EXPECT_EQ(a.log().rounds[r].member_moves, b.log().rounds[r].member_moves);
    }
  }
}

TEST(ResumeTest, ContinuesExactly) {
  Rng rng(17);
  const std::string moves = RandomHistory(rng, 30);
  const Session whole = PlayAll(SmallConfig(12), moves);
  Session half = PlayAll(SmallConfig(12), moves.substr(0, 13));
  Session resumed = Session::Resume(ParseLog(FormatLog(half.log())));
  EXPECT_EQ(resumed.next_round(), 14);
  for (char m : moves.substr(13)) resumed.PlayRound(*ParseMove(m), 100);
  EXPECT_EQ(resumed.log(), whole.log());
}

TEST(ResumeTest, RejectsTamperedLogs) {
  SessionLog log = PlayAll(SmallConfig(12), "RPSRPS").log();
  log.rounds[2].cumulative_ai_score += 1;
  EXPECT_THROW(Session::Resume(log), std::runtime_error);
}

TEST(SummaryTest, CountsFromMoves) {
  SessionConfig c = SmallConfig(1, 22);
  c.ensemble.orders = {1, 2, 3, 4, 5};
  c.ensemble.focus_length = 5;
  const Session s = PlayAll(c, kWalkthroughPlayer);
  const SessionSummary sum = Summarize(s.log());
  // Counted by hand from the 22-move reference game.
  EXPECT_EQ(sum.move_preference_counts, (std::array<int, 3>{5, 6, 11}));
  EXPECT_EQ(sum.wins + sum.draws + sum.losses, 22);
  EXPECT_EQ(sum.total_ai_score, sum.wins - sum.losses);
  EXPECT_EQ(sum.player_virtual_points, 2 * sum.losses + sum.draws);
  EXPECT_EQ(sum.reward, Reward(sum.player_virtual_points, c.scheme));
  int occupancy = 0;
  for (int o : sum.dominance_occupancy) occupancy += o;
  EXPECT_EQ(occupancy, 22);
  EXPECT_EQ(sum.cumulative_ai_score.size(), 22u);
  EXPECT_EQ(sum.cumulative_ai_score.back(), sum.total_ai_score);
  EXPECT_TRUE(sum.complete);
}

}  // namespace
}  // namespace rpsai
