#ifndef RPSAI_SESSION_LOG_H_
#define RPSAI_SESSION_LOG_H_

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rpsai/ensemble.h"
#include "rpsai/game.h"

namespace rpsai {

inline constexpr std::string_view kEngineVersion = "rpsai/1.0.0";
// Identifies how member contexts are built. Logs written under a different
// convention cannot be replayed.
inline constexpr std::string_view kConvention = "player-context-chronological";

struct SessionConfig {
  EnsembleConfig ensemble;
  PayoffScheme scheme;
  int rounds = 300;
  int move_time_limit_s = 40;
  int warn_time_s = 20;
  std::string label;

  std::vector<FieldError> Validate() const;

  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

// Thrown for a rejected config; carries every offending field.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<FieldError> errors);
  const std::vector<FieldError>& errors() const { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

struct RoundRecord {
  int round = 1;
  Move player_move = Move::kRock;
  Move multi_move = Move::kRock;
  int dominant_order = 1;
  std::vector<Move> member_moves;  // aligned with config orders
  std::vector<int> member_scores;
  Outcome outcome_ai = Outcome::kDraw;
  int player_points = 0;
  int cumulative_player_points = 0;
  int cumulative_ai_score = 0;
  std::int64_t decision_ms = 0;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

// A move accepted after the time limit. Recorded, never enforced.
struct LateMark {
  int round = 0;
  std::int64_t server_ms = 0;

  friend bool operator==(const LateMark&, const LateMark&) = default;
};

// In-memory form of the append-only session log:
//
//   #rpslog v1 seed=<u64> orders=<csv> F=<int> a=<int> rounds=<int>
//   #engine <version> convention=<tag>
//   #meta limit_s=<int> warn_s=<int> label=<percent-encoded>
//   n,player,multi,dominant,member_moves(;),member_scores(;),points,cum_points,cum_score,ms
//   #late round=<n> server_ms=<ms>
//   #incomplete
struct SessionLog {
  SessionConfig config;
  std::string engine{kEngineVersion};
  std::string convention{kConvention};
  std::vector<RoundRecord> rounds;
  std::vector<LateMark> late;
  bool aborted = false;

  bool complete() const {
    return !aborted && static_cast<int>(rounds.size()) == config.rounds;
  }

  friend bool operator==(const SessionLog&, const SessionLog&) = default;
};

class LogParseError : public std::runtime_error {
 public:
  LogParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

std::string FormatHeader(const SessionLog& log);  // the three header lines
std::string FormatRoundLine(const RoundRecord& record);  // no trailing newline
std::string FormatLateLine(const LateMark& mark);
std::string FormatLog(const SessionLog& log);

// Throws LogParseError with the 1-based line number of the first problem.
SessionLog ParseLog(std::string_view text);
SessionLog ReadLogFile(const std::string& path);

std::string PercentEncode(std::string_view s);
std::string PercentDecode(std::string_view s);

}  // namespace rpsai

#endif  // RPSAI_SESSION_LOG_H_
