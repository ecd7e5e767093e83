#ifndef RPSAI_SESSION_H_
#define RPSAI_SESSION_H_

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rpsai/ensemble.h"
#include "rpsai/game.h"
#include "rpsai/session_log.h"

namespace rpsai {

class SessionError : public std::logic_error {
 public:
  enum class Kind { kFinished, kOutOfOrder };
  SessionError(Kind kind, const std::string& what) : std::logic_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// A full session against one player: round loop and append-only log.
//
// Per round the ensemble commits every member's move before the player's
// move is consumed, so a round's AI move depends only on earlier rounds.
class Session {
 public:
  // Throws ConfigError listing every invalid field.
  explicit Session(SessionConfig config);

  // Rebuilds a session from its log by replaying the player's moves. The
  // result continues exactly where the log stopped. Throws std::runtime_error
  // if the log does not replay cleanly.
  static Session Resume(const SessionLog& log);

  const SessionConfig& config() const { return log_.config; }
  const SessionLog& log() const { return log_; }
  const Ensemble& ensemble() const { return ensemble_; }
  int rounds_completed() const { return static_cast<int>(log_.rounds.size()); }
  int next_round() const { return rounds_completed() + 1; }
  bool finished() const { return rounds_completed() >= log_.config.rounds; }
  int cumulative_player_points() const;
  int cumulative_ai_score() const;

  // Plays the next round. Throws SessionError once finished.
  const RoundRecord& PlayRound(Move player_move, std::int64_t decision_ms = 0);
  // Same, but rejects a call for any round other than next_round().
  const RoundRecord& PlayRound(int round, Move player_move, std::int64_t decision_ms = 0);

  // Flags a round as accepted after the time limit.
  void MarkLate(int round, std::int64_t server_ms);
  // Ends the session early; the log is flagged incomplete.
  void Abort() { log_.aborted = true; }

 private:
  Ensemble ensemble_;
  SessionLog log_;
};

struct SessionSummary {
  int rounds_configured = 0;
  int rounds_played = 0;
  bool complete = false;
  // AI side.
  int wins = 0;
  int draws = 0;
  int losses = 0;
  int total_ai_score = 0;
  // Player side.
  int player_virtual_points = 0;
  Money reward;
  std::array<int, 3> move_preference_counts{};  // indexed by Index(Move)
  std::vector<int> orders;
  std::vector<int> per_member_total_scores;
  std::vector<int> dominance_occupancy;
  int switches = 0;
  // Per-round series for cumulative-score plots.
  std::vector<int> cumulative_ai_score;
  std::vector<int> cumulative_player_points;
};

// Recounts every field from the per-round moves. A partial log gives a
// summary with complete = false.
SessionSummary Summarize(const SessionLog& log);

struct Mismatch {
  int round = 0;
  std::string field;
  std::string logged;
  std::string regenerated;
};

struct ReplayVerdict {
  bool match = true;
  std::vector<Mismatch> mismatches;
  SessionSummary summary;

  std::string Describe() const;
};

class IncompatibleLogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Re-runs the engine on the logged seed and player moves and compares every
// member move, dominant order, score and cumulative column. Throws
// IncompatibleLogError for a log written under another context convention.
ReplayVerdict Replay(const SessionLog& log);

}  // namespace rpsai

#endif  // RPSAI_SESSION_H_
