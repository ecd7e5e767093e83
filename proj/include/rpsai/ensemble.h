#ifndef RPSAI_ENSEMBLE_H_
#define RPSAI_ENSEMBLE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rpsai/game.h"
#include "rpsai/markov_predictor.h"
#include "rpsai/rng.h"

namespace rpsai {

struct EnsembleConfig {
  std::vector<int> orders = {1, 2, 3, 4, 5};
  int focus_length = 5;
  std::uint64_t seed = 0;

  std::vector<FieldError> Validate() const;

  friend bool operator==(const EnsembleConfig&, const EnsembleConfig&) = default;
};

// Per-member, per-round AI scores in {-1, 0, +1}; score_history[k][r] is
// member k's score in round r + 1.
using ScoreHistory = std::vector<std::vector<int>>;

// How the dominant member for one round was picked.
struct SelectionTrace {
  int round = 1;
  // Inclusive 1-based bounds. Empty window (round 1) is start = 1, end = 0.
  int window_start = 1;
  int window_end = 0;
  std::vector<int> window_scores;
  int chosen = 0;  // member position
  bool switched = false;

  int window_length() const { return window_end - window_start + 1; }
};

// Sum of `member`'s scores over rounds max(1, round - F) .. round - 1.
// Throws std::out_of_range for a bad member index.
int RollingScore(const ScoreHistory& history, std::size_t member, int round, int focus_length);

// Window argmax; ties go to the lowest member position. `previous` is the
// member that played the prior round and only feeds the trace's switch flag.
SelectionTrace SelectDominant(const ScoreHistory& history, int round, int focus_length,
                              std::optional<int> previous = std::nullopt);

struct Proposal {
  int round = 1;
  std::vector<Move> member_moves;
  int dominant = 0;
  Move move = Move::kRock;
};

struct Settlement {
  int round = 1;
  Move player_move = Move::kRock;
  std::vector<Move> member_moves;
  std::vector<int> member_scores;
  int dominant = 0;
  Move multi_move = Move::kRock;
  Outcome outcome = Outcome::kDraw;  // AI side
};

// The multi-AI: every member plays virtually each round; the member with the
// best score over the last F rounds supplies the ensemble's move.
//
// Each member draws from its own stream seeded by (seed, order), so removing
// a member never changes another member's play.
class Ensemble {
 public:
  // Throws std::invalid_argument on an invalid config.
  explicit Ensemble(EnsembleConfig config);

  const EnsembleConfig& config() const { return config_; }
  std::size_t size() const { return members_.size(); }
  // The round the next Propose() is for.
  int round() const { return round_; }
  int dominant() const { return dominant_; }
  int dominant_order() const { return config_.orders[dominant_]; }
  const MarkovPredictor& member(std::size_t k) const { return members_.at(k); }
  const ScoreHistory& score_history() const { return score_history_; }
  const std::vector<Move>& player_history() const { return player_history_; }
  // One trace per round, including the pending one.
  const std::vector<SelectionTrace>& traces() const { return traces_; }
  bool has_pending() const { return pending_.has_value(); }

  // Every member commits its move for the current round. Throws
  // std::logic_error if a proposal is already pending.
  const Proposal& Propose();

  // Scores the pending proposal against the player's move, updates every
  // member's table and picks the next dominant member. Throws
  // std::logic_error without a pending proposal.
  Settlement Settle(Move player_move);

  // CSV `round,window_start,window_end,score_ai_<m>...,chosen,switched`.
  void WriteTraceCsv(std::ostream& out) const;

 private:
  EnsembleConfig config_;
  std::vector<MarkovPredictor> members_;
  std::vector<Rng> streams_;
  ScoreHistory score_history_;
  std::vector<Move> player_history_;
  std::vector<SelectionTrace> traces_;
  std::optional<Proposal> pending_;
  int dominant_ = 0;
  int round_ = 1;
};

}  // namespace rpsai

#endif  // RPSAI_ENSEMBLE_H_
