#ifndef RPSAI_MARKOV_PREDICTOR_H_
#define RPSAI_MARKOV_PREDICTOR_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rpsai/game.h"
#include "rpsai/rng.h"

namespace rpsai {

inline constexpr int kMaxOrder = 16;

// Probability of the player's next move, indexed by Index(Move).
using Distribution = std::array<double, 3>;
using CountRow = std::array<std::uint32_t, 3>;

// Sparse counts of (last m player moves, oldest first) -> next player move.
// Context keys are the base-3 number formed by the context moves, most
// significant digit = oldest move.
class TransitionTable {
 public:
  explicit TransitionTable(int order) : order_(order) {}

  int order() const { return order_; }
  std::uint64_t total() const { return total_; }
  std::size_t num_contexts() const { return rows_.size(); }

  void Increment(std::span<const Move> context, Move next);
  // Zero row when the context was never seen.
  CountRow Row(std::span<const Move> context) const;
  std::uint32_t Count(std::span<const Move> context, Move next) const {
    return Row(context)[Index(next)];
  }

  // CSV `context,next,count`, one line per nonzero cell, sorted
  // lexicographically on (context, next) codes.
  void WriteCsv(std::ostream& out) const;
  std::string ToCsv() const;

  friend bool operator==(const TransitionTable&, const TransitionTable&) = default;

 private:
  std::uint32_t Key(std::span<const Move> context) const;

  int order_;
  std::uint64_t total_ = 0;
  std::unordered_map<std::uint32_t, CountRow> rows_;
};

// AI-m: order-m Markov model of the player's own move sequence. Proposes the
// counter to its most likely prediction.
class MarkovPredictor {
 public:
  // Throws std::invalid_argument unless 1 <= order <= kMaxOrder.
  explicit MarkovPredictor(int order);

  int order() const { return table_.order(); }
  const TransitionTable& table() const { return table_; }
  // Number of player moves already folded into the table.
  std::size_t observed() const { return observed_; }

  // Folds in every move of `history` not yet observed. `history` must extend
  // the previously observed one; a shorter history throws
  // std::invalid_argument.
  void Observe(std::span<const Move> history);

  // Row-normalized next-move distribution for the current context (last m
  // moves of `history`); uniform when the context is short or unseen.
  Distribution Predict(std::span<const Move> history) const;

  // Samples a predicted move uniformly among the argmax of the context's
  // counts and returns the move that beats it.
  Move Act(std::span<const Move> history, Rng& rng) const;

  friend bool operator==(const MarkovPredictor&, const MarkovPredictor&) = default;

 private:
  TransitionTable table_;
  std::size_t observed_ = 0;
};

// Counter to a prediction sampled uniformly among the maxima of `d`.
Move CounterToArgmax(const Distribution& d, Rng& rng);

}  // namespace rpsai

#endif  // RPSAI_MARKOV_PREDICTOR_H_
