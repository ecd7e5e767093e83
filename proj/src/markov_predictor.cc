#include "rpsai/markov_predictor.h"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace rpsai {
namespace {

template <typename T>
Move CounterToArgmaxImpl(const std::array<T, 3>& weights, Rng& rng) {
  const T best = *std::max_element(weights.begin(), weights.end());
  std::array<int, 3> tied{};
  int num_tied = 0;
  for (int i = 0; i < 3; ++i) {
    if (weights[i] == best) tied[num_tied++] = i;
  }
  const int predicted = tied[rng.UniformIndex(num_tied)];
  return Beats(MoveFromIndex(predicted));
}

}  // namespace

std::uint32_t TransitionTable::Key(std::span<const Move> context) const {
  if (static_cast<int>(context.size()) != order_) {
    throw std::invalid_argument("context length does not match model order");
  }
  std::uint32_t key = 0;
  for (Move m : context) key = key * 3 + static_cast<std::uint32_t>(Index(m));
  return key;
}

void TransitionTable::Increment(std::span<const Move> context, Move next) {
  ++rows_[Key(context)][Index(next)];
  ++total_;
}

CountRow TransitionTable::Row(std::span<const Move> context) const {
  auto it = rows_.find(Key(context));
  return it == rows_.end() ? CountRow{} : it->second;
}

void TransitionTable::WriteCsv(std::ostream& out) const {
  std::vector<std::tuple<std::string, char, std::uint32_t>> cells;
  for (const auto& [key, row] : rows_) {
    std::string context(order_, 'R');
    std::uint32_t k = key;
    for (int i = order_ - 1; i >= 0; --i) {
      context[i] = MoveCode(MoveFromIndex(static_cast<int>(k % 3)));
      k /= 3;
    }
    for (Move next : kAllMoves) {
      if (row[Index(next)] > 0) cells.emplace_back(context, MoveCode(next), row[Index(next)]);
    }
  }
  std::sort(cells.begin(), cells.end());
  out << "context,next,count\n";
  for (const auto& [context, next, count] : cells) {
    out << context << ',' << next << ',' << count << '\n';
  }
}

std::string TransitionTable::ToCsv() const {
  std::ostringstream out;
  WriteCsv(out);
  return out.str();
}

MarkovPredictor::MarkovPredictor(int order) : table_(order) {
  if (order < 1 || order > kMaxOrder) {
    throw std::invalid_argument("Markov order must be in [1, " + std::to_string(kMaxOrder) +
                                "], got " + std::to_string(order));
  }
}

void MarkovPredictor::Observe(std::span<const Move> history) {
  if (history.size() < observed_) {
    throw std::invalid_argument("history is shorter than the already observed " +
                                std::to_string(observed_) + " moves");
  }
  const std::size_t m = static_cast<std::size_t>(order());
  for (std::size_t n = observed_; n < history.size(); ++n) {
    if (n >= m) table_.Increment(history.subspan(n - m, m), history[n]);
  }
  observed_ = history.size();
}

Distribution MarkovPredictor::Predict(std::span<const Move> history) const {
  constexpr Distribution kUniform = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  const std::size_t m = static_cast<std::size_t>(order());
  if (history.size() < m) return kUniform;
  const CountRow row = table_.Row(history.last(m));
  const double sum = static_cast<double>(row[0]) + row[1] + row[2];
  if (sum == 0) return kUniform;
  return {row[0] / sum, row[1] / sum, row[2] / sum};
}

Move MarkovPredictor::Act(std::span<const Move> history, Rng& rng) const {
  const std::size_t m = static_cast<std::size_t>(order());
  // Integer counts give exact ties; an empty row ties all three.
  const CountRow row = history.size() < m ? CountRow{} : table_.Row(history.last(m));
  return CounterToArgmaxImpl(row, rng);
}

Move CounterToArgmax(const Distribution& d, Rng& rng) { return CounterToArgmaxImpl(d, rng); }

}  // namespace rpsai
