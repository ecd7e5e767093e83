#include "rpsai/ensemble.h"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace rpsai {

std::vector<FieldError> EnsembleConfig::Validate() const {
  std::vector<FieldError> errors;
  if (orders.empty()) errors.push_back({"orders", "must not be empty"});
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] < 1 || orders[i] > kMaxOrder) {
      errors.push_back({"orders", "each order must be in [1, " + std::to_string(kMaxOrder) + "]"});
      break;
    }
    if (i > 0 && orders[i] <= orders[i - 1]) {
      errors.push_back({"orders", "must be strictly increasing"});
      break;
    }
  }
  if (focus_length < 1) errors.push_back({"focus_length", "must be >= 1"});
  return errors;
}

int RollingScore(const ScoreHistory& history, std::size_t member, int round, int focus_length) {
  if (member >= history.size()) throw std::out_of_range("member index out of range");
  const auto& scores = history[member];
  const int first = std::max(1, round - focus_length);
  const int last = std::min<int>(round - 1, static_cast<int>(scores.size()));
  int sum = 0;
  for (int r = first; r <= last; ++r) sum += scores[r - 1];
  return sum;
}

SelectionTrace SelectDominant(const ScoreHistory& history, int round, int focus_length,
                              std::optional<int> previous) {
  SelectionTrace trace;
  trace.round = round;
  trace.window_start = std::max(1, round - focus_length);
  trace.window_end = round - 1;
  if (round <= 1) trace.window_start = 1;
  trace.window_scores.reserve(history.size());
  for (std::size_t k = 0; k < history.size(); ++k) {
    trace.window_scores.push_back(RollingScore(history, k, round, focus_length));
  }
  // First maximum = lowest position among ties.
  if (!trace.window_scores.empty()) {
    trace.chosen = static_cast<int>(
        std::max_element(trace.window_scores.begin(), trace.window_scores.end()) -
        trace.window_scores.begin());
  }
  trace.switched = previous.has_value() && *previous != trace.chosen;
  return trace;
}

Ensemble::Ensemble(EnsembleConfig config) : config_(std::move(config)) {
  if (auto errors = config_.Validate(); !errors.empty()) {
    std::string msg = "invalid ensemble config:";
    for (const auto& e : errors) msg += " " + e.ToString() + ";";
    throw std::invalid_argument(msg);
  }
  members_.reserve(config_.orders.size());
  streams_.reserve(config_.orders.size());
  for (int order : config_.orders) {
    members_.emplace_back(order);
    streams_.emplace_back(DeriveSeed(config_.seed, static_cast<std::uint64_t>(order)));
  }
  score_history_.resize(members_.size());
  traces_.push_back(SelectDominant(score_history_, 1, config_.focus_length));
  dominant_ = traces_.back().chosen;
}

const Proposal& Ensemble::Propose() {
  if (pending_) throw std::logic_error("round " + std::to_string(round_) + " already proposed");
  Proposal p;
  p.round = round_;
  p.member_moves.reserve(members_.size());
  for (std::size_t k = 0; k < members_.size(); ++k) {
    p.member_moves.push_back(members_[k].Act(player_history_, streams_[k]));
  }
  p.dominant = dominant_;
  p.move = p.member_moves[dominant_];
  pending_ = std::move(p);
  return *pending_;
}

Settlement Ensemble::Settle(Move player_move) {
  if (!pending_) throw std::logic_error("settle without a pending proposal");
  Proposal p = std::move(*pending_);
  pending_.reset();

  Settlement s;
  s.round = p.round;
  s.player_move = player_move;
  s.dominant = p.dominant;
  s.multi_move = p.move;
  s.outcome = Judge(p.move, player_move);
  s.member_scores.reserve(members_.size());
  for (std::size_t k = 0; k < members_.size(); ++k) {
    const int score = AiScore(Judge(p.member_moves[k], player_move));
    score_history_[k].push_back(score);
    s.member_scores.push_back(score);
  }
  s.member_moves = std::move(p.member_moves);

  player_history_.push_back(player_move);
  for (auto& member : members_) member.Observe(player_history_);

  ++round_;
  traces_.push_back(SelectDominant(score_history_, round_, config_.focus_length, dominant_));
  dominant_ = traces_.back().chosen;
  return s;
}

void Ensemble::WriteTraceCsv(std::ostream& out) const {
  out << "round,window_start,window_end";
  for (int order : config_.orders) out << ",score_ai_" << order;
  out << ",chosen,switched\n";
  for (const auto& t : traces_) {
    out << t.round << ',' << t.window_start << ',' << t.window_end;
    for (int s : t.window_scores) out << ',' << s;
    out << ',' << config_.orders[t.chosen] << ',' << (t.switched ? 1 : 0) << '\n';
  }
}

}  // namespace rpsai
