#include "rpsai/session.h"

#include <algorithm>
#include <sstream>

namespace rpsai {
namespace {

std::string JoinMessages(const std::vector<FieldError>& errors) {
  std::string msg = "invalid session config:";
  for (const auto& e : errors) msg += " " + e.ToString() + ";";
  return msg;
}

const SessionConfig& Validated(const SessionConfig& config) {
  if (auto errors = config.Validate(); !errors.empty()) throw ConfigError(std::move(errors));
  return config;
}

}  // namespace

ConfigError::ConfigError(std::vector<FieldError> errors)
    : std::invalid_argument(JoinMessages(errors)), errors_(std::move(errors)) {}

std::vector<FieldError> SessionConfig::Validate() const {
  std::vector<FieldError> errors = ensemble.Validate();
  for (auto& e : scheme.Validate()) errors.push_back(std::move(e));
  if (rounds < 1) errors.push_back({"rounds", "must be >= 1"});
  if (move_time_limit_s < 30 || move_time_limit_s > 120) {
    errors.push_back({"move_time_limit_s", "must be in [30, 120]"});
  }
  if (warn_time_s < 0 || warn_time_s >= move_time_limit_s) {
    errors.push_back({"warn_time_s", "must be >= 0 and below move_time_limit_s"});
  }
  return errors;
}

Session::Session(SessionConfig config) : ensemble_(Validated(config).ensemble) {
  log_.config = std::move(config);
}

Session Session::Resume(const SessionLog& log) {
  Session session(log.config);
  for (const auto& r : log.rounds) session.PlayRound(r.player_move, r.decision_ms);
  if (session.log_.rounds != log.rounds) {
    throw std::runtime_error("log does not replay under this engine; cannot resume");
  }
  session.log_.late = log.late;
  session.log_.aborted = log.aborted;
  return session;
}

int Session::cumulative_player_points() const {
  return log_.rounds.empty() ? 0 : log_.rounds.back().cumulative_player_points;
}

int Session::cumulative_ai_score() const {
  return log_.rounds.empty() ? 0 : log_.rounds.back().cumulative_ai_score;
}

const RoundRecord& Session::PlayRound(Move player_move, std::int64_t decision_ms) {
  if (finished()) {
    throw SessionError(SessionError::Kind::kFinished, "session already finished");
  }
  if (log_.aborted) throw SessionError(SessionError::Kind::kFinished, "session was aborted");

  // Commit every member's move before the player's move is read.
  ensemble_.Propose();
  const Settlement s = ensemble_.Settle(player_move);

  RoundRecord r;
  r.round = s.round;
  r.player_move = player_move;
  r.multi_move = s.multi_move;
  r.dominant_order = log_.config.ensemble.orders[s.dominant];
  r.member_moves = s.member_moves;
  r.member_scores = s.member_scores;
  r.outcome_ai = s.outcome;
  r.player_points = PlayerPoints(Flip(s.outcome), log_.config.scheme);
  r.cumulative_player_points = cumulative_player_points() + r.player_points;
  r.cumulative_ai_score = cumulative_ai_score() + AiScore(s.outcome);
  r.decision_ms = std::max<std::int64_t>(0, decision_ms);
  log_.rounds.push_back(std::move(r));
  return log_.rounds.back();
}

const RoundRecord& Session::PlayRound(int round, Move player_move, std::int64_t decision_ms) {
  if (finished()) {
    throw SessionError(SessionError::Kind::kFinished, "session already finished");
  }
  if (round != next_round()) {
    throw SessionError(SessionError::Kind::kOutOfOrder,
                       "expected round " + std::to_string(next_round()) + ", got " +
                           std::to_string(round));
  }
  return PlayRound(player_move, decision_ms);
}

void Session::MarkLate(int round, std::int64_t server_ms) {
  if (round < 1 || round > rounds_completed()) {
    throw std::out_of_range("late mark for a round not yet played");
  }
  log_.late.push_back({round, server_ms});
}

SessionSummary Summarize(const SessionLog& log) {
  const auto& cfg = log.config;
  const std::size_t members = cfg.ensemble.orders.size();
  SessionSummary s;
  s.rounds_configured = cfg.rounds;
  s.rounds_played = static_cast<int>(log.rounds.size());
  s.complete = log.complete();
  s.orders = cfg.ensemble.orders;
  s.per_member_total_scores.assign(members, 0);
  s.dominance_occupancy.assign(members, 0);

  int cum_score = 0;
  int cum_points = 0;
  int previous_dominant = -1;
  for (const auto& r : log.rounds) {
    const Outcome o = Judge(r.multi_move, r.player_move);
    switch (o) {
      case Outcome::kWin:
        ++s.wins;
        break;
      case Outcome::kDraw:
        ++s.draws;
        break;
      case Outcome::kLoss:
        ++s.losses;
        break;
    }
    cum_score += AiScore(o);
    cum_points += PlayerPoints(Flip(o), cfg.scheme);
    s.cumulative_ai_score.push_back(cum_score);
    s.cumulative_player_points.push_back(cum_points);
    ++s.move_preference_counts[Index(r.player_move)];
    for (std::size_t k = 0; k < members && k < r.member_moves.size(); ++k) {
      s.per_member_total_scores[k] += AiScore(Judge(r.member_moves[k], r.player_move));
    }
    auto it = std::find(s.orders.begin(), s.orders.end(), r.dominant_order);
    if (it != s.orders.end()) ++s.dominance_occupancy[it - s.orders.begin()];
    if (previous_dominant >= 0 && previous_dominant != r.dominant_order) ++s.switches;
    previous_dominant = r.dominant_order;
  }
  s.total_ai_score = s.wins - s.losses;
  s.player_virtual_points = cum_points;
  s.reward = Reward(s.player_virtual_points, cfg.scheme);
  return s;
}

std::string ReplayVerdict::Describe() const {
  std::ostringstream out;
  out << (match ? "match" : "mismatch") << " (" << summary.rounds_played << " rounds)";
  for (const auto& m : mismatches) {
    out << "\n  round " << m.round << ": " << m.field << " logged=" << m.logged
        << " regenerated=" << m.regenerated;
  }
  return out.str();
}

ReplayVerdict Replay(const SessionLog& log) {
  if (!log.convention.empty() && log.convention != kConvention) {
    throw IncompatibleLogError("log convention '" + log.convention + "' is not '" +
                               std::string(kConvention) + "'");
  }
  ReplayVerdict verdict;
  Session session(log.config);
  const auto& orders = log.config.ensemble.orders;
  auto flag = [&](int round, std::string field, std::string logged, std::string regenerated) {
    verdict.match = false;
    verdict.mismatches.push_back({round, std::move(field), std::move(logged), std::move(regenerated)});
  };
  for (const auto& logged : log.rounds) {
    const RoundRecord& r = session.PlayRound(logged.player_move, logged.decision_ms);
    if (logged.multi_move != r.multi_move) {
      flag(r.round, "multi", std::string(1, MoveCode(logged.multi_move)),
           std::string(1, MoveCode(r.multi_move)));
    }
    if (logged.dominant_order != r.dominant_order) {
      flag(r.round, "dominant", std::to_string(logged.dominant_order),
           std::to_string(r.dominant_order));
    }
    for (std::size_t k = 0; k < orders.size(); ++k) {
      const std::string member = "ai_" + std::to_string(orders[k]);
      if (logged.member_moves[k] != r.member_moves[k]) {
        flag(r.round, "member_moves[" + member + "]",
             std::string(1, MoveCode(logged.member_moves[k])),
             std::string(1, MoveCode(r.member_moves[k])));
      }
      if (logged.member_scores[k] != r.member_scores[k]) {
        flag(r.round, "member_scores[" + member + "]", std::to_string(logged.member_scores[k]),
             std::to_string(r.member_scores[k]));
      }
    }
    if (logged.player_points != r.player_points) {
      flag(r.round, "points", std::to_string(logged.player_points), std::to_string(r.player_points));
    }
    if (logged.cumulative_player_points != r.cumulative_player_points) {
      flag(r.round, "cum_points", std::to_string(logged.cumulative_player_points),
           std::to_string(r.cumulative_player_points));
    }
    if (logged.cumulative_ai_score != r.cumulative_ai_score) {
      flag(r.round, "cum_score", std::to_string(logged.cumulative_ai_score),
           std::to_string(r.cumulative_ai_score));
    }
  }
  verdict.summary = Summarize(log);
  return verdict;
}

}  // namespace rpsai
