#include "rpsai/game.h"

#include <cstdio>
#include <stdexcept>

namespace rpsai {

char MoveCode(Move m) {
  static constexpr char kCodes[] = {'R', 'P', 'S'};
  return kCodes[Index(m)];
}

std::optional<Move> ParseMove(char c) {
  switch (c) {
    case 'R':
    case 'r':
      return Move::kRock;
    case 'P':
    case 'p':
      return Move::kPaper;
    case 'S':
    case 's':
      return Move::kScissors;
    default:
      return std::nullopt;
  }
}

std::optional<Move> ParseMoveCode(std::string_view s) {
  if (s.size() != 1) return std::nullopt;
  switch (s[0]) {
    case 'R':
      return Move::kRock;
    case 'P':
      return Move::kPaper;
    case 'S':
      return Move::kScissors;
    default:
      return std::nullopt;
  }
}

std::string MovesToString(std::span<const Move> moves) {
  std::string out;
  out.reserve(moves.size());
  for (Move m : moves) out.push_back(MoveCode(m));
  return out;
}

std::vector<Move> MovesFromString(std::string_view codes) {
  std::vector<Move> out;
  out.reserve(codes.size());
  for (char c : codes) {
    auto m = ParseMoveCode(std::string_view(&c, 1));
    if (!m) throw std::invalid_argument("invalid move code '" + std::string(1, c) + "'");
    out.push_back(*m);
  }
  return out;
}

std::string_view OutcomeName(Outcome o) {
  switch (o) {
    case Outcome::kWin:
      return "win";
    case Outcome::kDraw:
      return "draw";
    case Outcome::kLoss:
      return "loss";
  }
  return "draw";
}

std::string Money::ToString() const {
  const std::int64_t abs_cents = cents < 0 ? -cents : cents;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", cents < 0 ? "-" : "",
                static_cast<long long>(abs_cents / 100),
                static_cast<long long>(abs_cents % 100));
  return buf;
}

std::vector<FieldError> PayoffScheme::Validate() const {
  std::vector<FieldError> errors;
  if (win_points <= draw_points) errors.push_back({"a", "win points must exceed draw points (a > 1)"});
  if (draw_points < loss_points) errors.push_back({"draw_points", "must be >= loss points"});
  if (loss_points < 0) errors.push_back({"loss_points", "must be >= 0"});
  if (show_up_fee.cents < 0) errors.push_back({"show_up_fee", "must be >= 0"});
  return errors;
}

double PayoffScheme::ExchangeRate() const { return 0.45 / (1.0 + win_points); }

int PlayerPoints(Outcome player_outcome, const PayoffScheme& scheme) {
  switch (player_outcome) {
    case Outcome::kWin:
      return scheme.win_points;
    case Outcome::kDraw:
      return scheme.draw_points;
    case Outcome::kLoss:
      break;
  }
  return scheme.loss_points;
}

Money Reward(std::int64_t virtual_points, const PayoffScheme& scheme) {
  if (virtual_points < 0) throw std::invalid_argument("virtual points must be >= 0");
  // x * 0.45 / (1 + a) RMB = x * 45 / (1 + a) cents, rounded half-up.
  const std::int64_t denom = 1 + scheme.win_points;
  const std::int64_t num = virtual_points * 45;
  const std::int64_t cents = (2 * num + denom) / (2 * denom);
  return Money{cents + scheme.show_up_fee.cents};
}

}  // namespace rpsai
