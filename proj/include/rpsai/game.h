#ifndef RPSAI_GAME_H_
#define RPSAI_GAME_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rpsai {

// A configuration problem attributed to one field.
struct FieldError {
  std::string field;
  std::string message;

  std::string ToString() const { return field + ": " + message; }
  friend bool operator==(const FieldError&, const FieldError&) = default;
};

enum class Move : std::uint8_t { kRock = 0, kPaper = 1, kScissors = 2 };

inline constexpr std::array<Move, 3> kAllMoves = {Move::kRock, Move::kPaper,
                                                  Move::kScissors};

constexpr int Index(Move m) { return static_cast<int>(m); }
constexpr Move MoveFromIndex(int i) { return static_cast<Move>(i); }

// Wire code: 'R', 'P' or 'S'.
char MoveCode(Move m);
// Accepts upper- or lower-case codes.
std::optional<Move> ParseMove(char c);
// Strict single-character form used by the session log and the HTTP API.
std::optional<Move> ParseMoveCode(std::string_view s);

std::string MovesToString(std::span<const Move> moves);
// Throws std::invalid_argument on any character outside R/P/S.
std::vector<Move> MovesFromString(std::string_view codes);

// The unique move that defeats m.
constexpr Move Beats(Move m) { return MoveFromIndex((Index(m) + 1) % 3); }

enum class Outcome : std::uint8_t { kWin, kDraw, kLoss };

constexpr Outcome Flip(Outcome o) {
  switch (o) {
    case Outcome::kWin:
      return Outcome::kLoss;
    case Outcome::kLoss:
      return Outcome::kWin;
    case Outcome::kDraw:
      break;
  }
  return Outcome::kDraw;
}

// Outcome of `ai` against `player`, from the AI's side.
constexpr Outcome Judge(Move ai, Move player) {
  if (ai == player) return Outcome::kDraw;
  return ai == Beats(player) ? Outcome::kWin : Outcome::kLoss;
}

// +1 / 0 / -1.
constexpr int AiScore(Outcome o) {
  switch (o) {
    case Outcome::kWin:
      return 1;
    case Outcome::kLoss:
      return -1;
    case Outcome::kDraw:
      break;
  }
  return 0;
}

std::string_view OutcomeName(Outcome o);

// Integer cents. Money never goes through floating point.
struct Money {
  std::int64_t cents = 0;

  std::string ToString() const;  // "72.05"
  double ToDouble() const { return static_cast<double>(cents) / 100.0; }
  friend auto operator<=>(const Money&, const Money&) = default;
};

// Payoff rules of a session. `win_points` is the payoff parameter a (win
// incentive over draw incentive); a = 2 is the neutral game.
struct PayoffScheme {
  int win_points = 2;
  int draw_points = 1;
  int loss_points = 0;
  Money show_up_fee{500};
  // Expected player earnings over 300 rounds of equilibrium play.
  Money target_expected_total{5000};

  std::vector<FieldError> Validate() const;

  // r = 0.45 / (1 + a), the money value of one virtual point.
  double ExchangeRate() const;

  friend bool operator==(const PayoffScheme&, const PayoffScheme&) = default;
};

// Player-side virtual points for one round (outcome from the player's side).
int PlayerPoints(Outcome player_outcome, const PayoffScheme& scheme);

// y = x * 0.45 / (1 + a) + show-up fee, rounded half-up to whole cents.
// Throws std::invalid_argument if x < 0.
Money Reward(std::int64_t virtual_points, const PayoffScheme& scheme);

}  // namespace rpsai

#endif  // RPSAI_GAME_H_
