#ifndef RPSAI_OPPONENTS_H_
#define RPSAI_OPPONENTS_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rpsai/ensemble.h"
#include "rpsai/game.h"
#include "rpsai/rng.h"
#include "rpsai/session.h"

namespace rpsai {

// Synthetic players standing in for human subjects.
namespace strategy {

struct UniformRandom {
  friend bool operator==(const UniformRandom&, const UniformRandom&) = default;
};

struct BiasedRandom {
  std::array<double, 3> probs{};  // R, P, S
  friend bool operator==(const BiasedRandom&, const BiasedRandom&) = default;
};

struct Cycle {
  std::vector<Move> pattern;
  friend bool operator==(const Cycle&, const Cycle&) = default;
};

// Repeats a winning move; after a draw or a loss plays Beats(own last move).
struct WinStayLoseShift {
  friend bool operator==(const WinStayLoseShift&, const WinStayLoseShift&) = default;
};

// Deterministic function of the agent's own last k moves. `rules` has 3^k
// entries indexed by the base-3 number of those moves (oldest most
// significant, R=0 P=1 S=2). Plays uniformly at random until k moves exist.
struct FixedMemoryReactor {
  int k = 1;
  std::vector<Move> rules;
  friend bool operator==(const FixedMemoryReactor&, const FixedMemoryReactor&) = default;
};

// Plays whatever the AI played last round.
struct MimicLastAIMove {
  friend bool operator==(const MimicLastAIMove&, const MimicLastAIMove&) = default;
};

}  // namespace strategy

using StrategyKind =
    std::variant<strategy::UniformRandom, strategy::BiasedRandom, strategy::Cycle,
                 strategy::WinStayLoseShift, strategy::FixedMemoryReactor,
                 strategy::MimicLastAIMove>;

// Mean R/P/S counts of the 52 human subjects over 300 rounds, as
// probabilities.
inline constexpr std::array<double, 3> kHumanPreference = {106.6098 / 300, 96.29268 / 300,
                                                           97.09756 / 300};

// Throws std::invalid_argument for a malformed strategy.
void ValidateStrategy(const StrategyKind& kind);

// CLI form: `uniform`, `biased:<pR>,<pP>,<pS>`, `biased:human`, `cycle:RPS`,
// `wsls`, `mimic`, `reactor:<k>:<3^k codes>`, `reactor:<k>` (rule table drawn
// from `seed`). Throws std::invalid_argument.
StrategyKind ParseStrategy(std::string_view spec, std::uint64_t seed = 0);
std::string StrategyToString(const StrategyKind& kind);

// Random complete rule table for a k-memory reactor.
strategy::FixedMemoryReactor MakeRandomReactor(int k, std::uint64_t seed);

// Deterministic strategies ignore the seed once their history is full.
bool IsDeterministic(const StrategyKind& kind);

class Agent {
 public:
  // Validates at construction, never at play time.
  Agent(StrategyKind kind, std::uint64_t seed);

  const StrategyKind& kind() const { return kind_; }
  const std::vector<Move>& own_history() const { return own_history_; }
  const std::vector<Move>& opponent_history() const { return opponent_history_; }

  Move NextMove();
  void Record(Move own, Move opponent);

 private:
  Move RandomMove() { return MoveFromIndex(static_cast<int>(rng_.UniformIndex(3))); }

  StrategyKind kind_;
  std::vector<Move> own_history_;
  std::vector<Move> opponent_history_;
  Rng rng_;
};

// The agent's seed is derived from `seed`; the ensemble's seed is `seed`.
Session PlayMatch(const EnsembleConfig& ensemble, const StrategyKind& agent, int rounds,
                  std::uint64_t seed);
SessionSummary RunMatch(const EnsembleConfig& ensemble, const StrategyKind& agent, int rounds,
                        std::uint64_t seed);

}  // namespace rpsai

#endif  // RPSAI_OPPONENTS_H_
