// Test-only fixtures and brute-force oracles. Nothing here calls into the
// code paths it is used to check.
#ifndef RPSAI_TESTS_FIXTURES_H_
#define RPSAI_TESTS_FIXTURES_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rpsai/game.h"
#include "rpsai/rng.h"

namespace rpsai::testing {

// Reference 22-round game, five members, F = 5.
inline const std::string kWalkthroughPlayer = "RSPSSPRRPSRSSSPSPSRPSS";

inline const std::vector<std::vector<int>> kWalkthroughScores = {
    {1, -1, 1, -1, 0, 1, 0, 0, -1, 1, 0, 0, 1, 1, 0, 1, -1, -1, -1, -1, -1, 1},
    {1, -1, 1, 0, -1, 1, 0, -1, -1, 0, 0, 1, 0, 0, -1, 1, -1, 1, -1, 1, -1, 1},
    {-1, -1, 0, -1, 0, 0, 1, 1, -1, 1, 0, 1, 0, -1, -1, -1, -1, -1, 0, -1, 0, -1},
    {0, 0, 1, -1, -1, -1, 0, -1, -1, 1, -1, 1, -1, 1, 1, 1, 0, 0, 0, -1, 0, 0},
    {1, -1, 1, -1, -1, 0, 0, 0, 1, -1, 0, 1, 0, 1, -1, -1, 0, 1, -1, -1, 0, 1},
};

// Reference dominant member per round (as printed; see ensemble_test).
inline const std::vector<int> kWalkthroughDominant = {1, 1, 1, 1, 2, 1, 1, 1, 3, 3, 3,
                                                      3, 3, 1, 1, 1, 1, 1, 4, 4, 4, 2};

// Counts by direct enumeration of every (context, next) pair in `history`.
inline std::map<std::pair<std::string, char>, int> BruteForceCounts(const std::string& history,
                                                                    int order) {
  std::map<std::pair<std::string, char>, int> counts;
  for (int n = order; n < static_cast<int>(history.size()); ++n) {
    ++counts[{history.substr(n - order, order), history[n]}];
  }
  return counts;
}

inline std::string RandomHistory(Rng& rng, std::size_t length) {
  static constexpr char kCodes[] = "RPS";
  std::string s;
  for (std::size_t i = 0; i < length; ++i) s.push_back(kCodes[rng.UniformIndex(3)]);
  return s;
}

// Chi-square statistic of observed counts against equal expectation.
inline double ChiSquareUniform(const std::array<int, 3>& counts) {
  const double total = counts[0] + counts[1] + counts[2];
  const double expected = total / 3.0;
  double chi = 0;
  for (int c : counts) chi += (c - expected) * (c - expected) / expected;
  return chi;
}

// Upper 0.001 tail of chi-square with 2 degrees of freedom: -2 ln(0.001).
inline constexpr double kChiSquare2Df_p001 = 13.815510557964274;

}  // namespace rpsai::testing

#endif  // RPSAI_TESTS_FIXTURES_H_
