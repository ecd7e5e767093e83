#include "rpsai/opponents.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rpsai {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::size_t Pow3(int k) {
  std::size_t n = 1;
  for (int i = 0; i < k; ++i) n *= 3;
  return n;
}

int ParseInt(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  }
  return v;
}

double ParseDouble(std::string_view s) {
  // std::from_chars for double is not available on every toolchain we target.
  std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw std::invalid_argument("bad number '" + buf + "'");
  }
  return v;
}

}  // namespace

void ValidateStrategy(const StrategyKind& kind) {
  std::visit(
      Overloaded{
          [](const strategy::BiasedRandom& b) {
            double sum = 0;
            for (double p : b.probs) {
              if (!(p >= 0)) throw std::invalid_argument("biased: probabilities must be >= 0");
              sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-12) {
              throw std::invalid_argument("biased: probabilities must sum to 1");
            }
          },
          [](const strategy::Cycle& c) {
            if (c.pattern.empty()) throw std::invalid_argument("cycle: pattern must not be empty");
          },
          [](const strategy::FixedMemoryReactor& r) {
            if (r.k < 1 || r.k > 8) throw std::invalid_argument("reactor: k must be in [1, 8]");
            if (r.rules.size() != Pow3(r.k)) {
              throw std::invalid_argument("reactor: rule table needs " + std::to_string(Pow3(r.k)) +
                                          " entries, one per context; got " +
                                          std::to_string(r.rules.size()));
            }
          },
          [](const auto&) {},
      },
      kind);
}

strategy::FixedMemoryReactor MakeRandomReactor(int k, std::uint64_t seed) {
  if (k < 1 || k > 8) throw std::invalid_argument("reactor: k must be in [1, 8]");
  Rng rng(seed);
  strategy::FixedMemoryReactor r{k, {}};
  r.rules.reserve(Pow3(k));
  for (std::size_t i = 0; i < Pow3(k); ++i) {
    r.rules.push_back(MoveFromIndex(static_cast<int>(rng.UniformIndex(3))));
  }
  return r;
}

StrategyKind ParseStrategy(std::string_view spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  StrategyKind kind;
  if (name == "uniform" && arg.empty()) {
    kind = strategy::UniformRandom{};
  } else if (name == "wsls" && arg.empty()) {
    kind = strategy::WinStayLoseShift{};
  } else if (name == "mimic" && arg.empty()) {
    kind = strategy::MimicLastAIMove{};
  } else if (name == "cycle") {
    kind = strategy::Cycle{MovesFromString(arg)};
  } else if (name == "biased") {
    if (arg == "human") {
      strategy::BiasedRandom b{kHumanPreference};
      // Means are rounded; renormalize.
      const double sum = b.probs[0] + b.probs[1] + b.probs[2];
      for (double& p : b.probs) p /= sum;
      kind = b;
    } else {
      strategy::BiasedRandom b;
      std::size_t start = 0;
      for (int i = 0; i < 3; ++i) {
        const auto comma = arg.find(',', start);
        if ((i < 2) == (comma == std::string_view::npos)) {
          throw std::invalid_argument("biased: expected three comma-separated probabilities");
        }
        b.probs[i] = ParseDouble(arg.substr(start, comma - start));
        start = comma + 1;
      }
      // Accept specs like 0.355,0.321,0.324 that are only sum-to-1 up to print
      // precision.
      const double sum = b.probs[0] + b.probs[1] + b.probs[2];
      if (std::abs(sum - 1.0) < 1e-2 && sum > 0) {
        for (double& p : b.probs) p /= sum;
      }
      kind = b;
    }
  } else if (name == "reactor") {
    const auto sep = arg.find(':');
    const int k = ParseInt(arg.substr(0, sep));
    if (sep == std::string_view::npos) {
      kind = MakeRandomReactor(k, seed);
    } else {
      kind = strategy::FixedMemoryReactor{k, MovesFromString(arg.substr(sep + 1))};
    }
  } else {
    throw std::invalid_argument("unknown strategy '" + std::string(spec) + "'");
  }
  ValidateStrategy(kind);
  return kind;
}

std::string StrategyToString(const StrategyKind& kind) {
  return std::visit(
      Overloaded{
          [](const strategy::UniformRandom&) -> std::string { return "uniform"; },
          [](const strategy::BiasedRandom& b) -> std::string {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "biased:%.6g,%.6g,%.6g", b.probs[0], b.probs[1],
                          b.probs[2]);
            return buf;
          },
          [](const strategy::Cycle& c) -> std::string { return "cycle:" + MovesToString(c.pattern); },
          [](const strategy::WinStayLoseShift&) -> std::string { return "wsls"; },
          [](const strategy::FixedMemoryReactor& r) -> std::string {
            return "reactor:" + std::to_string(r.k) + ":" + MovesToString(r.rules);
          },
          [](const strategy::MimicLastAIMove&) -> std::string { return "mimic"; },
      },
      kind);
}

bool IsDeterministic(const StrategyKind& kind) {
  return !std::holds_alternative<strategy::UniformRandom>(kind) &&
         !std::holds_alternative<strategy::BiasedRandom>(kind);
}

Agent::Agent(StrategyKind kind, std::uint64_t seed) : kind_(std::move(kind)), rng_(seed) {
  ValidateStrategy(kind_);
}

Move Agent::NextMove() {
  const std::size_t n = own_history_.size();
  return std::visit(
      Overloaded{
          [&](const strategy::UniformRandom&) { return RandomMove(); },
          [&](const strategy::BiasedRandom& b) {
            const double u = rng_.Uniform01();
            if (u < b.probs[0]) return Move::kRock;
            if (u < b.probs[0] + b.probs[1]) return Move::kPaper;
            return Move::kScissors;
          },
          [&](const strategy::Cycle& c) { return c.pattern[n % c.pattern.size()]; },
          [&](const strategy::WinStayLoseShift&) {
            if (n == 0) return RandomMove();
            const Move last = own_history_.back();
            return Judge(last, opponent_history_.back()) == Outcome::kWin ? last : Beats(last);
          },
          [&](const strategy::FixedMemoryReactor& r) {
            const std::size_t k = static_cast<std::size_t>(r.k);
            if (n < k) return RandomMove();
            std::size_t key = 0;
            for (std::size_t i = n - k; i < n; ++i) key = key * 3 + Index(own_history_[i]);
            return r.rules[key];
          },
          [&](const strategy::MimicLastAIMove&) {
            return n == 0 ? RandomMove() : opponent_history_.back();
          },
      },
      kind_);
}

void Agent::Record(Move own, Move opponent) {
  own_history_.push_back(own);
  opponent_history_.push_back(opponent);
}

Session PlayMatch(const EnsembleConfig& ensemble, const StrategyKind& agent_kind, int rounds,
                  std::uint64_t seed) {
  SessionConfig cfg;
  cfg.ensemble = ensemble;
  cfg.ensemble.seed = seed;
  cfg.rounds = rounds;
  cfg.label = StrategyToString(agent_kind);
  Session session(std::move(cfg));
  Agent agent(agent_kind, DeriveSeed(seed, kAgentStreamTag));
  for (int n = 0; n < rounds; ++n) {
    const Move own = agent.NextMove();
    const RoundRecord& r = session.PlayRound(own, 0);
    agent.Record(own, r.multi_move);
  }
  return session;
}

SessionSummary RunMatch(const EnsembleConfig& ensemble, const StrategyKind& agent, int rounds,
                        std::uint64_t seed) {
  return Summarize(PlayMatch(ensemble, agent, rounds, seed).log());
}

}  // namespace rpsai
