#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "rpsai/analysis.h"
#include "rpsai/ensemble.h"
#include "rpsai/game.h"
#include "rpsai/markov_predictor.h"
#include "rpsai/opponents.h"
#include "rpsai/session.h"
#include "rpsai/session_log.h"

namespace py = pybind11;

namespace rpsai {
namespace {

// Moves cross the boundary as one-letter strings.
Move ToMove(const std::string& s) {
  const auto m = ParseMoveCode(s);
  if (!m) throw py::value_error("move must be 'R', 'P' or 'S', got '" + s + "'");
  return *m;
}

std::string Code(Move m) { return std::string(1, MoveCode(m)); }

std::vector<Move> ToMoves(const std::string& s) {
  try {
    return MovesFromString(s);
  } catch (const std::invalid_argument& e) {
    throw py::value_error(e.what());
  }
}

EnsembleConfig MakeEnsembleConfig(std::vector<int> orders, int focus_length, std::uint64_t seed) {
  EnsembleConfig c{std::move(orders), focus_length, seed};
  if (auto errors = c.Validate(); !errors.empty()) throw py::value_error(errors.front().ToString());
  return c;
}

py::dict RecordDict(const RoundRecord& r, const std::vector<int>& orders) {
  py::dict members;
  py::dict scores;
  for (std::size_t k = 0; k < orders.size(); ++k) {
    members[py::int_(orders[k])] = Code(r.member_moves[k]);
    scores[py::int_(orders[k])] = r.member_scores[k];
  }
  py::dict d;
  d["round"] = r.round;
  d["player_move"] = Code(r.player_move);
  d["ai_move"] = Code(r.multi_move);
  d["dominant_order"] = r.dominant_order;
  d["member_moves"] = members;
  d["member_scores"] = scores;
  d["outcome_ai"] = std::string(OutcomeName(r.outcome_ai));
  d["player_points"] = r.player_points;
  d["cumulative_player_points"] = r.cumulative_player_points;
  d["cumulative_ai_score"] = r.cumulative_ai_score;
  return d;
}

py::dict SummaryDict(const SessionSummary& s) {
  py::dict d;
  d["rounds"] = s.rounds_played;
  d["complete"] = s.complete;
  d["wins"] = s.wins;
  d["draws"] = s.draws;
  d["losses"] = s.losses;
  d["total_ai_score"] = s.total_ai_score;
  d["player_virtual_points"] = s.player_virtual_points;
  d["reward"] = s.reward.ToString();
  d["move_preference_counts"] = py::dict(py::arg("R") = s.move_preference_counts[0],
                                         py::arg("P") = s.move_preference_counts[1],
                                         py::arg("S") = s.move_preference_counts[2]);
  py::dict per_member;
  py::dict occupancy;
  for (std::size_t k = 0; k < s.orders.size(); ++k) {
    per_member[py::int_(s.orders[k])] = s.per_member_total_scores[k];
    occupancy[py::int_(s.orders[k])] = s.dominance_occupancy[k];
  }
  d["per_member_total_scores"] = per_member;
  d["dominance_occupancy"] = occupancy;
  d["switches"] = s.switches;
  d["cumulative_ai_score"] = s.cumulative_ai_score;
  return d;
}

SessionLog Parse(const std::string& text) {
  try {
    return ParseLog(text);
  } catch (const LogParseError& e) {
    throw py::value_error(e.what());
  }
}

}  // namespace
}  // namespace rpsai

PYBIND11_MODULE(_rpsai, m) {
  using namespace rpsai;
  m.doc() = "Markov-ensemble rock-paper-scissors engine";
  m.attr("ENGINE_VERSION") = std::string(kEngineVersion);
  m.attr("MAX_ORDER") = kMaxOrder;

  m.def("beats", [](const std::string& mv) { return Code(Beats(ToMove(mv))); }, py::arg("move"),
        "The move that beats `move`.");
  m.def(
      "judge",
      [](const std::string& ai, const std::string& player) {
        return std::string(OutcomeName(Judge(ToMove(ai), ToMove(player))));
      },
      py::arg("ai"), py::arg("player"), "'win', 'draw' or 'loss' from the AI side.");
  m.def(
      "reward",
      [](std::int64_t points, int a) {
        PayoffScheme scheme;
        scheme.win_points = a;
        if (auto errors = scheme.Validate(); !errors.empty()) {
          throw py::value_error(errors.front().ToString());
        }
        if (points < 0) throw py::value_error("virtual points must be >= 0");
        return Reward(points, scheme).ToString();
      },
      py::arg("points"), py::arg("a") = 2, "Money reward as a decimal string, e.g. '50.00'.");
  m.def(
      "select_dominant",
      [](const ScoreHistory& scores, int round, int focus_length) {
        return SelectDominant(scores, round, focus_length).chosen;
      },
      py::arg("scores"), py::arg("round"), py::arg("focus_length"),
      "Member position that plays `round` given per-member score rows.");

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed") = 0)
      .def("next_u64", &Rng::NextU64)
      .def("uniform_index", &Rng::UniformIndex, py::arg("n"));

  py::class_<MarkovPredictor>(m, "MarkovPredictor")
      .def(py::init<int>(), py::arg("order"))
      .def_property_readonly("order", &MarkovPredictor::order)
      .def_property_readonly("observed", &MarkovPredictor::observed)
      .def_property_readonly("total", [](const MarkovPredictor& p) { return p.table().total(); })
      .def("observe", [](MarkovPredictor& p, const std::string& h) { p.Observe(ToMoves(h)); },
           py::arg("history"))
      .def(
          "predict",
          [](const MarkovPredictor& p, const std::string& h) {
            const Distribution d = p.Predict(ToMoves(h));
            return py::dict(py::arg("R") = d[0], py::arg("P") = d[1], py::arg("S") = d[2]);
          },
          py::arg("history"))
      .def(
          "act",
          [](const MarkovPredictor& p, const std::string& h, Rng& rng) {
            return Code(p.Act(ToMoves(h), rng));
          },
          py::arg("history"), py::arg("rng"))
      .def("table_csv", [](const MarkovPredictor& p) { return p.table().ToCsv(); });

  py::class_<Ensemble>(m, "Ensemble")
      .def(py::init([](std::vector<int> orders, int focus_length, std::uint64_t seed) {
             return Ensemble(MakeEnsembleConfig(std::move(orders), focus_length, seed));
           }),
           py::arg("orders") = std::vector<int>{1, 2, 3, 4, 5}, py::arg("focus_length") = 5,
           py::arg("seed") = 0)
      .def_property_readonly("round", &Ensemble::round)
      .def_property_readonly("dominant_order", &Ensemble::dominant_order)
      .def_property_readonly("score_history", &Ensemble::score_history)
      .def("propose",
           [](Ensemble& e) {
             const Proposal& p = e.Propose();
             std::vector<std::string> members;
             for (Move mv : p.member_moves) members.push_back(Code(mv));
             py::dict d;
             d["round"] = p.round;
             d["move"] = Code(p.move);
             d["dominant_order"] = e.config().orders[p.dominant];
             d["member_moves"] = members;
             return d;
           })
      .def(
          "settle",
          [](Ensemble& e, const std::string& player) {
            const Settlement s = e.Settle(ToMove(player));
            py::dict d;
            d["round"] = s.round;
            d["ai_move"] = Code(s.multi_move);
            d["outcome_ai"] = std::string(OutcomeName(s.outcome));
            d["member_scores"] = s.member_scores;
            return d;
          },
          py::arg("player_move"));

  py::class_<Session>(m, "Session")
      .def(py::init([](std::vector<int> orders, int focus_length, std::uint64_t seed, int rounds,
                       int a, std::string label) {
             SessionConfig c;
             c.ensemble = MakeEnsembleConfig(std::move(orders), focus_length, seed);
             c.scheme.win_points = a;
             c.rounds = rounds;
             c.label = std::move(label);
             try {
               return Session(std::move(c));
             } catch (const ConfigError& e) {
               throw py::value_error(e.what());
             }
           }),
           py::arg("orders") = std::vector<int>{1, 2, 3, 4, 5}, py::arg("focus_length") = 5,
           py::arg("seed") = 0, py::arg("rounds") = 300, py::arg("a") = 2,
           py::arg("label") = "")
      .def_property_readonly("finished", &Session::finished)
      .def_property_readonly("next_round", &Session::next_round)
      .def_property_readonly("cumulative_ai_score", &Session::cumulative_ai_score)
      .def_property_readonly("cumulative_player_points", &Session::cumulative_player_points)
      .def(
          "play",
          [](Session& s, const std::string& mv, std::int64_t decision_ms) {
            try {
              return RecordDict(s.PlayRound(ToMove(mv), decision_ms), s.config().ensemble.orders);
            } catch (const SessionError& e) {
              throw py::value_error(e.what());
            }
          },
          py::arg("move"), py::arg("decision_ms") = 0)
      .def("log_text", [](const Session& s) { return FormatLog(s.log()); })
      .def("summary", [](const Session& s) { return SummaryDict(Summarize(s.log())); });

  m.def(
      "replay",
      [](const std::string& text) {
        try {
          const ReplayVerdict v = Replay(Parse(text));
          py::list mismatches;
          for (const auto& mm : v.mismatches) {
            mismatches.append(py::dict(py::arg("round") = mm.round, py::arg("field") = mm.field,
                                       py::arg("logged") = mm.logged,
                                       py::arg("regenerated") = mm.regenerated));
          }
          return py::dict(py::arg("match") = v.match, py::arg("mismatches") = mismatches);
        } catch (const IncompatibleLogError& e) {
          throw py::value_error(e.what());
        }
      },
      py::arg("log_text"), "Re-runs the engine over a session log.");
  m.def(
      "summarize", [](const std::string& text) { return SummaryDict(Summarize(Parse(text))); },
      py::arg("log_text"));
  m.def(
      "parse_strategy",
      [](const std::string& spec, std::uint64_t seed) {
        try {
          return StrategyToString(ParseStrategy(spec, seed));
        } catch (const std::invalid_argument& e) {
          throw py::value_error(e.what());
        }
      },
      py::arg("spec"), py::arg("seed") = 0, "Normalized form of a strategy spec.");
  m.def(
      "run_match",
      [](const std::string& opponent, std::vector<int> orders, int focus_length, int rounds,
         std::uint64_t seed) {
        const EnsembleConfig e = MakeEnsembleConfig(std::move(orders), focus_length, seed);
        StrategyKind kind;
        try {
          kind = ParseStrategy(opponent, DeriveSeed(seed, kAgentStreamTag + 1));
        } catch (const std::invalid_argument& err) {
          throw py::value_error(err.what());
        }
        SessionSummary s;
        {
          py::gil_scoped_release release;
          s = RunMatch(e, kind, rounds, seed);
        }
        return SummaryDict(s);
      },
      py::arg("opponent"), py::arg("orders") = std::vector<int>{1, 2, 3, 4, 5},
      py::arg("focus_length") = 5, py::arg("rounds") = 300, py::arg("seed") = 0,
      "One bot match; returns the session summary.");
  m.def(
      "simulate",
      [](const std::string& opponent, std::vector<int> orders, int focus_length, int rounds,
         int replications, std::uint64_t seed, int threads) {
        BatchSpec spec;
        spec.threads = threads;
        spec.cells = {BatchCell{opponent, opponent,
                                MakeEnsembleConfig(std::move(orders), focus_length, 0), rounds,
                                replications, seed}};
        BatchReport r;
        {
          py::gil_scoped_release release;
          r = RunBatch(spec);
        }
        std::vector<int> totals;
        for (const auto& s : r.cells[0].sessions) totals.push_back(s.total_ai_score);
        return totals;
      },
      py::arg("opponent"), py::arg("orders") = std::vector<int>{1, 2, 3, 4, 5},
      py::arg("focus_length") = 5, py::arg("rounds") = 300, py::arg("replications") = 10,
      py::arg("seed") = 0, py::arg("threads") = 1, "Per-session total scores of a bot battery.");
  m.def(
      "sweep",
      [](std::vector<int> orders, const std::string& opponent, int rounds, int replications,
         std::uint64_t seed, int threads) {
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = SingleModelSweep(orders, opponent, rounds, replications, seed, threads);
        }
        py::list out;
        for (std::size_t i = 0; i < r.orders.size(); ++i) {
          out.append(py::make_tuple(r.orders[i], r.totals[i].mean,
                                    r.totals[i].stdev ? py::cast(*r.totals[i].stdev) : py::none()));
        }
        return out;
      },
      py::arg("orders"), py::arg("opponent"), py::arg("rounds") = 300,
      py::arg("replications") = 10, py::arg("seed") = 0, py::arg("threads") = 1,
      "(order, mean, stdev) of each single model alone against a bot.");
}
