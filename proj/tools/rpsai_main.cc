// rpsai: play, simulate, sweep, analyze, replay and serve multi-AI
// Rock-Paper-Scissors sessions.
//
// Exit codes: 0 success/match, 1 usage error, 2 data error, 3 replay mismatch.

#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "rpsai/analysis.h"
#include "rpsai/opponents.h"
#include "rpsai/service.h"
#include "rpsai/session.h"

namespace fs = std::filesystem;
using namespace rpsai;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitMismatch = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SharedFlags {
  std::vector<int> orders = {1, 2, 3, 4, 5};
  int focus = 5;
  int rounds = 300;
  std::optional<std::uint64_t> seed;
  std::string out;
};

std::uint64_t ResolveSeed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed: " << s << " (pass --seed " << s << " to reproduce)\n";
  return s;
}

std::string JoinOrders(const std::vector<int>& orders) {
  std::string s;
  for (std::size_t i = 0; i < orders.size(); ++i) s += (i ? "," : "") + std::to_string(orders[i]);
  return s;
}

EnsembleConfig MakeEnsemble(const SharedFlags& f, std::uint64_t seed) {
  EnsembleConfig e{f.orders, f.focus, seed};
  if (auto errors = e.Validate(); !errors.empty()) throw UsageError(errors.front().ToString());
  return e;
}

void AddShared(CLI::App* cmd, SharedFlags& f, bool with_orders = true) {
  if (with_orders) {
    cmd->add_option("--orders", f.orders, "Member Markov orders, e.g. 1,2,3,4,5")->delimiter(',');
    cmd->add_option("--focus", f.focus, "Focus length F")->check(CLI::PositiveNumber);
  }
  cmd->add_option("--rounds", f.rounds, "Rounds per session")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Random seed (random and printed when omitted)");
}

std::ofstream OpenOut(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

// --- play -------------------------------------------------------------------

int RunPlay(const SharedFlags& f, const std::string& label) {
  const std::uint64_t seed = ResolveSeed(f.seed);
  SessionConfig cfg;
  cfg.ensemble = MakeEnsemble(f, seed);
  cfg.rounds = f.rounds;
  cfg.label = label;
  if (auto errors = cfg.Validate(); !errors.empty()) throw UsageError(errors.front().ToString());
  Session session(cfg);

  const fs::path log_path = f.out.empty() ? fs::path("session_" + std::to_string(seed) + ".log")
                                          : fs::path(f.out);
  std::ofstream log = OpenOut(log_path);
  log << FormatHeader(session.log()) << std::flush;
  std::cerr << "orders=" << JoinOrders(f.orders) << " F=" << f.focus << " rounds=" << f.rounds
            << " seed=" << seed << " log=" << log_path.string() << '\n';
  std::cout << "Rock-Paper-Scissors against the multi-AI: " << f.rounds << " rounds.\n"
            << "Win = " << cfg.scheme.win_points << " points, draw = " << cfg.scheme.draw_points
            << " point, loss = 0. Type R, P or S (q to quit).\n";

  bool quit = false;
  while (!session.finished() && !quit) {
    std::cout << "\nRound " << session.next_round() << "/" << f.rounds << " > " << std::flush;
    const auto opened = std::chrono::steady_clock::now();
    std::string line;
    if (!std::getline(std::cin, line)) {
      quit = true;
      break;
    }
    const auto first = line.find_first_not_of(" \t\r");
    const auto last = line.find_last_not_of(" \t\r");
    const std::string input = first == std::string::npos ? "" : line.substr(first, last - first + 1);
    if (input == "q" || input == "Q") {
      quit = true;
      break;
    }
    const auto move = input.size() == 1 ? ParseMove(input[0]) : std::nullopt;
    if (!move) {
      std::cout << "Please type R, P or S (or q to quit).";
      continue;
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - opened)
                        .count();
    // The AI's move is committed inside PlayRound before it reads ours.
    const RoundRecord& r = session.PlayRound(*move, ms);
    log << FormatRoundLine(r) << '\n' << std::flush;
    std::cout << "You: " << MoveCode(r.player_move) << "  AI: " << MoveCode(r.multi_move) << "  -> you "
              << OutcomeName(Flip(r.outcome_ai)) << ", +" << r.player_points
              << " points (total " << r.cumulative_player_points << ", AI score "
              << r.cumulative_ai_score << ")";
  }
  std::cout << '\n';
  if (!session.finished()) {
    session.Abort();
    log << "#incomplete\n";
    std::cout << "Session ended early after " << session.rounds_completed() << " rounds.\n";
  }
  const SessionSummary s = Summarize(session.log());
  std::cout << (s.complete ? "Final" : "Partial") << " result: " << s.losses << " wins, " << s.draws
            << " draws, " << s.wins << " losses for you. Virtual points x = "
            << s.player_virtual_points << ", reward y = " << s.reward.ToString() << " RMB.\n";
  return kExitOk;
}

// --- simulate ----------------------------------------------------------------

int RunSimulate(const SharedFlags& f, const std::vector<std::string>& opponents, int reps,
                int threads, bool no_series, bool write_logs) {
  const std::uint64_t seed = ResolveSeed(f.seed);
  BatchSpec spec;
  spec.threads = threads;
  spec.keep_logs = write_logs;
  for (const auto& opp : opponents) {
    try {
      ParseStrategy(opp);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--opponent: ") + e.what());
    }
    BatchCell cell;
    cell.label = SafeLabel(opp);
    cell.opponent = opp;
    cell.ensemble = MakeEnsemble(f, seed);
    cell.rounds = f.rounds;
    cell.replications = reps;
    cell.base_seed = seed;
    spec.cells.push_back(std::move(cell));
  }
  std::cerr << "simulate orders=" << JoinOrders(f.orders) << " F=" << f.focus
            << " rounds=" << f.rounds << " reps=" << reps << " seed=" << seed << '\n';
  const BatchReport report = RunBatch(spec);
  const fs::path dir = f.out.empty() ? fs::path("out") : fs::path(f.out);
  WriteBatchOutputs(report, dir, !no_series);
  if (write_logs) {
    for (const auto& cr : report.cells) {
      for (std::size_t i = 0; i < cr.logs.size(); ++i) {
        auto out = OpenOut(dir / "logs" / (SafeLabel(cr.labels[i]) + ".log"));
        out << FormatLog(cr.logs[i]);
      }
    }
  }
  std::cout << "opponent,sessions,mean_total,stdev_total,fraction_ahead\n";
  for (const auto& cr : report.cells) {
    std::cout << cr.cell.opponent << ',' << cr.total.n << ',' << cr.total.mean << ','
              << (cr.total.stdev ? std::to_string(*cr.total.stdev) : "") << ','
              << cr.win_fraction << '\n';
  }
  return kExitOk;
}

// --- sweep -------------------------------------------------------------------

int RunSweep(const SharedFlags& f, const std::vector<int>& orders, const std::string& opponent,
             int reps, int threads) {
  const std::uint64_t seed = ResolveSeed(f.seed);
  try {
    ParseStrategy(opponent);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--opponent: ") + e.what());
  }
  for (int m : orders) {
    if (m < 1 || m > kMaxOrder) throw UsageError("--orders: each order must be in [1, 16]");
  }
  std::cerr << "sweep orders=" << JoinOrders(orders) << " opponent=" << opponent
            << " rounds=" << f.rounds << " reps=" << reps << " seed=" << seed << '\n';
  const SweepResult sweep = SingleModelSweep(orders, opponent, f.rounds, reps, seed, threads);
  const fs::path dir = f.out.empty() ? fs::path("out") : fs::path(f.out);
  fs::create_directories(dir);
  auto out = OpenOut(dir / "sweep.csv");
  WriteSweep(sweep, out);
  WriteSweep(sweep, std::cout);
  return kExitOk;
}

// --- analyze / replay --------------------------------------------------------

int RunAnalyze(const std::vector<std::string>& files, const std::string& out_dir, bool internals) {
  std::vector<std::pair<std::string, SessionLog>> logs;
  for (const auto& file : files) {
    SessionLog log = ReadLogFile(file);
    std::string label = log.config.label.empty() ? fs::path(file).stem().string() : log.config.label;
    logs.emplace_back(SafeLabel(label), std::move(log));
  }
  // Labels become file names; keep them unique.
  for (std::size_t i = 0; i < logs.size(); ++i) {
    int dup = 1;
    for (std::size_t j = 0; j < i; ++j) {
      if (logs[j].first == logs[i].first) ++dup;
    }
    if (dup > 1) logs[i].first += "_" + std::to_string(dup);
  }
  const fs::path dir = out_dir.empty() ? fs::path("out") : fs::path(out_dir);
  const BatchReport report = ReportFromLogs(logs);
  WriteBatchOutputs(report, dir, /*series=*/true);

  std::vector<std::pair<std::string, SessionSummary>> summaries;
  for (const auto& [label, log] : logs) summaries.emplace_back(label, Summarize(log));
  {
    auto out = OpenOut(dir / "summary.csv");
    WriteSummaryCsv(summaries, out);
  }
  WriteSummaryCsv(summaries, std::cout);

  if (internals) {
    for (const auto& [label, log] : logs) {
      const Session session = Session::Resume(log);
      auto trace = OpenOut(dir / ("trace_" + label + ".csv"));
      session.ensemble().WriteTraceCsv(trace);
      for (std::size_t k = 0; k < session.ensemble().size(); ++k) {
        const auto& member = session.ensemble().member(k);
        auto table = OpenOut(dir / ("table_" + label + "_ai" + std::to_string(member.order()) + ".csv"));
        member.table().WriteCsv(table);
      }
    }
  }
  return kExitOk;
}

int RunReplay(const std::string& file) {
  const SessionLog log = ReadLogFile(file);
  const ReplayVerdict verdict = Replay(log);
  std::cout << verdict.Describe() << '\n';
  return verdict.match ? kExitOk : kExitMismatch;
}

// --- serve -------------------------------------------------------------------

httplib::Server* g_server = nullptr;

void StopServer(int) {
  if (g_server) g_server->stop();
}

int RunServe(const std::string& listen, const std::string& data_dir, const std::vector<int>& orders,
             int focus, const std::string& cors) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw UsageError("--listen must be <addr>:<port>");
  const std::string host = listen.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(listen.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError("--listen: bad port");
  }
  if (auto errors = EnsembleConfig{orders, focus, 0}.Validate(); !errors.empty()) {
    throw UsageError("default config: " + errors.front().ToString());
  }
  ServiceOptions options;
  options.data_dir = data_dir;
  options.default_orders = orders;
  options.default_focus = focus;
  options.cors_origin = cors;
  SessionService service(options);
  httplib::Server server;
  service.Mount(server);
  g_server = &server;
  std::signal(SIGINT, StopServer);
  std::signal(SIGTERM, StopServer);
  std::cerr << "serving on " << host << ':' << port << " data-dir=" << data_dir << " ("
            << service.session_count() << " sessions loaded)\n";
  if (!server.listen(host, port)) {
    std::cerr << "cannot listen on " << listen << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-AI Rock-Paper-Scissors: Markov ensembles with focus-length selection"};
  app.require_subcommand(1);

  SharedFlags play_flags, sim_flags, sweep_flags;
  std::string play_label;
  auto* play = app.add_subcommand("play", "Play a session in the terminal");
  AddShared(play, play_flags);
  play->add_option("--out", play_flags.out, "Session log path");
  play->add_option("--label", play_label, "Free-text session label");

  std::vector<std::string> opponents = {"uniform"};
  int sim_reps = 100, sim_threads = 1;
  bool no_series = false, write_logs = false;
  auto* simulate = app.add_subcommand("simulate", "Run bot batteries against the ensemble");
  AddShared(simulate, sim_flags);
  simulate->add_option("--opponent", opponents,
                       "Strategy spec (repeatable): uniform, biased:pR,pP,pS, biased:human, "
                       "cycle:RPS, wsls, mimic, reactor:K[:TABLE]");
  simulate->add_option("--reps", sim_reps, "Sessions per opponent")->check(CLI::PositiveNumber);
  simulate->add_option("--threads", sim_threads, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--out", sim_flags.out, "Output directory");
  simulate->add_flag("--no-series", no_series, "Skip the per-session fig1_*.csv files");
  simulate->add_flag("--logs", write_logs, "Also write every session log under <out>/logs");

  std::vector<int> sweep_orders = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::string sweep_opponent = "uniform";
  int sweep_reps = 100, sweep_threads = 1;
  auto* sweep = app.add_subcommand("sweep", "Each single order-m model alone against a bot");
  AddShared(sweep, sweep_flags, /*with_orders=*/false);
  sweep->add_option("--orders", sweep_orders, "Orders to sweep")->delimiter(',');
  sweep->add_option("--opponent", sweep_opponent, "Strategy spec");
  sweep->add_option("--reps", sweep_reps, "Sessions per order")->check(CLI::PositiveNumber);
  sweep->add_option("--threads", sweep_threads, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", sweep_flags.out, "Output directory");

  std::vector<std::string> analyze_files;
  std::string analyze_out;
  bool internals = false;
  auto* analyze = app.add_subcommand("analyze", "Summaries and figure CSVs from session logs");
  analyze->add_option("logs", analyze_files, "Session log files")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out", analyze_out, "Output directory");
  analyze->add_flag("--internals", internals,
                    "Also write selection traces and transition tables per session");

  std::string replay_file;
  auto* replay = app.add_subcommand("replay", "Verify a session log by re-running the engine");
  replay->add_option("log", replay_file, "Session log file")->required()->check(CLI::ExistingFile);

  std::string listen = "127.0.0.1:8080", data_dir = "rpsai-data", cors;
  std::vector<int> default_orders = {1, 2, 3, 4, 5};
  int default_focus = 5;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP+JSON session API");
  serve->add_option("--listen", listen, "Address to bind, <addr>:<port>")->envname("RPS_LISTEN");
  serve->add_option("--data-dir", data_dir, "Session log directory")->envname("RPS_DATA_DIR");
  serve->add_option("--default-orders", default_orders, "Default member orders")
      ->delimiter(',')
      ->envname("RPS_DEFAULT_ORDERS");
  serve->add_option("--default-focus", default_focus, "Default focus length")
      ->envname("RPS_DEFAULT_FOCUS");
  serve->add_option("--cors-origin", cors, "Allowed browser origin for the web UI")
      ->envname("RPS_CORS_ORIGIN");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*play) return RunPlay(play_flags, play_label);
    if (*simulate) {
      return RunSimulate(sim_flags, opponents, sim_reps, sim_threads, no_series, write_logs);
    }
    if (*sweep) return RunSweep(sweep_flags, sweep_orders, sweep_opponent, sweep_reps, sweep_threads);
    if (*analyze) return RunAnalyze(analyze_files, analyze_out, internals);
    if (*replay) return RunReplay(replay_file);
    if (*serve) return RunServe(listen, data_dir, default_orders, default_focus, cors);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
