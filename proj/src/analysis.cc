#include "rpsai/analysis.h"

#include <atomic>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace rpsai {
namespace {

// Runs job(i) for i in [0, n) on up to `threads` workers. Results must be
// written by index so the outcome does not depend on scheduling.
void ParallelFor(int n, int threads, const std::function<void(int)>& job) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::jthread> workers;
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (error) std::rethrow_exception(error);
}

void WriteNumber(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  out << buf;
}

void WriteStat(std::ostream& out, const std::optional<double>& v) {
  if (v) WriteNumber(out, *v);
}

void FillStats(CellReport& cell) {
  const std::size_t members = cell.cell.ensemble.orders.size();
  std::vector<double> totals;
  std::vector<std::vector<double>> member(members);
  std::array<std::vector<double>, 3> prefs;
  int ahead = 0;
  for (const auto& s : cell.sessions) {
    totals.push_back(s.total_ai_score);
    if (s.total_ai_score > 0) ++ahead;
    for (std::size_t k = 0; k < members && k < s.per_member_total_scores.size(); ++k) {
      member[k].push_back(s.per_member_total_scores[k]);
    }
    for (int m = 0; m < 3; ++m) prefs[m].push_back(s.move_preference_counts[m]);
  }
  cell.total = Describe(totals);
  cell.per_member.clear();
  for (const auto& v : member) cell.per_member.push_back(Describe(v));
  for (int m = 0; m < 3; ++m) cell.preference[m] = Describe(prefs[m]);
  cell.win_fraction = cell.sessions.empty() ? 0.0 : static_cast<double>(ahead) / cell.sessions.size();
}

}  // namespace

Stat Describe(std::span<const double> values) {
  Stat s;
  s.n = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n >= 2) {
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stdev = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

std::uint64_t ReplicationSeed(std::uint64_t base_seed, int replication) {
  return DeriveSeed(base_seed, kReplicationStreamTag + static_cast<std::uint64_t>(replication));
}

BatchReport RunBatch(const BatchSpec& spec) {
  for (const auto& cell : spec.cells) {
    if (cell.replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (cell.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (auto errors = cell.ensemble.Validate(); !errors.empty()) {
      throw std::invalid_argument("cell '" + cell.label + "': " + errors.front().ToString());
    }
    ParseStrategy(cell.opponent);
  }

  BatchReport report;
  struct Job {
    std::size_t cell;
    int replication;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    CellReport cr;
    cr.cell = spec.cells[c];
    const int reps = cr.cell.replications;
    cr.sessions.resize(reps);
    if (spec.keep_logs) cr.logs.resize(reps);
    for (int i = 0; i < reps; ++i) {
      cr.seeds.push_back(ReplicationSeed(cr.cell.base_seed, i));
      cr.labels.push_back(cr.cell.label + "-" + std::to_string(i + 1));
      jobs.push_back({c, i});
    }
    report.cells.push_back(std::move(cr));
  }

  ParallelFor(static_cast<int>(jobs.size()), spec.threads, [&](int j) {
    CellReport& cr = report.cells[jobs[j].cell];
    const int i = jobs[j].replication;
    const std::uint64_t seed = cr.seeds[i];
    const StrategyKind opponent =
        ParseStrategy(cr.cell.opponent, DeriveSeed(seed, kAgentStreamTag + 1));
    Session session = PlayMatch(cr.cell.ensemble, opponent, cr.cell.rounds, seed);
    cr.sessions[i] = Summarize(session.log());
    if (spec.keep_logs) cr.logs[i] = session.log();
  });

  for (auto& cr : report.cells) FillStats(cr);
  return report;
}

SweepResult SingleModelSweep(const std::vector<int>& orders, const std::string& opponent,
                             int rounds, int replications, std::uint64_t base_seed,
                             int threads) {
  BatchSpec spec;
  spec.threads = threads;
  for (int order : orders) {
    BatchCell cell;
    cell.label = "AI" + std::to_string(order);
    cell.opponent = opponent;
    cell.ensemble.orders = {order};
    cell.ensemble.focus_length = 1;
    cell.rounds = rounds;
    cell.replications = replications;
    cell.base_seed = base_seed;
    spec.cells.push_back(std::move(cell));
  }
  const BatchReport report = RunBatch(spec);
  SweepResult result;
  result.orders = orders;
  for (const auto& cr : report.cells) result.totals.push_back(cr.total);
  return result;
}

void WriteTable4(const BatchReport& report, std::ostream& out) {
  out << "cell,session,R,P,S\n";
  for (const auto& cr : report.cells) {
    for (std::size_t i = 0; i < cr.sessions.size(); ++i) {
      const auto& c = cr.sessions[i].move_preference_counts;
      out << cr.cell.label << ',' << cr.labels[i] << ',' << c[0] << ',' << c[1] << ',' << c[2]
          << '\n';
    }
    out << cr.cell.label << ",MEAN";
    for (const auto& p : cr.preference) {
      out << ',';
      WriteNumber(out, p.mean);
    }
    out << '\n' << cr.cell.label << ",STDEV.S";
    for (const auto& p : cr.preference) {
      out << ',';
      WriteStat(out, p.stdev);
    }
    out << '\n';
  }
}

void WriteTable5(const BatchReport& report, std::ostream& out) {
  for (const auto& cr : report.cells) {
    const auto& orders = cr.cell.ensemble.orders;
    out << "cell,session";
    for (int m : orders) out << ",AI" << m;
    out << ",single_models_average,multi_score\n";
    std::vector<double> averages;
    for (std::size_t i = 0; i < cr.sessions.size(); ++i) {
      const auto& s = cr.sessions[i];
      out << cr.cell.label << ',' << cr.labels[i];
      double sum = 0;
      for (int v : s.per_member_total_scores) {
        out << ',' << v;
        sum += v;
      }
      const double avg = orders.empty() ? 0.0 : sum / orders.size();
      averages.push_back(avg);
      out << ',';
      WriteNumber(out, avg);
      out << ',' << s.total_ai_score << '\n';
    }
    const Stat avg = Describe(averages);
    out << cr.cell.label << ",MEAN";
    for (const auto& st : cr.per_member) {
      out << ',';
      WriteNumber(out, st.mean);
    }
    out << ',';
    WriteNumber(out, avg.mean);
    out << ',';
    WriteNumber(out, cr.total.mean);
    out << '\n' << cr.cell.label << ",STDEVA";
    for (const auto& st : cr.per_member) {
      out << ',';
      WriteStat(out, st.stdev);
    }
    out << ',';
    WriteStat(out, avg.stdev);
    out << ',';
    WriteStat(out, cr.total.stdev);
    out << '\n';
  }
}

void WriteFig2(const BatchReport& report, std::ostream& out) {
  out << "session,total_score\n";
  for (const auto& cr : report.cells) {
    for (std::size_t i = 0; i < cr.sessions.size(); ++i) {
      out << cr.labels[i] << ',' << cr.sessions[i].total_ai_score << '\n';
    }
  }
}

void WriteFig1(const SessionSummary& summary, std::ostream& out) {
  out << "round,cum_score,cum_points\n";
  for (std::size_t r = 0; r < summary.cumulative_ai_score.size(); ++r) {
    out << r + 1 << ',' << summary.cumulative_ai_score[r] << ','
        << summary.cumulative_player_points[r] << '\n';
  }
}

void WriteSweep(const SweepResult& sweep, std::ostream& out) {
  out << "order,n,mean,stdev\n";
  for (std::size_t i = 0; i < sweep.orders.size(); ++i) {
    out << sweep.orders[i] << ',' << sweep.totals[i].n << ',';
    WriteNumber(out, sweep.totals[i].mean);
    out << ',';
    WriteStat(out, sweep.totals[i].stdev);
    out << '\n';
  }
}

void WriteSummaryCsv(const std::vector<std::pair<std::string, SessionSummary>>& sessions,
                     std::ostream& out) {
  out << "session,complete,rounds,wins,draws,losses,total_ai_score,player_points,reward_rmb,"
         "R,P,S,switches\n";
  for (const auto& [label, s] : sessions) {
    out << label << ',' << (s.complete ? 1 : 0) << ',' << s.rounds_played << ',' << s.wins << ','
        << s.draws << ',' << s.losses << ',' << s.total_ai_score << ','
        << s.player_virtual_points << ',' << s.reward.ToString() << ','
        << s.move_preference_counts[0] << ',' << s.move_preference_counts[1] << ','
        << s.move_preference_counts[2] << ',' << s.switches << '\n';
  }
}

std::string SafeLabel(std::string_view label) {
  std::string out;
  for (char c : label) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "session" : out;
}

void WriteBatchOutputs(const BatchReport& report, const std::filesystem::path& dir,
                       bool series) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("table4.csv");
    WriteTable4(report, f);
  }
  {
    auto f = open("table5.csv");
    WriteTable5(report, f);
  }
  {
    auto f = open("fig2.csv");
    WriteFig2(report, f);
  }
  if (series) {
    for (const auto& cr : report.cells) {
      for (std::size_t i = 0; i < cr.sessions.size(); ++i) {
        auto f = open("fig1_" + SafeLabel(cr.labels[i]) + ".csv");
        WriteFig1(cr.sessions[i], f);
      }
    }
  }
}

BatchReport ReportFromLogs(const std::vector<std::pair<std::string, SessionLog>>& logs) {
  BatchReport report;
  std::map<std::pair<std::vector<int>, int>, std::size_t> by_config;
  for (const auto& [label, log] : logs) {
    const auto key = std::make_pair(log.config.ensemble.orders, log.config.ensemble.focus_length);
    auto it = by_config.find(key);
    if (it == by_config.end()) {
      CellReport cr;
      cr.cell.ensemble = log.config.ensemble;
      cr.cell.rounds = log.config.rounds;
      cr.cell.label = "F" + std::to_string(key.second) + "_AI";
      for (std::size_t i = 0; i < key.first.size(); ++i) {
        cr.cell.label += (i ? "-" : "") + std::to_string(key.first[i]);
      }
      it = by_config.emplace(key, report.cells.size()).first;
      report.cells.push_back(std::move(cr));
    }
    CellReport& cr = report.cells[it->second];
    cr.seeds.push_back(log.config.ensemble.seed);
    cr.labels.push_back(label);
    cr.sessions.push_back(Summarize(log));
    cr.cell.replications = static_cast<int>(cr.sessions.size());
  }
  for (auto& cr : report.cells) FillStats(cr);
  return report;
}

}  // namespace rpsai
