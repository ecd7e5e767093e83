#ifndef RPSAI_ANALYSIS_H_
#define RPSAI_ANALYSIS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rpsai/ensemble.h"
#include "rpsai/opponents.h"
#include "rpsai/session.h"

namespace rpsai {

// Sample statistics; stdev uses the n - 1 denominator and is absent for n < 2.
struct Stat {
  int n = 0;
  double mean = 0;
  std::optional<double> stdev;
};

Stat Describe(std::span<const double> values);

// Seed of replication i. Depends only on (base, i), so adding replications
// never changes earlier ones.
std::uint64_t ReplicationSeed(std::uint64_t base_seed, int replication);

struct BatchCell {
  std::string label;
  // Strategy spec string (see ParseStrategy). Parsed per replication with a
  // seed derived from the replication seed, so `reactor:<k>` draws a fresh
  // rule table for every session.
  std::string opponent = "uniform";
  EnsembleConfig ensemble;
  int rounds = 300;
  int replications = 1;
  std::uint64_t base_seed = 0;
};

struct BatchSpec {
  std::vector<BatchCell> cells;
  int threads = 1;
  // Keep every session log (needed for writing logs, costs memory).
  bool keep_logs = false;
};

struct CellReport {
  BatchCell cell;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> labels;
  std::vector<SessionSummary> sessions;
  std::vector<SessionLog> logs;  // only with keep_logs
  Stat total;
  std::vector<Stat> per_member;  // aligned with cell.ensemble.orders
  std::array<Stat, 3> preference;
  // Fraction of sessions the ensemble finished ahead.
  double win_fraction = 0;
};

struct BatchReport {
  std::vector<CellReport> cells;
};

// Throws std::invalid_argument for an invalid cell (before any work).
BatchReport RunBatch(const BatchSpec& spec);

struct SweepResult {
  std::vector<int> orders;
  std::vector<Stat> totals;
};

// Every order plays alone against the opponent.
SweepResult SingleModelSweep(const std::vector<int>& orders, const std::string& opponent,
                             int rounds, int replications, std::uint64_t base_seed,
                             int threads = 1);

// CSV writers. Batch session labels are "<cell label>-<replication>".
void WriteTable4(const BatchReport& report, std::ostream& out);
void WriteTable5(const BatchReport& report, std::ostream& out);
void WriteFig2(const BatchReport& report, std::ostream& out);
void WriteFig1(const SessionSummary& summary, std::ostream& out);
void WriteSweep(const SweepResult& sweep, std::ostream& out);
void WriteSummaryCsv(const std::vector<std::pair<std::string, SessionSummary>>& sessions,
                     std::ostream& out);

// Writes table4.csv, table5.csv, fig2.csv and, if `series`, one
// fig1_<session>.csv per session into `dir` (created if missing).
void WriteBatchOutputs(const BatchReport& report, const std::filesystem::path& dir,
                       bool series);

// Report for already-recorded sessions (one cell per distinct config).
BatchReport ReportFromLogs(const std::vector<std::pair<std::string, SessionLog>>& logs);

// File-name-safe version of a label.
std::string SafeLabel(std::string_view label);

}  // namespace rpsai

#endif  // RPSAI_ANALYSIS_H_
