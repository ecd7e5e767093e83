#include "rpsai/session_log.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace rpsai {
namespace {

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
bool ParseNumber(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

template <typename T>
T RequireNumber(std::string_view s, int line, std::string_view field) {
  T value{};
  if (!ParseNumber(s, value)) {
    throw LogParseError(line, "bad " + std::string(field) + " '" + std::string(s) + "'");
  }
  return value;
}

Move RequireMove(std::string_view s, int line, std::string_view field) {
  auto m = ParseMoveCode(s);
  if (!m) throw LogParseError(line, "bad " + std::string(field) + " '" + std::string(s) + "'");
  return *m;
}

// Parses `key=value` tokens after the leading keyword of a comment line.
std::vector<std::pair<std::string_view, std::string_view>> KeyValues(
    std::string_view rest, int line) {
  std::vector<std::pair<std::string_view, std::string_view>> kv;
  for (std::string_view token : Split(rest, ' ')) {
    if (token.empty()) continue;
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) {
      throw LogParseError(line, "expected key=value, got '" + std::string(token) + "'");
    }
    kv.emplace_back(token.substr(0, eq), token.substr(eq + 1));
  }
  return kv;
}

std::string JoinInts(const std::vector<int>& values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += std::to_string(values[i]);
  }
  return out;
}

void ParseHeader(std::string_view text, int line, SessionLog& log) {
  bool have_seed = false, have_orders = false, have_focus = false, have_a = false,
       have_rounds = false;
  for (const auto& [key, value] : KeyValues(text, line)) {
    if (key == "seed") {
      log.config.ensemble.seed = RequireNumber<std::uint64_t>(value, line, "seed");
      have_seed = true;
    } else if (key == "orders") {
      log.config.ensemble.orders.clear();
      for (auto part : Split(value, ',')) {
        log.config.ensemble.orders.push_back(RequireNumber<int>(part, line, "orders"));
      }
      have_orders = true;
    } else if (key == "F") {
      log.config.ensemble.focus_length = RequireNumber<int>(value, line, "F");
      have_focus = true;
    } else if (key == "a") {
      log.config.scheme.win_points = RequireNumber<int>(value, line, "a");
      have_a = true;
    } else if (key == "rounds") {
      log.config.rounds = RequireNumber<int>(value, line, "rounds");
      have_rounds = true;
    } else {
      throw LogParseError(line, "unknown header field '" + std::string(key) + "'");
    }
  }
  if (!have_seed) throw LogParseError(line, "header is missing seed");
  if (!have_orders) throw LogParseError(line, "header is missing orders");
  if (!have_focus) throw LogParseError(line, "header is missing F");
  if (!have_a) throw LogParseError(line, "header is missing a");
  if (!have_rounds) throw LogParseError(line, "header is missing rounds");
  if (auto errors = log.config.Validate(); !errors.empty()) {
    throw LogParseError(line, "invalid config in header: " + errors.front().ToString());
  }
}

RoundRecord ParseRoundLine(std::string_view text, int line, const SessionLog& log) {
  const auto fields = Split(text, ',');
  if (fields.size() != 10) {
    throw LogParseError(line, "expected 10 fields, got " + std::to_string(fields.size()));
  }
  const std::size_t members = log.config.ensemble.orders.size();
  RoundRecord r;
  r.round = RequireNumber<int>(fields[0], line, "round");
  r.player_move = RequireMove(fields[1], line, "player move");
  r.multi_move = RequireMove(fields[2], line, "multi move");
  r.dominant_order = RequireNumber<int>(fields[3], line, "dominant order");
  const auto moves = Split(fields[4], ';');
  const auto scores = Split(fields[5], ';');
  if (moves.size() != members || scores.size() != members) {
    throw LogParseError(line, "expected " + std::to_string(members) + " member entries");
  }
  for (auto m : moves) r.member_moves.push_back(RequireMove(m, line, "member move"));
  for (auto s : scores) {
    const int score = RequireNumber<int>(s, line, "member score");
    if (score < -1 || score > 1) throw LogParseError(line, "member score out of range");
    r.member_scores.push_back(score);
  }
  r.outcome_ai = Judge(r.multi_move, r.player_move);
  r.player_points = RequireNumber<int>(fields[6], line, "points");
  r.cumulative_player_points = RequireNumber<int>(fields[7], line, "cum_points");
  r.cumulative_ai_score = RequireNumber<int>(fields[8], line, "cum_score");
  r.decision_ms = RequireNumber<std::int64_t>(fields[9], line, "ms");
  if (r.decision_ms < 0) throw LogParseError(line, "negative decision time");
  const int expected_round = static_cast<int>(log.rounds.size()) + 1;
  if (r.round != expected_round) {
    throw LogParseError(line, "expected round " + std::to_string(expected_round) + ", got " +
                                  std::to_string(r.round));
  }
  return r;
}

}  // namespace

LogParseError::LogParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string PercentEncode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    const bool plain = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                       (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' || c == '~';
    if (plain) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string PercentDecode(std::string_view s) {
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && hex(s[i + 1]) >= 0 && hex(s[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex(s[i + 1]) * 16 + hex(s[i + 2])));
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

std::string FormatHeader(const SessionLog& log) {
  const auto& c = log.config;
  std::ostringstream out;
  out << "#rpslog v1 seed=" << c.ensemble.seed << " orders=" << JoinInts(c.ensemble.orders, ',')
      << " F=" << c.ensemble.focus_length << " a=" << c.scheme.win_points
      << " rounds=" << c.rounds << '\n';
  out << "#engine " << log.engine << " convention=" << log.convention << '\n';
  out << "#meta limit_s=" << c.move_time_limit_s << " warn_s=" << c.warn_time_s
      << " label=" << PercentEncode(c.label) << '\n';
  return out.str();
}

std::string FormatRoundLine(const RoundRecord& r) {
  std::string out = std::to_string(r.round);
  out += ',';
  out += MoveCode(r.player_move);
  out += ',';
  out += MoveCode(r.multi_move);
  out += ',' + std::to_string(r.dominant_order) + ',';
  for (std::size_t i = 0; i < r.member_moves.size(); ++i) {
    if (i > 0) out += ';';
    out += MoveCode(r.member_moves[i]);
  }
  out += ',' + JoinInts(r.member_scores, ';');
  out += ',' + std::to_string(r.player_points) + ',' + std::to_string(r.cumulative_player_points) +
         ',' + std::to_string(r.cumulative_ai_score) + ',' + std::to_string(r.decision_ms);
  return out;
}

std::string FormatLateLine(const LateMark& mark) {
  return "#late round=" + std::to_string(mark.round) +
         " server_ms=" + std::to_string(mark.server_ms);
}

std::string FormatLog(const SessionLog& log) {
  std::string out = FormatHeader(log);
  std::size_t next_late = 0;
  for (const auto& r : log.rounds) {
    out += FormatRoundLine(r);
    out += '\n';
    while (next_late < log.late.size() && log.late[next_late].round == r.round) {
      out += FormatLateLine(log.late[next_late++]);
      out += '\n';
    }
  }
  if (log.aborted) out += "#incomplete\n";
  return out;
}

SessionLog ParseLog(std::string_view text) {
  SessionLog log;
  log.engine.clear();
  log.convention.clear();
  bool have_header = false;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    if (!have_header) {
      constexpr std::string_view kMagic = "#rpslog v1 ";
      if (!line.starts_with(kMagic)) {
        throw LogParseError(line_no, "missing '#rpslog v1' header");
      }
      ParseHeader(line.substr(kMagic.size()), line_no, log);
      have_header = true;
      continue;
    }
    if (log.aborted) throw LogParseError(line_no, "content after #incomplete");
    if (line.starts_with("#engine ")) {
      const auto rest = line.substr(8);
      const auto space = rest.find(' ');
      log.engine = std::string(rest.substr(0, space));
      if (space != std::string_view::npos) {
        for (const auto& [key, value] : KeyValues(rest.substr(space + 1), line_no)) {
          if (key == "convention") log.convention = std::string(value);
        }
      }
    } else if (line.starts_with("#meta ")) {
      for (const auto& [key, value] : KeyValues(line.substr(6), line_no)) {
        if (key == "limit_s") {
          log.config.move_time_limit_s = RequireNumber<int>(value, line_no, "limit_s");
        } else if (key == "warn_s") {
          log.config.warn_time_s = RequireNumber<int>(value, line_no, "warn_s");
        } else if (key == "label") {
          log.config.label = PercentDecode(value);
        }
      }
    } else if (line.starts_with("#late ")) {
      LateMark mark;
      for (const auto& [key, value] : KeyValues(line.substr(6), line_no)) {
        if (key == "round") mark.round = RequireNumber<int>(value, line_no, "round");
        if (key == "server_ms") mark.server_ms = RequireNumber<std::int64_t>(value, line_no, "server_ms");
      }
      if (mark.round < 1 || mark.round > static_cast<int>(log.rounds.size())) {
        throw LogParseError(line_no, "late mark for a round not yet played");
      }
      log.late.push_back(mark);
    } else if (line == "#incomplete") {
      log.aborted = true;
    } else if (line.starts_with('#')) {
      // Unknown comment lines are ignored.
    } else {
      if (static_cast<int>(log.rounds.size()) >= log.config.rounds) {
        throw LogParseError(line_no, "more round lines than configured rounds");
      }
      log.rounds.push_back(ParseRoundLine(line, line_no, log));
    }
  }
  if (!have_header) throw LogParseError(std::max(line_no, 1), "empty log");
  return log;
}

SessionLog ReadLogFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseLog(buf.str());
}

}  // namespace rpsai
