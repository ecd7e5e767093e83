#include "rpsai/service.h"

#include <chrono>
#include <ctime>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "httplib.h"

namespace rpsai {
namespace {

using json = nlohmann::json;

std::int64_t SystemNowMs() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::uint64_t RandomSeed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string NewSessionId() {
  static constexpr char kHex[] = "0123456789abcdef";
  std::random_device rd;
  std::string id;
  for (int i = 0; i < 8; ++i) {
    std::uint32_t word = rd();
    for (int j = 0; j < 4; ++j) {
      id.push_back(kHex[word & 0xF]);
      word >>= 4;
    }
  }
  return id;
}

std::string IsoTime(std::int64_t ms) {
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  const std::size_t n = std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", &tm);
  std::snprintf(buf + n, sizeof(buf) - n, ".%03dZ", static_cast<int>(ms % 1000));
  return buf;
}

HttpResponse Json(int status, const json& body) { return {status, body.dump(), "application/json"}; }

HttpResponse Error(int status, std::string_view code, std::string_view message) {
  return Json(status, {{"error", code}, {"message", message}});
}

json ConfigJson(const SessionConfig& c) {
  return {{"orders", c.ensemble.orders},
          {"focus_length", c.ensemble.focus_length},
          {"a", c.scheme.win_points},
          {"rounds", c.rounds},
          {"move_time_limit_s", c.move_time_limit_s},
          {"warn_time_s", c.warn_time_s},
          {"label", c.label}};
}

json MoveMap(const std::vector<int>& orders, const std::vector<Move>& moves) {
  json out = json::object();
  for (std::size_t k = 0; k < orders.size(); ++k) {
    out[std::to_string(orders[k])] = std::string(1, MoveCode(moves[k]));
  }
  return out;
}

json ScoreMap(const std::vector<int>& orders, const std::vector<int>& scores) {
  json out = json::object();
  for (std::size_t k = 0; k < orders.size(); ++k) out[std::to_string(orders[k])] = scores[k];
  return out;
}

// Pure function of logged data, so an idempotent retry (even after a
// restart) returns the identical body.
json RecordJson(const RoundRecord& r, const SessionConfig& c, const std::optional<LateMark>& late) {
  json j = {{"round", r.round},
            {"player_move", std::string(1, MoveCode(r.player_move))},
            {"ai_move", std::string(1, MoveCode(r.multi_move))},
            {"dominant_order", r.dominant_order},
            {"member_moves", MoveMap(c.ensemble.orders, r.member_moves)},
            {"member_scores", ScoreMap(c.ensemble.orders, r.member_scores)},
            {"outcome_ai", OutcomeName(r.outcome_ai)},
            {"outcome_player", OutcomeName(Flip(r.outcome_ai))},
            {"player_points", r.player_points},
            {"cumulative_player_points", r.cumulative_player_points},
            {"cumulative_ai_score", r.cumulative_ai_score},
            {"decision_ms", r.decision_ms},
            {"rounds_remaining", c.rounds - r.round},
            {"final", r.round == c.rounds},
            {"late", late.has_value()}};
  if (late) j["server_elapsed_ms"] = late->server_ms;
  return j;
}

json SummaryJson(const SessionSummary& s) {
  return {{"rounds", s.rounds_played},
          {"complete", s.complete},
          {"wins", s.wins},
          {"draws", s.draws},
          {"losses", s.losses},
          {"total_ai_score", s.total_ai_score},
          {"player_virtual_points", s.player_virtual_points},
          {"reward_rmb", s.reward.ToString()},
          {"move_preference_counts",
           {{"R", s.move_preference_counts[0]},
            {"P", s.move_preference_counts[1]},
            {"S", s.move_preference_counts[2]}}},
          {"per_member_total_scores", ScoreMap(s.orders, s.per_member_total_scores)},
          {"dominance_occupancy", ScoreMap(s.orders, s.dominance_occupancy)},
          {"switches", s.switches}};
}

std::optional<LateMark> LateFor(const SessionLog& log, int round) {
  for (const auto& m : log.late) {
    if (m.round == round) return m;
  }
  return std::nullopt;
}

template <typename T>
bool ReadInt(const json& body, const char* key, T& out, std::vector<FieldError>& errors) {
  if (!body.contains(key)) return false;
  const json& v = body.at(key);
  if (!v.is_number_integer()) {
    errors.push_back({key, "must be an integer"});
    return false;
  }
  if constexpr (std::is_unsigned_v<T>) {
    if (v.is_number_unsigned()) {
      out = v.get<T>();
    } else if (v.get<std::int64_t>() >= 0) {
      out = static_cast<T>(v.get<std::int64_t>());
    } else {
      errors.push_back({key, "must be non-negative"});
      return false;
    }
  } else {
    const auto wide = v.get<std::int64_t>();
    if (wide < std::numeric_limits<T>::min() || wide > std::numeric_limits<T>::max()) {
      errors.push_back({key, "out of range"});
      return false;
    }
    out = static_cast<T>(wide);
  }
  return true;
}

}  // namespace

struct SessionService::Entry {
  Entry(std::string id_in, Session s) : id(std::move(id_in)), session(std::move(s)) {}

  mutable std::shared_mutex mu;
  std::string id;
  Session session;
  std::filesystem::path log_path;
  std::int64_t created_at_ms = 0;
  std::int64_t last_move_at_ms = 0;
  std::int64_t round_opened_ms = 0;
};

SessionService::SessionService(ServiceOptions options) : options_(std::move(options)) {
  if (!options_.now_ms) options_.now_ms = SystemNowMs;
  if (!options_.seed_source) options_.seed_source = RandomSeed;
  std::filesystem::create_directories(options_.data_dir);
  LoadExisting();
}

SessionService::~SessionService() = default;

std::size_t SessionService::session_count() const {
  std::shared_lock lock(mu_);
  return sessions_.size();
}

std::shared_ptr<SessionService::Entry> SessionService::Find(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void SessionService::LoadExisting() {
  std::ifstream index(options_.data_dir / "index.tsv");
  std::string line;
  while (std::getline(index, line)) {
    std::istringstream fields(line);
    std::string id, file;
    std::int64_t created = 0;
    if (!(fields >> id >> file >> created)) continue;
    const auto path = options_.data_dir / file;
    // A session whose log cannot be replayed is left out rather than served
    // with a divergent future.
    try {
      Session session = Session::Resume(ReadLogFile(path.string()));
      auto entry = std::make_shared<Entry>(id, std::move(session));
      entry->log_path = path;
      entry->created_at_ms = created;
      const auto now = options_.now_ms();
      entry->last_move_at_ms = entry->session.rounds_completed() > 0 ? now : created;
      entry->round_opened_ms = now;
      sessions_[id] = std::move(entry);
    } catch (const std::exception&) {
      continue;
    }
  }
}

HttpResponse SessionService::CreateSession(std::string_view body) {
  json req;
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    req = json::object();
  } else {
    req = json::parse(body, nullptr, /*allow_exceptions=*/false);
    if (req.is_discarded() || !req.is_object()) {
      return Error(400, "bad_request", "body must be a JSON object");
    }
  }

  SessionConfig cfg;
  cfg.ensemble.orders = options_.default_orders;
  cfg.ensemble.focus_length = options_.default_focus;
  std::vector<FieldError> errors;
  if (req.contains("orders")) {
    const json& v = req["orders"];
    if (!v.is_array()) {
      errors.push_back({"orders", "must be an array of integers"});
    } else {
      cfg.ensemble.orders.clear();
      for (const auto& o : v) {
        if (!o.is_number_integer()) {
          errors.push_back({"orders", "must be an array of integers"});
          break;
        }
        cfg.ensemble.orders.push_back(o.get<int>());
      }
    }
  }
  ReadInt(req, "focus_length", cfg.ensemble.focus_length, errors);
  ReadInt(req, "a", cfg.scheme.win_points, errors);
  ReadInt(req, "rounds", cfg.rounds, errors);
  ReadInt(req, "move_time_limit_s", cfg.move_time_limit_s, errors);
  ReadInt(req, "warn_time_s", cfg.warn_time_s, errors);
  if (!ReadInt(req, "seed", cfg.ensemble.seed, errors)) cfg.ensemble.seed = options_.seed_source();
  if (req.contains("label")) {
    if (req["label"].is_string()) {
      cfg.label = req["label"].get<std::string>();
    } else {
      errors.push_back({"label", "must be a string"});
    }
  }
  for (auto& e : cfg.Validate()) errors.push_back(std::move(e));
  if (!errors.empty()) {
    json fields = json::array();
    for (const auto& e : errors) fields.push_back({{"field", e.field}, {"message", e.message}});
    return Json(400, {{"error", "invalid_config"}, {"fields", fields}});
  }

  const std::int64_t now = options_.now_ms();
  std::unique_lock lock(mu_);
  std::string id;
  do {
    id = NewSessionId();
  } while (sessions_.contains(id));
  auto entry = std::make_shared<Entry>(id, Session(cfg));
  entry->log_path = options_.data_dir / (id + ".log");
  entry->created_at_ms = now;
  entry->last_move_at_ms = now;
  entry->round_opened_ms = now;
  {
    std::ofstream log(entry->log_path, std::ios::binary | std::ios::trunc);
    log << FormatHeader(entry->session.log());
    if (!log.flush()) return Error(500, "storage", "cannot write session log");
  }
  {
    std::ofstream index(options_.data_dir / "index.tsv", std::ios::binary | std::ios::app);
    index << id << '\t' << id << ".log\t" << now << '\n';
    if (!index.flush()) return Error(500, "storage", "cannot update session index");
  }
  sessions_[id] = entry;

  return Json(201, {{"id", id},
                    {"status", "active"},
                    {"created_at", IsoTime(now)},
                    {"config", ConfigJson(cfg)}});
}

HttpResponse SessionService::PostMove(const std::string& id, std::string_view body) {
  auto entry = Find(id);
  if (!entry) return Error(404, "not_found", "unknown session id");

  const json req = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (req.is_discarded() || !req.is_object()) {
    return Error(400, "bad_request", "body must be a JSON object");
  }
  if (!req.contains("move") || !req["move"].is_string()) {
    return Error(400, "bad_move", "move must be one of \"R\", \"P\", \"S\"");
  }
  const auto move = ParseMoveCode(req["move"].get<std::string>());
  if (!move) return Error(400, "bad_move", "move must be one of \"R\", \"P\", \"S\"");
  std::vector<FieldError> errors;
  std::int64_t decision_ms = 0;
  ReadInt(req, "decision_ms", decision_ms, errors);
  if (decision_ms < 0) errors.push_back({"decision_ms", "must be >= 0"});
  std::optional<int> round;
  if (int r = 0; ReadInt(req, "round", r, errors)) round = r;
  if (!errors.empty()) return Error(400, "bad_request", errors.front().ToString());

  std::unique_lock lock(entry->mu);
  Session& session = entry->session;
  const auto& cfg = session.config();
  if (round && *round >= 1 && *round <= session.rounds_completed()) {
    const RoundRecord& stored = session.log().rounds[*round - 1];
    if (stored.player_move == *move) {
      return Json(200, RecordJson(stored, cfg, LateFor(session.log(), *round)));
    }
    return Error(409, "round_conflict",
                 "round " + std::to_string(*round) + " was already played with another move");
  }
  if (session.finished()) return Error(409, "finished", "session is finished");
  if (round && *round != session.next_round()) {
    return Error(409, "round_mismatch",
                 "expected round " + std::to_string(session.next_round()));
  }

  const std::int64_t now = options_.now_ms();
  const std::int64_t elapsed = now - entry->round_opened_ms;
  const RoundRecord& r = session.PlayRound(*move, decision_ms);
  std::optional<LateMark> late;
  if (elapsed > static_cast<std::int64_t>(cfg.move_time_limit_s) * 1000) {
    session.MarkLate(r.round, elapsed);
    late = session.log().late.back();
  }
  {
    std::ofstream log(entry->log_path, std::ios::binary | std::ios::app);
    log << FormatRoundLine(r) << '\n';
    if (late) log << FormatLateLine(*late) << '\n';
    log.flush();
  }
  entry->last_move_at_ms = now;
  entry->round_opened_ms = now;
  return Json(200, RecordJson(r, cfg, late));
}

HttpResponse SessionService::GetSnapshot(const std::string& id) const {
  auto entry = Find(id);
  if (!entry) return Error(404, "not_found", "unknown session id");
  std::shared_lock lock(entry->mu);
  const Session& s = entry->session;
  const auto& cfg = s.config();
  json j = {{"id", entry->id},
            {"status", s.finished() ? "finished" : "active"},
            {"round", s.finished() ? cfg.rounds : s.next_round()},
            {"rounds", cfg.rounds},
            {"rounds_completed", s.rounds_completed()},
            {"rounds_remaining", cfg.rounds - s.rounds_completed()},
            {"cumulative_player_points", s.cumulative_player_points()},
            {"cumulative_ai_score", s.cumulative_ai_score()},
            {"move_time_limit_s", cfg.move_time_limit_s},
            {"warn_time_s", cfg.warn_time_s},
            {"created_at", IsoTime(entry->created_at_ms)},
            {"last_move_at", IsoTime(entry->last_move_at_ms)},
            {"config", ConfigJson(cfg)}};
  if (s.rounds_completed() > 0) {
    const auto& last = s.log().rounds.back();
    j["last_round"] = RecordJson(last, cfg, LateFor(s.log(), last.round));
  } else {
    j["last_round"] = nullptr;
  }
  return Json(200, j);
}

HttpResponse SessionService::GetExport(const std::string& id) const {
  auto entry = Find(id);
  if (!entry) return Error(404, "not_found", "unknown session id");
  std::shared_lock lock(entry->mu);
  // The log carries the seed; releasing it mid-session would let a client
  // predict the AI.
  if (!entry->session.finished()) {
    return Error(409, "not_finished", "export is available once the session is finished");
  }
  return {200, FormatLog(entry->session.log()), "text/plain; charset=utf-8"};
}

HttpResponse SessionService::GetSummary(const std::string& id) const {
  auto entry = Find(id);
  if (!entry) return Error(404, "not_found", "unknown session id");
  std::shared_lock lock(entry->mu);
  if (!entry->session.finished()) {
    return Error(409, "not_finished", "summary is available once the session is finished");
  }
  return Json(200, SummaryJson(Summarize(entry->session.log())));
}

HttpResponse SessionService::Handle(std::string_view method, std::string_view path,
                                    std::string_view body) {
  constexpr std::string_view kPrefix = "/api/v1/sessions";
  if (!path.starts_with(kPrefix)) return Error(404, "not_found", "no such route");
  std::string_view rest = path.substr(kPrefix.size());
  if (rest.empty() || rest == "/") {
    if (method == "POST") return CreateSession(body);
    return Error(405, "method_not_allowed", "use POST");
  }
  if (rest.front() != '/') return Error(404, "not_found", "no such route");
  rest.remove_prefix(1);
  const auto slash = rest.find('/');
  const std::string id(rest.substr(0, slash));
  const std::string_view tail = slash == std::string_view::npos ? "" : rest.substr(slash);
  if (tail.empty()) {
    if (method == "GET") return GetSnapshot(id);
  } else if (tail == "/moves") {
    if (method == "POST") return PostMove(id, body);
  } else if (tail == "/export") {
    if (method == "GET") return GetExport(id);
  } else if (tail == "/summary") {
    if (method == "GET") return GetSummary(id);
  } else {
    return Error(404, "not_found", "no such route");
  }
  return Error(405, "method_not_allowed", "method not allowed on this route");
}

void SessionService::Mount(httplib::Server& server) {
  auto reply = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  if (!options_.cors_origin.empty()) {
    server.set_default_headers({{"Access-Control-Allow-Origin", options_.cors_origin},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });
  }
  server.Post("/api/v1/sessions", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, CreateSession(req.body));
  });
  server.Post(R"(/api/v1/sessions/([A-Za-z0-9_-]+)/moves)",
              [this, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, PostMove(req.matches[1], req.body));
              });
  server.Get(R"(/api/v1/sessions/([A-Za-z0-9_-]+))",
             [this, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, GetSnapshot(req.matches[1]));
             });
  server.Get(R"(/api/v1/sessions/([A-Za-z0-9_-]+)/export)",
             [this, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, GetExport(req.matches[1]));
             });
  server.Get(R"(/api/v1/sessions/([A-Za-z0-9_-]+)/summary)",
             [this, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, GetSummary(req.matches[1]));
             });
}

}  // namespace rpsai
