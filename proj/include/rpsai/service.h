#ifndef RPSAI_SERVICE_H_
#define RPSAI_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "rpsai/session.h"

namespace httplib {
class Server;
}

namespace rpsai {

struct ServiceOptions {
  std::filesystem::path data_dir = "rpsai-data";
  std::vector<int> default_orders = {1, 2, 3, 4, 5};
  int default_focus = 5;
  std::string cors_origin;
  // Milliseconds since the Unix epoch.
  std::function<std::int64_t()> now_ms;
  // Seeds for sessions that do not supply one.
  std::function<std::uint64_t()> seed_source;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// HTTP+JSON front end to the session engine.
//
//   POST /api/v1/sessions               create (body: config overrides)
//   POST /api/v1/sessions/{id}/moves    {"move":"R","round":1,"decision_ms":812}
//   GET  /api/v1/sessions/{id}          live snapshot (never the seed or upcoming moves)
//   GET  /api/v1/sessions/{id}/export   session log, once finished
//   GET  /api/v1/sessions/{id}/summary  summary, once finished
//
// Every session is persisted as one log file in data_dir plus a line in
// data_dir/index.tsv; constructing the service reloads them.
class SessionService {
 public:
  explicit SessionService(ServiceOptions options);
  ~SessionService();

  HttpResponse CreateSession(std::string_view body);
  HttpResponse PostMove(const std::string& id, std::string_view body);
  HttpResponse GetSnapshot(const std::string& id) const;
  HttpResponse GetExport(const std::string& id) const;
  HttpResponse GetSummary(const std::string& id) const;

  // Dispatches on method and path; 404 for unknown routes.
  HttpResponse Handle(std::string_view method, std::string_view path, std::string_view body);

  void Mount(httplib::Server& server);

  std::size_t session_count() const;
  const ServiceOptions& options() const { return options_; }

 private:
  struct Entry;

  std::shared_ptr<Entry> Find(const std::string& id) const;
  void LoadExisting();

  ServiceOptions options_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>, std::less<>> sessions_;
};

}  // namespace rpsai

#endif  // RPSAI_SERVICE_H_
