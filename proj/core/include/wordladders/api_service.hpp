#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wordladders/sessions.hpp"

namespace wordladders {

struct ResearcherToken {
  std::string token_id;
  std::string label;
};

// Comma-separated `label:token` or bare `token` items, as found in
// WL_RESEARCH_TOKENS.
std::vector<ResearcherToken> parse_research_tokens(std::string_view spec);

// HTTP facade over a SessionManager.
//
// Player endpoints:
//   POST /users                 -> 201 {nickname}
//   POST /matches               -> 201 match
//   GET  /matches/{id}          -> 200 match
//   POST /matches/{id}/ladder   -> 200 result, 410 when expired
//   GET  /leaderboard           -> 200 ranking
// Researcher endpoints (Authorization: Bearer <token>):
//   GET  /export/filter?collection=&format=csv|json&filter=<json>&lines=1
//   GET  /export/raw?word=&language=
class ApiService {
 public:
  ApiService(SessionManager& sessions, std::vector<ResearcherToken> tokens);
  ~ApiService();
  ApiService(const ApiService&) = delete;
  ApiService& operator=(const ApiService&) = delete;

  using RequestLog = std::function<void(const std::string& method, const std::string& path,
                                        int status)>;
  void set_request_log(RequestLog log);

  // Binds the listening socket; port 0 picks a free one. Returns the port,
  // or -1 on failure.
  int bind(const std::string& host, int port);
  // Serves until stop(); requires a successful bind().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace wordladders
