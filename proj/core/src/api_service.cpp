#include "wordladders/api_service.hpp"

#include <httplib.h>

#include "wordladders/error.hpp"
#include "wordladders/export.hpp"

namespace wordladders {

using nlohmann::json;

std::vector<ResearcherToken> parse_research_tokens(std::string_view spec) {
  std::vector<ResearcherToken> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = spec.find(',', start);
    const std::string item =
        trim(spec.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) {
      const std::size_t colon = item.find(':');
      if (colon == std::string::npos) {
        out.push_back({item, "researcher"});
      } else if (colon + 1 < item.size()) {
        out.push_back({item.substr(colon + 1), item.substr(0, colon)});
      }
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

namespace {

bool same_secret(std::string_view a, std::string_view b) {
  unsigned char diff = a.size() == b.size() ? 0 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff |= static_cast<unsigned char>(a[i] ^ (i < b.size() ? b[i] : 0));
  }
  return diff == 0;
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception&) {
    throw ValidationError("request body is not valid JSON");
  }
}

Language language_param(const std::string& text) {
  const auto lang = parse_language(text);
  if (!lang) throw ValidationError("unknown language '" + text + "'");
  return *lang;
}

}  // namespace

struct ApiService::Impl {
  SessionManager& sessions;
  std::vector<ResearcherToken> tokens;
  httplib::Server server;
  RequestLog log;

  Impl(SessionManager& s, std::vector<ResearcherToken> t) : sessions(s), tokens(std::move(t)) {}

  bool authorized(const httplib::Request& req) const {
    const std::string header = req.get_header_value("Authorization");
    constexpr std::string_view kBearer = "Bearer ";
    if (header.size() <= kBearer.size() || header.compare(0, kBearer.size(), kBearer) != 0) {
      return false;
    }
    const std::string_view presented = std::string_view(header).substr(kBearer.size());
    bool ok = false;
    for (const auto& t : tokens) ok = same_secret(presented, t.token_id) || ok;
    return ok;
  }

  // Maps the library's exceptions onto HTTP statuses.
  template <typename Fn>
  httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const ExpiredError& e) {
        send_error(res, 410, e.what());
      } catch (const ConflictError& e) {
        send_error(res, 409, e.what());
      } catch (const AdvancementDueError& e) {
        send_error(res, 409, e.what());
      } catch (const NotFoundError& e) {
        send_error(res, 404, e.what());
      } catch (const ForbiddenError& e) {
        send_error(res, 403, e.what());
      } catch (const ValidationError& e) {
        send_error(res, 400, e.what());
      } catch (const ParseError& e) {
        send_error(res, 400, e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, e.what());
      }
    };
  }

  void routes() {
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, {{"status", "ok"}});
    });

    server.Post("/users", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const UserProfile profile = profile_from_json(parse_body(req));
      send_json(res, 201, {{"nickname", sessions.register_user(profile)}});
    }));

    server.Get(R"(/users/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto user = sessions.find_user(req.matches[1]);
      if (!user) throw NotFoundError("unknown user");
      send_json(res, 200, to_json(*user));
    }));

    server.Post("/matches", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      if (!body.is_object()) throw ValidationError("match request must be a JSON object");
      std::vector<std::string> participants;
      try {
        if (body.contains("participants")) {
          participants = body.at("participants").get<std::vector<std::string>>();
        } else if (body.contains("nickname")) {
          participants.push_back(body.at("nickname").get<std::string>());
        }
      } catch (const json::exception&) {
        throw ValidationError("participants must be a list of nicknames");
      }
      const auto mode = parse_game_mode(body.value("mode", std::string("individual")));
      if (!mode) throw ValidationError("unknown game mode");
      const Language lang = language_param(body.value("language", std::string("EN")));
      std::optional<std::uint64_t> seed;
      if (body.contains("seed") && body.at("seed").is_number_unsigned()) {
        seed = body.at("seed").get<std::uint64_t>();
      }
      send_json(res, 201, to_json(sessions.start_match(participants, *mode, lang, seed)));
    }));

    server.Get(R"(/matches/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 200, to_json(sessions.match(req.matches[1])));
    }));

    server.Post(R"(/matches/([^/]+)/ladder)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      if (!body.is_object()) throw ValidationError("ladder must be a JSON object");
      const std::string nickname = body.value("nickname", std::string{});
      if (nickname.empty()) throw ValidationError("missing nickname");
      Ladder ladder = ladder_from_json(body);
      const std::string match_id = req.matches[1];
      const MatchResult result = sessions.submit_ladder(match_id, nickname, std::move(ladder));
      json out = to_json(result);
      out["match_id"] = match_id;
      out["match_state"] = to_string(sessions.match(match_id).state);
      send_json(res, 200, out);
    }));

    server.Get("/leaderboard", guarded([this](const httplib::Request& req, httplib::Response& res) {
      LeaderboardQuery query;
      for (const auto& [key, value] : req.params) {
        if (key == "language") {
          query.language = language_param(value);
        } else if (key == "limit") {
          try {
            query.limit = static_cast<std::size_t>(std::stoul(value));
          } catch (const std::exception&) {
            throw ValidationError("limit must be a non-negative integer");
          }
        } else {
          query.facets[key] = value;
        }
      }
      json entries = json::array();
      std::size_t rank = 0;
      for (const auto& e : sessions.leaderboard(query)) {
        entries.push_back({{"rank", ++rank},
                           {"nickname", e.nickname},
                           {"score", e.score},
                           {"display_score", static_cast<long long>(std::floor(e.score + 0.5))},
                           {"games", e.games}});
      }
      send_json(res, 200, {{"entries", std::move(entries)}});
    }));

    server.Get("/export/filter", guarded([this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req)) return send_error(res, 401, "researcher token required");
      const auto collection = parse_collection(req.get_param_value("collection"));
      if (!collection) throw ValidationError("unknown collection");
      ExportQuery query;
      query.collection = *collection;
      const std::string format = req.has_param("format") ? req.get_param_value("format") : "json";
      if (format == "csv") query.format = ExportFormat::csv;
      else if (format == "json") query.format = ExportFormat::json;
      else throw ValidationError("format must be csv or json");
      const std::string lines = req.get_param_value("lines");
      query.json_lines = lines == "1" || lines == "true";

      json filter = json::object();
      if (req.has_param("filter")) {
        try {
          filter = json::parse(req.get_param_value("filter"));
        } catch (const json::exception&) {
          throw ValidationError("filter is not valid JSON");
        }
        if (!filter.is_object()) throw ValidationError("filter must be a JSON object");
      }
      for (const auto& [key, value] : req.params) {
        if (key == "collection" || key == "format" || key == "lines" || key == "filter") continue;
        filter[key] = value;
      }
      query.filter = parse_filter(query.collection, filter);
      const ExportDocument doc = run_export(sessions, query);
      res.status = 200;
      res.set_header("X-Record-Count", std::to_string(doc.record_count));
      res.set_content(doc.body, doc.content_type);
    }));

    server.Get("/export/raw", guarded([this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req)) return send_error(res, 401, "researcher token required");
      const std::string word = normalize_lemma(req.get_param_value("word"));
      if (word.empty()) throw ValidationError("word is required");
      const Language lang =
          language_param(req.has_param("language") ? req.get_param_value("language") : "EN");
      const auto graph = sessions.graphs().snapshot(lang, word);
      if (!graph) throw NotFoundError("no graph for '" + word + "'");
      send_json(res, 200, serialize_graph(*graph));
    }));

    server.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
      if (log) log(req.method, req.path, res.status);
    });
  }
};

ApiService::ApiService(SessionManager& sessions, std::vector<ResearcherToken> tokens)
    : impl_(std::make_unique<Impl>(sessions, std::move(tokens))) {
  impl_->routes();
}

ApiService::~ApiService() { stop(); }

void ApiService::set_request_log(RequestLog log) { impl_->log = std::move(log); }

int ApiService::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ApiService::listen() { return impl_->server.listen_after_bind(); }

void ApiService::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void ApiService::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace wordladders
