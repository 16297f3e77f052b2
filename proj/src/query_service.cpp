#include "vidsearch/query_service.hpp"

#include <charconv>
#include <chrono>

#include <httplib.h>

#include "vidsearch/autocomplete.hpp"
#include "vidsearch/error.hpp"
#include "vidsearch/json_codec.hpp"
#include "vidsearch/map_search.hpp"
#include "vidsearch/query_language.hpp"
#include "vidsearch/shot_search.hpp"
#include "vidsearch/temporal_search.hpp"

namespace vidsearch {

using nlohmann::json;

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParseError:
    case ErrorCode::kUndefinedSimilarity:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kIoError:
      return 500;
  }
  return 500;
}

json parse_body(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw_invalid("request body must be a JSON object");
  return j;
}

std::string require_query(const json& body) {
  const auto it = body.find("query");
  if (it == body.end() || !it->is_string()) throw_invalid("field 'query' must be a string");
  return it->get<std::string>();
}

std::size_t non_negative(const json& body, const char* key, std::size_t fallback) {
  const auto it = body.find(key);
  if (it == body.end() || it->is_null()) return fallback;
  if (!it->is_number_integer()) throw_invalid(std::string("field '") + key + "' must be an integer");
  const auto v = it->get<std::int64_t>();
  if (v < 0) throw_invalid(std::string("field '") + key + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

std::size_t param_size(const QueryParams& params, std::string_view key, std::size_t fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::size_t value = 0;
  const std::string& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw_invalid("parameter '" + std::string(key) + "' must be a non-negative integer");
  }
  return value;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

const Segment& single_segment(const QueryAst& ast) {
  if (ast.segments.size() != 1) {
    throw_invalid("multi-segment queries ('-->') are only valid for temporal search");
  }
  return ast.segments.front();
}

}  // namespace

QueryApi::QueryApi(std::shared_ptr<const FeatureStore> store, std::shared_ptr<SessionStore> sessions,
                   ServiceConfig config)
    : store_(std::move(store)), sessions_(std::move(sessions)), config_(config) {
  if (!store_) throw_invalid("query service needs a feature store");
  if (!sessions_) sessions_ = std::make_shared<SessionStore>();
}

template <typename Handler>
ApiResponse QueryApi::guarded(Handler&& handler) const {
  try {
    return handler();
  } catch (const Error& e) {
    return {status_for(e.code()), error_json(to_string(e.code()), e.what(), e.offset())};
  } catch (const json::exception& e) {
    return {400, error_json("invalid_argument", "malformed request field")};
  } catch (const std::exception&) {
    return {500, error_json("internal", "internal error")};
  }
}

std::size_t QueryApi::limit_from(const json& body) const {
  const std::size_t limit = non_negative(body, "limit", config_.default_limit);
  if (limit < 1) throw_invalid("limit must be at least 1");
  return std::min(limit, config_.max_limit);
}

ApiResponse QueryApi::query_shots(std::string_view raw) const {
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    const json body = parse_body(raw);
    const QueryAst ast = parse_query(require_query(body));
    const std::size_t limit = limit_from(body);
    const std::size_t offset = non_negative(body, "offset", 0);
    json out = page_json(search_shots(*store_, single_segment(ast), limit, offset));
    const std::string canonical = canonicalize(ast);
    json request{{"query", canonical}, {"mode", "shots"}, {"limit", limit}, {"offset", offset}};
    if (auto sid = body.find("session_id"); sid != body.end() && sid->is_string()) {
      request["entry_id"] = sessions_->record_query(sid->get<std::string>(), QueryKind::kShot, canonical);
    }
    request["timing_ms"] = elapsed_ms(start);
    out["request"] = std::move(request);
    return ApiResponse{200, std::move(out)};
  });
}

ApiResponse QueryApi::query_videos(std::string_view raw) const {
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    const json body = parse_body(raw);
    const QueryAst ast = parse_query(require_query(body));
    const Matcher matcher = matcher_from_string(body.value("matcher", std::string("frequency")));
    const std::size_t limit = limit_from(body);
    const std::size_t offset = non_negative(body, "offset", 0);
    json out = page_json(search_videos(*store_, single_segment(ast), matcher, limit, offset));
    const std::string canonical = canonicalize(ast);
    json request{{"query", canonical}, {"mode", "videos"}, {"matcher", to_string(matcher)},
                 {"limit", limit},     {"offset", offset}};
    if (auto sid = body.find("session_id"); sid != body.end() && sid->is_string()) {
      request["entry_id"] = sessions_->record_query(sid->get<std::string>(), QueryKind::kMap, canonical);
    }
    request["timing_ms"] = elapsed_ms(start);
    out["request"] = std::move(request);
    return ApiResponse{200, std::move(out)};
  });
}

ApiResponse QueryApi::query_temporal(std::string_view raw) const {
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    const json body = parse_body(raw);
    const QueryAst ast = parse_query(require_query(body));
    double window = ast.window_s.value_or(config_.default_window_s);
    if (auto w = body.find("window_s"); w != body.end() && !w->is_null()) {
      if (!w->is_number()) throw_invalid("field 'window_s' must be a number");
      window = w->get<double>();
    }
    const std::size_t limit = limit_from(body);
    const std::size_t offset = non_negative(body, "offset", 0);
    json out = page_json(search_temporal(*store_, ast, window, limit, offset));
    const std::string canonical = canonicalize(ast);
    json request{{"query", canonical}, {"mode", "temporal"}, {"window_s", window},
                 {"limit", limit},     {"offset", offset}};
    if (auto sid = body.find("session_id"); sid != body.end() && sid->is_string()) {
      request["entry_id"] = sessions_->record_query(sid->get<std::string>(), QueryKind::kTemporal, canonical);
    }
    request["timing_ms"] = elapsed_ms(start);
    out["request"] = std::move(request);
    return ApiResponse{200, std::move(out)};
  });
}

ApiResponse QueryApi::autocomplete(const QueryParams& params) const {
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    const auto q = params.find("q");
    const std::string fragment = q == params.end() ? std::string() : q->second;
    const std::size_t limit = std::min(param_size(params, "limit", 10), config_.max_limit);
    std::optional<Category> category;
    if (auto c = params.find("category"); c != params.end() && !c->second.empty()) {
      category = category_from_string(c->second);
      if (!category) throw_invalid("unknown category '" + c->second + "'");
    }
    json suggestions = json::array();
    for (const VocabularyEntry& e : suggest(*store_, fragment, limit, category)) {
      suggestions.push_back(suggestion_json(*store_, e));
    }
    json request{{"q", fragment}, {"limit", limit}};
    request["category"] = category ? json(to_string(*category)) : json(nullptr);
    request["timing_ms"] = elapsed_ms(start);
    return ApiResponse{200, json{{"suggestions", std::move(suggestions)}, {"request", std::move(request)}}};
  });
}

ApiResponse QueryApi::video(std::string_view video_id) const {
  return guarded([&] { return ApiResponse{200, video_json(*store_, store_->require_video(video_id))}; });
}

ApiResponse QueryApi::video_shots(std::string_view video_id) const {
  return guarded([&] {
    return ApiResponse{200, json{{"video_id", video_id}, {"shots", store_->video_shots(video_id)}}};
  });
}

ApiResponse QueryApi::similar_videos(std::string_view video_id, const QueryParams& params) const {
  return guarded([&] {
    const std::size_t k = std::min(param_size(params, "k", config_.default_similar_k), config_.max_limit);
    return ApiResponse{200, json{{"video_id", video_id}, {"k", k},
                                 {"results", vidsearch::similar_videos(*store_, video_id, k)}}};
  });
}

ApiResponse QueryApi::shot(std::string_view shot_id, const QueryParams& params) const {
  return guarded([&] {
    const ShotOrdinal s = store_->require_shot(shot_id);
    const std::size_t k = param_size(params, "k", store_->config().profile_k);
    const VideoMeta& meta = store_->video(store_->shot_record(s).video);
    return ApiResponse{200, json{{"shot", store_->shot(s)}, {"video", meta}, {"profile", store_->shot_profile(s, k)}}};
  });
}

ApiResponse QueryApi::shots_like(std::string_view shot_id, const QueryParams& params) const {
  return guarded([&] {
    const std::size_t limit = param_size(params, "limit", config_.default_limit);
    if (limit < 1) throw_invalid("limit must be at least 1");
    const std::size_t offset = param_size(params, "offset", 0);
    json out = page_json(vidsearch::shots_like(*store_, shot_id, std::min(limit, config_.max_limit), offset));
    out["shot_id"] = shot_id;
    return ApiResponse{200, std::move(out)};
  });
}

ApiResponse QueryApi::session_event(std::string_view session_id, std::string_view raw) const {
  return guarded([&] {
    const json body = parse_body(raw);
    const std::string type = body.value("type", std::string());
    if (type == "query") {
      std::optional<std::int64_t> ts;
      if (auto t = body.find("timestamp_ms"); t != body.end() && !t->is_null()) ts = t->get<std::int64_t>();
      const auto id = sessions_->record_query(session_id, query_kind_from_string(body.at("kind").get<std::string>()),
                                              require_query(body), ts);
      return ApiResponse{200, json{{"session_id", session_id}, {"entry_id", id}}};
    }
    if (type == "inspection") {
      const HistoryEntry e = sessions_->record_inspection(
          session_id, body.at("entry_id").get<std::uint64_t>(), body.at("shot_id").get<std::string>(),
          body.at("started_at_ms").get<std::int64_t>(), body.at("dwell_ms").get<std::int64_t>());
      return ApiResponse{200, json{{"session_id", session_id}, {"entry", e}}};
    }
    throw_invalid("event type must be 'query' or 'inspection'");
  });
}

ApiResponse QueryApi::session_history(std::string_view session_id) const {
  return guarded([&] {
    return ApiResponse{200, json{{"session_id", session_id}, {"entries", sessions_->get_history(session_id)}}};
  });
}

// ---------------------------------------------------------------------------

std::pair<std::string, int> parse_address(std::string_view addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string_view::npos || colon == 0) throw_invalid("address must be host:port");
  int port = 0;
  const auto digits = addr.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || port < 0 || port > 65535) {
    throw_invalid("invalid port in '" + std::string(addr) + "'");
  }
  return {std::string(addr.substr(0, colon)), port};
}

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

QueryParams params_of(const httplib::Request& req) {
  QueryParams out;
  for (const auto& [k, v] : req.params) out.emplace(k, v);
  return out;
}

void reply(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

}  // namespace

HttpServer::HttpServer(const QueryApi& api, std::optional<std::filesystem::path> assets_dir)
    : impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  srv.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  srv.Post("/query/shots", [&api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.query_shots(req.body));
  });
  srv.Post("/query/videos", [&api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.query_videos(req.body));
  });
  srv.Post("/query/temporal", [&api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.query_temporal(req.body));
  });
  srv.Get("/autocomplete", [&api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.autocomplete(params_of(req)));
  });
  srv.Get(R"(/videos/([^/]+)/similar)", [&api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.similar_videos(req.matches[1].str(), params_of(req)));
  });
  srv.Get(R"(/videos/([^/]+)/shots)", [&api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.video_shots(req.matches[1].str()));
  });
  srv.Get(R"(/videos/([^/]+))", [&api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.video(req.matches[1].str()));
  });
  srv.Get(R"(/shots/([^/]+)/similar)", [&api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.shots_like(req.matches[1].str(), params_of(req)));
  });
  srv.Get(R"(/shots/([^/]+))", [&api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.shot(req.matches[1].str(), params_of(req)));
  });
  srv.Post(R"(/sessions/([^/]+)/events)", [&api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.session_event(req.matches[1].str(), req.body));
  });
  srv.Get(R"(/sessions/([^/]+)/history)", [&api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.session_history(req.matches[1].str()));
  });

  if (assets_dir && std::filesystem::is_directory(*assets_dir)) {
    srv.set_mount_point("/assets", assets_dir->string());
  }

  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const char* code = res.status == 404 ? "not_found" : (res.status < 500 ? "bad_request" : "internal");
    res.set_content(error_json(code, httplib::status_message(res.status)).dump(), "application/json");
  });
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
    res.status = 500;
    res.set_content(error_json("internal", "internal error").dump(), "application/json");
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  auto& srv = impl_->server;
  if (port == 0) {
    const int bound = srv.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::kIoError, "cannot bind " + host);
    return bound;
  }
  if (!srv.bind_to_port(host, port)) {
    throw Error(ErrorCode::kIoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace vidsearch
