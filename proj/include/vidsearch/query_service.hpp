#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "vidsearch/feature_store.hpp"
#include "vidsearch/session_history.hpp"

namespace vidsearch {

struct ServiceConfig {
  std::size_t default_limit = 100;
  std::size_t max_limit = 1000;
  double default_window_s = 30.0;
  std::size_t default_similar_k = 10;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

using QueryParams = std::map<std::string, std::string, std::less<>>;

// Transport-independent request handlers; the HTTP server is a thin router
// over these. Every method returns a structured error body instead of
// throwing.
class QueryApi {
 public:
  QueryApi(std::shared_ptr<const FeatureStore> store, std::shared_ptr<SessionStore> sessions,
           ServiceConfig config = {});

  ApiResponse query_shots(std::string_view body) const;
  ApiResponse query_videos(std::string_view body) const;
  ApiResponse query_temporal(std::string_view body) const;
  ApiResponse autocomplete(const QueryParams& params) const;
  ApiResponse video(std::string_view video_id) const;
  ApiResponse video_shots(std::string_view video_id) const;
  ApiResponse similar_videos(std::string_view video_id, const QueryParams& params) const;
  ApiResponse shot(std::string_view shot_id, const QueryParams& params) const;
  ApiResponse shots_like(std::string_view shot_id, const QueryParams& params) const;
  ApiResponse session_event(std::string_view session_id, std::string_view body) const;
  ApiResponse session_history(std::string_view session_id) const;

  const FeatureStore& store() const { return *store_; }
  const ServiceConfig& config() const { return config_; }

 private:
  template <typename Handler>
  ApiResponse guarded(Handler&& handler) const;
  std::size_t limit_from(const nlohmann::json& body) const;

  std::shared_ptr<const FeatureStore> store_;
  std::shared_ptr<SessionStore> sessions_;
  ServiceConfig config_;
};

// cpp-httplib server exposing QueryApi over HTTP/1.1 with CORS enabled.
class HttpServer {
 public:
  explicit HttpServer(const QueryApi& api, std::optional<std::filesystem::path> assets_dir = std::nullopt);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 binds an ephemeral port. Returns the bound port; throws kIoError.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// "host:port" -> (host, port); throws kInvalidArgument.
std::pair<std::string, int> parse_address(std::string_view addr);

}  // namespace vidsearch
