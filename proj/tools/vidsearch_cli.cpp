#include <algorithm>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vidsearch/error.hpp"
#include "vidsearch/fixture.hpp"
#include "vidsearch/ingest.hpp"
#include "vidsearch/json_codec.hpp"
#include "vidsearch/query_service.hpp"

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::shared_ptr<const vidsearch::FeatureStore> load_store(const std::string& data, double* ingest_ms) {
  const auto start = Clock::now();
  auto manifest = vidsearch::load_manifest(vidsearch::resolve_manifest_path(data));
  auto store = std::make_shared<const vidsearch::FeatureStore>(vidsearch::ingest_dataset(manifest));
  if (ingest_ms) *ingest_ms = ms_since(start);
  return store;
}

vidsearch::HttpServer* g_server = nullptr;

// A query string such as "--objects car" looks like an option to the argument
// parser; rewrite it into --query=<dsl>.
std::vector<std::string> protect_query_argument(int argc, char** argv) {
  static const std::vector<std::string> known = {"--data", "--mode", "--matcher", "--limit", "--offset", "--window",
                                                 "--repeat", "--stats-only", "--query", "-h", "--help"};
  std::vector<std::string> args(argv, argv + argc);
  if (args.size() < 3 || args[1] != "query") return args;
  for (std::size_t i = 2; i < args.size(); ++i) {
    const std::string& a = args[i];
    const std::string name = a.substr(0, a.find('='));
    if (std::find(known.begin(), known.end(), name) != known.end()) {
      if (a.find('=') == std::string::npos && name != "--stats-only" && name != "-h" && name != "--help") ++i;
      continue;
    }
    if (!a.empty() && a.front() == '-') {
      args[i] = "--query=" + a;
      break;
    }
  }
  return args;
}

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive video retrieval engine"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Ingest a dataset and print its summary");
  std::string ingest_manifest;
  ingest->add_option("manifest", ingest_manifest, "Manifest file or dataset directory")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the JSON HTTP API");
  std::string addr = "127.0.0.1:8080";
  std::string serve_data;
  std::string assets;
  std::string session_log;
  double session_ttl_h = 6.0;
  serve->add_option("--addr", addr, "host:port to bind")->envname("VIDSEARCH_ADDR")->capture_default_str();
  serve->add_option("--data", serve_data, "Manifest file or dataset directory")->envname("VIDSEARCH_DATA")->required();
  serve->add_option("--assets", assets, "Directory served under /assets (default <data>/assets)");
  serve->add_option("--session-log", session_log, "Append-only session event log");
  serve->add_option("--session-ttl-hours", session_ttl_h, "Idle session expiry")->capture_default_str();

  // query
  auto* query = app.add_subcommand("query", "Run one query offline");
  std::string dsl;
  std::string query_data;
  std::string mode = "shots";
  std::string matcher = "frequency";
  std::size_t limit = 100;
  std::size_t offset = 0;
  double window = 0.0;
  std::size_t repeat = 1;
  bool stats_only = false;
  query->add_option("dsl,--query", dsl, "Query string")->required();
  query->add_option("--data", query_data, "Manifest file or dataset directory")->envname("VIDSEARCH_DATA")->required();
  query->add_option("--mode", mode, "shots | videos | temporal")
      ->check(CLI::IsMember({"shots", "videos", "temporal"}))
      ->capture_default_str();
  query->add_option("--matcher", matcher, "frequency | tfidf (videos mode)")->capture_default_str();
  query->add_option("--limit", limit)->capture_default_str();
  query->add_option("--offset", offset)->capture_default_str();
  query->add_option("--window", window, "Temporal window in seconds (overrides the query)");
  query->add_option("--repeat", repeat, "Run the query N times and report latency percentiles")
      ->check(CLI::PositiveNumber);
  query->add_flag("--stats-only", stats_only, "Print only the timing block");

  // generate-fixture
  auto* gen = app.add_subcommand("generate-fixture", "Write a synthetic (or the reference F1) dataset");
  std::string out_dir;
  bool f1 = false;
  vidsearch::SyntheticConfig cfg;
  double duration = cfg.min_duration_s;
  gen->add_option("--out", out_dir, "Output directory")->required();
  gen->add_flag("--f1", f1, "Write the two-video reference fixture instead");
  gen->add_option("--videos", cfg.videos)->capture_default_str();
  gen->add_option("--duration", duration, "Video duration in seconds")->capture_default_str();
  double max_duration = 0.0;
  gen->add_option("--max-duration", max_duration, "Draw durations uniformly up to this value");
  gen->add_option("--interval", cfg.interval_s, "Shot interval in seconds")->capture_default_str();
  gen->add_option("--detections-per-shot", cfg.detections_per_shot)->capture_default_str();
  gen->add_option("--text-per-video", cfg.text_records_per_video)->capture_default_str();
  gen->add_option("--dim", cfg.map_dimension, "Map vector dimension")->capture_default_str();
  gen->add_option("--seed", cfg.seed)->capture_default_str();
  gen->add_flag("--dyadic", cfg.dyadic_confidences, "Confidences on the k/64 grid");

  std::vector<std::string> args = protect_query_argument(argc, argv);
  app.name(args.front());
  args.erase(args.begin());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*ingest) {
      double ms = 0.0;
      auto store = load_store(ingest_manifest, &ms);
      json out = store->summary();
      out["ingest_ms"] = ms;
      std::cout << out.dump(2) << '\n';
      return 0;
    }

    if (*serve) {
      double ms = 0.0;
      auto store = load_store(serve_data, &ms);
      std::cerr << "ingested " << store->video_count() << " videos, " << store->shot_count() << " shots in "
                << static_cast<long long>(ms) << " ms (" << store->summary().rejected.size() << " rejected)\n";
      vidsearch::SessionStore::Options options;
      if (!session_log.empty()) options.log_path = session_log;
      options.idle_ttl_ms = static_cast<std::int64_t>(session_ttl_h * 3600.0 * 1000.0);
      auto sessions = std::make_shared<vidsearch::SessionStore>(options);
      vidsearch::QueryApi api(store, sessions);
      std::filesystem::path assets_dir = assets;
      if (assets.empty()) {
        const auto data_path = std::filesystem::path(serve_data);
        assets_dir = (std::filesystem::is_directory(data_path) ? data_path : data_path.parent_path()) / "assets";
      }
      vidsearch::HttpServer server(api, assets_dir);
      const auto [host, port] = vidsearch::parse_address(addr);
      const int bound = server.bind(host, port);
      std::cerr << "listening on " << host << ":" << bound << '\n';
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.run();
      g_server = nullptr;
      return 0;
    }

    if (*query) {
      double ingest_ms = 0.0;
      auto store = load_store(query_data, &ingest_ms);
      vidsearch::QueryApi api(store, nullptr);
      json body{{"query", dsl}, {"limit", limit}, {"offset", offset}};
      if (mode == "videos") body["matcher"] = matcher;
      if (mode == "temporal" && window > 0.0) body["window_s"] = window;
      const std::string raw = body.dump();

      std::vector<double> latencies;
      vidsearch::ApiResponse response;
      for (std::size_t i = 0; i < repeat; ++i) {
        const auto start = Clock::now();
        if (mode == "shots") {
          response = api.query_shots(raw);
        } else if (mode == "videos") {
          response = api.query_videos(raw);
        } else {
          response = api.query_temporal(raw);
        }
        latencies.push_back(ms_since(start));
      }
      std::sort(latencies.begin(), latencies.end());
      auto percentile = [&](double p) {
        const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(latencies.size())));
        return latencies[std::clamp<std::size_t>(rank, 1, latencies.size()) - 1];
      };
      double mean = 0.0;
      for (double l : latencies) mean += l;
      mean /= static_cast<double>(latencies.size());
      json timing{{"ingest_ms", ingest_ms},   {"repetitions", repeat},          {"p50_ms", percentile(0.50)},
                  {"p95_ms", percentile(0.95)}, {"max_ms", latencies.back()}, {"mean_ms", mean}};
      json out = stats_only ? json{{"status", response.status}} : response.body;
      out["timing"] = timing;
      if (stats_only && response.body.contains("total")) out["total"] = response.body["total"];
      std::cout << out.dump(2) << '\n';
      return response.status == 200 ? 0 : 1;
    }

    if (*gen) {
      if (f1) {
        vidsearch::write_dataset(vidsearch::fixture_f1(), out_dir, vidsearch::kFixtureF1IntervalS);
      } else {
        cfg.min_duration_s = duration;
        cfg.max_duration_s = std::max(duration, max_duration);
        vidsearch::write_synthetic(cfg, out_dir);
      }
      std::cout << "wrote dataset to " << out_dir << '\n';
      return 0;
    }
  } catch (const vidsearch::Error& e) {
    std::cerr << "error (" << vidsearch::to_string(e.code()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
