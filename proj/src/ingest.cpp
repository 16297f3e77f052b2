#include "vidsearch/ingest.hpp"

#include <fstream>
#include <string>

#include <json.hpp>

#include "vidsearch/error.hpp"

namespace vidsearch {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw_invalid("malformed JSON in " + path.string());
  return doc;
}

std::string require_string(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw std::invalid_argument(std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

double require_number(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) throw std::invalid_argument(std::string("missing number field '") + key + "'");
  return it->get<double>();
}

std::vector<std::string> optional_strings(const json& j, const char* key) {
  std::vector<std::string> out;
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_array()) throw std::invalid_argument(std::string("field '") + key + "' must be an array");
  for (const json& v : *it) {
    if (!v.is_string()) throw std::invalid_argument(std::string("field '") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

// Calls `handle(json)` for each non-blank line; parse or field errors become
// rejections carrying file and line number.
template <typename Handler>
void for_each_record(StoreBuilder& builder, const fs::path& path, Handler handle) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::string line;
  RecordLocation where{path.filename().string(), 0};
  while (std::getline(in, line)) {
    ++where.line;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      builder.reject(where, "malformed line");
      continue;
    }
    try {
      handle(record, where);
    } catch (const std::exception& e) {
      builder.reject(where, std::string("malformed record: ") + e.what());
    }
  }
}

}  // namespace

fs::path resolve_manifest_path(const fs::path& path_or_dir) {
  if (fs::is_directory(path_or_dir)) return path_or_dir / kManifestFileName;
  return path_or_dir;
}

Manifest load_manifest(const fs::path& file) {
  const fs::path path = resolve_manifest_path(file);
  const json doc = read_json_file(path);
  if (!doc.is_object()) throw_invalid("manifest must be a JSON object");
  const fs::path base = path.parent_path();
  auto resolve = [&](const char* key) -> std::optional<fs::path> {
    const auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw_invalid(std::string("manifest field '") + key + "' must be a path string");
    fs::path p = it->get<std::string>();
    return p.is_absolute() ? p : base / p;
  };
  Manifest m;
  auto videos = resolve("videos");
  if (!videos) throw_invalid("manifest must name a videos file");
  m.videos = *videos;
  m.detections = resolve("detections");
  m.mapvectors = resolve("mapvectors");
  m.text = resolve("text");
  if (auto it = doc.find("interval_s"); it != doc.end()) {
    if (!it->is_number() || !(it->get<double>() > 0.0)) throw_invalid("manifest interval_s must be a positive number");
    m.interval_s = it->get<double>();
  }
  return m;
}

FeatureStore ingest_dataset(const Manifest& manifest, std::size_t profile_k) {
  StoreBuilder builder(StoreConfig{manifest.interval_s, profile_k});

  for_each_record(builder, manifest.videos, [&](const json& r, const RecordLocation& where) {
    VideoMeta v;
    v.video_id = require_string(r, "id");
    v.title = r.value("title", std::string());
    v.description = r.value("description", std::string());
    v.tags = optional_strings(r, "tags");
    v.duration_s = require_number(r, "duration_s");
    v.keyframes = optional_strings(r, "keyframes");
    builder.add_video(std::move(v), where);
  });

  if (manifest.detections) {
    for_each_record(builder, *manifest.detections, [&](const json& r, const RecordLocation& where) {
      Detection d;
      d.video_id = require_string(r, "video_id");
      const std::string category = require_string(r, "category");
      const auto c = category_from_string(category);
      if (!c) {
        builder.reject(where, "unknown category '" + category + "'");
        return;
      }
      d.category = *c;
      d.label = require_string(r, "label");
      d.confidence = require_number(r, "confidence");
      d.start_s = require_number(r, "start_s");
      d.end_s = require_number(r, "end_s");
      builder.add_detection(d, where);
    });
  }

  if (manifest.text) {
    for_each_record(builder, *manifest.text, [&](const json& r, const RecordLocation& where) {
      TextRecord t;
      t.video_id = require_string(r, "video_id");
      const std::string source = require_string(r, "source");
      if (source == "ocr") {
        t.source = Category::kOcr;
      } else if (source == "stt") {
        t.source = Category::kStt;
      } else {
        builder.reject(where, "unknown text source '" + source + "'");
        return;
      }
      t.start_s = require_number(r, "start_s");
      t.end_s = require_number(r, "end_s");
      t.text = require_string(r, "text");
      builder.add_text(t, where);
    });
  }

  if (manifest.mapvectors) {
    for_each_record(builder, *manifest.mapvectors, [&](const json& r, const RecordLocation& where) {
      MapVectorRecord m;
      m.video_id = require_string(r, "video_id");
      const auto it = r.find("vector");
      if (it == r.end() || !it->is_array()) throw std::invalid_argument("missing array field 'vector'");
      m.vector.reserve(it->size());
      for (const json& x : *it) {
        if (!x.is_number()) throw std::invalid_argument("vector must hold numbers");
        m.vector.push_back(x.get<double>());
      }
      builder.add_map_vector(m, where);
    });
  }

  return std::move(builder).build();
}

FeatureStore build_store(const Dataset& dataset, StoreConfig config) {
  StoreBuilder builder(config);
  std::size_t line = 0;
  for (const VideoMeta& v : dataset.videos) builder.add_video(v, {"videos", ++line});
  line = 0;
  for (const Detection& d : dataset.detections) builder.add_detection(d, {"detections", ++line});
  line = 0;
  for (const TextRecord& t : dataset.texts) builder.add_text(t, {"text", ++line});
  line = 0;
  for (const MapVectorRecord& m : dataset.map_vectors) builder.add_map_vector(m, {"mapvectors", ++line});
  return std::move(builder).build();
}

void write_dataset(const Dataset& dataset, const fs::path& dir, double interval_s) {
  fs::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("videos.jsonl");
    for (const VideoMeta& v : dataset.videos) {
      json j{{"id", v.video_id}, {"title", v.title}, {"description", v.description}, {"tags", v.tags},
             {"duration_s", v.duration_s}};
      if (!v.keyframes.empty()) j["keyframes"] = v.keyframes;
      out << j.dump() << '\n';
    }
  }
  {
    auto out = open("detections.jsonl");
    for (const Detection& d : dataset.detections) {
      out << json{{"video_id", d.video_id}, {"category", to_string(d.category)}, {"label", d.label},
                  {"confidence", d.confidence}, {"start_s", d.start_s}, {"end_s", d.end_s}}
                 .dump()
          << '\n';
    }
  }
  {
    auto out = open("text.jsonl");
    for (const TextRecord& t : dataset.texts) {
      out << json{{"video_id", t.video_id}, {"source", to_string(t.source)}, {"start_s", t.start_s},
                  {"end_s", t.end_s}, {"text", t.text}}
                 .dump()
          << '\n';
    }
  }
  {
    auto out = open("mapvectors.jsonl");
    for (const MapVectorRecord& m : dataset.map_vectors) {
      out << json{{"video_id", m.video_id}, {"vector", m.vector}}.dump() << '\n';
    }
  }
  auto out = open(kManifestFileName);
  out << json{{"videos", "videos.jsonl"},
              {"detections", "detections.jsonl"},
              {"mapvectors", "mapvectors.jsonl"},
              {"text", "text.jsonl"},
              {"interval_s", interval_s}}
             .dump(2)
      << '\n';
}

}  // namespace vidsearch
