#include "vidsearch/fixture.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "vidsearch/error.hpp"
#include "vidsearch/segmentation.hpp"

namespace vidsearch {

using nlohmann::json;
namespace fs = std::filesystem;

Dataset fixture_f1() {
  Dataset d;
  d.videos.push_back({"v1", "Race day", "Cars on a raceway", {"racing", "cars"}, 5.0, {}});
  d.videos.push_back({"v2", "Finish line", "A sports car race ends", {"racing"}, 3.0, {}});
  auto at = [](const char* video, Category c, const char* label, double conf, int shot) {
    return Detection{video, c, label, conf, static_cast<double>(shot), static_cast<double>(shot + 1)};
  };
  d.detections = {
      at("v1", Category::kObjects, "car", 0.9, 0),
      at("v1", Category::kPlaces, "raceway", 0.7, 0),
      at("v1", Category::kObjects, "car", 0.85, 1),
      at("v1", Category::kObjects, "person", 0.6, 1),
      at("v1", Category::kObjects, "person", 0.95, 2),
      at("v2", Category::kObjects, "car", 0.3, 0),
      at("v2", Category::kConcepts, "sports_car", 0.8, 1),
      at("v2", Category::kEvents, "racing", 0.9, 2),
  };
  d.texts.push_back({"v2", Category::kStt, 0.0, 3.0, "the race ends"});
  d.map_vectors.push_back({"v1", {1.0, 0.0}});
  d.map_vectors.push_back({"v2", {0.6, 0.8}});
  return d;
}

std::string synthetic_label(Category category, std::size_t n) {
  std::string_view name = to_string(category);
  // "concepts" -> "concept_12"
  return std::string(name.substr(0, name.size() - 1)) + "_" + std::to_string(n);
}

namespace {

const char* const kWords[] = {"exit", "open", "world", "news", "final", "score", "goal", "city",
                              "river", "music", "live", "sale", "stop", "north", "road", "team"};

}  // namespace

void generate_synthetic(const SyntheticConfig& cfg, const DatasetSink& sink) {
  if (cfg.videos == 0) throw_invalid("synthetic dataset needs at least one video");
  if (!(cfg.min_duration_s > 0.0) || cfg.max_duration_s < cfg.min_duration_s) {
    throw_invalid("invalid synthetic duration range");
  }
  if (!(cfg.interval_s > 0.0)) throw_invalid("interval_s must be positive");
  for (std::size_t v : cfg.vocabulary) {
    if (v == 0) throw_invalid("vocabulary sizes must be positive");
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> duration(cfg.min_duration_s, cfg.max_duration_s);
  std::uniform_int_distribution<int> grid(1, 64);
  std::discrete_distribution<int> category_pick({0.4, 0.3, 0.1, 0.2});
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto confidence = [&] {
    if (cfg.dyadic_confidences) return grid(rng) / 64.0;
    return std::round((0.05 + 0.95 * unit(rng)) * 1000.0) / 1000.0;
  };
  auto pick_label = [&](std::size_t size) {
    const double u = unit(rng);
    return std::min(size - 1, static_cast<std::size_t>(static_cast<double>(size) * u * u * u));
  };

  const int width = static_cast<int>(std::to_string(cfg.videos).size());
  std::vector<VideoMeta> videos;
  for (std::size_t i = 0; i < cfg.videos; ++i) {
    std::string id = std::to_string(i);
    id = "video_" + std::string(static_cast<std::size_t>(width) - id.size(), '0') + id;
    double d = duration(rng);
    if (cfg.min_duration_s == cfg.max_duration_s) d = cfg.min_duration_s;
    VideoMeta meta{id, "Synthetic video " + std::to_string(i), "Generated test video", {"synthetic"}, d, {}};
    if (sink.video) sink.video(meta);
    videos.push_back(std::move(meta));
  }

  for (const VideoMeta& video : videos) {
    for (const ShotInterval& shot : segment_video(video.duration_s, cfg.interval_s)) {
      const double start = shot.start_s;
      const double end = shot.end_s;
      for (std::size_t k = 0; k < cfg.detections_per_shot; ++k) {
        const auto c = static_cast<Category>(category_pick(rng));
        Detection d{video.video_id, c, synthetic_label(c, pick_label(cfg.vocabulary[static_cast<std::size_t>(c)])),
                    confidence(), start, end};
        // Events cover a few consecutive shots.
        if (c == Category::kEvents) d.end_s = std::min(video.duration_s, start + 3.0 * cfg.interval_s);
        if (sink.detection) sink.detection(d);
      }
    }
    if (sink.text) {
      std::uniform_int_distribution<std::size_t> word(0, std::size(kWords) - 1);
      for (std::size_t t = 0; t < cfg.text_records_per_video; ++t) {
        const double start = unit(rng) * video.duration_s * 0.9;
        const double end = std::min(video.duration_s, start + cfg.interval_s * (1.0 + 4.0 * unit(rng)));
        std::string text = std::string(kWords[word(rng)]) + " " + kWords[word(rng)];
        sink.text({video.video_id, t % 2 == 0 ? Category::kOcr : Category::kStt, start, end, text});
      }
    }
    if (sink.map_vector && cfg.map_dimension > 0) {
      MapVectorRecord m{video.video_id, std::vector<double>(cfg.map_dimension)};
      for (double& x : m.vector) x = gauss(rng);
      sink.map_vector(m);
    }
  }
}

Dataset generate_synthetic(const SyntheticConfig& config) {
  Dataset d;
  generate_synthetic(config, DatasetSink{
                                 [&](const VideoMeta& v) { d.videos.push_back(v); },
                                 [&](const Detection& x) { d.detections.push_back(x); },
                                 [&](const TextRecord& t) { d.texts.push_back(t); },
                                 [&](const MapVectorRecord& m) { d.map_vectors.push_back(m); },
                             });
  return d;
}

void write_synthetic(const SyntheticConfig& config, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream videos(dir / "videos.jsonl");
  std::ofstream detections(dir / "detections.jsonl");
  std::ofstream text(dir / "text.jsonl");
  std::ofstream maps(dir / "mapvectors.jsonl");
  if (!videos || !detections || !text || !maps) throw Error(ErrorCode::kIoError, "cannot write to " + dir.string());
  generate_synthetic(
      config,
      DatasetSink{
          [&](const VideoMeta& v) {
            videos << json{{"id", v.video_id}, {"title", v.title}, {"description", v.description},
                           {"tags", v.tags}, {"duration_s", v.duration_s}}
                          .dump()
                   << '\n';
          },
          [&](const Detection& d) {
            detections << json{{"video_id", d.video_id}, {"category", to_string(d.category)}, {"label", d.label},
                               {"confidence", d.confidence}, {"start_s", d.start_s}, {"end_s", d.end_s}}
                              .dump()
                       << '\n';
          },
          [&](const TextRecord& t) {
            text << json{{"video_id", t.video_id}, {"source", to_string(t.source)}, {"start_s", t.start_s},
                         {"end_s", t.end_s}, {"text", t.text}}
                        .dump()
                 << '\n';
          },
          [&](const MapVectorRecord& m) { maps << json{{"video_id", m.video_id}, {"vector", m.vector}}.dump() << '\n'; },
      });
  std::ofstream manifest(dir / kManifestFileName);
  manifest << json{{"videos", "videos.jsonl"},
                   {"detections", "detections.jsonl"},
                   {"mapvectors", "mapvectors.jsonl"},
                   {"text", "text.jsonl"},
                   {"interval_s", config.interval_s}}
                  .dump(2)
           << '\n';
}

}  // namespace vidsearch
