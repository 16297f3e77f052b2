#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace vidsearch {

enum class QueryKind { kShot, kMap, kTemporal };

std::string_view to_string(QueryKind kind);
// "shot-query" | "map-query" | "temporal-query"; kInvalidArgument otherwise.
QueryKind query_kind_from_string(std::string_view name);

struct Inspection {
  std::string shot_id;
  std::int64_t started_at_ms = 0;
  std::int64_t dwell_ms = 0;

  bool operator==(const Inspection&) const = default;
};

struct HistoryEntry {
  std::uint64_t entry_id = 0;
  std::int64_t timestamp_ms = 0;
  QueryKind kind = QueryKind::kShot;
  std::string canonical_query;
  std::optional<Inspection> first;
  std::optional<Inspection> last;
  std::optional<Inspection> longest;
  std::vector<Inspection> inspections;  // raw stream, in arrival order
};

// first = earliest start (earlier arrival wins ties), last = latest start
// (later arrival wins ties), longest = largest dwell (earliest start, then
// earlier arrival wins ties).
void apply_inspection(HistoryEntry& entry, Inspection inspection);

// Per-session query/browse log. Sessions are independent: each has its own
// lock, the session table only takes a shared lock for lookups.
class SessionStore {
 public:
  using Clock = std::function<std::int64_t()>;

  struct Options {
    std::optional<std::filesystem::path> log_path;  // append-only JSONL, replayed on start
    std::int64_t idle_ttl_ms = 6LL * 60 * 60 * 1000;
    Clock clock;  // defaults to system clock in ms
  };

  SessionStore();
  explicit SessionStore(Options options);

  // Throws kInvalidArgument when the query does not parse.
  std::uint64_t record_query(std::string_view session_id, QueryKind kind, std::string_view canonical_query,
                             std::optional<std::int64_t> timestamp_ms = std::nullopt);
  // Throws kNotFound for an unknown session/entry, kInvalidArgument for dwell < 0.
  HistoryEntry record_inspection(std::string_view session_id, std::uint64_t entry_id, std::string_view shot_id,
                                 std::int64_t started_at_ms, std::int64_t dwell_ms);
  // Chronological; empty for unknown sessions.
  std::vector<HistoryEntry> get_history(std::string_view session_id) const;

  // Drops sessions idle longer than the TTL; returns how many were dropped.
  std::size_t expire_idle();
  std::size_t session_count() const;

 private:
  struct Session {
    mutable std::mutex mutex;
    std::vector<HistoryEntry> entries;
    std::uint64_t next_id = 1;
    std::int64_t last_active_ms = 0;
  };

  std::shared_ptr<Session> find(std::string_view session_id) const;
  std::shared_ptr<Session> find_or_create(std::string_view session_id);
  std::uint64_t append_query(Session& s, QueryKind kind, std::string canonical_query, std::int64_t timestamp_ms,
                             std::optional<std::uint64_t> entry_id);
  HistoryEntry& entry(Session& s, std::string_view session_id, std::uint64_t entry_id);
  void replay();
  void log_line(const std::string& line);

  Options options_;
  mutable std::shared_mutex table_mutex_;
  std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
  std::mutex log_mutex_;
  std::ofstream log_;
};

}  // namespace vidsearch
