#include "vidsearch/session_history.hpp"

#include <algorithm>
#include <chrono>

#include <json.hpp>

#include "vidsearch/error.hpp"
#include "vidsearch/query_language.hpp"

namespace vidsearch {

using nlohmann::json;

std::string_view to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::kShot: return "shot-query";
    case QueryKind::kMap: return "map-query";
    case QueryKind::kTemporal: return "temporal-query";
  }
  return "shot-query";
}

QueryKind query_kind_from_string(std::string_view name) {
  if (name == "shot-query") return QueryKind::kShot;
  if (name == "map-query") return QueryKind::kMap;
  if (name == "temporal-query") return QueryKind::kTemporal;
  throw_invalid("unknown query kind '" + std::string(name) + "'");
}

void apply_inspection(HistoryEntry& e, Inspection in) {
  if (!e.first || in.started_at_ms < e.first->started_at_ms) e.first = in;
  if (!e.last || in.started_at_ms >= e.last->started_at_ms) e.last = in;
  if (!e.longest || in.dwell_ms > e.longest->dwell_ms ||
      (in.dwell_ms == e.longest->dwell_ms && in.started_at_ms < e.longest->started_at_ms)) {
    e.longest = in;
  }
  e.inspections.push_back(std::move(in));
}

SessionStore::SessionStore() : SessionStore(Options{}) {}

SessionStore::SessionStore(Options options) : options_(std::move(options)) {
  if (!options_.clock) {
    options_.clock = [] {
      return std::chrono::duration_cast<std::chrono::milliseconds>(
                 std::chrono::system_clock::now().time_since_epoch())
          .count();
    };
  }
  if (options_.log_path) {
    replay();
    log_.open(*options_.log_path, std::ios::app);
    if (!log_) throw Error(ErrorCode::kIoError, "cannot open session log " + options_.log_path->string());
  }
}

std::shared_ptr<SessionStore::Session> SessionStore::find(std::string_view session_id) const {
  std::shared_lock lock(table_mutex_);
  auto it = sessions_.find(session_id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::shared_ptr<SessionStore::Session> SessionStore::find_or_create(std::string_view session_id) {
  if (auto s = find(session_id)) return s;
  std::unique_lock lock(table_mutex_);
  auto [it, inserted] = sessions_.try_emplace(std::string(session_id), nullptr);
  if (inserted) it->second = std::make_shared<Session>();
  return it->second;
}

std::uint64_t SessionStore::append_query(Session& s, QueryKind kind, std::string canonical_query,
                                         std::int64_t timestamp_ms, std::optional<std::uint64_t> entry_id) {
  HistoryEntry e;
  e.entry_id = entry_id.value_or(s.next_id);
  s.next_id = std::max(s.next_id, e.entry_id + 1);
  e.timestamp_ms = timestamp_ms;
  e.kind = kind;
  e.canonical_query = std::move(canonical_query);
  auto pos = std::upper_bound(s.entries.begin(), s.entries.end(), timestamp_ms,
                              [](std::int64_t t, const HistoryEntry& h) { return t < h.timestamp_ms; });
  const std::uint64_t id = e.entry_id;
  s.entries.insert(pos, std::move(e));
  return id;
}

HistoryEntry& SessionStore::entry(Session& s, std::string_view session_id, std::uint64_t entry_id) {
  auto it = std::find_if(s.entries.begin(), s.entries.end(),
                         [entry_id](const HistoryEntry& h) { return h.entry_id == entry_id; });
  if (it == s.entries.end()) {
    throw_not_found("unknown history entry " + std::to_string(entry_id) + " in session '" +
                    std::string(session_id) + "'");
  }
  return *it;
}

std::uint64_t SessionStore::record_query(std::string_view session_id, QueryKind kind,
                                         std::string_view canonical_query,
                                         std::optional<std::int64_t> timestamp_ms) {
  if (session_id.empty()) throw_invalid("empty session id");
  try {
    parse_query(canonical_query);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("unparsable query: ") + e.what(), e.offset());
  }
  expire_idle();
  const std::int64_t now = options_.clock();
  const std::int64_t ts = timestamp_ms.value_or(now);
  auto session = find_or_create(session_id);
  std::uint64_t id = 0;
  {
    std::lock_guard lock(session->mutex);
    session->last_active_ms = now;
    id = append_query(*session, kind, std::string(canonical_query), ts, std::nullopt);
  }
  if (log_.is_open()) {
    log_line(json{{"event", "query"}, {"session_id", session_id}, {"entry_id", id}, {"timestamp_ms", ts},
                  {"kind", to_string(kind)}, {"canonical_query", canonical_query}, {"logged_at_ms", now}}
                 .dump());
  }
  return id;
}

HistoryEntry SessionStore::record_inspection(std::string_view session_id, std::uint64_t entry_id,
                                             std::string_view shot_id, std::int64_t started_at_ms,
                                             std::int64_t dwell_ms) {
  if (dwell_ms < 0) throw_invalid("dwell_ms must be non-negative");
  auto session = find(session_id);
  if (!session) throw_not_found("unknown session '" + std::string(session_id) + "'");
  const std::int64_t now = options_.clock();
  HistoryEntry updated;
  {
    std::lock_guard lock(session->mutex);
    HistoryEntry& e = entry(*session, session_id, entry_id);
    apply_inspection(e, {std::string(shot_id), started_at_ms, dwell_ms});
    session->last_active_ms = now;
    updated = e;
  }
  if (log_.is_open()) {
    log_line(json{{"event", "inspection"}, {"session_id", session_id}, {"entry_id", entry_id},
                  {"shot_id", shot_id}, {"started_at_ms", started_at_ms}, {"dwell_ms", dwell_ms},
                  {"logged_at_ms", now}}
                 .dump());
  }
  return updated;
}

std::vector<HistoryEntry> SessionStore::get_history(std::string_view session_id) const {
  auto session = find(session_id);
  if (!session) return {};
  std::lock_guard lock(session->mutex);
  if (options_.clock() - session->last_active_ms > options_.idle_ttl_ms) return {};
  return session->entries;
}

std::size_t SessionStore::expire_idle() {
  const std::int64_t now = options_.clock();
  std::unique_lock lock(table_mutex_);
  std::size_t dropped = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    std::int64_t last = 0;
    {
      std::lock_guard session_lock(it->second->mutex);
      last = it->second->last_active_ms;
    }
    if (now - last > options_.idle_ttl_ms) {
      it = sessions_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

std::size_t SessionStore::session_count() const {
  std::shared_lock lock(table_mutex_);
  return sessions_.size();
}

void SessionStore::log_line(const std::string& line) {
  std::lock_guard lock(log_mutex_);
  log_ << line << '\n';
  log_.flush();
}

void SessionStore::replay() {
  std::ifstream in(*options_.log_path);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    const json event = json::parse(line, nullptr, false);
    // A torn final line from a crash is skipped.
    if (event.is_discarded() || !event.is_object()) continue;
    try {
      const std::string session_id = event.at("session_id").get<std::string>();
      const std::int64_t logged_at = event.value("logged_at_ms", std::int64_t{0});
      auto session = find_or_create(session_id);
      std::lock_guard lock(session->mutex);
      session->last_active_ms = std::max(session->last_active_ms, logged_at);
      const std::string kind = event.at("event").get<std::string>();
      if (kind == "query") {
        append_query(*session, query_kind_from_string(event.at("kind").get<std::string>()),
                     event.at("canonical_query").get<std::string>(), event.at("timestamp_ms").get<std::int64_t>(),
                     event.at("entry_id").get<std::uint64_t>());
      } else if (kind == "inspection") {
        HistoryEntry& e = entry(*session, session_id, event.at("entry_id").get<std::uint64_t>());
        apply_inspection(e, {event.at("shot_id").get<std::string>(), event.at("started_at_ms").get<std::int64_t>(),
                             event.at("dwell_ms").get<std::int64_t>()});
      }
    } catch (const std::exception&) {
      continue;
    }
  }
  expire_idle();
}

}  // namespace vidsearch
