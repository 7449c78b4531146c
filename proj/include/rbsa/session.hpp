#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rbsa/trace.hpp"
#include "rbsa/tree.hpp"

namespace httplib {
class Server;
}

namespace rbsa {

struct HistoryEntry {
  std::string op;  // "insert" or "delete"
  Key key = 0;
  std::optional<Trace> trace;  // deletes only
};

struct Session {
  std::string id;
  Tree tree;
  std::vector<HistoryEntry> history;
  std::mutex mu;  // serializes requests against this session

  /// Traces in the order their deletes ran.
  std::vector<const Trace*> traces() const;
};

/// In-memory session registry. Lookups are thread-safe; callers lock
/// Session::mu before touching a session's tree or history.
class SessionStore {
 public:
  /// Throws DuplicateKey.
  std::shared_ptr<Session> create(const std::vector<Key>& keys);
  std::shared_ptr<Session> get(const std::string& id) const;
  /// Deep copy under a fresh id; nullptr when `id` is unknown.
  std::shared_ptr<Session> fork(const std::string& id);

 private:
  std::string next_id();

  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  unsigned long counter_ = 0;
};

/// Adds the session endpoints, /health and CORS handling to `server`.
void register_routes(httplib::Server& server, SessionStore& store);

}  // namespace rbsa
