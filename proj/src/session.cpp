#include "rbsa/session.hpp"

#include <httplib.h>

#include <algorithm>

#include "rbsa/error.hpp"
#include "rbsa/sa_engine.hpp"
#include "rbsa/traditional_engine.hpp"
#include "rbsa/tree_io.hpp"

namespace rbsa {

std::vector<const Trace*> Session::traces() const {
  std::vector<const Trace*> out;
  for (const HistoryEntry& h : history) {
    if (h.trace) out.push_back(&*h.trace);
  }
  return out;
}

std::string SessionStore::next_id() { return "s" + std::to_string(++counter_); }

std::shared_ptr<Session> SessionStore::create(const std::vector<Key>& keys) {
  auto s = std::make_shared<Session>();
  for (Key k : keys) {
    s->tree.insert(k);
    s->history.push_back({"insert", k, std::nullopt});
  }
  std::lock_guard lock(mu_);
  s->id = next_id();
  sessions_[s->id] = s;
  return s;
}

std::shared_ptr<Session> SessionStore::get(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::shared_ptr<Session> SessionStore::fork(const std::string& id) {
  auto src = get(id);
  if (!src) return nullptr;
  auto s = std::make_shared<Session>();
  {
    std::lock_guard lock(src->mu);
    s->tree = src->tree;
    s->history = src->history;
  }
  std::lock_guard lock(mu_);
  s->id = next_id();
  sessions_[s->id] = s;
  return s;
}

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& msg) {
  Json j;
  j["error"] = std::string(code);
  j["message"] = msg;
  send_json(res, status, j);
}

int status_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::KeyNotFound:
      return 404;
    case ErrorCode::DuplicateKey:
    case ErrorCode::MalformedDocument:
      return 400;
    default:
      return 500;
  }
}

std::optional<Json> parse_body(const httplib::Request& req, httplib::Response& res) {
  if (req.body.empty()) return Json::object();
  Json j = Json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    send_error(res, 400, "MalformedDocument", "body must be a JSON object");
    return std::nullopt;
  }
  return j;
}

std::optional<Key> key_field(const Json& j, httplib::Response& res) {
  if (!j.contains("key") || !j["key"].is_number_integer()) {
    send_error(res, 400, "MalformedDocument", "integer field 'key' required");
    return std::nullopt;
  }
  return j["key"].get<Key>();
}

Json session_body(const Session& s) {
  Json j;
  j["id"] = s.id;
  j["tree"] = encode_tree(s.tree);
  return j;
}

// Looks up the session named by the first path capture, answering 404 itself.
std::shared_ptr<Session> lookup(SessionStore& store, const httplib::Request& req,
                                httplib::Response& res) {
  auto s = store.get(req.matches[1]);
  if (!s) send_error(res, 404, "UnknownSession", std::string(req.matches[1]));
  return s;
}

bool local_origin(const std::string& origin) {
  for (const char* prefix : {"http://localhost", "http://127.0.0.1", "http://[::1]"}) {
    if (origin.rfind(prefix, 0) == 0) return true;
  }
  return false;
}

}  // namespace

void register_routes(httplib::Server& server, SessionStore& store) {
  server.set_post_routing_handler([](const httplib::Request& req, httplib::Response& res) {
    std::string origin = req.get_header_value("Origin");
    if (local_origin(origin)) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    }
  });
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, Json{{"status", "ok"}});
  });

  server.Post("/session", [&store](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req, res);
    if (!body) return;
    std::vector<Key> keys;
    if (body->contains("keys")) {
      const Json& k = (*body)["keys"];
      if (!k.is_array() ||
          !std::all_of(k.begin(), k.end(), [](const Json& v) { return v.is_number_integer(); })) {
        send_error(res, 400, "MalformedDocument", "'keys' must be an integer array");
        return;
      }
      keys = k.get<std::vector<Key>>();
    }
    try {
      send_json(res, 201, session_body(*store.create(keys)));
    } catch (const Error& e) {
      send_error(res, status_for(e.code()), to_string(e.code()), e.what());
    }
  });

  server.Post(R"(/session/([^/]+)/insert)",
              [&store](const httplib::Request& req, httplib::Response& res) {
                auto s = lookup(store, req, res);
                if (!s) return;
                auto body = parse_body(req, res);
                if (!body) return;
                auto key = key_field(*body, res);
                if (!key) return;
                std::lock_guard lock(s->mu);
                try {
                  s->tree.insert(*key);
                } catch (const Error& e) {
                  send_error(res, status_for(e.code()), to_string(e.code()), e.what());
                  return;
                }
                s->history.push_back({"insert", *key, std::nullopt});
                send_json(res, 200, session_body(*s));
              });

  server.Post(R"(/session/([^/]+)/delete)",
              [&store](const httplib::Request& req, httplib::Response& res) {
                auto s = lookup(store, req, res);
                if (!s) return;
                auto body = parse_body(req, res);
                if (!body) return;
                auto key = key_field(*body, res);
                if (!key) return;
                std::string method = body->value("method", std::string("sa"));
                if (method != "sa" && method != "ta") {
                  send_error(res, 400, "MalformedDocument", "method must be sa or ta");
                  return;
                }
                bool snapshots = body->value("snapshots", false);
                std::lock_guard lock(s->mu);
                try {
                  SaOptions opt;
                  opt.snapshots = snapshots;
                  Trace t = method == "sa" ? delete_sa(s->tree, *key, opt)
                                           : delete_traditional(s->tree, *key, snapshots);
                  res.status = 200;
                  res.set_content(to_document(t), "application/json");
                  s->history.push_back({"delete", *key, std::move(t)});
                } catch (const Error& e) {
                  send_error(res, status_for(e.code()), to_string(e.code()), e.what());
                }
              });

  server.Post(R"(/session/([^/]+)/fork)",
              [&store](const httplib::Request& req, httplib::Response& res) {
                auto s = store.fork(req.matches[1]);
                if (!s) {
                  send_error(res, 404, "UnknownSession", std::string(req.matches[1]));
                  return;
                }
                std::lock_guard lock(s->mu);
                send_json(res, 201, session_body(*s));
              });

  server.Get(R"(/session/([^/]+)/tree)",
             [&store](const httplib::Request& req, httplib::Response& res) {
               auto s = lookup(store, req, res);
               if (!s) return;
               std::lock_guard lock(s->mu);
               send_json(res, 200, encode_tree(s->tree));
             });

  server.Get(R"(/session/([^/]+)/trace/(\d+))",
             [&store](const httplib::Request& req, httplib::Response& res) {
               auto s = lookup(store, req, res);
               if (!s) return;
               std::lock_guard lock(s->mu);
               auto traces = s->traces();
               std::size_t n = std::stoul(req.matches[2]);
               if (n >= traces.size()) {
                 send_error(res, 404, "UnknownTrace", std::to_string(n));
                 return;
               }
               res.status = 200;
               res.set_content(to_document(*traces[n]), "application/json");
             });
}

}  // namespace rbsa
