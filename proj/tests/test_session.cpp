#include <doctest.h>
#include <httplib.h>

#include <thread>
#include <vector>

#include "rbsa/error.hpp"
#include "rbsa/sa_engine.hpp"
#include "rbsa/session.hpp"
#include "rbsa/tree_io.hpp"

using namespace rbsa;

namespace {

struct Server {
  SessionStore store;
  httplib::Server http;
  std::thread thread;
  int port = 0;

  Server() {
    register_routes(http, store);
    port = http.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { http.listen_after_bind(); });
    http.wait_until_ready();
  }
  ~Server() {
    http.stop();
    thread.join();
  }

  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

Json post(httplib::Client& c, const std::string& path, const Json& body, int expect) {
  auto res = c.Post(path, body.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == expect);
  return Json::parse(res->body);
}

}  // namespace

TEST_CASE("store create, get and fork") {
  SessionStore store;
  auto a = store.create({30, 20, 40});
  CHECK(a->id == "s1");
  CHECK(store.get("s1") == a);
  CHECK(store.get("s9") == nullptr);
  auto b = store.fork("s1");
  REQUIRE(b);
  CHECK(b->id == "s2");
  b->tree.insert(50);
  CHECK_FALSE(a->tree.contains(50));
  CHECK(store.fork("s9") == nullptr);
  try {
    store.create({1, 1});
    FAIL("expected DuplicateKey");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateKey);
  }
}

TEST_CASE("health and CORS") {
  Server srv;
  auto c = srv.client();
  auto res = c.Get("/health", {{"Origin", "http://localhost:5173"}});
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(Json::parse(res->body)["status"] == "ok");
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");

  auto foreign = c.Get("/health", {{"Origin", "http://example.com"}});
  REQUIRE(foreign);
  CHECK_FALSE(foreign->has_header("Access-Control-Allow-Origin"));

  auto pre = c.Options("/session", {{"Origin", "http://127.0.0.1:8000"}});
  REQUIRE(pre);
  CHECK(pre->status == 204);
  CHECK(pre->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
}

TEST_CASE("session lifecycle") {
  Server srv;
  auto c = srv.client();
  Json created = post(c, "/session", Json{{"keys", {40, 20, 50}}}, 201);
  std::string id = created["id"];
  CHECK(decode_tree(created["tree"]).inorder() == std::vector<Key>{20, 40, 50});

  Json inserted = post(c, "/session/" + id + "/insert", Json{{"key", 30}}, 200);
  Tree local = decode_tree(inserted["tree"]);
  CHECK(local.contains(30));
  CHECK(local.valid());

  auto dup = c.Post("/session/" + id + "/insert", R"({"key":30})", "application/json");
  REQUIRE(dup);
  CHECK(dup->status == 400);
  CHECK(Json::parse(dup->body)["error"] == "DuplicateKey");

  Json forked = post(c, "/session/" + id + "/fork", Json::object(), 201);
  std::string fid = forked["id"];
  CHECK(fid != id);

  // The delete body is the same document the command line prints.
  auto del = c.Post("/session/" + id + "/delete", R"({"key":50})", "application/json");
  REQUIRE(del);
  CHECK(del->status == 200);
  Tree expected_tree = local;
  CHECK(del->body == to_document(delete_sa(expected_tree, 50)));

  auto trace0 = c.Get("/session/" + id + "/trace/0");
  REQUIRE(trace0);
  CHECK(trace0->status == 200);
  CHECK(trace0->body == del->body);
  auto trace1 = c.Get("/session/" + id + "/trace/1");
  REQUIRE(trace1);
  CHECK(trace1->status == 404);

  auto tree = c.Get("/session/" + id + "/tree");
  REQUIRE(tree);
  CHECK(decode_tree(Json::parse(tree->body)).inorder() == std::vector<Key>{20, 30, 40});

  auto fork_tree = c.Get("/session/" + fid + "/tree");
  REQUIRE(fork_tree);
  CHECK(decode_tree(Json::parse(fork_tree->body)).inorder() == std::vector<Key>{20, 30, 40, 50});

  auto ta = c.Post("/session/" + fid + "/delete", R"({"key":50,"method":"ta","snapshots":true})",
                   "application/json");
  REQUIRE(ta);
  CHECK(ta->status == 200);
  Trace t = deserialize(Json::parse(ta->body));
  CHECK(t.method == "ta");
  CHECK(t.final_state.balanced);
}

TEST_CASE("error statuses") {
  Server srv;
  auto c = srv.client();
  auto unknown = c.Get("/session/s42/tree");
  REQUIRE(unknown);
  CHECK(unknown->status == 404);
  CHECK(Json::parse(unknown->body)["error"] == "UnknownSession");

  Json created = post(c, "/session", Json::object(), 201);
  std::string id = created["id"];

  auto missing = c.Post("/session/" + id + "/delete", R"({"key":7})", "application/json");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(Json::parse(missing->body)["error"] == "KeyNotFound");

  for (const char* body : {"not json", "[1,2]", R"({"key":"x"})", R"({"key":1,"method":"zz"})"}) {
    CAPTURE(body);
    auto bad = c.Post("/session/" + id + "/delete", body, "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
  }
  auto bad_keys = c.Post("/session", R"({"keys":[1,1]})", "application/json");
  REQUIRE(bad_keys);
  CHECK(bad_keys->status == 400);
}

TEST_CASE("concurrent requests against one session") {
  Server srv;
  auto c0 = srv.client();
  Json created = post(c0, "/session", Json::object(), 201);
  std::string id = created["id"];

  constexpr int kThreads = 4;
  constexpr int kPerThread = 25;
  std::vector<std::thread> workers;
  std::vector<int> failures(kThreads, 0);
  for (int t = 0; t < kThreads; ++t) {
    workers.emplace_back([&, t] {
      auto c = srv.client();
      for (int i = 0; i < kPerThread; ++i) {
        Key k = t * 1000 + i;
        auto ins = c.Post("/session/" + id + "/insert", Json{{"key", k}}.dump(), "application/json");
        if (!ins || ins->status != 200) ++failures[t];
        if (i % 2 == 0) {
          auto del = c.Post("/session/" + id + "/delete", Json{{"key", k}}.dump(), "application/json");
          if (!del || del->status != 200) ++failures[t];
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  for (int f : failures) CHECK(f == 0);

  auto tree = c0.Get("/session/" + id + "/tree");
  REQUIRE(tree);
  Tree final_tree = decode_tree(Json::parse(tree->body));
  CHECK(final_tree.valid());
  CHECK(final_tree.size() == kThreads * (kPerThread / 2));
}
