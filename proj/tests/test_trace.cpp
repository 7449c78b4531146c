#include <doctest.h>

#include <fstream>
#include <iterator>

#include "rbsa/error.hpp"
#include "rbsa/harness.hpp"
#include "rbsa/sa_engine.hpp"
#include "rbsa/traditional_engine.hpp"
#include "rbsa/tree_io.hpp"

using namespace rbsa;

namespace {

Trace sa_trace(const char* shape, Key key, bool snapshots = false) {
  Tree t = parse_shape(shape);
  SaOptions opt;
  opt.snapshots = snapshots;
  return delete_sa(t, key, opt);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("step counts") {
  CHECK(sa_trace("10B(5B,20R(17B(_,19R),25B))", 25).steps.steps == 5);
  Trace b = sa_trace("40B(20B(_,30R),50B)", 50);
  CHECK(b.steps.breakdown ==
        std::vector<std::string>{"Delete", "Rotate", "Re-color", "Rotate (Balanced)"});
  Tree t = parse_shape("40B(20B(_,30R),50B)");
  CHECK(delete_traditional(t, 50).steps.steps == 5);
  CHECK(sa_trace("20B(10R,30R)", 10).steps.steps == 1);
  CHECK(sa_trace("20B(10R,30R)", 10).steps.breakdown == std::vector<std::string>{"Delete"});
}

TEST_CASE("contiguous recoloring is one step") {
  Trace t;
  t.final_state.balanced = true;
  auto ev = [](EventKind k) {
    TraceEvent e;
    e.kind = k;
    return e;
  };
  t.events = {ev(EventKind::Delete), ev(EventKind::DbFormed), ev(EventKind::RuleApplied),
              ev(EventKind::Recolor), ev(EventKind::RuleApplied), ev(EventKind::RootBlackened),
              ev(EventKind::Balanced)};
  CHECK(count_steps(t).breakdown == std::vector<std::string>{"Delete", "Re-color (Balanced)"});
  t.events = {ev(EventKind::Delete), ev(EventKind::Rotate), ev(EventKind::DbRemoved),
              ev(EventKind::Rotate), ev(EventKind::Balanced)};
  CHECK(count_steps(t).steps == 3);
}

TEST_CASE("every trace ends with a balanced event") {
  for (const GoldenCase& c : golden_catalog()) {
    Tree t = c.initial_tree();
    Trace tr = delete_sa(t, c.delete_key);
    REQUIRE_FALSE(tr.events.empty());
    CHECK(tr.events.back().kind == EventKind::Balanced);
    CHECK(tr.events.back().black_height == tr.final_state.black_height);
  }
}

TEST_CASE("recolors always point back at an earlier owning event") {
  for (const GoldenCase& c : golden_catalog()) {
    Tree t = c.initial_tree();
    Trace tr = delete_sa(t, c.delete_key);
    for (std::size_t i = 0; i < tr.events.size(); ++i) {
      const TraceEvent& e = tr.events[i];
      if (e.kind != EventKind::Recolor) continue;
      REQUIRE(e.cause);
      CHECK(*e.cause < static_cast<int>(i));
      EventKind owner = tr.events[static_cast<std::size_t>(*e.cause)].kind;
      bool ok = owner == EventKind::RuleApplied || owner == EventKind::RootBlackened ||
                owner == EventKind::DbRemoved || owner == EventKind::Rotate ||
                owner == EventKind::Delete;
      CHECK(ok);
    }
  }
}

TEST_CASE("serialization round-trips every golden trace") {
  for (const GoldenCase& c : golden_catalog()) {
    for (bool snaps : {false, true}) {
      Tree a = c.initial_tree();
      Tree b = a;
      SaOptions opt;
      opt.snapshots = snaps;
      Trace sa = delete_sa(a, c.delete_key, opt);
      Trace ta = delete_traditional(b, c.delete_key, snaps);
      CHECK(deserialize(serialize(sa)) == sa);
      CHECK(deserialize(serialize(ta)) == ta);
      CHECK(to_document(deserialize(Json::parse(to_document(sa)))) == to_document(sa));
    }
  }
}

TEST_CASE("document field order is fixed") {
  Json j = serialize(sa_trace("40B(20B(_,30R),50B)", 50));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"version", "method", "deleteKey", "initialTree", "events",
                                         "script", "iterations", "final", "steps"});
  CHECK(j["version"] == "rbsa-trace/1");
}

TEST_CASE("malformed documents") {
  Json j = serialize(sa_trace("40B(20B(_,30R),50B)", 50));
  Json missing = j;
  missing.erase("version");
  CHECK_THROWS_AS(deserialize(missing), Error);
  Json wrong = j;
  wrong["version"] = "rbsa-trace/2";
  CHECK_THROWS_AS(deserialize(wrong), Error);
  Json bad_event = j;
  bad_event["events"][0]["kind"] = "Explode";
  CHECK_THROWS_AS(deserialize(bad_event), Error);
  Json bad_type = j;
  bad_type["deleteKey"] = "fifty";
  CHECK_THROWS_AS(deserialize(bad_type), Error);
  CHECK_THROWS_AS(deserialize(Json::array()), Error);
  try {
    deserialize(missing);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedDocument);
  }
}

TEST_CASE("replay reproduces the final tree") {
  for (const GoldenCase& c : golden_catalog()) {
    Tree a = c.initial_tree();
    Tree b = a;
    Trace sa = delete_sa(a, c.delete_key);
    Trace ta = delete_traditional(b, c.delete_key);
    CHECK(replay(sa).same_as(a));
    CHECK(replay(ta).same_as(b));
    CHECK(replay(deserialize(serialize(sa))).same_as(a));
  }
}

TEST_CASE("snapshots are optional and show the state after each event") {
  Trace plain = sa_trace("40B(20B(_,30R),50B)", 50);
  for (const auto& e : plain.events) CHECK_FALSE(e.snapshot);
  Trace snap = sa_trace("40B(20B(_,30R),50B)", 50, true);
  REQUIRE(snap.events.size() == plain.events.size());
  CHECK(snap.events[0].snapshot == std::string("B:40\n  L B:20\n    L (nil)\n    R R:30\n  R DB:(nil)\n"));
  CHECK(snap.events.back().snapshot == std::string("B:30\n  L B:20\n  R B:40\n"));
}

TEST_CASE("golden trace document matches the checked-in snapshot") {
  Trace tr = sa_trace("40B(20B(_,30R),50B)", 50);
  CHECK(to_document(tr) == read_file(std::string(RBSA_GOLDEN_DIR) + "/lr_black_parent_inner_red.sa.json"));
}
