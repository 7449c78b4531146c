#include <doctest.h>

#include <map>
#include <random>

#include "rbsa/error.hpp"
#include "rbsa/sa_engine.hpp"
#include "rbsa/tree_io.hpp"

using namespace rbsa;

namespace {

// Tree after the structural part of a delete, with the phantom in place.
Tree after_removal(const char* shape, Key key) {
  Tree t = parse_shape(shape);
  t.remove_structural(key);
  return t;
}

Key k(const Tree& t, NodeId id) { return t.key(id); }

std::vector<std::string> script_of(const char* shape, Key key) {
  Tree t = parse_shape(shape);
  return delete_sa(t, key).script;
}

}  // namespace

TEST_CASE("context around a phantom with an inner red nephew") {
  Tree t = after_removal("40B(20B(_,30R),50B)", 50);
  DBContext c = build_db_context(t, kNil);
  CHECK(c.phantom);
  CHECK(k(t, c.p) == 40);
  CHECK(k(t, c.s) == 20);
  CHECK(k(t, c.inner) == 30);
  CHECK(c.outer == kNil);
  CHECK(c.g == c.p);
  CHECK(c.db_side == Side::Right);
}

TEST_CASE("context with two red nephews") {
  Tree t = after_removal("40B(30B(20R,35R),50B)", 50);
  DBContext c = build_db_context(t, kNil);
  CHECK(k(t, c.p) == 40);
  CHECK(k(t, c.s) == 30);
  CHECK(k(t, c.outer) == 20);
  CHECK(k(t, c.inner) == 35);
}

TEST_CASE("context at the root") {
  Tree t = parse_shape("10B(5B,15B)");
  t.set_color(t.root(), Color::DoubleBlack);
  DBContext c = build_db_context(t, t.root());
  CHECK(c.root);
  CHECK(c.p == kNil);
  Classification cls = classify(t, c);
  CHECK(cls.case_kind == CaseKind::RootDB);
  CHECK(cls.procedure == Procedure::Root);
  CHECK(cls.vip == kNil);
}

TEST_CASE("missing sibling is reported") {
  Tree t = parse_shape("10B");
  t.set_phantom({t.root(), Side::Left});
  CHECK_THROWS_AS(build_db_context(t, kNil), Error);
}

TEST_CASE("classification") {
  struct Row {
    const char* shape;
    Key key;
    CaseKind kind;
    Procedure proc;
    std::optional<Key> vip;
  };
  const Row rows[] = {
      {"40B(20B(_,30R),50B)", 50, CaseKind::LR, Procedure::P3, 30},
      {"20B(10B,40B(30R,_))", 10, CaseKind::RL, Procedure::P3, 30},
      {"40B(30B(20R,35R),50B)", 50, CaseKind::LL, Procedure::P2, 20},
      {"20B(10B,30B(_,40R))", 10, CaseKind::RR, Procedure::P2, 40},
      {"40B(30R(20B,35B),50B)", 50, CaseKind::LL, Procedure::P1, 35},
      {"10B(5B,20R(17B(_,19R),25B))", 25, CaseKind::LR, Procedure::P4, 19},
      {"10B(5B,30R(20B(15R,_),40B))", 40, CaseKind::LL, Procedure::P5, 15},
      {"10B(5B,30R(20B(15R,25R),40B))", 40, CaseKind::LL, Procedure::P5, 15},
      {"10B(5B,30R(20B,40B))", 40, CaseKind::PushUp, Procedure::PushUp, std::nullopt},
      {"10B(5B,15B)", 5, CaseKind::PushUp, Procedure::PushUp, std::nullopt},
      {"40B(20R(10B,30B(25R,_)),50B)", 50, CaseKind::LL, Procedure::RedSibling, std::nullopt},
  };
  for (const Row& r : rows) {
    CAPTURE(r.shape);
    Tree t = after_removal(r.shape, r.key);
    DBContext c = build_db_context(t, kNil);
    Classification cls = classify(t, c);
    CHECK(cls.case_kind == r.kind);
    CHECK(cls.procedure == r.proc);
    if (r.vip) {
      REQUIRE(cls.vip != kNil);
      CHECK(t.key(cls.vip) == *r.vip);
    } else {
      CHECK(cls.vip == kNil);
    }
  }
}

TEST_CASE("general rule after the sibling rotation") {
  Tree t = after_removal("40B(20B(_,30R),50B)", 50);
  t.rotate_left(t.find(20));
  auto changes = apply_gsar(t, {kNil, t.find(30), t.find(40)});
  REQUIRE(changes.size() == 3);
  CHECK(changes[0] == ColorChange{std::nullopt, Color::DoubleBlack, Color::NullLeaf});
  CHECK(changes[1] == ColorChange{30, Color::Red, Color::Black});
  CHECK(changes[2] == ColorChange{40, Color::Black, Color::DoubleBlack});
  CHECK_FALSE(t.phantom());
}

TEST_CASE("general rule with a red parent settles the parent") {
  Tree t = after_removal("10B(5B,20R(17B(_,19R),25B))", 25);
  t.rotate_left(t.find(17));
  auto changes = apply_gsar(t, {kNil, t.find(19), t.find(20)});
  CHECK(changes[2] == ColorChange{20, Color::Red, Color::Black});
}

TEST_CASE("push-up flavor of the general rule") {
  Tree t = after_removal("10B(5B,15B)", 5);
  auto changes = apply_gsar(t, {kNil, t.find(15), t.find(10)});
  CHECK(changes[1] == ColorChange{15, Color::Black, Color::Red});
  CHECK(changes[2] == ColorChange{10, Color::Black, Color::DoubleBlack});
}

TEST_CASE("general rule leaves the tree untouched when an operation is undefined") {
  Tree t = parse_shape("10B(5B,15B)");
  t.set_color(t.find(5), Color::DoubleBlack);
  t.set_color(t.find(10), Color::DoubleBlack);
  Tree before = t;
  CHECK_THROWS_AS(apply_gsar(t, {t.find(5), t.find(15), t.find(10)}), Error);
  CHECK(t.same_as(before));
}

TEST_CASE("partial rule 1 exempts the third node") {
  Tree t = after_removal("40B(30B(20R,35R),50B)", 50);
  t.rotate_right(t.find(40));
  auto changes = apply_psar1(t, kNil, t.find(40));
  REQUIRE(changes.size() == 2);
  CHECK(changes[0].after == Color::NullLeaf);
  CHECK(changes[1] == ColorChange{40, Color::Black, Color::DoubleBlack});
  CHECK(t.color(t.find(35)) == Color::Red);
}

TEST_CASE("partial rule 1 on a red parent") {
  Tree t = after_removal("10B(5B,30R(20B(15R,_),40B))", 40);
  t.rotate_right(t.find(30));
  auto changes = apply_psar1(t, kNil, t.find(30));
  CHECK(changes[1] == ColorChange{30, Color::Red, Color::Black});
}

TEST_CASE("partial rule 2 toggles one node") {
  Tree t = parse_shape("19B(17B,20B)");
  auto c = apply_psar2(t, t.root());
  CHECK(c == std::vector<ColorChange>{{19, Color::Black, Color::Red}});
  apply_psar2(t, t.root());
  CHECK(t.color(t.root()) == Color::Black);
  Tree u = parse_shape("20R(15R,30B)");
  CHECK(apply_psar2(u, u.find(15))[0] == ColorChange{15, Color::Red, Color::Black});
  CHECK_THROWS_AS(apply_psar2(u, kNil), Error);
}

TEST_CASE("general rule equals partial rule 1 plus partial rule 2") {
  Tree t = after_removal("40B(20B(_,30R),50B)", 50);
  t.rotate_left(t.find(20));
  CHECK(rule_identity_holds(t, {kNil, t.find(30), t.find(40)}));
  Tree u = after_removal("10B(5B,15B)", 5);
  CHECK(rule_identity_holds(u, {kNil, u.find(15), u.find(10)}));
}

TEST_CASE("VIP color prediction") {
  struct Row {
    const char* shape;
    Key key;
    Color predicted;
  };
  const Row rows[] = {
      {"40B(20B(_,30R),50B)", 50, Color::Black},
      {"40B(30R(20B,35B),50B)", 50, Color::Red},
      {"10B(5B,20R(17B(_,19R),25B))", 25, Color::Red},
      {"10B(5B,30R(20B(15R,_),40B))", 40, Color::Black},
  };
  for (const Row& r : rows) {
    CAPTURE(r.shape);
    Tree t = after_removal(r.shape, r.key);
    DBContext c = build_db_context(t, kNil);
    CHECK(vip_color_transition(t, c, classify(t, c)) == r.predicted);
  }
  Tree t = after_removal("10B(5B,15B)", 5);
  DBContext c = build_db_context(t, kNil);
  CHECK_FALSE(vip_color_transition(t, c, classify(t, c)));
}

TEST_CASE("delete scripts") {
  using V = std::vector<std::string>;
  CHECK(script_of("40B(20B(_,30R),50B)", 50) == V{"leftRotate(s)", "Δ", "rightRotate(p)"});
  CHECK(script_of("40B(30B(20R,35R),50B)", 50) == V{"rightRotate(p)", "∂′", "Δ"});
  CHECK(script_of("10B(5B,20R(17B(_,19R),25B))", 25) ==
        V{"leftRotate(s)", "Δ", "rightRotate(p)", "∂″"});
  CHECK(script_of("10B(5B,30R(20B(15R,_),40B))", 40) == V{"rightRotate(p)", "∂′", "∂″"});
  CHECK(script_of("40B(30R(20B,35B),50B)", 50) == V{"rightRotate(p)", "Δ", "∂′"});
}

TEST_CASE("delete ends balanced with black height 2") {
  Tree t = parse_shape("40B(20B(_,30R),50B)");
  Trace tr = delete_sa(t, 50);
  CHECK(tr.final_state.balanced);
  CHECK(tr.final_state.black_height == 2);
  CHECK(format_shape(t) == "30B(20B,40B)");
  CHECK(tr.iterations.at(0).vip_color == Color::Black);
}

TEST_CASE("delete of the only node") {
  Tree t = Tree::from_keys({1});
  Trace tr = delete_sa(t, 1);
  CHECK(t.empty());
  CHECK(tr.final_state.balanced);
  CHECK(tr.script.empty());
}

TEST_CASE("delete of a missing key") {
  Tree t = Tree::from_keys({1, 2});
  try {
    delete_sa(t, 9);
    FAIL("expected KeyNotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KeyNotFound);
  }
  CHECK(t.size() == 2);
}

TEST_CASE("a red sibling whose inner nephew has a red child is lifted first") {
  Tree t = parse_shape("40B(20R(10B,30B(25R,_)),50B)");
  Trace tr = delete_sa(t, 50);
  CHECK(tr.final_state.balanced);
  REQUIRE(tr.iterations.size() == 2);
  CHECK(tr.iterations[0].procedure == Procedure::RedSibling);
  CHECK(tr.iterations[1].parent_color == Color::Red);
}

TEST_CASE("random deletes: invariants, footprints and loop bound") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Key> d(0, 127);
  std::map<Procedure, int> seen;
  Tree t;
  for (int i = 0; i < 4000; ++i) {
    Key key = d(rng);
    if (!t.contains(key)) {
      t.insert(key);
      continue;
    }
    auto expected = t.inorder();
    expected.erase(std::find(expected.begin(), expected.end(), key));
    int height = t.height();
    Trace tr = delete_sa(t, key);
    REQUIRE(tr.final_state.balanced);
    CHECK(t.inorder() == expected);
    CHECK(static_cast<int>(tr.iterations.size()) <= height + 6);
    for (const Iteration& it : tr.iterations) {
      ++seen[it.procedure];
      if (it.predicted_vip_color) CHECK(it.predicted_vip_color == it.vip_color);
    }
    for (std::size_t e = 0; e < tr.events.size(); ++e) {
      const TraceEvent& ev = tr.events[e];
      if (ev.kind != EventKind::RuleApplied) continue;
      int owned = 0;
      for (const TraceEvent& r : tr.events) {
        if (r.kind == EventKind::Recolor && r.cause == static_cast<int>(e)) ++owned;
      }
      std::size_t want = ev.rule == RuleKind::GSAR ? 3 : ev.rule == RuleKind::PSAR1 ? 2 : 1;
      CHECK(static_cast<std::size_t>(owned) == want);
      CHECK(ev.operands.size() == want);
    }
  }
  for (Procedure p : {Procedure::P1, Procedure::P2, Procedure::P3, Procedure::P4, Procedure::P5,
                      Procedure::PushUp, Procedure::RedSibling}) {
    CAPTURE(to_string(p));
    CHECK(seen[p] > 0);
  }
}
