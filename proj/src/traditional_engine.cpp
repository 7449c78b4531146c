#include "rbsa/traditional_engine.hpp"

#include <string>
#include <utility>

#include "rbsa/error.hpp"

namespace rbsa {

namespace {

class TaDriver {
 public:
  TaDriver(Tree& tree, Trace& trace, bool snapshots) : t_(tree), rec_(trace, tree, snapshots) {}

  void run(Key key) {
    Removal rm = t_.remove_structural(key);
    TraceEvent del;
    del.kind = EventKind::Delete;
    del.key = key;
    del.unlinked = rm.unlinked;
    del.successor = rm.successor;
    int di = rec_.push(del);
    if (rm.promoted) rec_.recolor(di, rm.promoted, Color::Red, Color::Black);
    if (!rm.left_double_black) return;

    TraceEvent formed;
    formed.kind = EventKind::DbFormed;
    formed.parent = t_.key(rm.parent);
    formed.side = rm.side;
    rec_.push(formed);

    fixup();
    t_.clear_phantom();
  }

 private:
  // x is the node carrying the extra black; kNil means the phantom slot.
  NodeId parent_of_x(NodeId x) const { return x == kNil ? t_.phantom()->parent : t_.parent(x); }
  Side side_of_x(NodeId x) const { return x == kNil ? t_.phantom()->side : t_.side_of(x); }

  void rotate(NodeId pivot, Side dir, const char* role) {
    t_.rotate(pivot, dir);
    TraceEvent e;
    e.kind = EventKind::Rotate;
    e.pivot = t_.key(pivot);
    e.direction = dir;
    e.role = role;
    rec_.push(e);
  }

  void recolor_case(TaCase c, std::vector<std::pair<NodeId, Color>> changes) {
    TraceEvent e;
    e.kind = EventKind::RuleApplied;
    e.ta_case = c;
    for (const auto& [id, col] : changes) e.operands.push_back(t_.key(id));
    std::vector<std::pair<NodeId, Color>> before;
    for (const auto& [id, col] : changes) before.emplace_back(id, t_.color(id));
    for (const auto& [id, col] : changes) t_.set_color(id, col);
    int idx = rec_.push(e);
    for (const auto& [id, col] : before) {
      if (col != t_.color(id)) rec_.recolor(idx, t_.key(id), col, t_.color(id));
    }
  }

  void fixup() {
    NodeId x = kNil;
    while (x != t_.root() && t_.color(x) == Color::Black) {
      NodeId p = parent_of_x(x);
      Side side = side_of_x(x);
      Side far = opposite(side);
      NodeId s = t_.child(p, far);
      if (s == kNil) throw Error(ErrorCode::NoSibling, "under " + std::to_string(t_.key(p)));

      if (t_.color(s) == Color::Red) {
        rotate(p, side, "p");
        recolor_case(TaCase::RedSibling, {{s, Color::Black}, {p, Color::Red}});
        s = t_.child(p, far);
      }
      NodeId near_n = t_.child(s, side);
      NodeId far_n = t_.child(s, far);
      bool near_red = near_n != kNil && t_.color(near_n) == Color::Red;
      bool far_red = far_n != kNil && t_.color(far_n) == Color::Red;

      if (!near_red && !far_red) {
        recolor_case(TaCase::BlackSiblingBlackNephews, {{s, Color::Red}});
        if (x == kNil) t_.clear_phantom();
        x = p;
        continue;
      }
      if (!far_red) {
        rotate(s, far, "s");
        recolor_case(TaCase::NearRedNephew, {{near_n, Color::Black}, {s, Color::Red}});
        far_n = s;
        s = near_n;
      }
      rotate(p, side, "p");
      recolor_case(TaCase::FarRedNephew,
                   {{s, t_.color(p)}, {p, Color::Black}, {far_n, Color::Black}});
      if (x == kNil) t_.clear_phantom();
      return;
    }
    if (x != kNil && t_.color(x) == Color::Red) {
      TraceEvent e;
      e.kind = EventKind::DbRemoved;
      e.key = t_.key(x);
      int idx = rec_.push(e);
      t_.set_color(x, Color::Black);
      rec_.recolor(idx, t_.key(x), Color::Red, Color::Black);
    }
  }

  Tree& t_;
  TraceRecorder rec_;
};

}  // namespace

Trace delete_traditional(Tree& tree, Key key, bool snapshots) {
  if (!tree.contains(key)) throw Error(ErrorCode::KeyNotFound, std::to_string(key));
  Trace trace;
  trace.method = "ta";
  trace.delete_key = key;
  trace.initial = tree;
  TaDriver(tree, trace, snapshots).run(key);
  finish_trace(trace, tree, snapshots);
  return trace;
}

}  // namespace rbsa
