#include "rbsa/sa_engine.hpp"

#include <algorithm>
#include <string>

#include "rbsa/error.hpp"

namespace rbsa {

DBContext build_db_context(const Tree& tree, NodeId db) {
  DBContext ctx;
  ctx.u = db;
  if (db == kNil) {
    if (!tree.phantom()) throw Error(ErrorCode::NoSibling, "no double-black in tree");
    ctx.phantom = true;
    ctx.p = tree.phantom()->parent;
    ctx.db_side = tree.phantom()->side;
  } else if (db == tree.root()) {
    ctx.root = true;
    return ctx;
  } else {
    ctx.p = tree.parent(db);
    ctx.db_side = tree.side_of(db);
  }
  ctx.g = ctx.p;
  ctx.s = tree.child(ctx.p, opposite(ctx.db_side));
  if (ctx.s == kNil) {
    throw Error(ErrorCode::NoSibling, "double-black under " + std::to_string(tree.key(ctx.p)));
  }
  ctx.inner = tree.child(ctx.s, ctx.db_side);
  ctx.outer = tree.child(ctx.s, opposite(ctx.db_side));
  return ctx;
}

namespace {

bool is_red(const Tree& t, NodeId id) { return id != kNil && t.color(id) == Color::Red; }

CaseKind case_for(Side db_side, bool outer) {
  bool s_left = db_side == Side::Right;
  if (s_left) return outer ? CaseKind::LL : CaseKind::LR;
  return outer ? CaseKind::RR : CaseKind::RL;
}

}  // namespace

Classification classify(const Tree& tree, const DBContext& ctx) {
  Classification c;
  if (ctx.root) return c;
  bool p_red = tree.color(ctx.p) == Color::Red;
  if (is_red(tree, ctx.s)) {
    c.case_kind = case_for(ctx.db_side, true);
    bool inner_has_red_child =
        is_red(tree, tree.left(ctx.inner)) || is_red(tree, tree.right(ctx.inner));
    if (inner_has_red_child) {
      c.procedure = Procedure::RedSibling;
      c.other = ctx.outer;
    } else {
      c.procedure = Procedure::P1;
      c.vip = ctx.inner;
      c.other = ctx.outer;
    }
    return c;
  }
  if (is_red(tree, ctx.outer)) {
    c.case_kind = case_for(ctx.db_side, true);
    c.procedure = p_red ? Procedure::P5 : Procedure::P2;
    c.vip = ctx.outer;
    c.other = ctx.inner;
    return c;
  }
  if (is_red(tree, ctx.inner)) {
    c.case_kind = case_for(ctx.db_side, false);
    c.procedure = p_red ? Procedure::P4 : Procedure::P3;
    c.vip = ctx.inner;
    c.other = ctx.outer;
    return c;
  }
  c.case_kind = CaseKind::PushUp;
  c.procedure = Procedure::PushUp;
  return c;
}

std::optional<Color> vip_color_transition(const Tree& tree, const DBContext& ctx,
                                          const Classification& cls) {
  if (cls.vip == kNil) return std::nullopt;
  Color g = tree.color(ctx.g);
  Color r = tree.color(cls.vip);
  bool inner = cls.vip == ctx.inner;
  if (g == Color::Black) return r == Color::Red ? Color::Black : Color::Red;
  if (r == Color::Red) return inner ? Color::Red : Color::Black;
  return std::nullopt;
}

namespace {

ColorChange sub_black(Tree& t, NodeId id) {
  if (id == kNil) {
    Color after = color_sub(Color::DoubleBlack, Color::Black, Slot::Nil);
    t.clear_phantom();
    return {std::nullopt, Color::DoubleBlack, after};
  }
  Color before = t.color(id);
  Color after = color_sub(before, Color::Black);
  t.set_color(id, after);
  return {t.key(id), before, after};
}

ColorChange add_black(Tree& t, NodeId id) {
  if (id == kNil) throw Error(ErrorCode::UndefinedColorOp, "cannot add black to NIL");
  Color before = t.color(id);
  Color after = color_add(before, Color::Black);
  t.set_color(id, after);
  return {t.key(id), before, after};
}

}  // namespace

std::vector<ColorChange> apply_gsar(Tree& tree, const RuleOperands& ops) {
  // Validate every operation before mutating so a failure leaves no partial state.
  if (ops.db != kNil) (void)color_sub(tree.color(ops.db), Color::Black);
  if (ops.r == kNil) throw Error(ErrorCode::UndefinedColorOp, "general rule needs r");
  (void)color_sub(tree.color(ops.r), Color::Black);
  if (ops.p == kNil) throw Error(ErrorCode::UndefinedColorOp, "general rule needs p");
  (void)color_add(tree.color(ops.p), Color::Black);
  std::vector<ColorChange> out;
  out.push_back(sub_black(tree, ops.db));
  out.push_back(sub_black(tree, ops.r));
  out.push_back(add_black(tree, ops.p));
  return out;
}

std::vector<ColorChange> apply_psar1(Tree& tree, NodeId db, NodeId p) {
  if (db != kNil) (void)color_sub(tree.color(db), Color::Black);
  if (p == kNil) throw Error(ErrorCode::UndefinedColorOp, "partial rule 1 needs p");
  (void)color_add(tree.color(p), Color::Black);
  std::vector<ColorChange> out;
  out.push_back(sub_black(tree, db));
  out.push_back(add_black(tree, p));
  return out;
}

std::vector<ColorChange> apply_psar2(Tree& tree, NodeId r) {
  if (r == kNil) throw Error(ErrorCode::UndefinedColorOp, "partial rule 2 needs r");
  return {sub_black(tree, r)};
}

bool rule_identity_holds(const Tree& tree, const RuleOperands& ops) {
  std::optional<std::vector<ColorChange>> general;
  std::optional<std::vector<ColorChange>> partial;
  try {
    Tree t = tree;
    general = apply_gsar(t, ops);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UndefinedColorOp) throw;
  }
  try {
    Tree t = tree;
    auto a = apply_psar1(t, ops.db, ops.p);
    auto b = apply_psar2(t, ops.r);
    a.insert(a.end(), b.begin(), b.end());
    partial = std::move(a);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UndefinedColorOp) throw;
  }
  if (!general || !partial) return general.has_value() == partial.has_value();
  std::sort(general->begin(), general->end());
  std::sort(partial->begin(), partial->end());
  return *general == *partial;
}

namespace {

class Driver {
 public:
  Driver(Tree& tree, Trace& trace, const SaOptions& opt)
      : t_(tree), trace_(trace), opt_(opt), rec_(trace, tree, opt.snapshots) {}

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

    NodeId db = kNil;
    bool open = true;
    while (open) {
      DBContext ctx = build_db_context(t_, db);
      Classification cls = classify(t_, ctx);
      if (opt_.on_context) opt_.on_context(t_, ctx, cls);
      record_iteration(ctx, cls);
      open = dispatch(ctx, cls, db);
    }
  }

  void close() {
    for (Iteration& it : trace_.iterations) {
      if (!it.vip) continue;
      NodeId v = t_.find(*it.vip);
      if (v != kNil) it.vip_color = t_.color(v);
    }
  }

 private:
  void record_iteration(const DBContext& ctx, const Classification& cls) {
    Iteration it;
    if (ctx.u != kNil) it.db = t_.key(ctx.u);
    if (ctx.p != kNil) it.parent = t_.key(ctx.p);
    if (ctx.s != kNil) it.sibling = t_.key(ctx.s);
    it.case_kind = cls.case_kind;
    it.procedure = cls.procedure;
    if (cls.vip != kNil) it.vip = t_.key(cls.vip);
    if (cls.other != kNil) it.other = t_.key(cls.other);
    it.parent_color = ctx.p == kNil ? Color::Black : t_.color(ctx.p);
    it.predicted_vip_color = vip_color_transition(t_, ctx, cls);
    trace_.iterations.push_back(it);
  }

  std::optional<Key> key_or_phantom(NodeId id) const {
    if (id == kNil) return std::nullopt;
    return t_.key(id);
  }

  int rotate(NodeId pivot, Side dir, const char* role) {
    t_.rotate(pivot, dir);
    TraceEvent e;
    e.kind = EventKind::Rotate;
    e.pivot = t_.key(pivot);
    e.direction = dir;
    e.role = role;
    int idx = rec_.push(e);
    rec_.label(std::string(dir == Side::Left ? "leftRotate(" : "rightRotate(") + role + ")");
    return idx;
  }

  void rule(RuleKind kind, const Classification& cls, std::vector<NodeId> operands,
            std::vector<NodeId> exempted) {
    // Operand keys are captured before the rule runs: a phantom operand vanishes.
    TraceEvent e;
    e.kind = EventKind::RuleApplied;
    e.rule = kind;
    e.case_kind = cls.case_kind;
    e.procedure = cls.procedure;
    for (NodeId id : operands) e.operands.push_back(key_or_phantom(id));
    for (NodeId id : exempted) {
      if (id != kNil) e.exempted.push_back(t_.key(id));
    }
    std::sort(e.exempted.begin(), e.exempted.end());

    std::vector<ColorChange> changes;
    switch (kind) {
      case RuleKind::GSAR:
        changes = apply_gsar(t_, {operands[0], operands[1], operands[2]});
        break;
      case RuleKind::PSAR1:
        changes = apply_psar1(t_, operands[0], operands[1]);
        break;
      case RuleKind::PSAR2:
        changes = apply_psar2(t_, operands[0]);
        break;
    }
    int idx = rec_.push(e);
    for (const ColorChange& c : changes) rec_.recolor(idx, c.key, c.before, c.after);
    for (const ColorChange& c : changes) {
      if (c.after == Color::DoubleBlack) {
        TraceEvent f;
        f.kind = EventKind::DbFormed;
        f.key = c.key;
        rec_.push(f);
      }
    }
    static constexpr const char* kLabels[] = {"Δ", "∂′", "∂″"};
    rec_.label(kLabels[static_cast<int>(kind)]);
  }

  void settle(NodeId id, EventKind kind) {
    Color before = t_.color(id);
    Color after = color_sub(before, Color::Black);
    t_.set_color(id, after);
    TraceEvent e;
    e.kind = kind;
    e.key = t_.key(id);
    int idx = rec_.push(e);
    rec_.recolor(idx, t_.key(id), before, after);
  }

  // Returns true while a double-black remains; `db` is updated to its position.
  bool dispatch(const DBContext& ctx, const Classification& cls, NodeId& db) {
    const NodeId u = ctx.u, p = ctx.p, s = ctx.s, r = cls.vip, x = cls.other;
    const Side toward = ctx.db_side;
    switch (cls.procedure) {
      case Procedure::Root:
        settle(u, EventKind::RootBlackened);
        return false;

      case Procedure::PushUp:
        rule(RuleKind::GSAR, cls, {u, s, p}, {});
        if (t_.color(p) == Color::DoubleBlack) {
          db = p;
          return true;
        }
        return false;

      case Procedure::RedSibling:
        rotate(p, toward, "p");
        rule(RuleKind::PSAR1, cls, {p, s}, {x});
        return true;

      case Procedure::P1:
        rotate(p, toward, "p");
        rule(RuleKind::GSAR, cls, {u, r, p}, {});
        rule(RuleKind::PSAR1, cls, {p, s}, {x});
        return false;

      case Procedure::P2:
        rotate(p, toward, "p");
        rule(RuleKind::PSAR1, cls, {u, p}, {x});
        rule(RuleKind::GSAR, cls, {p, r, s}, {});
        settle(s, s == t_.root() ? EventKind::RootBlackened : EventKind::DbRemoved);
        return false;

      case Procedure::P3:
        rotate(s, opposite(toward), "s");
        rule(RuleKind::GSAR, cls, {u, r, p}, {});
        rotate(p, toward, "p");
        settle(p, EventKind::DbRemoved);
        return false;

      case Procedure::P4:
        rotate(s, opposite(toward), "s");
        rule(RuleKind::GSAR, cls, {u, r, p}, {});
        rotate(p, toward, "p");
        if (!opt_.skip_psar2) rule(RuleKind::PSAR2, cls, {r}, {s, p});
        return false;

      case Procedure::P5: {
        Color pc = t_.color(p);
        Color sc = t_.color(s);
        int ri = rotate(p, toward, "p");
        if (sc != pc) {
          t_.set_color(s, pc);
          rec_.recolor(ri, t_.key(s), sc, pc);
        }
        rule(RuleKind::PSAR1, cls, {u, p}, {});
        if (!opt_.skip_psar2) rule(RuleKind::PSAR2, cls, {r}, {p, s});
        return false;
      }
    }
    throw Error(ErrorCode::UnknownCase, "unhandled procedure");
  }

  Tree& t_;
  Trace& trace_;
  const SaOptions& opt_;
  TraceRecorder rec_;
};

}  // namespace

Trace delete_sa(Tree& tree, Key key, const SaOptions& options) {
  if (!tree.contains(key)) throw Error(ErrorCode::KeyNotFound, std::to_string(key));
  Trace trace;
  trace.method = "sa";
  trace.delete_key = key;
  trace.initial = tree;
  Driver d(tree, trace, options);
  d.run(key);
  d.close();
  finish_trace(trace, tree, options.snapshots);
  return trace;
}

}  // namespace rbsa
