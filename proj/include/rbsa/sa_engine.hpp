#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rbsa/trace.hpp"
#include "rbsa/tree.hpp"
#include "rbsa/vocabulary.hpp"

namespace rbsa {

/// The cast around a double-black. `u == kNil` with `phantom` set means the
/// double-black sits in an empty slot under `p`.
struct DBContext {
  NodeId u = kNil;
  bool phantom = false;
  bool root = false;
  NodeId p = kNil;
  NodeId s = kNil;
  NodeId inner = kNil;  // child of s nearer to u
  NodeId outer = kNil;  // child of s farther from u
  NodeId g = kNil;      // grandparent of the nephews, always p
  Side db_side = Side::Left;
};

/// `db == kNil` addresses the tree's phantom double-black.
DBContext build_db_context(const Tree& tree, NodeId db);

struct Classification {
  CaseKind case_kind = CaseKind::RootDB;
  Procedure procedure = Procedure::Root;
  NodeId vip = kNil;    // r
  NodeId other = kNil;  // x
};

Classification classify(const Tree& tree, const DBContext& ctx);

/// Predicted final color of the VIP nephew, from its grandparent's color, its
/// own color and whether it is the inner nephew. nullopt when there is no VIP.
std::optional<Color> vip_color_transition(const Tree& tree, const DBContext& ctx,
                                          const Classification& cls);

/// One color change made by a rule. A nullopt key is the phantom slot.
struct ColorChange {
  std::optional<Key> key;
  Color before;
  Color after;

  bool operator==(const ColorChange&) const = default;
  auto operator<=>(const ColorChange&) const = default;
};

/// Operands of the general rule. `db == kNil` is the phantom slot.
struct RuleOperands {
  NodeId db = kNil;
  NodeId r = kNil;
  NodeId p = kNil;
};

// -B on db, -B on r, +B on p.
std::vector<ColorChange> apply_gsar(Tree& tree, const RuleOperands& ops);
// -B on db, +B on p.
std::vector<ColorChange> apply_psar1(Tree& tree, NodeId db, NodeId p);
// -B on r.
std::vector<ColorChange> apply_psar2(Tree& tree, NodeId r);

/// Checks on copies of `tree` that the general rule's color changes equal
/// those of partial rule 1 followed by partial rule 2 on the same nodes. Two
/// sides that both hit an undefined color operation also count as equal.
bool rule_identity_holds(const Tree& tree, const RuleOperands& ops);

struct SaOptions {
  bool snapshots = false;
  bool skip_psar2 = false;  // fault injection for harness negative controls
  /// Called at the start of every repair iteration with the live state.
  std::function<void(const Tree&, const DBContext&, const Classification&)> on_context;
};

/// Deletes `key` and repairs the tree with the symbolic arithmetic rules.
/// Throws KeyNotFound.
Trace delete_sa(Tree& tree, Key key, const SaOptions& options = {});

}  // namespace rbsa
