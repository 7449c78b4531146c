#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbsa/color.hpp"

namespace rbsa {

using Key = std::int64_t;
using NodeId = std::int32_t;
inline constexpr NodeId kNil = -1;

enum class Side { Left, Right };

constexpr Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

struct Node {
  Key key = 0;
  Color color = Color::Red;
  NodeId left = kNil;
  NodeId right = kNil;
  NodeId parent = kNil;
};

/// An empty child slot carrying a double-black after a black leaf was removed.
struct PhantomDb {
  NodeId parent = kNil;
  Side side = Side::Left;

  bool operator==(const PhantomDb&) const = default;
};

struct Violation {
  enum class Kind { RedRed, RootNotBlack, UnequalBlackHeight, BstOrder, DoubleBlackPresent };
  Kind kind;
  std::string location;

  bool operator==(const Violation&) const = default;
};

std::string_view to_string(Violation::Kind kind);

/// What a structural BST removal did, before any double-black repair.
struct Removal {
  Key requested = 0;
  Key unlinked = 0;              // key whose node left the tree (successor for two-child nodes)
  Color unlinked_color = Color::Red;
  std::optional<Key> successor;  // set when the requested key was replaced by its successor
  std::optional<Key> promoted;   // red child that moved up into the unlinked node's slot
  NodeId parent = kNil;          // parent of the vacated slot
  Side side = Side::Left;
  bool left_double_black = false;  // true when a phantom double-black now sits in the slot
};

/// Key-ordered red-black tree over an index arena. Copying a Tree yields an
/// independent deep copy with identical node ids.
///
/// Black height convention: NIL contributes 0 and each black node 1, so a
/// single black node has black height 1.
class Tree {
 public:
  Tree() = default;

  static Tree from_keys(const std::vector<Key>& keys);

  // --- queries
  NodeId root() const { return root_; }
  std::size_t size() const { return size_; }
  bool empty() const { return root_ == kNil; }
  bool contains(Key key) const { return find(key) != kNil; }
  bool search(Key key) const { return contains(key); }
  NodeId find(Key key) const;

  const Node& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  Key key(NodeId id) const { return node(id).key; }
  /// NIL reads as Black.
  Color color(NodeId id) const { return id == kNil ? Color::Black : node(id).color; }
  NodeId left(NodeId id) const { return id == kNil ? kNil : node(id).left; }
  NodeId right(NodeId id) const { return id == kNil ? kNil : node(id).right; }
  NodeId parent(NodeId id) const { return id == kNil ? kNil : node(id).parent; }
  NodeId child(NodeId id, Side side) const { return side == Side::Left ? left(id) : right(id); }
  /// Which child of its parent `id` is. Requires a non-root node.
  Side side_of(NodeId id) const;
  NodeId sibling(NodeId id) const;

  std::vector<Key> inorder() const;
  int height() const;

  /// Black height of the subtree at `id`; throws UnequalBlackHeight when two
  /// descending paths disagree. A phantom double-black slot counts as NIL.
  int black_height(NodeId id) const;
  int black_height() const { return black_height(root_); }

  std::vector<Violation> validate() const;
  bool valid() const { return validate().empty(); }

  // --- mutation
  void insert(Key key);
  void set_color(NodeId id, Color c);
  void rotate_left(NodeId pivot);
  void rotate_right(NodeId pivot);
  void rotate(NodeId pivot, Side direction) {
    direction == Side::Left ? rotate_left(pivot) : rotate_right(pivot);
  }

  /// Plain BST removal with red-black bookkeeping for the trivial cases:
  /// a removed red node needs nothing, a removed black node with a red child
  /// hands its black to that child, and a removed black leaf leaves a phantom
  /// double-black in its slot. Two-child nodes take their in-order successor's
  /// key and the successor's node is removed instead.
  Removal remove_structural(Key key);

  const std::optional<PhantomDb>& phantom() const { return phantom_; }
  void set_phantom(PhantomDb p) { phantom_ = p; }
  void clear_phantom() { phantom_.reset(); }

  /// Structural equality: same shape, keys and colors (node ids ignored).
  bool same_as(const Tree& other) const;

  // Direct construction, used by decoders and golden fixtures.
  NodeId add_node(Key key, Color c, NodeId parent, Side side);

  std::string render() const;
  std::string to_dot() const;

 private:
  Node& mut(NodeId id) { return nodes_.at(static_cast<std::size_t>(id)); }
  NodeId allocate(Key key, Color c);
  void release(NodeId id);
  void replace_child(NodeId parent, NodeId old_child, NodeId new_child);
  void insert_fixup(NodeId z);

  std::vector<Node> nodes_;
  std::vector<NodeId> free_;
  NodeId root_ = kNil;
  std::size_t size_ = 0;
  std::optional<PhantomDb> phantom_;
};

}  // namespace rbsa
