#include "rbsa/tree.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "rbsa/error.hpp"

namespace rbsa {

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::RedRed: return "RedRed";
    case Violation::Kind::RootNotBlack: return "RootNotBlack";
    case Violation::Kind::UnequalBlackHeight: return "UnequalBlackHeight";
    case Violation::Kind::BstOrder: return "BstOrder";
    case Violation::Kind::DoubleBlackPresent: return "DoubleBlackPresent";
  }
  return "?";
}

Tree Tree::from_keys(const std::vector<Key>& keys) {
  Tree t;
  for (Key k : keys) t.insert(k);
  return t;
}

NodeId Tree::find(Key key) const {
  NodeId cur = root_;
  while (cur != kNil) {
    const Node& n = node(cur);
    if (key == n.key) return cur;
    cur = key < n.key ? n.left : n.right;
  }
  return kNil;
}

Side Tree::side_of(NodeId id) const {
  NodeId p = parent(id);
  return left(p) == id ? Side::Left : Side::Right;
}

NodeId Tree::sibling(NodeId id) const {
  NodeId p = parent(id);
  if (p == kNil) return kNil;
  return child(p, opposite(side_of(id)));
}

std::vector<Key> Tree::inorder() const {
  std::vector<Key> out;
  out.reserve(size_);
  std::vector<NodeId> stack;
  NodeId cur = root_;
  while (cur != kNil || !stack.empty()) {
    while (cur != kNil) {
      stack.push_back(cur);
      cur = left(cur);
    }
    cur = stack.back();
    stack.pop_back();
    out.push_back(key(cur));
    cur = right(cur);
  }
  return out;
}

int Tree::height() const {
  std::function<int(NodeId)> h = [&](NodeId id) -> int {
    if (id == kNil) return 0;
    return 1 + std::max(h(left(id)), h(right(id)));
  };
  return h(root_);
}

int Tree::black_height(NodeId id) const {
  if (id == kNil) return 0;
  int l = black_height(left(id));
  int r = black_height(right(id));
  if (l != r) {
    throw Error(ErrorCode::UnequalBlackHeight,
                "at key " + std::to_string(key(id)) + ": left " + std::to_string(l) + " vs right " +
                    std::to_string(r));
  }
  Color c = color(id);
  return l + (c == Color::Black ? 1 : c == Color::DoubleBlack ? 2 : 0);
}

std::vector<Violation> Tree::validate() const {
  std::vector<Violation> out;
  using K = Violation::Kind;
  if (root_ != kNil && color(root_) != Color::Black && color(root_) != Color::DoubleBlack) {
    out.push_back({K::RootNotBlack, std::to_string(key(root_))});
  }
  if (phantom_) {
    std::string where = phantom_->parent == kNil ? "root" : std::to_string(key(phantom_->parent));
    where += phantom_->side == Side::Left ? ".left" : ".right";
    out.push_back({K::DoubleBlackPresent, "nil slot under " + where});
  }
  // Returns the black height measured along the left spine of each subtree so
  // that a single breach is reported once, at the node where paths diverge.
  std::function<int(NodeId, const Key*, const Key*)> walk = [&](NodeId id, const Key* lo,
                                                                const Key* hi) -> int {
    if (id == kNil) return 0;
    const Node& n = node(id);
    if ((lo && n.key <= *lo) || (hi && n.key >= *hi)) {
      out.push_back({K::BstOrder, std::to_string(n.key)});
    }
    if (n.color == Color::DoubleBlack || n.color == Color::NullLeaf) {
      out.push_back({K::DoubleBlackPresent, std::to_string(n.key)});
    }
    if (n.color == Color::Red) {
      for (NodeId c : {n.left, n.right}) {
        if (c != kNil && color(c) == Color::Red) {
          out.push_back({K::RedRed, std::to_string(n.key) + "->" + std::to_string(key(c))});
        }
      }
    }
    int l = walk(n.left, lo, &n.key);
    int r = walk(n.right, &n.key, hi);
    if (l != r) {
      out.push_back({K::UnequalBlackHeight, std::to_string(n.key) + ": " + std::to_string(l) +
                                                " vs " + std::to_string(r)});
    }
    return l + (n.color == Color::Black ? 1 : n.color == Color::DoubleBlack ? 2 : 0);
  };
  walk(root_, nullptr, nullptr);
  return out;
}

NodeId Tree::allocate(Key key, Color c) {
  Node n{key, c, kNil, kNil, kNil};
  if (!free_.empty()) {
    NodeId id = free_.back();
    free_.pop_back();
    mut(id) = n;
    return id;
  }
  nodes_.push_back(n);
  return static_cast<NodeId>(nodes_.size() - 1);
}

void Tree::release(NodeId id) {
  mut(id) = Node{};
  free_.push_back(id);
}

NodeId Tree::add_node(Key key, Color c, NodeId parent_id, Side side) {
  NodeId id = allocate(key, c);
  mut(id).parent = parent_id;
  if (parent_id == kNil) {
    root_ = id;
  } else if (side == Side::Left) {
    mut(parent_id).left = id;
  } else {
    mut(parent_id).right = id;
  }
  ++size_;
  return id;
}

void Tree::set_color(NodeId id, Color c) { mut(id).color = c; }

void Tree::replace_child(NodeId parent_id, NodeId old_child, NodeId new_child) {
  if (parent_id == kNil) {
    root_ = new_child;
  } else if (node(parent_id).left == old_child) {
    mut(parent_id).left = new_child;
  } else {
    mut(parent_id).right = new_child;
  }
  if (new_child != kNil) mut(new_child).parent = parent_id;
}

void Tree::rotate_left(NodeId x) {
  NodeId y = right(x);
  if (x == kNil || y == kNil) {
    throw Error(ErrorCode::MissingChild,
                "rotate_left needs a right child" +
                    (x == kNil ? std::string() : " at key " + std::to_string(key(x))));
  }
  NodeId beta = node(y).left;
  mut(x).right = beta;
  if (beta != kNil) mut(beta).parent = x;
  replace_child(node(x).parent, x, y);
  mut(y).left = x;
  mut(x).parent = y;
  if (phantom_ && *phantom_ == PhantomDb{y, Side::Left}) phantom_ = PhantomDb{x, Side::Right};
}

void Tree::rotate_right(NodeId x) {
  NodeId y = left(x);
  if (x == kNil || y == kNil) {
    throw Error(ErrorCode::MissingChild,
                "rotate_right needs a left child" +
                    (x == kNil ? std::string() : " at key " + std::to_string(key(x))));
  }
  NodeId beta = node(y).right;
  mut(x).left = beta;
  if (beta != kNil) mut(beta).parent = x;
  replace_child(node(x).parent, x, y);
  mut(y).right = x;
  mut(x).parent = y;
  if (phantom_ && *phantom_ == PhantomDb{y, Side::Right}) phantom_ = PhantomDb{x, Side::Left};
}

void Tree::insert(Key key) {
  NodeId parent_id = kNil;
  NodeId cur = root_;
  Side side = Side::Left;
  while (cur != kNil) {
    parent_id = cur;
    if (key == node(cur).key) {
      throw Error(ErrorCode::DuplicateKey, std::to_string(key));
    }
    side = key < node(cur).key ? Side::Left : Side::Right;
    cur = child(cur, side);
  }
  NodeId z = add_node(key, Color::Red, parent_id, side);
  insert_fixup(z);
}

void Tree::insert_fixup(NodeId z) {
  while (color(parent(z)) == Color::Red) {
    NodeId p = parent(z);
    NodeId g = parent(p);
    Side ps = side_of(p);
    NodeId uncle = child(g, opposite(ps));
    if (color(uncle) == Color::Red) {
      set_color(p, Color::Black);
      set_color(uncle, Color::Black);
      set_color(g, Color::Red);
      z = g;
      continue;
    }
    if (side_of(z) != ps) {
      z = p;
      rotate(z, ps);
      p = parent(z);
    }
    set_color(p, Color::Black);
    set_color(g, Color::Red);
    rotate(g, opposite(ps));
  }
  set_color(root_, Color::Black);
}

Removal Tree::remove_structural(Key key) {
  NodeId z = find(key);
  if (z == kNil) throw Error(ErrorCode::KeyNotFound, std::to_string(key));

  Removal out;
  out.requested = key;
  NodeId m = z;
  if (left(z) != kNil && right(z) != kNil) {
    m = right(z);
    while (left(m) != kNil) m = left(m);
    out.successor = node(m).key;
    mut(z).key = node(m).key;
  }
  out.unlinked = node(m).key;
  out.unlinked_color = node(m).color;
  NodeId c = left(m) != kNil ? left(m) : right(m);
  out.parent = parent(m);
  out.side = out.parent == kNil ? Side::Left : side_of(m);

  replace_child(out.parent, m, c);
  release(m);
  --size_;

  if (out.unlinked_color == Color::Black) {
    if (c != kNil && color(c) == Color::Red) {
      set_color(c, color_add(Color::Red, Color::Black));
      out.promoted = node(c).key;
    } else if (c == kNil && out.parent != kNil) {
      phantom_ = PhantomDb{out.parent, out.side};
      out.left_double_black = true;
    }
  }
  return out;
}

bool Tree::same_as(const Tree& other) const {
  std::function<bool(NodeId, NodeId)> eq = [&](NodeId a, NodeId b) -> bool {
    if (a == kNil || b == kNil) return a == b;
    const Node& x = node(a);
    const Node& y = other.node(b);
    return x.key == y.key && x.color == y.color && eq(x.left, y.left) && eq(x.right, y.right);
  };
  return size_ == other.size_ && eq(root_, other.root_);
}

std::string Tree::render() const {
  if (root_ == kNil) return "(nil)\n";
  std::ostringstream os;
  auto label = [&](NodeId id) {
    return std::string(short_name(color(id))) + ":" + std::to_string(key(id));
  };
  std::function<void(NodeId, int)> emit = [&](NodeId id, int depth) {
    const Node& n = node(id);
    bool phantom_here = phantom_ && phantom_->parent == id;
    if (n.left == kNil && n.right == kNil && !phantom_here) return;
    for (Side s : {Side::Left, Side::Right}) {
      NodeId c = child(id, s);
      os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << (s == Side::Left ? "L " : "R ");
      if (c != kNil) {
        os << label(c) << '\n';
        emit(c, depth + 1);
      } else if (phantom_ && *phantom_ == PhantomDb{id, s}) {
        os << "DB:(nil)\n";
      } else {
        os << "(nil)\n";
      }
    }
  };
  os << label(root_) << '\n';
  emit(root_, 1);
  return os.str();
}

std::string Tree::to_dot() const {
  std::ostringstream os;
  os << "digraph rbtree {\n  node [shape=circle, style=filled, fontcolor=white];\n";
  std::function<void(NodeId)> emit = [&](NodeId id) {
    const Node& n = node(id);
    os << "  n" << n.key << " [label=\"" << n.key << "\\n" << short_name(n.color) << "\"";
    switch (n.color) {
      case Color::Red: os << ", fillcolor=red"; break;
      case Color::DoubleBlack: os << ", fillcolor=black, peripheries=2"; break;
      default: os << ", fillcolor=black"; break;
    }
    os << "];\n";
    for (Side s : {Side::Left, Side::Right}) {
      NodeId c = child(id, s);
      if (c != kNil) {
        os << "  n" << n.key << " -> n" << key(c) << ";\n";
        emit(c);
      } else if (phantom_ && *phantom_ == PhantomDb{id, s}) {
        os << "  db [label=\"DB\", shape=doublecircle, fillcolor=black];\n";
        os << "  n" << n.key << " -> db;\n";
      }
    }
  };
  if (root_ != kNil) emit(root_);
  os << "}\n";
  return os.str();
}

}  // namespace rbsa
