#include "rbsa/tree_io.hpp"

#include <cctype>
#include <charconv>
#include <functional>

#include "rbsa/error.hpp"

namespace rbsa {

Json encode_subtree(const Tree& tree, NodeId id) {
  if (id == kNil) return nullptr;
  Json j;
  j["key"] = tree.key(id);
  j["color"] = std::string(short_name(tree.color(id)));
  j["left"] = encode_subtree(tree, tree.left(id));
  j["right"] = encode_subtree(tree, tree.right(id));
  return j;
}

Json encode_tree(const Tree& tree) { return encode_subtree(tree, tree.root()); }

Tree decode_tree(const Json& doc) {
  Tree t;
  std::function<void(const Json&, NodeId, Side, int)> add = [&](const Json& j, NodeId parent,
                                                                 Side side, int depth) {
    if (j.is_null()) return;
    if (depth > 256) throw Error(ErrorCode::MalformedDocument, "tree nesting too deep");
    if (!j.is_object() || !j.contains("key") || !j.contains("color")) {
      throw Error(ErrorCode::MalformedDocument, "tree node needs key and color");
    }
    if (!j["key"].is_number_integer() || !j["color"].is_string()) {
      throw Error(ErrorCode::MalformedDocument, "bad key or color type");
    }
    auto c = parse_color(j["color"].get<std::string>());
    if (!c || (*c != Color::Red && *c != Color::Black)) {
      throw Error(ErrorCode::MalformedDocument, "color must be R or B");
    }
    Key k = j["key"].get<Key>();
    if (t.contains(k)) throw Error(ErrorCode::MalformedDocument, "duplicate key " + std::to_string(k));
    NodeId id = t.add_node(k, *c, parent, side);
    add(j.value("left", Json(nullptr)), id, Side::Left, depth + 1);
    add(j.value("right", Json(nullptr)), id, Side::Right, depth + 1);
  };
  add(doc, kNil, Side::Left, 0);
  return t;
}

namespace {

class ShapeParser {
 public:
  explicit ShapeParser(std::string_view s) : s_(s) {}

  Tree run() {
    Tree t;
    skip();
    if (!at_end()) node(t, kNil, Side::Left);
    skip();
    if (!at_end()) fail("trailing input");
    return t;
  }

 private:
  void node(Tree& t, NodeId parent, Side side) {
    skip();
    if (peek() == '_') {
      ++pos_;
      return;
    }
    Key k = number();
    Color c;
    char cc = take();
    if (cc == 'R') {
      c = Color::Red;
    } else if (cc == 'B') {
      c = Color::Black;
    } else {
      fail("expected R or B");
    }
    NodeId id = t.add_node(k, c, parent, side);
    skip();
    if (peek() == '(') {
      ++pos_;
      node(t, id, Side::Left);
      expect(',');
      node(t, id, Side::Right);
      expect(')');
    }
  }

  Key number() {
    skip();
    std::size_t start = pos_;
    if (peek() == '-') ++pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    Key k{};
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, k);
    if (ec != std::errc() || ptr == s_.data() + start) fail("expected key");
    return k;
  }

  void expect(char c) {
    skip();
    if (take() != c) fail(std::string("expected '") + c + "'");
  }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  char take() { return at_end() ? '\0' : s_[pos_++]; }
  bool at_end() const { return pos_ >= s_.size(); }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::MalformedDocument, "shape: " + why + " at offset " + std::to_string(pos_));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Tree parse_shape(std::string_view text) { return ShapeParser(text).run(); }

std::string format_shape(const Tree& tree) {
  std::function<std::string(NodeId)> fmt = [&](NodeId id) -> std::string {
    if (id == kNil) return "_";
    std::string s = std::to_string(tree.key(id)) + std::string(short_name(tree.color(id)));
    if (tree.left(id) != kNil || tree.right(id) != kNil) {
      s += "(" + fmt(tree.left(id)) + "," + fmt(tree.right(id)) + ")";
    }
    return s;
  };
  return tree.empty() ? "" : fmt(tree.root());
}

}  // namespace rbsa
