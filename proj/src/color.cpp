#include "rbsa/color.hpp"

#include <string>

#include "rbsa/error.hpp"

namespace rbsa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::KeyNotFound: return "KeyNotFound";
    case ErrorCode::MissingChild: return "MissingChild";
    case ErrorCode::UnequalBlackHeight: return "UnequalBlackHeight";
    case ErrorCode::UndefinedColorOp: return "UndefinedColorOp";
    case ErrorCode::NoSibling: return "NoSibling";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::UnknownCase: return "UnknownCase";
  }
  return "Unknown";
}

namespace {

std::optional<Color> add_table(Color a, Color b) {
  using enum Color;
  if (a == Black && b == Black) return DoubleBlack;
  if (a == Red && b == Black) return Black;
  if (a == Red && b == DoubleBlack) return Black;
  if (a == Red && b == NullLeaf) return Black;
  if (a == Black && b == NullLeaf) return DoubleBlack;
  return std::nullopt;
}

std::optional<Color> sub_table(Color a, Color b, Slot slot) {
  using enum Color;
  if (b != Black) return std::nullopt;
  if (a == DoubleBlack) return slot == Slot::Nil ? NullLeaf : Black;
  if (slot == Slot::Nil) return std::nullopt;
  if (a == Black) return Red;
  if (a == Red) return Black;
  return std::nullopt;
}

[[noreturn]] void undefined(Color a, char op, Color b) {
  throw Error(ErrorCode::UndefinedColorOp,
              std::string(short_name(a)) + " " + op + " " + std::string(short_name(b)));
}

}  // namespace

Color color_add(Color a, Color b) {
  if (auto c = add_table(a, b)) return *c;
  undefined(a, '+', b);
}

Color color_sub(Color a, Color b, Slot slot) {
  if (auto c = sub_table(a, b, slot)) return *c;
  undefined(a, '-', b);
}

bool is_defined_add(Color a, Color b) { return add_table(a, b).has_value(); }

bool is_defined_sub(Color a, Color b, Slot slot) { return sub_table(a, b, slot).has_value(); }

std::string_view short_name(Color c) {
  switch (c) {
    case Color::Red: return "R";
    case Color::Black: return "B";
    case Color::DoubleBlack: return "DB";
    case Color::NullLeaf: return "NL";
  }
  return "?";
}

std::optional<Color> parse_color(std::string_view s) {
  if (s == "R") return Color::Red;
  if (s == "B") return Color::Black;
  if (s == "DB") return Color::DoubleBlack;
  if (s == "NL") return Color::NullLeaf;
  return std::nullopt;
}

}  // namespace rbsa
