#pragma once

#include <optional>
#include <string_view>

namespace rbsa {

/// Node color. DoubleBlack only exists while a deletion is being repaired;
/// NullLeaf is the result of collapsing a double-black that has no stored
/// node and is never assigned to a node.
enum class Color { Red, Black, DoubleBlack, NullLeaf };

/// Whether an arithmetic operand is a stored node or an empty (NIL) position.
/// Only matters for a double-black minus black, which collapses an empty
/// position back to a leaf instead of producing a black node.
enum class Slot { Node, Nil };

// Symbolic color arithmetic. The table is directional: a + b is defined for
// the listed (a, b) pairs only and subtraction does not undo addition.
//
//   B + B = DB     R + B = B     R + DB = B     R + NL = B     B + NL = DB
//   DB - B = B     B - B = R     R - B = B      nil(DB) - B = NL
//
// Anything else throws Error(UndefinedColorOp).
Color color_add(Color a, Color b);
Color color_sub(Color a, Color b, Slot slot = Slot::Node);

bool is_defined_add(Color a, Color b);
bool is_defined_sub(Color a, Color b, Slot slot = Slot::Node);

/// "R", "B", "DB", "NL".
std::string_view short_name(Color c);
std::optional<Color> parse_color(std::string_view s);

}  // namespace rbsa
