#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "rbsa/tree.hpp"

namespace rbsa {

using Json = nlohmann::ordered_json;

/// Nested tree document: {"key": k, "color": "R"|"B", "left": ..., "right": ...}
/// with null for empty children. An empty tree encodes as null.
Json encode_tree(const Tree& tree);
Json encode_subtree(const Tree& tree, NodeId id);

/// Throws MalformedDocument. The decoded tree is not validated.
Tree decode_tree(const Json& doc);

/// Compact shape literal used by fixtures, e.g. "40B(20B(_,30R),50B)".
/// A node is <key><R|B> optionally followed by (left,right); "_" is NIL.
Tree parse_shape(std::string_view text);
std::string format_shape(const Tree& tree);

}  // namespace rbsa
