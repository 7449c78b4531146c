#pragma once

#include "rbsa/trace.hpp"
#include "rbsa/tree.hpp"

namespace rbsa {

/// Conventional four-case deletion fixup. Uses the same successor rule and
/// event vocabulary as delete_sa so traces and step counts line up.
/// Throws KeyNotFound.
Trace delete_traditional(Tree& tree, Key key, bool snapshots = false);

}  // namespace rbsa
