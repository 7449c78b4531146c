#pragma once

#include <optional>
#include <string_view>

namespace rbsa {

/// Rotation topology named by the path p -> s -> deciding nephew, plus the
/// two rotation-free situations.
enum class CaseKind { LL, LR, RL, RR, PushUp, RootDB };

enum class RuleKind {
  GSAR,   // three nodes: -B on DB, -B on r (or s), +B on p
  PSAR1,  // two nodes: -B on DB, +B on p
  PSAR2,  // one node: -B on r
};

enum class Procedure { P1, P2, P3, P4, P5, PushUp, Root, RedSibling };

/// Fixup cases of the conventional deletion algorithm.
enum class TaCase { RedSibling, BlackSiblingBlackNephews, NearRedNephew, FarRedNephew };

std::string_view to_string(CaseKind v);
std::string_view to_string(RuleKind v);
std::string_view to_string(Procedure v);
std::string_view to_string(TaCase v);

std::optional<CaseKind> parse_case_kind(std::string_view s);
std::optional<RuleKind> parse_rule_kind(std::string_view s);
std::optional<Procedure> parse_procedure(std::string_view s);
std::optional<TaCase> parse_ta_case(std::string_view s);

}  // namespace rbsa
