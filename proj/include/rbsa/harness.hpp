#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rbsa/trace.hpp"
#include "rbsa/tree.hpp"

namespace rbsa {

/// One row of a step table: what was rotated, which rule ran, the nodes it
/// touched and spared, and the tree state afterwards. Node names are keys,
/// or "DB" for a phantom double-black.
struct TableRow {
  std::string rotation = "-";  // normalized, e.g. "leftRotate(s)"
  std::string rule = "-";      // "Δ", "∂′", "∂″"
  std::vector<std::string> operated;
  std::vector<std::string> exempted;
  bool db_removed = false;
  bool balanced = false;

  bool operator==(const TableRow&) const = default;
};

std::string to_string(const TableRow& row);

struct GoldenCase {
  std::string name;
  std::string shape;  // see parse_shape
  Key delete_key = 0;
  CaseKind expected_case = CaseKind::RootDB;
  std::optional<Key> expected_vip;
  std::vector<std::string> expected_script;  // list notation, normalized before comparing
  int expected_black_height = 0;
  std::optional<Color> expected_vip_color;
  std::vector<TableRow> expected_rows;  // empty when no step table exists

  Tree initial_tree() const;
};

const std::vector<GoldenCase>& golden_catalog();
const GoldenCase* find_golden(std::string_view name);

/// Keeps rotations (as direction plus role s or p) and rule symbols; drops
/// structure annotations such as LL, BST or newDB.
std::vector<std::string> normalize_script(const std::vector<std::string>& tokens);

/// Groups a trace into step-table rows. The tree state of each row is taken
/// after the row's last event.
std::vector<TableRow> table_rows(const Trace& trace);

struct Check {
  std::string tag;  // e.g. "VipMismatch"
  bool pass = true;
  std::string detail;
};

struct GoldenReport {
  std::string name;
  Trace sa;
  Trace ta;
  std::vector<Check> checks;

  bool passed() const;
  const Check* check(std::string_view tag) const;
};

GoldenReport run_golden(const GoldenCase& c);
std::string format_report(const GoldenReport& r);

enum class OpKind { Insert, Delete };

struct Op {
  OpKind kind;
  Key key;
};

struct FuzzOptions {
  std::uint64_t seed = 42;
  int ops = 10000;
  Key key_min = 0;
  Key key_max = 255;
  /// When set, keep generating operations until this many deletes have run.
  std::optional<int> min_deletes;
  bool skip_psar2 = false;
};

struct FuzzFailure {
  int op_index = 0;
  std::string kind;
  std::string detail;
  std::vector<Op> prefix;  // shortest failing workload prefix
  std::optional<Trace> sa;
  std::optional<Trace> ta;
};

struct FuzzReport {
  int ops = 0;
  int inserts = 0;
  int deletes = 0;
  int sa_violations = 0;
  int ta_violations = 0;
  int inorder_mismatches = 0;
  int replay_mismatches = 0;
  int vip_checks = 0;
  int vip_mismatches = 0;
  int identity_checks = 0;
  int identity_mismatches = 0;
  int termination_breaches = 0;
  int pushup_checks = 0;
  int pushup_failures = 0;
  int errors = 0;
  long sa_steps = 0;
  long ta_steps = 0;
  int sa_fewer = 0;
  int equal_steps = 0;
  int sa_more = 0;
  int max_iterations = 0;
  std::vector<std::pair<std::string, int>> procedures;
  std::optional<FuzzFailure> first_failure;

  bool ok() const;
};

std::vector<Op> generate_workload(const FuzzOptions& opt);
FuzzReport fuzz_differential(const FuzzOptions& opt);
std::string format_fuzz_report(const FuzzReport& r);
Json fuzz_report_json(const FuzzReport& r);

struct StepComparison {
  int ta = 0;
  int sa = 0;
  Trace ta_trace;
  Trace sa_trace;
};

/// Names: comparisonA, comparisonB, redLeaf. Throws UnknownCase.
StepComparison compare_steps(std::string_view name);

}  // namespace rbsa
