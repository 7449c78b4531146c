#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rbsa/tree.hpp"
#include "rbsa/tree_io.hpp"
#include "rbsa/vocabulary.hpp"

namespace rbsa {

inline constexpr std::string_view kTraceVersion = "rbsa-trace/1";

enum class EventKind { Delete, DbFormed, Rotate, RuleApplied, Recolor, DbRemoved, RootBlackened, Balanced };

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

/// One step of a deletion. Fields not relevant to `kind` stay empty. A key of
/// nullopt on DbFormed/Recolor/DbRemoved refers to the phantom double-black
/// slot rather than a stored node.
struct TraceEvent {
  EventKind kind = EventKind::Balanced;
  std::optional<Key> key;

  // Delete
  std::optional<Key> unlinked;
  std::optional<Key> successor;

  // DbFormed on an empty slot
  std::optional<Key> parent;
  std::optional<Side> side;

  // Rotate
  std::optional<Side> direction;
  std::optional<Key> pivot;
  std::string role;  // "p" or "s" for engine rotations, empty otherwise

  // RuleApplied
  std::optional<RuleKind> rule;
  std::optional<CaseKind> case_kind;
  std::optional<Procedure> procedure;
  std::optional<TaCase> ta_case;
  std::vector<std::optional<Key>> operands;
  std::vector<Key> exempted;

  // Recolor
  std::optional<Color> before;
  std::optional<Color> after;
  std::optional<int> cause;  // index of the owning event

  // Balanced
  std::optional<int> black_height;

  std::optional<std::string> snapshot;

  bool operator==(const TraceEvent&) const = default;
};

/// One pass of the repair loop: the double-black context it saw and the
/// decision taken.
struct Iteration {
  std::optional<Key> db;  // nullopt: phantom
  std::optional<Key> parent;
  std::optional<Key> sibling;
  CaseKind case_kind = CaseKind::RootDB;
  Procedure procedure = Procedure::Root;
  std::optional<Key> vip;
  std::optional<Key> other;
  Color parent_color = Color::Black;
  std::optional<Color> vip_color;
  std::optional<Color> predicted_vip_color;

  bool operator==(const Iteration&) const = default;
};

struct FinalState {
  bool balanced = false;
  int black_height = 0;
  std::vector<Violation> violations;

  bool operator==(const FinalState&) const = default;
};

struct StepCount {
  int steps = 0;
  std::vector<std::string> breakdown;

  bool operator==(const StepCount&) const = default;
};

struct Trace {
  std::string method;  // "sa" or "ta"
  Key delete_key = 0;
  Tree initial;
  std::vector<TraceEvent> events;
  std::vector<std::string> script;
  std::vector<Iteration> iterations;
  FinalState final_state;
  StepCount steps;

  bool operator==(const Trace& o) const;
};

/// Groups events the way the comparison tables count them: each Delete is a
/// step, each rotation is a step (a double-black removal that directly
/// follows a rotation belongs to it), and each contiguous run of
/// recoloring work is one step.
StepCount count_steps(const Trace& trace);

Json serialize(const Trace& trace);
/// Throws MalformedDocument on a bad shape or a version other than rbsa-trace/1.
Trace deserialize(const Json& doc);

/// Canonical text form shared by the CLI and the HTTP service.
std::string to_document(const Trace& trace);

/// Applies one event's structural or color effect. Events without one are no-ops.
void apply_event(Tree& tree, const TraceEvent& e);

/// Re-applies a trace's events to its initial tree.
Tree replay(const Trace& trace);

/// Appends events to a trace, optionally attaching a render of the tree after
/// each one.
class TraceRecorder {
 public:
  TraceRecorder(Trace& trace, const Tree& tree, bool snapshots)
      : trace_(trace), tree_(tree), snapshots_(snapshots) {}

  int push(TraceEvent e);
  void recolor(int cause, std::optional<Key> key, Color before, Color after);
  void label(std::string s) { trace_.script.push_back(std::move(s)); }

 private:
  Trace& trace_;
  const Tree& tree_;
  bool snapshots_;
};

/// Fills final_state and steps and appends the closing Balanced event.
void finish_trace(Trace& trace, const Tree& tree, bool snapshots);

}  // namespace rbsa
