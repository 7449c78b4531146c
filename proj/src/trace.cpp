#include "rbsa/trace.hpp"

#include <array>
#include <utility>

#include "rbsa/error.hpp"

namespace rbsa {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table,
                        std::string_view s) {
  for (const auto& [e, name] : table) {
    if (name == s) return e;
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E e) {
  for (const auto& [v, name] : table) {
    if (v == e) return name;
  }
  return "?";
}

constexpr std::array<std::pair<CaseKind, std::string_view>, 6> kCaseNames{{
    {CaseKind::LL, "LL"},
    {CaseKind::LR, "LR"},
    {CaseKind::RL, "RL"},
    {CaseKind::RR, "RR"},
    {CaseKind::PushUp, "PushUp"},
    {CaseKind::RootDB, "RootDB"},
}};

constexpr std::array<std::pair<RuleKind, std::string_view>, 3> kRuleNames{{
    {RuleKind::GSAR, "GSAR"},
    {RuleKind::PSAR1, "PSAR1"},
    {RuleKind::PSAR2, "PSAR2"},
}};

constexpr std::array<std::pair<Procedure, std::string_view>, 8> kProcedureNames{{
    {Procedure::P1, "P1"},
    {Procedure::P2, "P2"},
    {Procedure::P3, "P3"},
    {Procedure::P4, "P4"},
    {Procedure::P5, "P5"},
    {Procedure::PushUp, "PushUp"},
    {Procedure::Root, "Root"},
    {Procedure::RedSibling, "RedSibling"},
}};

constexpr std::array<std::pair<TaCase, std::string_view>, 4> kTaCaseNames{{
    {TaCase::RedSibling, "RedSibling"},
    {TaCase::BlackSiblingBlackNephews, "BlackSiblingBlackNephews"},
    {TaCase::NearRedNephew, "NearRedNephew"},
    {TaCase::FarRedNephew, "FarRedNephew"},
}};

constexpr std::array<std::pair<EventKind, std::string_view>, 8> kEventNames{{
    {EventKind::Delete, "Delete"},
    {EventKind::DbFormed, "DbFormed"},
    {EventKind::Rotate, "Rotate"},
    {EventKind::RuleApplied, "RuleApplied"},
    {EventKind::Recolor, "Recolor"},
    {EventKind::DbRemoved, "DbRemoved"},
    {EventKind::RootBlackened, "RootBlackened"},
    {EventKind::Balanced, "Balanced"},
}};

constexpr std::array<std::pair<Violation::Kind, std::string_view>, 5> kViolationNames{{
    {Violation::Kind::RedRed, "RedRed"},
    {Violation::Kind::RootNotBlack, "RootNotBlack"},
    {Violation::Kind::UnequalBlackHeight, "UnequalBlackHeight"},
    {Violation::Kind::BstOrder, "BstOrder"},
    {Violation::Kind::DoubleBlackPresent, "DoubleBlackPresent"},
}};

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::MalformedDocument, why); }

std::string_view side_name(Side s) { return s == Side::Left ? "left" : "right"; }

Side parse_side(const Json& j) {
  std::string s = j.get<std::string>();
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  malformed("bad side " + s);
}

Json opt_key(const std::optional<Key>& k) { return k ? Json(*k) : Json(nullptr); }

std::optional<Key> read_opt_key(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<Key>();
}

Json opt_color(const std::optional<Color>& c) {
  return c ? Json(std::string(short_name(*c))) : Json(nullptr);
}

Color read_color(const Json& j) {
  auto c = parse_color(j.get<std::string>());
  if (!c) malformed("bad color");
  return *c;
}

std::optional<Color> read_opt_color(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return read_color(j);
}

template <typename E, std::size_t N>
E read_enum(const std::array<std::pair<E, std::string_view>, N>& table, const Json& j) {
  auto v = lookup(table, j.get<std::string>());
  if (!v) malformed("unknown enum value " + j.get<std::string>());
  return *v;
}

bool keyed_on_slot(EventKind k) {
  return k == EventKind::Recolor || k == EventKind::DbFormed || k == EventKind::DbRemoved;
}

Json encode_event(const TraceEvent& e) {
  Json j;
  j["kind"] = std::string(to_string(e.kind));
  if (e.key || keyed_on_slot(e.kind)) j["key"] = opt_key(e.key);
  if (e.unlinked) j["unlinked"] = *e.unlinked;
  if (e.successor) j["successor"] = *e.successor;
  if (e.parent) j["parent"] = *e.parent;
  if (e.side) j["side"] = std::string(side_name(*e.side));
  if (e.direction) j["direction"] = std::string(side_name(*e.direction));
  if (e.pivot) j["pivot"] = *e.pivot;
  if (!e.role.empty()) j["role"] = e.role;
  if (e.rule) j["rule"] = std::string(to_string(*e.rule));
  if (e.case_kind) j["case"] = std::string(to_string(*e.case_kind));
  if (e.procedure) j["procedure"] = std::string(to_string(*e.procedure));
  if (e.ta_case) j["taCase"] = std::string(to_string(*e.ta_case));
  if (e.kind == EventKind::RuleApplied) {
    Json ops = Json::array();
    for (const auto& k : e.operands) ops.push_back(opt_key(k));
    j["operands"] = ops;
    j["exempted"] = e.exempted;
  }
  if (e.before) j["before"] = opt_color(e.before);
  if (e.after) j["after"] = opt_color(e.after);
  if (e.cause) j["cause"] = *e.cause;
  if (e.black_height) j["blackHeight"] = *e.black_height;
  if (e.snapshot) j["snapshot"] = *e.snapshot;
  return j;
}

TraceEvent decode_event(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) malformed("event needs kind");
  TraceEvent e;
  e.kind = read_enum(kEventNames, j["kind"]);
  if (j.contains("key")) e.key = read_opt_key(j["key"]);
  if (j.contains("unlinked")) e.unlinked = j["unlinked"].get<Key>();
  if (j.contains("successor")) e.successor = j["successor"].get<Key>();
  if (j.contains("parent")) e.parent = j["parent"].get<Key>();
  if (j.contains("side")) e.side = parse_side(j["side"]);
  if (j.contains("direction")) e.direction = parse_side(j["direction"]);
  if (j.contains("pivot")) e.pivot = j["pivot"].get<Key>();
  if (j.contains("role")) e.role = j["role"].get<std::string>();
  if (j.contains("rule")) e.rule = read_enum(kRuleNames, j["rule"]);
  if (j.contains("case")) e.case_kind = read_enum(kCaseNames, j["case"]);
  if (j.contains("procedure")) e.procedure = read_enum(kProcedureNames, j["procedure"]);
  if (j.contains("taCase")) e.ta_case = read_enum(kTaCaseNames, j["taCase"]);
  if (j.contains("operands")) {
    for (const auto& k : j["operands"]) e.operands.push_back(read_opt_key(k));
  }
  if (j.contains("exempted")) e.exempted = j["exempted"].get<std::vector<Key>>();
  if (j.contains("before")) e.before = read_opt_color(j["before"]);
  if (j.contains("after")) e.after = read_opt_color(j["after"]);
  if (j.contains("cause")) e.cause = j["cause"].get<int>();
  if (j.contains("blackHeight")) e.black_height = j["blackHeight"].get<int>();
  if (j.contains("snapshot")) e.snapshot = j["snapshot"].get<std::string>();
  return e;
}

Json encode_iteration(const Iteration& it) {
  Json j;
  j["db"] = opt_key(it.db);
  j["parent"] = opt_key(it.parent);
  j["sibling"] = opt_key(it.sibling);
  j["case"] = std::string(to_string(it.case_kind));
  j["procedure"] = std::string(to_string(it.procedure));
  j["vip"] = opt_key(it.vip);
  j["other"] = opt_key(it.other);
  j["parentColor"] = std::string(short_name(it.parent_color));
  j["vipColor"] = opt_color(it.vip_color);
  j["predictedVipColor"] = opt_color(it.predicted_vip_color);
  return j;
}

Iteration decode_iteration(const Json& j) {
  Iteration it;
  it.db = read_opt_key(j.at("db"));
  it.parent = read_opt_key(j.at("parent"));
  it.sibling = read_opt_key(j.at("sibling"));
  it.case_kind = read_enum(kCaseNames, j.at("case"));
  it.procedure = read_enum(kProcedureNames, j.at("procedure"));
  it.vip = read_opt_key(j.at("vip"));
  it.other = read_opt_key(j.at("other"));
  it.parent_color = read_color(j.at("parentColor"));
  it.vip_color = read_opt_color(j.at("vipColor"));
  it.predicted_vip_color = read_opt_color(j.at("predictedVipColor"));
  return it;
}

}  // namespace

std::string_view to_string(CaseKind v) { return name_of(kCaseNames, v); }
std::string_view to_string(RuleKind v) { return name_of(kRuleNames, v); }
std::string_view to_string(Procedure v) { return name_of(kProcedureNames, v); }
std::string_view to_string(TaCase v) { return name_of(kTaCaseNames, v); }
std::string_view to_string(EventKind k) { return name_of(kEventNames, k); }

std::optional<CaseKind> parse_case_kind(std::string_view s) { return lookup(kCaseNames, s); }
std::optional<RuleKind> parse_rule_kind(std::string_view s) { return lookup(kRuleNames, s); }
std::optional<Procedure> parse_procedure(std::string_view s) { return lookup(kProcedureNames, s); }
std::optional<TaCase> parse_ta_case(std::string_view s) { return lookup(kTaCaseNames, s); }
std::optional<EventKind> parse_event_kind(std::string_view s) { return lookup(kEventNames, s); }

bool Trace::operator==(const Trace& o) const {
  return method == o.method && delete_key == o.delete_key && initial.same_as(o.initial) &&
         events == o.events && script == o.script && iterations == o.iterations &&
         final_state == o.final_state && steps == o.steps;
}

StepCount count_steps(const Trace& trace) {
  StepCount sc;
  enum class Last { None, Delete, Rotate, Recolor } last = Last::None;
  for (const TraceEvent& e : trace.events) {
    switch (e.kind) {
      case EventKind::Delete:
        sc.breakdown.emplace_back("Delete");
        last = Last::Delete;
        break;
      case EventKind::Rotate:
        sc.breakdown.emplace_back("Rotate");
        last = Last::Rotate;
        break;
      case EventKind::DbRemoved:
        if (last == Last::Rotate) break;
        [[fallthrough]];
      case EventKind::RuleApplied:
      case EventKind::RootBlackened:
        if (last != Last::Recolor) sc.breakdown.emplace_back("Re-color");
        last = Last::Recolor;
        break;
      case EventKind::DbFormed:
      case EventKind::Recolor:
      case EventKind::Balanced:
        break;
    }
  }
  if (!sc.breakdown.empty() && trace.final_state.balanced && last != Last::Delete) {
    sc.breakdown.back() += " (Balanced)";
  }
  sc.steps = static_cast<int>(sc.breakdown.size());
  return sc;
}

Json serialize(const Trace& trace) {
  Json j;
  j["version"] = std::string(kTraceVersion);
  j["method"] = trace.method;
  j["deleteKey"] = trace.delete_key;
  j["initialTree"] = encode_tree(trace.initial);
  Json events = Json::array();
  for (const auto& e : trace.events) events.push_back(encode_event(e));
  j["events"] = events;
  j["script"] = trace.script;
  Json its = Json::array();
  for (const auto& it : trace.iterations) its.push_back(encode_iteration(it));
  j["iterations"] = its;
  Json fin;
  fin["balanced"] = trace.final_state.balanced;
  fin["blackHeight"] = trace.final_state.black_height;
  Json vs = Json::array();
  for (const auto& v : trace.final_state.violations) {
    Json vj;
    vj["kind"] = std::string(to_string(v.kind));
    vj["location"] = v.location;
    vs.push_back(vj);
  }
  fin["violations"] = vs;
  j["final"] = fin;
  Json steps;
  steps["count"] = trace.steps.steps;
  steps["breakdown"] = trace.steps.breakdown;
  j["steps"] = steps;
  return j;
}

Trace deserialize(const Json& doc) {
  try {
    if (!doc.is_object()) malformed("trace document must be an object");
    if (!doc.contains("version")) malformed("missing version");
    if (doc["version"] != std::string(kTraceVersion)) malformed("unsupported version");
    for (const char* field : {"method", "deleteKey", "initialTree", "events", "final", "steps"}) {
      if (!doc.contains(field)) malformed(std::string("missing ") + field);
    }
    Trace t;
    t.method = doc["method"].get<std::string>();
    if (t.method != "sa" && t.method != "ta") malformed("method must be sa or ta");
    t.delete_key = doc["deleteKey"].get<Key>();
    t.initial = decode_tree(doc["initialTree"]);
    for (const auto& e : doc["events"]) t.events.push_back(decode_event(e));
    if (doc.contains("script")) t.script = doc["script"].get<std::vector<std::string>>();
    if (doc.contains("iterations")) {
      for (const auto& it : doc["iterations"]) t.iterations.push_back(decode_iteration(it));
    }
    const Json& fin = doc["final"];
    t.final_state.balanced = fin.at("balanced").get<bool>();
    t.final_state.black_height = fin.at("blackHeight").get<int>();
    for (const auto& v : fin.at("violations")) {
      t.final_state.violations.push_back(
          {read_enum(kViolationNames, v.at("kind")), v.at("location").get<std::string>()});
    }
    t.steps.steps = doc["steps"].at("count").get<int>();
    t.steps.breakdown = doc["steps"].at("breakdown").get<std::vector<std::string>>();
    return t;
  } catch (const nlohmann::json::exception& ex) {
    malformed(ex.what());
  }
}

std::string to_document(const Trace& trace) { return serialize(trace).dump(2) + "\n"; }

void apply_event(Tree& t, const TraceEvent& e) {
  auto must_find = [&](Key k) {
    NodeId id = t.find(k);
    if (id == kNil) malformed("replay: key " + std::to_string(k) + " not in tree");
    return id;
  };
  switch (e.kind) {
    case EventKind::Delete:
      t.remove_structural(*e.key);
      break;
    case EventKind::Rotate:
      t.rotate(must_find(*e.pivot), *e.direction);
      break;
    case EventKind::Recolor:
      if (e.key) {
        t.set_color(must_find(*e.key), *e.after);
      } else if (e.after == Color::NullLeaf) {
        t.clear_phantom();
      }
      break;
    default:
      break;
  }
}

Tree replay(const Trace& trace) {
  Tree t = trace.initial;
  for (const TraceEvent& e : trace.events) apply_event(t, e);
  return t;
}

int TraceRecorder::push(TraceEvent e) {
  if (snapshots_) e.snapshot = tree_.render();
  trace_.events.push_back(std::move(e));
  return static_cast<int>(trace_.events.size() - 1);
}

void TraceRecorder::recolor(int cause, std::optional<Key> key, Color before, Color after) {
  TraceEvent e;
  e.kind = EventKind::Recolor;
  e.key = key;
  e.before = before;
  e.after = after;
  e.cause = cause;
  push(std::move(e));
}

void finish_trace(Trace& trace, const Tree& tree, bool snapshots) {
  trace.final_state.violations = tree.validate();
  trace.final_state.balanced = trace.final_state.violations.empty();
  trace.final_state.black_height = 0;
  if (trace.final_state.balanced) trace.final_state.black_height = tree.black_height();
  TraceEvent bal;
  bal.kind = EventKind::Balanced;
  bal.black_height = trace.final_state.black_height;
  TraceRecorder(trace, tree, snapshots).push(std::move(bal));
  trace.steps = count_steps(trace);
}

}  // namespace rbsa
