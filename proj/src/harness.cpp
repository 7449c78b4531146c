#include "rbsa/harness.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "rbsa/error.hpp"
#include "rbsa/sa_engine.hpp"
#include "rbsa/traditional_engine.hpp"
#include "rbsa/tree_io.hpp"

namespace rbsa {

namespace {

TableRow row(std::string rotation, std::string rule, std::vector<std::string> operated,
             std::vector<std::string> exempted, bool db_removed, bool balanced) {
  return {std::move(rotation), std::move(rule), std::move(operated), std::move(exempted),
          db_removed, balanced};
}

std::vector<GoldenCase> build_catalog() {
  using C = Color;
  std::vector<GoldenCase> cat;

  cat.push_back({"lr_black_parent_inner_red", "40B(20B(_,30R),50B)", 50, CaseKind::LR, 30,
                 {"DB", "leftRotate(s(DB))", "LL", "Δ[DB,r,p]", "rightRotate(newDB)", "remove DB"},
                 2, C::Black,
                 {row("leftRotate(s)", "-", {"20"}, {}, false, false),
                  row("-", "Δ", {"DB", "30", "40"}, {}, true, false),
                  row("rightRotate(p)", "-", {"40"}, {}, true, true)}});

  cat.push_back({"rl_black_parent_inner_red", "20B(10B,40B(30R,_))", 10, CaseKind::RL, 30,
                 {"DB", "rightRotate(s(DB))", "RR", "Δ[DB,r,p]", "leftRotate(newDB)", "remove DB"},
                 2, C::Black,
                 {row("rightRotate(s)", "-", {"40"}, {}, false, false),
                  row("-", "Δ", {"DB", "30", "20"}, {}, true, false),
                  row("leftRotate(p)", "-", {"20"}, {}, false, false)}});

  cat.push_back({"ll_black_parent_two_red", "40B(30B(20R,35R),50B)", 50, CaseKind::LL, 20,
                 {"DB", "rightRotate(p)", "BST", "∂′[DB,p]", "newDB", "Δ[DB,r,p]", "newDB",
                  "newDB(root)"},
                 2, C::Black,
                 {row("rightRotate(p)", "-", {"40"}, {}, false, false),
                  row("-", "∂′", {"DB", "40"}, {"35"}, true, false),
                  row("-", "Δ", {"40", "20", "30"}, {}, false, false),
                  row("-", "-", {"30"}, {}, true, true)}});

  cat.push_back({"rr_black_parent_two_red", "20B(10B,30B(25R,40R))", 10, CaseKind::RR, 40,
                 {"DB", "leftRotate(p)", "BST", "∂′[DB,p]", "newDB", "Δ[DB,r,p]", "newDB(root)",
                  "B(root)"},
                 2, C::Black,
                 {row("leftRotate(p)", "-", {"20"}, {}, false, false),
                  row("-", "∂′", {"DB", "20"}, {"25"}, false, false),
                  row("-", "Δ", {"20", "40", "30"}, {}, false, false),
                  row("-", "-", {"30"}, {}, true, true)}});

  // No list form exists for this case; the expected script is read off its step table.
  cat.push_back({"rr_black_parent_outer_red", "20B(10B,30B(_,40R))", 10, CaseKind::RR, 40,
                 {"DB", "leftRotate(p(DB))", "∂′[DB,p]", "Δ[DB,r,p]", "B(root)"},
                 2, C::Black,
                 {row("leftRotate(p)", "-", {"20"}, {}, false, false),
                  row("-", "∂′", {"DB", "20"}, {}, false, false),
                  row("-", "Δ", {"20", "40", "30"}, {}, false, false),
                  row("-", "-", {"30"}, {}, true, true)}});

  // Sibling is red: a black sibling over two black nephews plus a black
  // parent would leave the starting tree with unequal black heights.
  cat.push_back({"ll_black_parent_two_black", "40B(30R(20B,35B),50B)", 50, CaseKind::LL, 35,
                 {"DB", "rightRotate(p)", "BST", "Δ[DB,r,p]", "newDB", "∂′[DB,p]", "newDB",
                  "newDB(root)", "B(root)"},
                 2, C::Red,
                 {row("rightRotate(p)", "-", {"40"}, {}, false, false),
                  row("-", "Δ", {"DB", "35", "40"}, {}, false, false),
                  row("-", "∂′", {"40", "30"}, {"20"}, false, false),
                  row("-", "-", {"30"}, {}, true, true)}});

  cat.push_back({"rr_black_parent_two_black", "20B(10B,30R(25B,40B))", 10, CaseKind::RR, 25,
                 {"DB", "leftRotate(p)", "BST", "Δ[DB,r,p]", "∂′[DB,p]", "B(root)"},
                 2, C::Red,
                 {row("leftRotate(p)", "-", {"20"}, {}, false, false),
                  row("-", "Δ", {"DB", "25", "20"}, {}, false, false),
                  row("-", "∂′", {"20", "30"}, {"40"}, false, false),
                  row("-", "-", {"30"}, {}, true, true)}});

  cat.push_back({"lr_red_parent_inner_red", "10B(5B,20R(17B(_,19R),25B))", 25, CaseKind::LR, 19,
                 {"DB", "leftRotate(s)", "LL", "Δ[DB,r,p]", "rightRotate(p)", "BST", "∂″[r]"},
                 2, C::Red,
                 {row("leftRotate(s)", "-", {"17"}, {}, false, false),
                  row("-", "Δ", {"DB", "19", "20"}, {}, true, false),
                  row("rightRotate(p)", "-", {"20"}, {}, true, false),
                  row("-", "∂″", {"19"}, {"17", "20"}, true, true)}});

  cat.push_back({"rl_red_parent_inner_red", "10B(5B,20R(15B,25B(22R,_)))", 15, CaseKind::RL, 22,
                 {"DB", "rightRotate(s)", "RR", "Δ[DB,r,p]", "leftRotate(p)", "BST", "δ″[r]"},
                 2, C::Red,
                 {row("rightRotate(s)", "-", {"25"}, {}, false, false),
                  row("-", "Δ", {"DB", "22", "20"}, {}, true, false),
                  row("leftRotate(p)", "-", {"20"}, {}, true, false),
                  row("-", "∂″", {"22"}, {"20", "25"}, true, true)}});

  cat.push_back({"ll_red_parent_outer_red", "10B(5B,30R(20B(15R,_),40B))", 40, CaseKind::LL, 15,
                 {"DB", "rightRotate(p)", "RR", "∂′[DB,p]", "BST", "∂″[r]"},
                 2, C::Black,
                 {row("rightRotate(p)", "-", {"30"}, {}, false, false),
                  row("-", "∂′", {"DB", "15"}, {}, true, false),
                  row("-", "∂″", {"15"}, {"20", "30"}, true, true)}});

  cat.push_back({"rr_red_parent_outer_red", "10B(5B,30R(20B,40B(_,45R)))", 20, CaseKind::RR, 45,
                 {"DB", "leftRotate(p)", "LL", "∂′[DB,p]", "BST", "∂″[r]"},
                 2, C::Black,
                 {}});

  cat.push_back({"ll_two_black_recursive",
                 "40B(20B(10B,30B),80R(66B(60B,70B),90B(85R(83B,87B),95B)))", 70, CaseKind::LL,
                 std::nullopt,
                 {"DB", "rightRotate(p)", "Δ[DB,r,p]", "RL", "Δ[DB,r,p]", "BST", "∂″[r]"},
                 3, std::nullopt,
                 {}});
  return cat;
}

bool has_double_black(const Tree& t) {
  if (t.phantom()) return true;
  for (Key k : t.inorder()) {
    if (t.color(t.find(k)) == Color::DoubleBlack) return true;
  }
  return false;
}

std::string join(const std::vector<std::string>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i];
  }
  return s + "]";
}

std::string key_name(const std::optional<Key>& k) { return k ? std::to_string(*k) : "DB"; }

}  // namespace

std::string to_string(const TableRow& r) {
  std::ostringstream os;
  os << "(" << r.rotation << ", " << r.rule << ", " << join(r.operated) << ", "
     << join(r.exempted) << ", " << (r.db_removed ? "Yes" : "No") << ", "
     << (r.balanced ? "Yes" : "No") << ")";
  return os.str();
}

Tree GoldenCase::initial_tree() const { return parse_shape(shape); }

const std::vector<GoldenCase>& golden_catalog() {
  static const std::vector<GoldenCase> cat = build_catalog();
  return cat;
}

const GoldenCase* find_golden(std::string_view name) {
  for (const GoldenCase& c : golden_catalog()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<std::string> normalize_script(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  auto starts = [](const std::string& s, std::string_view prefix) {
    return s.compare(0, prefix.size(), prefix) == 0;
  };
  for (const std::string& tok : tokens) {
    std::string dir;
    if (starts(tok, "leftRotate(")) dir = "leftRotate";
    if (starts(tok, "rightRotate(")) dir = "rightRotate";
    if (!dir.empty()) {
      std::string arg = tok.substr(dir.size() + 1);
      out.push_back(dir + (starts(arg, "s") ? "(s)" : "(p)"));
    } else if (starts(tok, "Δ")) {
      out.emplace_back("Δ");
    } else if (starts(tok, "∂′") || starts(tok, "δ′")) {
      out.emplace_back("∂′");
    } else if (starts(tok, "∂″") || starts(tok, "δ″")) {
      out.emplace_back("∂″");
    }
  }
  return out;
}

std::vector<TableRow> table_rows(const Trace& trace) {
  std::vector<TableRow> rows;
  Tree t = trace.initial;
  bool open = false;
  EventKind prev = EventKind::Balanced;
  auto close = [&] {
    if (!open) return;
    rows.back().db_removed = !has_double_black(t);
    rows.back().balanced = t.valid();
    open = false;
  };
  for (const TraceEvent& e : trace.events) {
    bool starts_row = e.kind == EventKind::Rotate || e.kind == EventKind::RuleApplied ||
                      e.kind == EventKind::RootBlackened ||
                      (e.kind == EventKind::DbRemoved && prev != EventKind::Rotate);
    if (e.kind != EventKind::Recolor && e.kind != EventKind::DbFormed) prev = e.kind;
    if (starts_row) {
      close();
      TableRow r;
      if (e.kind == EventKind::Rotate) {
        r.rotation = std::string(*e.direction == Side::Left ? "leftRotate(" : "rightRotate(") +
                     e.role + ")";
        r.operated.push_back(std::to_string(*e.pivot));
      } else if (e.kind == EventKind::RuleApplied) {
        static constexpr const char* kSymbols[] = {"Δ", "∂′", "∂″"};
        if (e.rule) r.rule = kSymbols[static_cast<int>(*e.rule)];
        for (const auto& k : e.operands) r.operated.push_back(key_name(k));
        for (Key k : e.exempted) r.exempted.push_back(std::to_string(k));
      } else {
        r.operated.push_back(key_name(e.key));
      }
      rows.push_back(std::move(r));
      open = true;
    }
    if (e.kind == EventKind::Balanced) close();
    apply_event(t, e);
  }
  close();
  return rows;
}

bool GoldenReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* GoldenReport::check(std::string_view tag) const {
  for (const Check& c : checks) {
    if (c.tag == tag) return &c;
  }
  return nullptr;
}

GoldenReport run_golden(const GoldenCase& c) {
  GoldenReport rep;
  rep.name = c.name;
  Tree a = c.initial_tree();
  Tree b = a;
  rep.sa = delete_sa(a, c.delete_key);
  rep.ta = delete_traditional(b, c.delete_key);
  auto add = [&](std::string tag, bool pass, std::string detail) {
    rep.checks.push_back({std::move(tag), pass, std::move(detail)});
  };

  const Iteration* first = rep.sa.iterations.empty() ? nullptr : &rep.sa.iterations.front();
  CaseKind got_case = first ? first->case_kind : CaseKind::RootDB;
  add("CaseMismatch", got_case == c.expected_case,
      "expected " + std::string(to_string(c.expected_case)) + " got " +
          std::string(to_string(got_case)));

  if (c.expected_vip) {
    std::optional<Key> got = first ? first->vip : std::nullopt;
    add("VipMismatch", got == c.expected_vip,
        "expected " + std::to_string(*c.expected_vip) + " got " + key_name(got));
  }

  auto want = normalize_script(c.expected_script);
  add("ScriptMismatch", want == rep.sa.script,
      "expected " + join(want) + " got " + join(rep.sa.script));

  add("Unbalanced", rep.sa.final_state.balanced,
      std::to_string(rep.sa.final_state.violations.size()) + " violations");
  add("BlackHeightMismatch", rep.sa.final_state.black_height == c.expected_black_height,
      "expected " + std::to_string(c.expected_black_height) + " got " +
          std::to_string(rep.sa.final_state.black_height));

  if (c.expected_vip && c.expected_vip_color) {
    NodeId v = a.find(*c.expected_vip);
    std::string got = v == kNil ? "absent" : std::string(short_name(a.color(v)));
    add("VipColorMismatch", v != kNil && a.color(v) == *c.expected_vip_color,
        "expected " + std::string(short_name(*c.expected_vip_color)) + " got " + got);
  }

  bool predictions_ok = true;
  std::string pred_detail;
  for (const Iteration& it : rep.sa.iterations) {
    if (!it.predicted_vip_color) continue;
    if (it.predicted_vip_color != it.vip_color) {
      predictions_ok = false;
      pred_detail += "vip " + key_name(it.vip) + " predicted " +
                     std::string(short_name(*it.predicted_vip_color)) + "; ";
    }
  }
  add("PredictionMismatch", predictions_ok, pred_detail);

  if (!c.expected_rows.empty()) {
    auto got = table_rows(rep.sa);
    std::string detail;
    std::size_t n = std::max(got.size(), c.expected_rows.size());
    for (std::size_t i = 0; i < n; ++i) {
      std::string e = i < c.expected_rows.size() ? to_string(c.expected_rows[i]) : "(none)";
      std::string g = i < got.size() ? to_string(got[i]) : "(none)";
      if (e != g) detail += "row " + std::to_string(i + 1) + " expected " + e + " got " + g + "; ";
    }
    add("TableRowMismatch", detail.empty(), detail);
  }

  add("SlowerThanTa", rep.sa.steps.steps <= rep.ta.steps.steps,
      "SA=" + std::to_string(rep.sa.steps.steps) + " TA=" + std::to_string(rep.ta.steps.steps));
  return rep;
}

std::string format_report(const GoldenReport& r) {
  std::ostringstream os;
  os << (r.passed() ? "PASS " : "FAIL ") << r.name << "\n";
  for (const Check& c : r.checks) {
    if (!c.pass) os << "  " << c.tag << ": " << c.detail << "\n";
  }
  return os.str();
}

bool FuzzReport::ok() const { return !first_failure.has_value(); }

std::vector<Op> generate_workload(const FuzzOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<Key> dist(opt.key_min, opt.key_max);
  std::set<Key> present;
  std::vector<Op> ops;
  int deletes = 0;
  auto more = [&] {
    if (opt.min_deletes) return deletes < *opt.min_deletes;
    return static_cast<int>(ops.size()) < opt.ops;
  };
  while (more()) {
    Key k = dist(rng);
    if (present.count(k)) {
      present.erase(k);
      ops.push_back({OpKind::Delete, k});
      ++deletes;
    } else {
      present.insert(k);
      ops.push_back({OpKind::Insert, k});
    }
  }
  return ops;
}

FuzzReport fuzz_differential(const FuzzOptions& opt) {
  FuzzReport rep;
  std::vector<Op> ops = generate_workload(opt);
  std::map<std::string, int> procedures;
  Tree tree;

  for (std::size_t i = 0; i < ops.size(); ++i) {
    const Op& op = ops[i];
    ++rep.ops;
    if (op.kind == OpKind::Insert) {
      ++rep.inserts;
      tree.insert(op.key);
      continue;
    }
    ++rep.deletes;

    std::vector<std::string> problems;
    auto fail = [&](int& counter, std::string what) {
      ++counter;
      problems.push_back(std::move(what));
    };

    std::vector<Key> expected = tree.inorder();
    expected.erase(std::find(expected.begin(), expected.end(), op.key));
    int height = tree.height();

    Tree a = tree;
    Tree b = tree;
    SaOptions so;
    so.skip_psar2 = opt.skip_psar2;
    so.on_context = [&](const Tree& t, const DBContext& ctx, const Classification& cls) {
      if (ctx.root) return;
      RuleOperands ro{ctx.u, cls.vip != kNil ? cls.vip : ctx.s, ctx.p};
      ++rep.identity_checks;
      if (!rule_identity_holds(t, ro)) fail(rep.identity_mismatches, "rule identity");
    };

    std::optional<Trace> sa;
    std::optional<Trace> ta;
    try {
      sa = delete_sa(a, op.key, so);
      ta = delete_traditional(b, op.key);
    } catch (const Error& e) {
      fail(rep.errors, e.what());
    }

    if (sa && ta) {
      if (!sa->final_state.balanced) fail(rep.sa_violations, "SA result violates invariants");
      if (!ta->final_state.balanced) fail(rep.ta_violations, "TA result violates invariants");
      if (a.inorder() != b.inorder() || a.inorder() != expected) {
        fail(rep.inorder_mismatches, "inorder differs");
      }
      if (!replay(*sa).same_as(a)) fail(rep.replay_mismatches, "replay differs");

      int iters = static_cast<int>(sa->iterations.size());
      rep.max_iterations = std::max(rep.max_iterations, iters);
      if (iters > height + 6) fail(rep.termination_breaches, "iteration bound exceeded");

      for (std::size_t k = 0; k < sa->iterations.size(); ++k) {
        const Iteration& it = sa->iterations[k];
        ++procedures[std::string(to_string(it.procedure))];
        if (it.predicted_vip_color) {
          ++rep.vip_checks;
          if (it.predicted_vip_color != it.vip_color) fail(rep.vip_mismatches, "VIP color");
        }
        if (it.procedure == Procedure::PushUp && it.parent_color == Color::Black) {
          ++rep.pushup_checks;
          bool recurs = k + 1 < sa->iterations.size() && sa->iterations[k + 1].db == it.parent;
          if (!recurs) fail(rep.pushup_failures, "push-up did not recur at parent");
        }
      }

      rep.sa_steps += sa->steps.steps;
      rep.ta_steps += ta->steps.steps;
      if (sa->steps.steps < ta->steps.steps) {
        ++rep.sa_fewer;
      } else if (sa->steps.steps == ta->steps.steps) {
        ++rep.equal_steps;
      } else {
        ++rep.sa_more;
      }
    }

    if (!problems.empty() && !rep.first_failure) {
      FuzzFailure f;
      f.op_index = static_cast<int>(i);
      f.kind = problems.front();
      for (const auto& p : problems) f.detail += p + "; ";
      f.prefix.assign(ops.begin(), ops.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      f.sa = sa;
      f.ta = ta;
      rep.first_failure = std::move(f);
    }
    if (sa && sa->final_state.balanced) {
      tree = std::move(a);
    } else if (ta && ta->final_state.balanced) {
      tree = std::move(b);
    } else {
      tree = Tree::from_keys(expected);
    }
  }
  rep.procedures.assign(procedures.begin(), procedures.end());
  return rep;
}

std::string format_fuzz_report(const FuzzReport& r) {
  std::ostringstream os;
  os << "ops " << r.ops << " inserts " << r.inserts << " deletes " << r.deletes << "\n";
  os << "violations sa " << r.sa_violations << " ta " << r.ta_violations << "\n";
  os << "inorder mismatches " << r.inorder_mismatches << "\n";
  os << "replay mismatches " << r.replay_mismatches << "\n";
  os << "vip checks " << r.vip_checks << " mismatches " << r.vip_mismatches << "\n";
  os << "rule identity checks " << r.identity_checks << " mismatches " << r.identity_mismatches
     << "\n";
  os << "termination breaches " << r.termination_breaches << " (max iterations "
     << r.max_iterations << ")\n";
  os << "push-up recursion checks " << r.pushup_checks << " failures " << r.pushup_failures
     << "\n";
  os << "errors " << r.errors << "\n";
  os << "steps sa " << r.sa_steps << " ta " << r.ta_steps << " (sa fewer " << r.sa_fewer
     << ", equal " << r.equal_steps << ", sa more " << r.sa_more << ")\n";
  os << "procedures";
  for (const auto& [name, n] : r.procedures) os << " " << name << "=" << n;
  os << "\n";
  if (r.first_failure) {
    const FuzzFailure& f = *r.first_failure;
    os << "first failure at op " << f.op_index << ": " << f.detail << "\n";
    os << "failing prefix length " << f.prefix.size() << ", last op delete "
       << f.prefix.back().key << "\n";
  } else {
    os << "no failures\n";
  }
  return os.str();
}

Json fuzz_report_json(const FuzzReport& r) {
  Json j;
  j["ops"] = r.ops;
  j["inserts"] = r.inserts;
  j["deletes"] = r.deletes;
  j["saViolations"] = r.sa_violations;
  j["taViolations"] = r.ta_violations;
  j["inorderMismatches"] = r.inorder_mismatches;
  j["replayMismatches"] = r.replay_mismatches;
  j["vipChecks"] = r.vip_checks;
  j["vipMismatches"] = r.vip_mismatches;
  j["identityChecks"] = r.identity_checks;
  j["identityMismatches"] = r.identity_mismatches;
  j["terminationBreaches"] = r.termination_breaches;
  j["maxIterations"] = r.max_iterations;
  j["pushUpChecks"] = r.pushup_checks;
  j["pushUpFailures"] = r.pushup_failures;
  j["errors"] = r.errors;
  Json steps;
  steps["sa"] = r.sa_steps;
  steps["ta"] = r.ta_steps;
  steps["saFewer"] = r.sa_fewer;
  steps["equal"] = r.equal_steps;
  steps["saMore"] = r.sa_more;
  j["steps"] = steps;
  Json procs = Json::object();
  for (const auto& [name, n] : r.procedures) procs[name] = n;
  j["procedures"] = procs;
  if (r.first_failure) {
    const FuzzFailure& f = *r.first_failure;
    Json fj;
    fj["opIndex"] = f.op_index;
    fj["detail"] = f.detail;
    Json prefix = Json::array();
    for (const Op& op : f.prefix) {
      prefix.push_back({{"op", op.kind == OpKind::Insert ? "insert" : "delete"}, {"key", op.key}});
    }
    fj["prefix"] = prefix;
    if (f.sa) fj["saTrace"] = serialize(*f.sa);
    if (f.ta) fj["taTrace"] = serialize(*f.ta);
    j["failure"] = fj;
  } else {
    j["failure"] = nullptr;
  }
  return j;
}

StepComparison compare_steps(std::string_view name) {
  std::string shape;
  Key key = 0;
  if (name == "comparisonA") {
    shape = "10B(5B,20R(17B(_,19R),25B))";
    key = 25;
  } else if (name == "comparisonB") {
    shape = "40B(20B(_,30R),50B)";
    key = 50;
  } else if (name == "redLeaf") {
    shape = "20B(10R,30R)";
    key = 10;
  } else {
    throw Error(ErrorCode::UnknownCase, std::string(name));
  }
  StepComparison out;
  Tree a = parse_shape(shape);
  Tree b = a;
  out.sa_trace = delete_sa(a, key);
  out.ta_trace = delete_traditional(b, key);
  out.sa = out.sa_trace.steps.steps;
  out.ta = out.ta_trace.steps.steps;
  return out;
}

}  // namespace rbsa
