#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>

#include "rbsa/error.hpp"
#include "rbsa/harness.hpp"
#include "rbsa/sa_engine.hpp"
#include "rbsa/session.hpp"
#include "rbsa/traditional_engine.hpp"
#include "rbsa/tree_io.hpp"

using namespace rbsa;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kBadInput = 2, kNotFound = 3, kEnvironment = 4 };

int exit_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::KeyNotFound:
      return kNotFound;
    case ErrorCode::DuplicateKey:
    case ErrorCode::MalformedDocument:
    case ErrorCode::UnknownCase:
      return kBadInput;
    default:
      return kInvalid;
  }
}

std::string slurp(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedDocument, "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Tree load_tree(const std::string& path, const std::string& shape) {
  if (!shape.empty()) return parse_shape(shape);
  Json doc = Json::parse(slurp(path), nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::MalformedDocument, "input is not JSON");
  return decode_tree(doc);
}

void print_tree(const Tree& t, const std::string& format) {
  if (format == "json") {
    std::cout << encode_tree(t).dump(2) << "\n";
  } else if (format == "dot") {
    std::cout << t.to_dot();
  } else {
    std::cout << t.render();
  }
}

void print_violations(const std::vector<Violation>& vs, std::ostream& os) {
  for (const Violation& v : vs) os << to_string(v.kind) << " at " << v.location << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Red-black tree deletion with symbolic color arithmetic"};
  app.require_subcommand(1);

  std::vector<Key> build_keys;
  std::string format = "text";
  auto* build = app.add_subcommand("build", "Insert keys into an empty tree and print it");
  build->add_option("keys", build_keys, "Keys to insert in order");
  build->add_option("--format", format, "text, json or dot")
      ->check(CLI::IsMember({"text", "json", "dot"}));

  std::string tree_path = "-";
  std::string shape;
  Key del_key = 0;
  std::string method = "sa";
  bool snapshots = false;
  auto* del = app.add_subcommand("delete", "Delete a key and print its trace document");
  del->add_option("tree", tree_path, "Tree document path, '-' for stdin");
  del->add_option("--shape", shape, "Tree given as a shape literal, e.g. 40B(20B(_,30R),50B)");
  del->add_option("--key", del_key, "Key to delete")->required();
  del->add_option("--method", method, "sa or ta")->check(CLI::IsMember({"sa", "ta"}));
  del->add_flag("--snapshots", snapshots, "Embed a rendered tree after every event");

  std::string validate_path = "-";
  std::string validate_shape;
  auto* val = app.add_subcommand("validate", "Check a tree document against the red-black rules");
  val->add_option("tree", validate_path, "Tree document path, '-' for stdin");
  val->add_option("--shape", validate_shape, "Tree given as a shape literal");

  std::string case_name;
  auto* cmp = app.add_subcommand("compare", "Count traditional and symbolic steps for a case");
  cmp->add_option("case", case_name, "comparisonA, comparisonB or redLeaf")->required();

  FuzzOptions fopt;
  bool fuzz_json = false;
  int min_deletes = 0;
  auto* fuzz = app.add_subcommand("fuzz", "Differential fuzzing against the traditional algorithm");
  fuzz->add_option("--seed", fopt.seed, "PRNG seed");
  fuzz->add_option("--ops", fopt.ops, "Number of operations");
  fuzz->add_option("--min-deletes", min_deletes, "Run until this many deletes instead");
  fuzz->add_option("--key-min", fopt.key_min, "Smallest key");
  fuzz->add_option("--key-max", fopt.key_max, "Largest key");
  fuzz->add_flag("--inject-fault", fopt.skip_psar2, "Skip partial rule 2 in the SA engine");
  fuzz->add_flag("--json", fuzz_json, "Print the JSON report");

  std::string golden_name;
  auto* gold = app.add_subcommand("golden", "Run the golden catalog");
  gold->add_option("name", golden_name, "Run a single case");

  int port = 7423;
  std::string host = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  serve->add_option("--port", port, "Listen port (RBSA_PORT overrides)");
  serve->add_option("--host", host, "Listen address");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      Tree t;
      for (Key k : build_keys) t.insert(k);
      print_tree(t, format);
      if (format == "text") {
        auto vs = t.validate();
        if (vs.empty()) {
          std::cout << "valid, black height " << t.black_height() << "\n";
        } else {
          print_violations(vs, std::cout);
          return kInvalid;
        }
      }
      return kOk;
    }

    if (*del) {
      Tree t = load_tree(tree_path, shape);
      Trace trace;
      if (method == "sa") {
        SaOptions opt;
        opt.snapshots = snapshots;
        trace = delete_sa(t, del_key, opt);
      } else {
        trace = delete_traditional(t, del_key, snapshots);
      }
      std::cout << to_document(trace);
      std::cerr << method << " delete " << del_key << ": " << trace.steps.steps << " steps";
      if (!trace.script.empty()) {
        std::cerr << ", script";
        for (const auto& s : trace.script) std::cerr << " " << s;
      }
      std::cerr << "\n" << t.render();
      return trace.final_state.balanced ? kOk : kInvalid;
    }

    if (*val) {
      Tree t = load_tree(validate_path, validate_shape);
      auto vs = t.validate();
      if (vs.empty()) {
        std::cout << "valid, black height " << t.black_height() << "\n";
        return kOk;
      }
      print_violations(vs, std::cout);
      return kInvalid;
    }

    if (*cmp) {
      StepComparison c = compare_steps(case_name);
      std::cout << "TA=" << c.ta << " SA=" << c.sa << "\n";
      return kOk;
    }

    if (*fuzz) {
      if (min_deletes > 0) fopt.min_deletes = min_deletes;
      FuzzReport r = fuzz_differential(fopt);
      if (fuzz_json) {
        std::cout << fuzz_report_json(r).dump(2) << "\n";
      } else {
        std::cout << format_fuzz_report(r);
      }
      return r.ok() ? kOk : kInvalid;
    }

    if (*gold) {
      bool all = true;
      for (const GoldenCase& c : golden_catalog()) {
        if (!golden_name.empty() && c.name != golden_name) continue;
        GoldenReport r = run_golden(c);
        all = all && r.passed();
        std::cout << format_report(r);
      }
      if (!golden_name.empty() && !find_golden(golden_name)) {
        std::cerr << "unknown golden case " << golden_name << "\n";
        return kBadInput;
      }
      return all ? kOk : kInvalid;
    }

    if (*serve) {
      if (const char* env = std::getenv("RBSA_PORT")) {
        try {
          port = std::stoi(env);
        } catch (const std::exception&) {
          std::cerr << "RBSA_PORT is not a port number\n";
          return kBadInput;
        }
      }
      httplib::Server server;
      SessionStore store;
      register_routes(server, store);
      if (!server.bind_to_port(host, port)) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return kEnvironment;
      }
      std::cerr << "listening on " << host << ":" << port << "\n";
      server.listen_after_bind();
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_for(e.code());
  }
  return kOk;
}
