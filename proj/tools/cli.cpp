#include "cli.hpp"

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rbdsat/detector.hpp"
#include "rbdsat/dimacs.hpp"
#include "rbdsat/generators.hpp"
#include "rbdsat/obstruction.hpp"
#include "rbdsat/oracle.hpp"
#include "rbdsat/srb_tree.hpp"
#include "rbdsat/wrb.hpp"

namespace rbdsat::cli {

namespace {

using nlohmann::json;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  bool json_output = false;
  bool sanitize = false;
  double max_seconds = 3600.0;
  std::uint64_t max_nodes = 10'000'000'000ULL;
  unsigned threads = 0;  // 0: from the environment

  ResourceLimits limits() const { return {max_seconds, max_nodes}; }

  unsigned effective_threads() const {
    unsigned cap = 0;
    if (const char* env = std::getenv("RBDSAT_THREADS")) {
      char* end = nullptr;
      unsigned long v = std::strtoul(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) cap = static_cast<unsigned>(v);
    }
    unsigned n = threads ? threads : (cap ? cap : 1);
    return cap ? std::min(n, cap) : n;
  }
};

std::string read_all(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

struct Input {
  std::string path;
  std::string digest;
  Formula formula;
};

Input load_formula(const std::string& path, const Common& c, std::ostream& err) {
  Input in;
  in.path = path;
  auto text = read_all(path);
  in.digest = fnv1a(text);
  try {
    auto parsed = parse_dimacs(text, DimacsOptions{c.sanitize});
    for (const auto& w : parsed.warnings) err << "c warning: " << w << "\n";
    in.formula = std::move(parsed.formula);
  } catch (const DimacsError& e) {
    throw InputError(path + ":" + e.what());
  }
  return in;
}

json load_json(const std::string& path) {
  auto text = read_all(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

class Report {
 public:
  Report(std::string command, const Input* input) : start_(std::chrono::steady_clock::now()) {
    j_["schema"] = "rbdsat.report/1";
    j_["command"] = std::move(command);
    if (input) j_["input"] = {{"path", input->path}, {"digest", input->digest}};
    j_["parameters"] = json::object();
    j_["artifact"] = nullptr;
  }

  json& operator[](const char* key) { return j_[key]; }

  std::string finish() {
    j_["wall_time_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    return dump(j_);
  }

 private:
  json j_;
  std::chrono::steady_clock::time_point start_;
};

json too_deep_json(const TooDeep& t) {
  json j{{"reason", to_string(t.reason)}, {"detail", t.detail}};
  if (t.certificate) j["certificate"] = obstruction_to_json(*t.certificate);
  return j;
}

json literals_json(const Assignment& a) {
  auto arr = json::array();
  for (const auto& l : a.literals()) arr.push_back(l.to_dimacs());
  return arr;
}

std::string depth_json_value(const DepthResult& r, json& value) {
  switch (r.kind) {
    case DepthResult::Kind::Finite:
      value = r.value;
      return std::to_string(r.value);
    case DepthResult::Kind::Infinite:
      value = "infinite";
      return "infinite";
    case DepthResult::Kind::ExceedsCap:
      value = "exceeds-cap";
      return "> " + std::to_string(r.value);
  }
  return "?";
}

// ---------------------------------------------------------------------------

int cmd_detect(const std::string& file, int k, const std::string& out_path, const Common& c, std::ostream& out,
               std::ostream& err) {
  auto in = load_formula(file, c, err);
  Report report("detect", &in);
  report["parameters"] = {{"k", k}};
  DetectorOptions opts;
  opts.limits = c.limits();
  auto r = find_srb(in.formula, k, opts);
  report["detector_calls"] = r.detector_calls;
  int code;
  std::string text;
  if (r.tree) {
    const auto stats = leaf_stats(*r.tree, in.formula);
    report["outcome"] = "backdoor";
    report["depth"] = depth(*r.tree);
    report["node_count"] = r.tree->node_count();
    report["leaf_count"] = stats.leaf_count;
    report["leaf_size_sum"] = stats.leaf_size_sum;
    if (!out_path.empty()) {
      write_text(out_path, dump(srb_to_json(*r.tree)));
      report["artifact"] = out_path;
    }
    text = out_path.empty() ? dump(srb_to_json(*r.tree))
                            : "backdoor depth " + std::to_string(depth(*r.tree)) + ", " +
                                  std::to_string(r.tree->node_count()) + " nodes\n";
    code = kOk;
  } else {
    report["outcome"] = "too-deep";
    report["too_deep"] = too_deep_json(r.too_deep);
    if (!out_path.empty() && r.too_deep.certificate) {
      write_text(out_path, dump(obstruction_to_json(*r.too_deep.certificate)));
      report["artifact"] = out_path;
    }
    text = "too-deep (" + to_string(r.too_deep.reason) + "): " + r.too_deep.detail + "\n";
    code = kTooDeep;
  }
  out << (c.json_output ? report.finish() : text);
  return code;
}

int cmd_solve(const std::string& file, int k, const Common& c, std::ostream& out, std::ostream& err) {
  auto in = load_formula(file, c, err);
  Report report("solve", &in);
  report["parameters"] = {{"k", k}, {"threads", c.effective_threads()}};
  DetectorOptions opts;
  opts.limits = c.limits();
  auto d = find_srb(in.formula, k, opts);
  report["detector_calls"] = d.detector_calls;
  int code;
  std::string text;
  if (!d.tree) {
    report["outcome"] = "TooDeep";
    report["too_deep"] = too_deep_json(d.too_deep);
    text = "s TOO-DEEP\n";
    code = kNotDecided;
  } else {
    bool sat = solve_sat(*d.tree, in.formula, empty_class_leaf_sat, EvalOptions{c.effective_threads()});
    report["outcome"] = sat ? "SAT" : "UNSAT";
    report["depth"] = depth(*d.tree);
    text = sat ? "s SATISFIABLE\n" : "s UNSATISFIABLE\n";
    code = sat ? kSat : kUnsat;
  }
  out << (c.json_output ? report.finish() : text);
  return code;
}

int cmd_count(const std::string& file, int k, const Common& c, std::ostream& out, std::ostream& err) {
  auto in = load_formula(file, c, err);
  Report report("count", &in);
  report["parameters"] = {{"k", k}, {"threads", c.effective_threads()}};
  DetectorOptions opts;
  opts.limits = c.limits();
  auto d = find_srb(in.formula, k, opts);
  report["detector_calls"] = d.detector_calls;
  int code;
  std::string text;
  if (!d.tree) {
    report["outcome"] = "TooDeep";
    report["too_deep"] = too_deep_json(d.too_deep);
    text = "s TOO-DEEP\n";
    code = kNotDecided;
  } else {
    Count n = count_models(*d.tree, in.formula, empty_class_leaf_count, EvalOptions{c.effective_threads()});
    report["outcome"] = n > 0 ? "SAT" : "UNSAT";
    report["count"] = n.str();
    report["depth"] = depth(*d.tree);
    text = n.str() + "\n";
    code = n > 0 ? kSat : kUnsat;
  }
  out << (c.json_output ? report.finish() : text);
  return code;
}

int cmd_oracle(const std::string& file, const std::string& measure, int cap, const Common& c, std::ostream& out,
               std::ostream& err) {
  auto in = load_formula(file, c, err);
  Report report("oracle", &in);
  report["parameters"] = {{"measure", measure}, {"cap", cap}};
  OracleOptions opts;
  opts.limits = c.limits();
  json value;
  std::string text;
  if (measure == "sat") {
    bool sat = truth_table_sat(in.formula, opts);
    value = sat ? "SAT" : "UNSAT";
    text = sat ? "SAT" : "UNSAT";
  } else if (measure == "count") {
    auto n = truth_table_count(in.formula, opts);
    value = n.str();
    text = n.str();
  } else {
    ExactOracle oracle(opts);
    auto r = measure == "srbd" ? oracle.srbd(in.formula, cap) : oracle.wrbd(in.formula, cap);
    text = depth_json_value(r, value);
    report["oracle_nodes"] = oracle.nodes();
  }
  report["outcome"] = {{"measure", measure}, {"value", value}, {"cap", cap}};
  out << (c.json_output ? report.finish() : text + "\n");
  return kOk;
}

int cmd_wrb(const std::string& file, int k, bool no_memo, const Common& c, std::ostream& out, std::ostream& err) {
  auto in = load_formula(file, c, err);
  Report report("wrb", &in);
  report["parameters"] = {{"k", k}, {"memoize", !no_memo}};
  WrbOptions opts;
  opts.limits = c.limits();
  opts.memoize = !no_memo;
  auto r = wrb_solve(in.formula, k, opts);
  report["search_nodes"] = r.nodes;
  std::string text;
  if (r.satisfiable()) {
    report["outcome"] = "Satisfiable";
    report["witness"] = literals_json(r.witness);
    text = "s SATISFIABLE\nv";
    const auto full = complete_witness(in.formula, r.witness);
    for (const auto& l : full.literals()) text += " " + std::to_string(l.to_dimacs());
    text += " 0\n";
  } else {
    report["outcome"] = "NotWithinDepth";
    text = "s NOT-WITHIN-DEPTH\n";
  }
  out << (c.json_output ? report.finish() : text);
  return r.satisfiable() ? kSat : kNotDecided;
}

int cmd_gen(const std::string& family, int size, int vars, int clauses, int width, std::uint64_t seed,
            int universe, const std::vector<std::string>& sets, int cover_k, const std::string& out_path,
            const std::string& sidecar_path, const Common& c, std::ostream& out) {
  Formula f;
  json sidecar;
  json params;
  if (family == "grid") {
    auto g = gen_grid_family(size);
    f = std::move(g.formula);
    sidecar = grid_sidecar(g.roles);
    params = {{"size", size}};
  } else if (family == "setcover") {
    SetCoverInstance inst{universe, {}, cover_k};
    for (const auto& s : sets) {
      std::vector<int> elems;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
          elems.push_back(std::stoi(item));
        } catch (const std::exception&) {
          throw InputError("bad set element '" + item + "'");
        }
      }
      inst.sets.push_back(std::move(elems));
    }
    auto red = gen_setcover_reduction(inst);
    f = red.formula;
    sidecar = setcover_sidecar(inst, red);
    params = {{"universe", universe}, {"sets", inst.sets}, {"k", cover_k}};
  } else if (family == "random") {
    f = gen_random(vars, clauses, width, seed);
    sidecar = {{"schema", "rbdsat.roles/1"}, {"family", "random"}};
    params = {{"vars", vars}, {"clauses", clauses}, {"width", width}, {"seed", seed}};
  } else {
    throw InputError("unknown family '" + family + "'");
  }
  sidecar["parameters"] = params;
  auto dimacs = serialize_dimacs(f) + "\n";
  if (!sidecar_path.empty()) write_text(sidecar_path, dump(sidecar));
  if (out_path.empty()) {
    out << dimacs;
    return kOk;
  }
  write_text(out_path, dimacs);
  if (c.json_output) {
    Report report("gen", nullptr);
    report["parameters"] = params;
    report["parameters"]["family"] = family;
    report["outcome"] = "generated";
    report["artifact"] = out_path;
    report["digest"] = fnv1a(dimacs);
    out << report.finish();
  }
  return kOk;
}

int cmd_validate(const std::string& file, const std::string& artifact, bool strict, const Common& c,
                 std::ostream& out, std::ostream& err) {
  auto in = load_formula(file, c, err);
  auto doc = load_json(artifact);
  Report report("validate", &in);
  report["parameters"] = {{"artifact", artifact}, {"strict", strict}};
  auto violations = json::array();
  const auto schema = doc.is_object() ? doc.value("schema", "") : std::string();
  try {
    if (schema == "rbdsat.srb/1") {
      auto t = srb_from_json(doc);
      for (const auto& v : validate(t, in.formula, strict ? ValidationMode::Strict : ValidationMode::Relaxed))
        violations.push_back({{"path", v.path}, {"message", v.message}});
      report["kind"] = "srb";
      report["depth"] = depth(t);
    } else if (schema == "rbdsat.obstruction/1") {
      auto cert = obstruction_from_json(doc);
      auto host = apply(in.formula, cert.host_assignment);
      for (const auto& v : validate_obstruction(*cert.tree, host, cert.tree->level(), cert.tree->degree(), cert.k))
        violations.push_back({{"path", v.path}, {"message", v.message}});
      report["kind"] = "obstruction";
      report["level"] = cert.tree->level();
    } else {
      throw InputError(artifact + ": unknown artifact schema '" + schema + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(artifact + ": " + e.what());
  }
  report["outcome"] = violations.empty() ? "valid" : "invalid";
  report["violations"] = violations;
  if (c.json_output) {
    out << report.finish();
  } else {
    out << (violations.empty() ? "valid\n" : "invalid\n");
    for (const auto& v : violations)
      out << "  " << v["path"].get<std::string>() << ": " << v["message"].get<std::string>() << "\n";
  }
  return violations.empty() ? kOk : kInvalid;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recursive backdoor detection, solving and counting for CNF formulas", "rbdsat"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&c](CLI::App* sub) {
    sub->add_flag("--json", c.json_output, "Print a JSON run report");
    sub->add_flag("--sanitize", c.sanitize, "Drop tautological clauses instead of rejecting them");
    sub->add_option("--max-seconds", c.max_seconds, "Wall-clock limit")->check(CLI::PositiveNumber);
    sub->add_option("--max-nodes", c.max_nodes, "Search node limit");
  };

  std::string file, artifact, out_path, sidecar_path, measure = "srbd", family;
  int k = 0, cap = 10, size = 3, vars = 8, clauses = 10, width = 3, universe = 0, cover_k = 0;
  std::uint64_t seed = 0;
  bool strict = false, no_memo = false;
  std::vector<std::string> sets;

  auto* detect = app.add_subcommand("detect", "Find a strong recursive backdoor of depth bound derived from k");
  detect->add_option("file", file, "DIMACS file or -")->required();
  detect->add_option("-k,--depth", k, "Depth parameter")->required()->check(CLI::NonNegativeNumber);
  detect->add_option("--out", out_path, "Write the backdoor or obstruction JSON here");
  add_common(detect);

  auto* solve = app.add_subcommand("solve", "Decide satisfiability or report TooDeep");
  solve->add_option("file", file, "DIMACS file or -")->required();
  solve->add_option("-k,--depth", k, "Depth parameter")->required()->check(CLI::NonNegativeNumber);
  solve->add_option("--threads", c.threads, "Worker threads");
  add_common(solve);

  auto* count = app.add_subcommand("count", "Count models or report TooDeep");
  count->add_option("file", file, "DIMACS file or -")->required();
  count->add_option("-k,--depth", k, "Depth parameter")->required()->check(CLI::NonNegativeNumber);
  count->add_option("--threads", c.threads, "Worker threads");
  add_common(count);

  auto* oracle = app.add_subcommand("oracle", "Exact brute-force measures");
  oracle->add_option("file", file, "DIMACS file or -")->required();
  oracle->add_option("--measure", measure, "srbd, wrbd, sat or count")
      ->check(CLI::IsMember({"srbd", "wrbd", "sat", "count"}));
  oracle->add_option("--cap", cap, "Largest depth to try")->check(CLI::NonNegativeNumber);
  add_common(oracle);

  auto* wrb = app.add_subcommand("wrb", "Weak recursive backdoor search");
  wrb->add_option("file", file, "DIMACS file or -")->required();
  wrb->add_option("-k,--depth", k, "Depth budget")->required()->check(CLI::NonNegativeNumber);
  wrb->add_flag("--no-memo", no_memo, "Disable memoization of failed subproblems");
  add_common(wrb);

  auto* gen = app.add_subcommand("gen", "Generate instances");
  gen->add_option("family", family, "grid, setcover or random")
      ->required()
      ->check(CLI::IsMember({"grid", "setcover", "random"}));
  gen->add_option("--size", size, "Grid side length")->check(CLI::PositiveNumber);
  gen->add_option("--vars", vars, "Random: variables")->check(CLI::NonNegativeNumber);
  gen->add_option("--clauses", clauses, "Random: clauses")->check(CLI::NonNegativeNumber);
  gen->add_option("--width", width, "Random: maximal clause width")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Random: seed");
  gen->add_option("--universe", universe, "Set cover: universe size")->check(CLI::NonNegativeNumber);
  gen->add_option("--set", sets, "Set cover: comma-separated elements of one set (repeatable)");
  gen->add_option("--cover-k", cover_k, "Set cover: budget k")->check(CLI::NonNegativeNumber);
  gen->add_option("--out", out_path, "Write DIMACS here instead of stdout");
  gen->add_option("--sidecar", sidecar_path, "Write the vertex-role JSON here");
  add_common(gen);

  auto* val = app.add_subcommand("validate", "Check a backdoor or obstruction JSON against a formula");
  val->add_option("file", file, "DIMACS file or -")->required();
  val->add_option("artifact", artifact, "JSON artifact")->required();
  val->add_flag("--strict", strict, "Reject composed variable chains");
  add_common(val);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*detect) return cmd_detect(file, k, out_path, c, out, err);
    if (*solve) return cmd_solve(file, k, c, out, err);
    if (*count) return cmd_count(file, k, c, out, err);
    if (*oracle) return cmd_oracle(file, measure, cap, c, out, err);
    if (*wrb) return cmd_wrb(file, k, no_memo, c, out, err);
    if (*gen)
      return cmd_gen(family, size, vars, clauses, width, seed, universe, sets, cover_k, out_path, sidecar_path, c,
                     out);
    if (*val) return cmd_validate(file, artifact, strict, c, out, err);
  } catch (const ResourceExhausted& e) {
    err << "error: resource limit: " << e.what() << "\n";
    return kResources;
  } catch (const OracleRefused& e) {
    err << "error: resource limit: " << e.what() << "\n";
    return kResources;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace rbdsat::cli
