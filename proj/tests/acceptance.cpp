// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [corpus|grid|setcover|determinism]...
//
// With no arguments every group runs. Exit status 0 iff every printed line is PASS.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "rbdsat/detector.hpp"
#include "rbdsat/dimacs.hpp"
#include "rbdsat/generators.hpp"
#include "rbdsat/obstruction.hpp"
#include "rbdsat/oracle.hpp"
#include "rbdsat/srb_tree.hpp"
#include "rbdsat/wrb.hpp"

using namespace rbdsat;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

bool all_passed = true;

void report(int id, bool pass, const std::string& name, const std::string& detail) {
  all_passed &= pass;
  std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("rbdsat-acceptance-" + tag + "-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---------------------------------------------------------------------------
// Criteria 1-7

struct CorpusTally {
  std::uint64_t formulas = 0;
  std::uint64_t too_deep_at_exact = 0;  // 1
  std::uint64_t verdicts = 0, verdict_mismatch = 0, count_mismatch = 0, undecided = 0;  // 2
  std::uint64_t trees = 0, invalid_trees = 0, over_depth = 0;  // 3
  std::uint64_t leaf_violations = 0;  // 4
  std::uint64_t width_checked = 0, width_violations = 0;  // 5
  std::uint64_t diameter_checked = 0, diameter_violations = 0;  // 6
  std::uint64_t obstructions = 0, obstructions_checked = 0, obstruction_violations = 0, obstructions_skipped = 0;  // 7
  std::string first_failure;

  void note(const std::string& what, const Formula& f) {
    if (first_failure.empty()) first_failure = what + " on " + to_string(f);
  }
};

void check_tree(const SrbTree& t, const Formula& f, int k, CorpusTally& tally) {
  ++tally.trees;
  if (!validate(t, f).empty()) {
    ++tally.invalid_trees;
    tally.note("invalid tree", f);
  }
  const auto d = depth(t);
  if (d > depth_bound(k)) {
    ++tally.over_depth;
    tally.note("depth above bound", f);
  }
  const auto s = leaf_stats(t, f);
  if (d < 63) {
    const auto bound = (std::uint64_t{1} << d) * leaf_bound_size(f);
    if (s.leaf_count > bound || s.leaf_size_sum > bound) {
      ++tally.leaf_violations;
      tally.note("leaf bound", f);
    }
  }
}

DetectorOptions observing(ExactOracle& oracle, CorpusTally& tally) {
  DetectorOptions opts;
  opts.on_obstruction = [&oracle, &tally](const ObstructionTree& t, const Formula& host, int level) {
    ++tally.obstructions;
    if (host.variables().size() > 12) {
      ++tally.obstructions_skipped;
      return;
    }
    ++tally.obstructions_checked;
    if (oracle.srbd_at_most(host, level - 1)) {
      ++tally.obstruction_violations;
      tally.note("obstruction below its level", host);
    }
    (void)t;
  };
  return opts;
}

void exact_depth_case(const Formula& f, bool laws, ExactOracle& oracle, CorpusTally& tally) {
  ++tally.formulas;
  const int cap = static_cast<int>(f.variables().size());
  const auto s = oracle.srbd(f, cap);
  if (!s.is_finite()) throw std::logic_error("srbd above variable count");
  const int k = s.value;

  auto r = permissive_solve(f, k, observing(oracle, tally));
  if (r.verdict == Verdict::TooDeep) {
    ++tally.too_deep_at_exact;
    tally.note("TooDeep at the exact depth", f);
  } else {
    check_tree(*r.detection.tree, f, k, tally);
  }

  if (!laws) return;
  ++tally.width_checked;
  if (f.max_clause_width() > k) {
    ++tally.width_violations;
    tally.note("clause wider than srbd", f);
  }
  ++tally.diameter_checked;
  int kmin = k;
  const auto w = oracle.wrbd(f, k);
  if (w.is_finite()) kmin = std::min(kmin, w.value);
  if (component_diameter(f) > 4 * (1 << kmin) - 4) {
    ++tally.diameter_violations;
    tally.note("diameter above 4*2^k-4", f);
  }
}

void verdict_case(const Formula& f, const TempDir& dir, int index, CorpusTally& tally) {
  const int k = 12;
  auto r = permissive_solve(f, k);
  if (r.verdict == Verdict::TooDeep) {
    ++tally.undecided;
    return;
  }
  ++tally.verdicts;
  if ((r.verdict == Verdict::Sat) != truth_table_sat(f)) {
    ++tally.verdict_mismatch;
    tally.note("verdict mismatch", f);
  }
  check_tree(*r.detection.tree, f, k, tally);

  const auto path = dir / ("f" + std::to_string(index) + ".cnf");
  std::ofstream(path) << serialize_dimacs(f) << "\n";
  std::ostringstream out, err;
  rbdsat::cli::run({"count", path, "-k", std::to_string(k)}, out, err);
  if (out.str() != truth_table_count(f).str() + "\n") {
    ++tally.count_mismatch;
    tally.note("count mismatch", f);
  }
}

void corpus_group() {
  ExactOracle oracle;
  CorpusTally tally;

  const auto t1 = Clock::now();
  enumerate_small(4, 4, 3, [&](const Formula& f) {
    exact_depth_case(f, true, oracle, tally);
    if (tally.formulas % 65536 == 0) oracle.clear();
    return true;
  });
  const auto enumerated = tally.formulas;
  for (std::uint64_t seed = 0; seed < 200; ++seed) exact_depth_case(gen_random(8, 10, 3, seed), false, oracle, tally);
  const double c1_time = seconds_since(t1);

  const auto t2 = Clock::now();
  const auto trees_before = tally.trees;
  {
    TempDir dir("verdict");
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 500; ++i) {
      const int n = std::uniform_int_distribution<int>(3, 12)(rng);
      const int m = std::uniform_int_distribution<int>(1, 15)(rng);
      verdict_case(gen_random(n, m, std::min(3, n), rng()), dir, i, tally);
    }
  }
  const double c2_time = seconds_since(t2);

  report(1, tally.too_deep_at_exact == 0 && c1_time < 600, "TooDeep never returned at the exact depth",
         fmt("%llu enumerated + 200 random formulas, %llu TooDeep, %.1f s of 600 s budget",
             (unsigned long long)enumerated, (unsigned long long)tally.too_deep_at_exact, c1_time));
  report(2, tally.verdict_mismatch == 0 && tally.count_mismatch == 0, "verdicts and counts match the truth table",
         fmt("500 formulas at k=12: %llu decided, %llu TooDeep, %llu verdict and %llu count mismatches, %.1f s",
             (unsigned long long)tally.verdicts, (unsigned long long)tally.undecided,
             (unsigned long long)tally.verdict_mismatch, (unsigned long long)tally.count_mismatch, c2_time));
  report(3, tally.invalid_trees == 0 && tally.over_depth == 0, "backdoors validate and respect 3^k*4*2^k*k^2",
         fmt("%llu trees (%llu from criterion 2), %llu invalid, %llu too deep", (unsigned long long)tally.trees,
             (unsigned long long)(tally.trees - trees_before), (unsigned long long)tally.invalid_trees,
             (unsigned long long)tally.over_depth));
  report(4, tally.leaf_violations == 0, "leaf count and leaf size within 2^depth*|phi|",
         fmt("%llu trees, %llu violations", (unsigned long long)tally.trees,
             (unsigned long long)tally.leaf_violations));
  report(5, tally.width_violations == 0, "srbd <= d implies clause width <= d",
         fmt("%llu formulas, %llu counterexamples", (unsigned long long)tally.width_checked,
             (unsigned long long)tally.width_violations));
  report(6, tally.diameter_violations == 0, "depth <= k implies component diameter <= 4*2^k-4",
         fmt("%llu formulas, %llu counterexamples", (unsigned long long)tally.diameter_checked,
             (unsigned long long)tally.diameter_violations));
  report(7, tally.obstruction_violations == 0 && tally.obstructions_checked > 0,
         "obstruction hosts have srbd >= level",
         fmt("%llu obstructions, %llu checked, %llu skipped (>12 variables), %llu counterexamples",
             (unsigned long long)tally.obstructions, (unsigned long long)tally.obstructions_checked,
             (unsigned long long)tally.obstructions_skipped, (unsigned long long)tally.obstruction_violations));
  if (!tally.first_failure.empty()) std::printf("  first failure: %s\n", tally.first_failure.c_str());
}

// ---------------------------------------------------------------------------
// Criterion 8

void grid_group() {
  const auto t0 = Clock::now();
  const auto k0 = srbd_exact(gen_grid_family(2).formula, 10);
  const double oracle_time = seconds_since(t0);
  if (!k0.is_finite()) {
    report(8, false, "grid family decided at budget K0", "srbd of the second member exceeds the cap 10");
    return;
  }
  bool pass = true;
  std::string detail = fmt("K0 = %d (%.1f s)", k0.value, oracle_time);
  for (int j = 2; j <= 4; ++j) {
    const auto g = gen_grid_family(j).formula;
    DetectorOptions opts;
    opts.limits.max_seconds = 300;
    const auto t = Clock::now();
    std::string outcome;
    try {
      auto r = permissive_solve(g, k0.value, opts);
      outcome = to_string(r.verdict);
      if (r.verdict == Verdict::TooDeep) {
        pass = false;
        outcome += " [" + to_string(r.detection.too_deep.reason) + "]";
        if (const auto& cert = r.detection.too_deep.certificate) {
          const auto host = apply(g, cert->host_assignment);
          const bool valid =
              validate_obstruction(*cert->tree, host, cert->tree->level(), cert->tree->degree(), cert->k).empty();
          outcome += fmt(", level-%d certificate %s", cert->tree->level(), valid ? "valid" : "INVALID");
        }
      } else {
        outcome += fmt(" depth %d", depth(*r.detection.tree));
      }
    } catch (const ResourceExhausted&) {
      pass = false;
      outcome = "time limit";
    }
    detail += fmt("; G%d: %s in %.1f s", j, outcome.c_str(), seconds_since(t));
  }
  report(8, pass, "grid family decided at budget K0", detail);
}

// ---------------------------------------------------------------------------
// Criterion 9

void setcover_group() {
  ExactOracle oracle;
  std::uint64_t instances = 0, yes = 0, oracle_mismatch = 0, search_mismatch = 0;
  std::string first;
  const auto t0 = Clock::now();
  for_each_setcover_instance(4, 4, 2, [&](const SetCoverInstance& inst) {
    ++instances;
    const bool cover = has_set_cover(inst);
    yes += cover;
    const auto red = gen_setcover_reduction(inst);
    const auto w = oracle.wrbd(red.formula, red.budget);
    const bool within = w.is_finite() && w.value <= red.budget;
    const bool found = wrb_solve(red.formula, red.budget).satisfiable();
    if (within != cover) ++oracle_mismatch;
    if (found != cover) ++search_mismatch;
    if ((within != cover || found != cover) && first.empty()) first = to_string(red.formula);
  });
  const double elapsed = seconds_since(t0);
  report(9, oracle_mismatch == 0 && search_mismatch == 0 && elapsed < 600,
         "set cover exists iff the reduction has weak depth <= k+1",
         fmt("%llu instances (%llu yes), %llu oracle and %llu search mismatches, %.1f s of 600 s budget",
             (unsigned long long)instances, (unsigned long long)yes, (unsigned long long)oracle_mismatch,
             (unsigned long long)search_mismatch, elapsed));
  if (!first.empty()) std::printf("  first mismatch: %s\n", first.c_str());
}

// ---------------------------------------------------------------------------
// Criterion 10

struct Capture {
  int code;
  std::string out;
  std::string files;  // concatenated artifact bytes
};

std::string strip_timing(const std::string& text) {
  // Reports are single JSON documents; everything else is compared verbatim.
  try {
    auto j = nlohmann::json::parse(text);
    if (j.is_object()) j.erase("wall_time_ms");
    return j.dump(2);
  } catch (const nlohmann::json::parse_error&) {
    return text;
  }
}

Capture capture(const std::vector<std::string>& args, const std::vector<std::string>& artifacts) {
  for (const auto& a : artifacts) fs::remove(a);
  std::ostringstream out, err;
  Capture c{rbdsat::cli::run(args, out, err), strip_timing(out.str()), ""};
  for (const auto& a : artifacts) c.files += a + "\n" + slurp(a) + "\n";
  return c;
}

void determinism_group() {
  TempDir d("determinism");
  const auto grid = d / "grid.cnf", grid4 = d / "grid4.cnf", cover = d / "cover.cnf", rnd = d / "random.cnf", side = d / "side.json";
  const auto art = d / "artifact.json", cert = d / "cert.json";
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> runs = {
      {{"gen", "grid", "--size", "3", "--out", grid, "--sidecar", side, "--json"}, {grid, side}},
      {{"gen", "grid", "--size", "4", "--out", grid4}, {grid4}},
      {{"gen", "setcover", "--universe", "3", "--set", "1,2", "--set", "3", "--set", "2,3", "--cover-k", "2", "--out",
        cover, "--sidecar", side, "--json"},
       {cover, side}},
      {{"gen", "random", "--vars", "10", "--clauses", "14", "--seed", "5", "--out", rnd, "--sidecar", side, "--json"},
       {rnd, side}},
      {{"gen", "random", "--vars", "6", "--clauses", "8", "--seed", "11"}, {}},
      {{"detect", rnd, "-k", "4", "--out", art, "--json"}, {art}},
      {{"detect", grid, "-k", "4", "--json"}, {}},
      {{"detect", grid4, "-k", "4", "--out", cert, "--json"}, {cert}},
      {{"detect", rnd, "-k", "4"}, {}},
      {{"validate", rnd, art, "--json"}, {}},
      {{"validate", grid4, cert, "--json"}, {}},
      {{"solve", rnd, "-k", "4", "--json", "--threads", "1"}, {}},
      {{"solve", rnd, "-k", "4", "--json", "--threads", "2"}, {}},
      {{"count", rnd, "-k", "4", "--json", "--threads", "1"}, {}},
      {{"count", rnd, "-k", "4", "--json", "--threads", "2"}, {}},
      {{"count", cover, "-k", "6", "--json"}, {}},
      {{"oracle", cover, "--measure", "wrbd", "--json"}, {}},
      {{"oracle", rnd, "--measure", "count", "--json"}, {}},
      {{"wrb", cover, "-k", "3", "--json"}, {}},
      {{"wrb", rnd, "-k", "3", "--json", "--no-memo"}, {}},
  };
  std::uint64_t differing = 0;
  std::string first;
  for (const auto& [args, artifacts] : runs) {
    const auto a = capture(args, artifacts);
    const auto b = capture(args, artifacts);
    if (a.code != b.code || a.out != b.out || a.files != b.files) {
      ++differing;
      if (first.empty()) first = args[0] + " " + args[1];
    }
  }
  report(10, differing == 0, "repeated runs produce identical artifacts and reports",
         fmt("%zu command lines run twice, %llu differ%s", runs.size(), (unsigned long long)differing,
             first.empty() ? "" : (", first: " + first).c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> groups(argv + 1, argv + argc);
  auto want = [&](const char* g) { return groups.empty() || groups.count(g) > 0; };
  for (const auto& g : groups)
    if (g != "corpus" && g != "grid" && g != "setcover" && g != "determinism") {
      std::fprintf(stderr, "unknown group '%s'\n", g.c_str());
      return 2;
    }
  if (want("corpus")) corpus_group();
  if (want("grid")) grid_group();
  if (want("setcover")) setcover_group();
  if (want("determinism")) determinism_group();
  return all_passed ? 0 : 1;
}
