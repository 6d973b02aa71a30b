#include "rbdsat/detector.hpp"

#include <algorithm>

namespace rbdsat {

std::string to_string(TooDeepReason r) {
  switch (r) {
    case TooDeepReason::ClauseWidth:
      return "clause-width";
    case TooDeepReason::Obstruction:
      return "obstruction";
    case TooDeepReason::Diameter:
      return "diameter";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Sat:
      return "SAT";
    case Verdict::Unsat:
      return "UNSAT";
    case Verdict::TooDeep:
      return "TooDeep";
  }
  return "?";
}

namespace {

struct Outcome {
  DetectionOutcome::Kind kind;
  ObstructionPtr obstruction;
  NodeId backdoor = 0;
  TooDeep too_deep;

  static Outcome obstructed(ObstructionPtr t) { return {DetectionOutcome::Kind::Obstruction, std::move(t), 0, {}}; }
  static Outcome backdoor_at(NodeId n) { return {DetectionOutcome::Kind::Backdoor, nullptr, n, {}}; }
  static Outcome too_deep_because(TooDeepReason r, std::string detail) {
    return {DetectionOutcome::Kind::TooDeep, nullptr, 0, {r, std::move(detail), std::nullopt}};
  }
};

std::string violations_text(const std::vector<ObstructionViolation>& v) {
  std::string s;
  for (const auto& x : v) s += "\n  " + x.path + ": " + x.message;
  return s;
}

class Detector {
 public:
  Detector(int k, const DetectorOptions& options, ResourceGuard& guard)
      : k_(k), options_(options), guard_(guard) {}

  SrbTree& arena() { return arena_; }

  Outcome run(const Formula& g, int i, int d) {
    guard_.tick();

    if (i == d) {
      for (const auto& c : g.clauses())
        if (static_cast<int>(c.width()) == d) return emit(ObstructionTree::base(c), g, i);
      return leaf(g);
    }

    auto comps = components(g);
    if (comps.empty()) return leaf(g);

    if (comps.size() > 1) {
      std::vector<NodeId> children;
      for (const auto& c : comps) {
        auto r = run(c, i, d);
        if (r.kind == DetectionOutcome::Kind::Obstruction) return lift(std::move(r), c, g, i, d);
        if (r.kind == DetectionOutcome::Kind::TooDeep) return r;
        children.push_back(r.backdoor);
      }
      auto ids = g.clause_ids();
      return Outcome::backdoor_at(arena_.add_split(ids, children));
    }

    auto first = run(g, i - 1, d);
    if (first.kind != DetectionOutcome::Kind::Obstruction) return first;
    const auto t1 = first.obstruction;
    const auto nd = destroy_neighborhood(*t1, g);
    if (nd.size() >= 63) throw ResourceExhausted("destroy neighborhood too large to enumerate");

    // Assignment index: bit (n-1-j) set means nd[j] is negative, so the first
    // variable is the most significant and + precedes -.
    const std::uint64_t total = std::uint64_t{1} << nd.size();
    std::vector<NodeId> backdoors;
    backdoors.reserve(total);
    for (std::uint64_t code = 0; code < total; ++code) {
      Assignment tau;
      for (std::size_t j = 0; j < nd.size(); ++j)
        tau.set(nd[j], (code >> (nd.size() - 1 - j) & 1) ? Polarity::Negative : Polarity::Positive);
      Formula h = apply(g, tau);
      auto r = run(h, i - 1, d);
      if (r.kind == DetectionOutcome::Kind::TooDeep) return r;
      if (r.kind == DetectionOutcome::Kind::Obstruction) {
        auto t2 = r.obstruction;
        check_lift(*t2, h, g, i - 1, d);
        IncidenceGraph graph(g);
        const auto& v1 = t1->elements();
        const auto& v2 = t2->elements();
        auto path = shortest_path(graph, v1, v2);
        if (!path) throw std::logic_error("joined obstruction trees lie in different components");
        const auto length = static_cast<std::int64_t>(path->size()) - 1;
        if (length > lambda(k_))
          return Outcome::too_deep_because(TooDeepReason::Diameter,
                                           "shortest path between obstruction trees has length " +
                                               std::to_string(length) + " > lambda_k = " +
                                               std::to_string(lambda(k_)));
        auto joined = ObstructionTree::join(t1, std::move(*path), t2);
        auto problems = validate_obstruction(*joined, g, i, d, k_);
        if (!problems.empty()) throw std::logic_error("built an invalid obstruction tree:" + violations_text(problems));
        return emit(std::move(joined), g, i);
      }
      backdoors.push_back(r.backdoor);
    }
    return Outcome::backdoor_at(branch_chain(nd, backdoors, 0, 0));
  }

 private:
  Outcome leaf(const Formula& g) {
    auto ids = g.clause_ids();
    return Outcome::backdoor_at(arena_.add_leaf(ids));
  }

  Outcome emit(ObstructionPtr t, const Formula& host, int level) {
    if (options_.on_obstruction) options_.on_obstruction(*t, host, level);
    return Outcome::obstructed(std::move(t));
  }

  void check_lift(const ObstructionTree& t, const Formula& from, const Formula& to, int i, int d) const {
    auto problems = validate_obstruction(t, to, i, d, k_);
    if (!problems.empty()) throw std::logic_error("obstruction tree failed to lift:" + violations_text(problems));
    if (destroy_neighborhood(t, from) != destroy_neighborhood(t, to))
      throw std::logic_error("lifting changed the destroy neighborhood");
  }

  Outcome lift(Outcome r, const Formula& from, const Formula& to, int i, int d) {
    check_lift(*r.obstruction, from, to, i, d);
    return r;
  }

  NodeId branch_chain(const std::vector<Var>& vars, const std::vector<NodeId>& leaves, std::size_t j,
                      std::uint64_t prefix) {
    if (j == vars.size()) return leaves[prefix];
    NodeId pos = branch_chain(vars, leaves, j + 1, prefix << 1);
    NodeId neg = branch_chain(vars, leaves, j + 1, (prefix << 1) | 1);
    return arena_.add_branch(vars[j], pos, neg);
  }

  int k_;
  const DetectorOptions& options_;
  ResourceGuard& guard_;
  SrbTree arena_;
};

void check_parameters(const Formula& g, int i, int d, int k) {
  if (k < 0) throw DetectorError("k must be >= 0");
  if (d < 1) throw DetectorError("d must be >= 1");
  if (d > i || i > k + 1)
    throw DetectorError("parameters must satisfy d <= i <= k+1 (got i=" + std::to_string(i) +
                        ", d=" + std::to_string(d) + ", k=" + std::to_string(k) + ")");
  if (!g.in_class(d))
    throw DetectorError("formula has a clause of width " + std::to_string(g.max_clause_width()) +
                        " > d = " + std::to_string(d));
}

NodeId import_subtree(SrbTree& dst, const SrbTree& src, NodeId n) {
  switch (src.kind(n)) {
    case SrbKind::Leaf:
      return dst.add_leaf(src.clauses(n));
    case SrbKind::Split: {
      std::vector<NodeId> kids;
      for (NodeId c : src.children(n)) kids.push_back(import_subtree(dst, src, c));
      return dst.add_split(src.clauses(n), kids);
    }
    case SrbKind::Branch: {
      NodeId p = import_subtree(dst, src, src.positive(n));
      NodeId q = import_subtree(dst, src, src.negative(n));
      return dst.add_branch(src.var(n), p, q);
    }
  }
  throw std::logic_error("unknown node kind");
}

struct LeafSite {
  NodeId node;
  Formula label;
  Assignment tau;
};

void collect_leaves(const SrbTree& t, NodeId n, const Formula& label, const Assignment& tau,
                    std::vector<LeafSite>& out) {
  switch (t.kind(n)) {
    case SrbKind::Leaf:
      out.push_back({n, label, tau});
      return;
    case SrbKind::Split: {
      auto comps = components(label);
      auto kids = t.children(n);
      for (std::size_t i = 0; i < kids.size(); ++i) collect_leaves(t, kids[i], comps[i], tau, out);
      return;
    }
    case SrbKind::Branch: {
      const Var x = t.var(n);
      auto extended = [&](Polarity p) {
        Assignment a = tau;
        if (!a.contains(x)) a.set(x, p);
        return a;
      };
      collect_leaves(t, t.positive(n), apply(label, Literal{x, Polarity::Positive}), extended(Polarity::Positive), out);
      collect_leaves(t, t.negative(n), apply(label, Literal{x, Polarity::Negative}), extended(Polarity::Negative), out);
      return;
    }
  }
}

SrbResult srb_rec(const Formula& g, int k, const Assignment& tau, const DetectorOptions& options,
                  ResourceGuard& guard) {
  SrbResult result;
  const int d = g.max_clause_width();
  if (d > k) {
    result.too_deep = {TooDeepReason::ClauseWidth,
                       "clause of width " + std::to_string(d) + " exceeds k = " + std::to_string(k), std::nullopt};
    return result;
  }
  if (d == 0) {
    SrbTree t(0);
    auto ids = g.clause_ids();
    t.set_root(t.add_leaf(ids));
    result.tree = std::move(t);
    return result;
  }

  Detector det(k, options, guard);
  auto r = det.run(g, k + 1, d);
  if (r.kind == DetectionOutcome::Kind::TooDeep) {
    result.too_deep = std::move(r.too_deep);
    return result;
  }
  if (r.kind == DetectionOutcome::Kind::Obstruction) {
    result.too_deep = {TooDeepReason::Obstruction,
                       "found a (" + std::to_string(k + 1) + "," + std::to_string(d) + "," + std::to_string(k) +
                           ")-obstruction tree",
                       ObstructionCertificate{r.obstruction, tau, k}};
    return result;
  }

  SrbTree& arena = det.arena();
  arena.set_root(r.backdoor);
  std::vector<LeafSite> leaves;
  collect_leaves(arena, r.backdoor, g, tau, leaves);
  for (const auto& site : leaves) {
    auto sub = srb_rec(site.label, k, site.tau, options, guard);
    if (!sub.tree) return sub;
    NodeId copied = import_subtree(arena, *sub.tree, sub.tree->root());
    arena.replace(site.node, copied);
  }
  arena.set_target_class(0);
  result.tree = arena.compacted();
  return result;
}

}  // namespace

DetectionOutcome find_obstruction_or_backdoor(const Formula& g, int i, int d, int k, const DetectorOptions& options) {
  check_parameters(g, i, d, k);
  ResourceGuard guard(options.limits);
  Detector det(k, options, guard);
  auto r = det.run(g, i, d);
  DetectionOutcome out;
  out.kind = r.kind;
  out.obstruction = r.obstruction;
  out.too_deep = std::move(r.too_deep);
  if (r.kind == DetectionOutcome::Kind::Backdoor) {
    det.arena().set_root(r.backdoor);
    det.arena().set_target_class(d - 1);
    out.backdoor = det.arena().compacted();
  }
  return out;
}

SrbResult find_srb(const Formula& g, int k, const DetectorOptions& options) {
  if (k < 0) throw DetectorError("k must be >= 0");
  ResourceGuard guard(options.limits);
  auto result = srb_rec(g, k, Assignment{}, options, guard);
  result.detector_calls = guard.nodes();
  return result;
}

PermissiveResult permissive_solve(const Formula& phi, int k, const DetectorOptions& options) {
  PermissiveResult out;
  out.detection = find_srb(phi, k, options);
  if (!out.detection.tree) return out;
  out.verdict = solve_sat(*out.detection.tree, phi) ? Verdict::Sat : Verdict::Unsat;
  return out;
}

}  // namespace rbdsat
