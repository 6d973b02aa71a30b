#include "rbdsat/srb_tree.hpp"

#include <algorithm>
#include <atomic>
#include <future>

namespace rbdsat {

// ---------------------------------------------------------------------------
// Arena

NodeId SrbTree::add_leaf(std::span<const ClauseId> clauses) {
  Node n{SrbKind::Leaf, 0, 0, 0, static_cast<std::uint32_t>(clause_pool_.size()),
         static_cast<std::uint32_t>(clauses.size())};
  clause_pool_.insert(clause_pool_.end(), clauses.begin(), clauses.end());
  nodes_.push_back(n);
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId SrbTree::add_split(std::span<const ClauseId> clauses, std::span<const NodeId> children) {
  Node n{SrbKind::Split,
         0,
         static_cast<std::uint32_t>(child_pool_.size()),
         static_cast<std::uint32_t>(children.size()),
         static_cast<std::uint32_t>(clause_pool_.size()),
         static_cast<std::uint32_t>(clauses.size())};
  for (NodeId c : children)
    if (c >= nodes_.size()) throw std::out_of_range("split child does not exist");
  child_pool_.insert(child_pool_.end(), children.begin(), children.end());
  clause_pool_.insert(clause_pool_.end(), clauses.begin(), clauses.end());
  nodes_.push_back(n);
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId SrbTree::add_branch(Var var, NodeId positive, NodeId negative) {
  if (positive >= nodes_.size() || negative >= nodes_.size())
    throw std::out_of_range("branch child does not exist");
  Node n{SrbKind::Branch, var, static_cast<std::uint32_t>(child_pool_.size()), 2, 0, 0};
  child_pool_.push_back(positive);
  child_pool_.push_back(negative);
  nodes_.push_back(n);
  return static_cast<NodeId>(nodes_.size() - 1);
}

void SrbTree::replace(NodeId target, NodeId source) { nodes_.at(target) = nodes_.at(source); }

void SrbTree::set_branch_var(NodeId n, Var v) {
  if (nodes_.at(n).kind != SrbKind::Branch) throw std::invalid_argument("not a branch node");
  nodes_[n].var = v;
}

void SrbTree::swap_branches(NodeId n) {
  const auto& node = nodes_.at(n);
  if (node.kind != SrbKind::Branch) throw std::invalid_argument("not a branch node");
  std::swap(child_pool_[node.child_begin], child_pool_[node.child_begin + 1]);
}

std::span<const NodeId> SrbTree::children(NodeId n) const {
  const auto& node = nodes_.at(n);
  return {child_pool_.data() + node.child_begin, node.child_count};
}

std::span<const ClauseId> SrbTree::clauses(NodeId n) const {
  const auto& node = nodes_.at(n);
  return {clause_pool_.data() + node.clause_begin, node.clause_count};
}

std::size_t SrbTree::node_count() const {
  if (nodes_.empty()) return 0;
  std::size_t count = 0;
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    ++count;
    for (NodeId c : children(n)) stack.push_back(c);
  }
  return count;
}

SrbTree SrbTree::compacted() const {
  SrbTree out(target_class_);
  if (nodes_.empty()) return out;
  // Children are added before parents, so rebuild post-order and keep the
  // root last.
  std::function<NodeId(NodeId)> copy = [&](NodeId n) -> NodeId {
    switch (kind(n)) {
      case SrbKind::Leaf:
        return out.add_leaf(clauses(n));
      case SrbKind::Split: {
        std::vector<NodeId> kids;
        for (NodeId c : children(n)) kids.push_back(copy(c));
        return out.add_split(clauses(n), kids);
      }
      case SrbKind::Branch: {
        NodeId p = copy(positive(n));
        NodeId q = copy(negative(n));
        return out.add_branch(var(n), p, q);
      }
    }
    throw std::logic_error("unknown node kind");
  };
  out.set_root(copy(root_));
  return out;
}

// ---------------------------------------------------------------------------
// Queries

int depth(const SrbTree& t) {
  if (t.empty()) return 0;
  std::function<int(NodeId)> rec = [&](NodeId n) -> int {
    int best = 0;
    for (NodeId c : t.children(n)) best = std::max(best, rec(c));
    return best + (t.kind(n) == SrbKind::Branch ? 1 : 0);
  };
  return rec(t.root());
}

namespace {

bool same_ids(std::span<const ClauseId> stored, const Formula& label) {
  std::vector<ClauseId> a(stored.begin(), stored.end());
  std::sort(a.begin(), a.end());
  return a == label.clause_ids();
}

std::string id_list(std::span<const ClauseId> ids) {
  std::string s = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(ids[i]);
  }
  return s + "]";
}

struct Validator {
  const SrbTree& t;
  const Formula& root_formula;
  ValidationMode mode;
  std::vector<Violation> out;

  void add(const std::string& path, std::string msg) { out.push_back({path, std::move(msg)}); }

  void visit(NodeId n, const Formula& label, const std::string& path) {
    switch (t.kind(n)) {
      case SrbKind::Leaf: {
        if (!same_ids(t.clauses(n), label))
          add(path, "leaf clause ids " + id_list(t.clauses(n)) + " differ from label " +
                        id_list(label.clause_ids()));
        if (!label.in_class(t.target_class()))
          add(path, "leaf not in C_" + std::to_string(t.target_class()) + " (clause width " +
                        std::to_string(label.max_clause_width()) + ")");
        return;
      }
      case SrbKind::Split: {
        if (!same_ids(t.clauses(n), label))
          add(path, "component node clause ids " + id_list(t.clauses(n)) + " differ from label " +
                        id_list(label.clause_ids()));
        auto comps = components(label);
        if (comps.size() < 2) add(path, "component node over a connected label");
        auto kids = t.children(n);
        if (kids.size() != comps.size()) {
          add(path, "component node has " + std::to_string(kids.size()) + " children, label has " +
                        std::to_string(comps.size()) + " components");
          return;
        }
        for (std::size_t i = 0; i < kids.size(); ++i)
          visit(kids[i], comps[i], path + "/child[" + std::to_string(i) + "]");
        return;
      }
      case SrbKind::Branch: {
        Var x = t.var(n);
        if (!root_formula.has_variable(x))
          add(path, "branch variable " + std::to_string(x) + " does not occur in the formula");
        if (mode == ValidationMode::Strict) {
          if (!label.has_variable(x))
            add(path, "branch variable " + std::to_string(x) + " does not occur in its label");
          if (component_count(label) != 1) add(path, "variable node over a disconnected label");
        }
        visit(t.positive(n), apply(label, Literal{x, Polarity::Positive}), path + "/pos");
        visit(t.negative(n), apply(label, Literal{x, Polarity::Negative}), path + "/neg");
        return;
      }
    }
  }
};

}  // namespace

std::vector<Violation> validate(const SrbTree& t, const Formula& phi, ValidationMode mode) {
  Validator v{t, phi, mode, {}};
  if (t.empty()) {
    v.add("root", "tree has no nodes");
    return v.out;
  }
  v.visit(t.root(), phi, "root");
  return v.out;
}

std::uint64_t leaf_bound_size(const Formula& phi) {
  return std::max<std::uint64_t>(1, phi.vertex_count());
}

LeafStats leaf_stats(const SrbTree& t, const Formula& phi) {
  LeafStats stats;
  if (t.empty()) return stats;
  std::function<void(NodeId, const Formula&)> rec = [&](NodeId n, const Formula& label) {
    switch (t.kind(n)) {
      case SrbKind::Leaf:
        ++stats.leaf_count;
        stats.leaf_size_sum += label.vertex_count();
        return;
      case SrbKind::Split: {
        auto comps = components(label);
        auto kids = t.children(n);
        for (std::size_t i = 0; i < kids.size() && i < comps.size(); ++i) rec(kids[i], comps[i]);
        return;
      }
      case SrbKind::Branch:
        rec(t.positive(n), apply(label, Literal{t.var(n), Polarity::Positive}));
        rec(t.negative(n), apply(label, Literal{t.var(n), Polarity::Negative}));
        return;
    }
  };
  rec(t.root(), phi);
  return stats;
}

InvalidTree::InvalidTree(std::vector<Violation> v)
    : std::invalid_argument("invalid recursive backdoor tree: " +
                            (v.empty() ? std::string("?") : v.front().path + ": " + v.front().message)),
      violations_(std::move(v)) {}

bool empty_class_leaf_sat(const Formula& leaf) { return !leaf.has_clauses(); }

Count empty_class_leaf_count(const Formula& leaf) {
  if (leaf.has_clauses()) return 0;
  return Count(1) << leaf.variable_count();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

template <class Value, class LeafFn, class BranchFn, class SplitFn>
struct Evaluator {
  const SrbTree& t;
  const LeafFn& leaf;
  const BranchFn& combine_branch;
  const SplitFn& combine_split;
  std::atomic<int> spare_workers;

  Value eval(NodeId n, const Formula& label) {
    switch (t.kind(n)) {
      case SrbKind::Leaf:
        return leaf(label);
      case SrbKind::Branch: {
        Var x = t.var(n);
        Formula pos = apply(label, Literal{x, Polarity::Positive});
        Formula neg = apply(label, Literal{x, Polarity::Negative});
        return combine_branch(label, x, pos, neg, [&](const Formula& f, bool positive_side) {
          return eval(positive_side ? t.positive(n) : t.negative(n), f);
        });
      }
      case SrbKind::Split: {
        auto comps = components(label);
        auto kids = t.children(n);
        std::vector<std::future<Value>> pending(kids.size());
        std::vector<Value> results(kids.size());
        for (std::size_t i = 0; i < kids.size(); ++i) {
          if (kids.size() > 1 && spare_workers.fetch_sub(1) > 0) {
            pending[i] = std::async(std::launch::async,
                                    [this, n = kids[i], &f = comps[i]] { return eval(n, f); });
          } else {
            spare_workers.fetch_add(1);
            results[i] = eval(kids[i], comps[i]);
          }
        }
        for (std::size_t i = 0; i < kids.size(); ++i)
          if (pending[i].valid()) {
            results[i] = pending[i].get();
            spare_workers.fetch_add(1);
          }
        return combine_split(results);
      }
    }
    throw std::logic_error("unknown node kind");
  }
};

void require_valid(const SrbTree& t, const Formula& phi, ValidationMode mode) {
  auto v = validate(t, phi, mode);
  if (!v.empty()) throw InvalidTree(std::move(v));
}

}  // namespace

bool solve_sat(const SrbTree& t, const Formula& phi, const LeafSolver& leaf, const EvalOptions& options) {
  require_valid(t, phi, options.mode);
  auto on_leaf = [&](const Formula& f) -> char { return leaf(f) ? 1 : 0; };
  auto on_branch = [](const Formula&, Var, const Formula& pos, const Formula& neg, auto&& child) -> char {
    return (child(pos, true) || child(neg, false)) ? 1 : 0;
  };
  auto on_split = [](const std::vector<char>& r) -> char {
    return std::all_of(r.begin(), r.end(), [](char c) { return c != 0; }) ? 1 : 0;
  };
  Evaluator<char, decltype(on_leaf), decltype(on_branch), decltype(on_split)> ev{
      t, on_leaf, on_branch, on_split, static_cast<int>(options.threads) - 1};
  return ev.eval(t.root(), phi) != 0;
}

Count count_models(const SrbTree& t, const Formula& phi, const LeafCounter& leaf,
                   const EvalOptions& options) {
  require_valid(t, phi, options.mode);
  auto on_branch = [](const Formula& label, Var x, const Formula& pos, const Formula& neg,
                      auto&& child) -> Count {
    if (!label.has_variable(x)) return child(pos, true);  // both children carry the same label
    // Variables of the label that vanish alongside x still range freely.
    const auto base = label.variable_count() - 1;
    Count total = child(pos, true) << (base - pos.variable_count());
    total += child(neg, false) << (base - neg.variable_count());
    return total;
  };
  auto on_split = [](const std::vector<Count>& r) -> Count {
    Count product = 1;
    for (const auto& c : r) product *= c;
    return product;
  };
  Evaluator<Count, LeafCounter, decltype(on_branch), decltype(on_split)> ev{
      t, leaf, on_branch, on_split, static_cast<int>(options.threads) - 1};
  return ev.eval(t.root(), phi);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json node_to_json(const SrbTree& t, NodeId n) {
  nlohmann::json j;
  switch (t.kind(n)) {
    case SrbKind::Leaf:
      j["kind"] = "leaf";
      j["clauses"] = std::vector<ClauseId>(t.clauses(n).begin(), t.clauses(n).end());
      break;
    case SrbKind::Split: {
      j["kind"] = "split";
      j["clauses"] = std::vector<ClauseId>(t.clauses(n).begin(), t.clauses(n).end());
      auto arr = nlohmann::json::array();
      for (NodeId c : t.children(n)) arr.push_back(node_to_json(t, c));
      j["children"] = std::move(arr);
      break;
    }
    case SrbKind::Branch:
      j["kind"] = "branch";
      j["var"] = t.var(n);
      j["pos"] = node_to_json(t, t.positive(n));
      j["neg"] = node_to_json(t, t.negative(n));
      break;
  }
  return j;
}

NodeId node_from_json(SrbTree& t, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw std::invalid_argument("srb node must be an object with a string 'kind'");
  const auto kind = j["kind"].get<std::string>();
  auto ids = [&]() {
    if (!j.contains("clauses") || !j["clauses"].is_array())
      throw std::invalid_argument(kind + " node needs a 'clauses' array");
    return j["clauses"].get<std::vector<ClauseId>>();
  };
  if (kind == "leaf") return t.add_leaf(ids());
  if (kind == "split") {
    auto clause_ids = ids();
    if (!j.contains("children") || !j["children"].is_array())
      throw std::invalid_argument("split node needs a 'children' array");
    std::vector<NodeId> kids;
    for (const auto& c : j["children"]) kids.push_back(node_from_json(t, c));
    return t.add_split(clause_ids, kids);
  }
  if (kind == "branch") {
    if (!j.contains("var") || !j["var"].is_number_integer() || !j.contains("pos") || !j.contains("neg"))
      throw std::invalid_argument("branch node needs 'var', 'pos' and 'neg'");
    NodeId p = node_from_json(t, j["pos"]);
    NodeId q = node_from_json(t, j["neg"]);
    return t.add_branch(j["var"].get<Var>(), p, q);
  }
  throw std::invalid_argument("unknown srb node kind '" + kind + "'");
}

}  // namespace

nlohmann::json srb_to_json(const SrbTree& t) {
  nlohmann::json j;
  j["schema"] = "rbdsat.srb/1";
  j["target_class"] = t.target_class();
  j["depth"] = depth(t);
  j["root"] = t.empty() ? nlohmann::json() : node_to_json(t, t.root());
  return j;
}

SrbTree srb_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("schema", "") != "rbdsat.srb/1")
    throw std::invalid_argument("not an rbdsat.srb/1 document");
  if (!j.contains("target_class") || !j["target_class"].is_number_integer())
    throw std::invalid_argument("missing integer 'target_class'");
  SrbTree t(j["target_class"].get<int>());
  if (!j.contains("root") || j["root"].is_null()) throw std::invalid_argument("missing 'root'");
  t.set_root(node_from_json(t, j["root"]));
  return t;
}

}  // namespace rbdsat
