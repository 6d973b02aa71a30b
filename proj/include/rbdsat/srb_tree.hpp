#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbdsat/cnf.hpp"
#include "json.hpp"

namespace rbdsat {

using Count = boost::multiprecision::cpp_int;
using NodeId = std::uint32_t;

enum class SrbKind : std::uint8_t {
  Leaf,    // label in the target class
  Split,   // one child per connected component of the label, in component order
  Branch,  // variable node; children are label[x+] and label[x-]
};

/// Strong recursive backdoor tree stored in an arena.
///
/// Labels are implicit: the root is labelled with the input formula, a Branch
/// on x turns label H into H[x+] / H[x-], a Split turns H into its components.
/// Leaves and Split nodes additionally record the clause ids of their label so
/// a tree can be checked against a formula without trusting its producer.
class SrbTree {
 public:
  explicit SrbTree(int target_class = 0) : target_class_(target_class) {}

  NodeId add_leaf(std::span<const ClauseId> clauses);
  NodeId add_split(std::span<const ClauseId> clauses, std::span<const NodeId> children);
  NodeId add_branch(Var var, NodeId positive, NodeId negative);

  /// Overwrites node `target` with the contents of node `source`; used to
  /// splice a subtree into a leaf. `source` becomes unreachable.
  void replace(NodeId target, NodeId source);

  void set_branch_var(NodeId n, Var v);
  void swap_branches(NodeId n);

  NodeId root() const { return root_; }
  void set_root(NodeId n) { root_ = n; }
  int target_class() const { return target_class_; }
  void set_target_class(int d) { target_class_ = d; }
  bool empty() const { return nodes_.empty(); }

  SrbKind kind(NodeId n) const { return nodes_.at(n).kind; }
  Var var(NodeId n) const { return nodes_.at(n).var; }
  std::span<const NodeId> children(NodeId n) const;
  std::span<const ClauseId> clauses(NodeId n) const;
  NodeId positive(NodeId n) const { return children(n)[0]; }
  NodeId negative(NodeId n) const { return children(n)[1]; }

  /// Arena size including unreachable nodes.
  std::size_t arena_size() const { return nodes_.size(); }
  /// Nodes reachable from the root.
  std::size_t node_count() const;
  /// Copy with only reachable nodes; children precede their parents.
  SrbTree compacted() const;

 private:
  struct Node {
    SrbKind kind;
    Var var;
    std::uint32_t child_begin, child_count;
    std::uint32_t clause_begin, clause_count;
  };

  std::vector<Node> nodes_;
  std::vector<NodeId> child_pool_;
  std::vector<ClauseId> clause_pool_;
  NodeId root_ = 0;
  int target_class_ = 0;
};

/// Maximum number of Branch nodes on a root-leaf path.
int depth(const SrbTree& t);

enum class ValidationMode {
  /// Canonical tree shape only: a Branch only over connected
  /// labels containing its variable.
  Strict,
  /// Additionally accepts chains of Branch nodes over disconnected labels or
  /// over variables that no longer occur (the shape produced when a complete
  /// branching over a variable set is composed).
  Relaxed,
};

struct Violation {
  std::string path;  // e.g. "root/neg/child[1]"
  std::string message;
};

/// Re-derives every label from `phi` and reports all mismatches.
std::vector<Violation> validate(const SrbTree& t, const Formula& phi,
                                ValidationMode mode = ValidationMode::Relaxed);

struct LeafStats {
  std::uint64_t leaf_count = 0;
  std::uint64_t leaf_size_sum = 0;  // vertices (variables + clauses) over all leaf labels
};

LeafStats leaf_stats(const SrbTree& t, const Formula& phi);

/// Size measure used by the leaf bound: incidence-graph vertices, at least 1.
std::uint64_t leaf_bound_size(const Formula& phi);

class InvalidTree : public std::invalid_argument {
 public:
  explicit InvalidTree(std::vector<Violation> v);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

using LeafSolver = std::function<bool(const Formula&)>;
using LeafCounter = std::function<Count(const Formula&)>;

/// Leaf rules for the class of empty formulas: satisfiable iff no clause.
bool empty_class_leaf_sat(const Formula& leaf);
Count empty_class_leaf_count(const Formula& leaf);

struct EvalOptions {
  unsigned threads = 1;
  ValidationMode mode = ValidationMode::Relaxed;
};

/// Bottom-up SAT evaluation. Throws InvalidTree when validation fails.
bool solve_sat(const SrbTree& t, const Formula& phi, const LeafSolver& leaf = empty_class_leaf_sat,
               const EvalOptions& options = {});

/// Number of satisfying assignments of phi over var(phi).
Count count_models(const SrbTree& t, const Formula& phi,
                   const LeafCounter& leaf = empty_class_leaf_count, const EvalOptions& options = {});

/// JSON document with schema tag "rbdsat.srb/1".
nlohmann::json srb_to_json(const SrbTree& t);
SrbTree srb_from_json(const nlohmann::json& j);

}  // namespace rbdsat
