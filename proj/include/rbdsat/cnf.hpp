#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rbdsat {

using Var = std::int32_t;
using ClauseId = std::int32_t;

enum class Polarity : std::uint8_t { Positive = 0, Negative = 1 };

constexpr Polarity operator!(Polarity p) {
  return p == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
}

constexpr char polarity_sign(Polarity p) { return p == Polarity::Positive ? '+' : '-'; }

struct Literal {
  Var var = 0;
  Polarity polarity = Polarity::Positive;

  static Literal from_dimacs(int lit) {
    return {lit > 0 ? lit : -lit, lit > 0 ? Polarity::Positive : Polarity::Negative};
  }
  int to_dimacs() const { return polarity == Polarity::Positive ? var : -var; }
  Literal operator~() const { return {var, !polarity}; }

  auto operator<=>(const Literal&) const = default;
};

struct Clause {
  ClauseId id = 0;
  std::vector<Literal> literals;  // sorted by variable, one literal per variable

  std::size_t width() const { return literals.size(); }
  std::optional<Polarity> polarity_of(Var v) const;

  bool operator==(const Clause&) const = default;
};

/// Raised when a clause or formula would break the representation invariants
/// (complementary pair, duplicate clause id, ...).
class FormulaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Partial truth assignment, kept sorted by variable.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<Literal> lits);

  /// Throws FormulaError if `v` is already assigned the opposite polarity.
  void set(Var v, Polarity p);
  void set(Literal lit) { set(lit.var, lit.polarity); }
  std::optional<Polarity> get(Var v) const;
  bool contains(Var v) const { return get(v).has_value(); }

  /// Disjoint union; throws FormulaError when the domains overlap.
  Assignment united(const Assignment& other) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::vector<Var> variables() const;
  const std::vector<Literal>& literals() const { return entries_; }

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<Literal> entries_;
};

/// A CNF formula: a set of clauses with stable ids. Variables are exactly the
/// ones occurring in some clause; ids survive simplification.
class Formula {
 public:
  Formula() = default;

  /// Builds a formula from clauses with explicit ids. Literals are sorted and
  /// de-duplicated; complementary pairs and repeated ids are rejected.
  explicit Formula(std::vector<Clause> clauses);

  /// Low-level constructor for clauses that are already normalized (ids
  /// strictly ascending, literals sorted, no complementary pairs).
  static Formula from_normalized(std::vector<Clause> clauses);

  /// Convenience: DIMACS-style integer clauses, ids 1..m in order.
  static Formula from_dimacs_clauses(const std::vector<std::vector<int>>& clauses);

  const std::vector<Clause>& clauses() const { return clauses_; }
  const std::vector<Var>& variables() const { return vars_; }

  std::size_t clause_count() const { return clauses_.size(); }
  std::size_t variable_count() const { return vars_.size(); }
  /// Sum of clause widths.
  std::size_t length() const;
  /// Number of incidence-graph vertices: variables plus clauses.
  std::size_t vertex_count() const { return vars_.size() + clauses_.size(); }

  bool has_clauses() const { return !clauses_.empty(); }
  bool has_empty_clause() const;
  bool has_variable(Var v) const;
  const Clause* find_clause(ClauseId id) const;
  std::vector<ClauseId> clause_ids() const;

  int max_clause_width() const;
  /// Membership in the class of formulas whose clauses have width at most d.
  bool in_class(int d) const { return max_clause_width() <= d; }

  /// Sub-formula consisting of the listed clauses (ids not present are ignored).
  Formula restrict_to(std::span<const ClauseId> ids) const;

  /// Canonical text key: ids and literals in sorted order.
  std::string canonical_key() const;

  bool operator==(const Formula&) const = default;

 private:
  std::vector<Clause> clauses_;  // sorted by id
  std::vector<Var> vars_;        // sorted
};

/// phi[tau]: drops satisfied clauses and falsified literals.
Formula apply(const Formula& phi, const Assignment& tau);
Formula apply(const Formula& phi, Literal lit);

/// True iff every clause contains a literal made true by `tau`.
bool satisfies(const Formula& phi, const Assignment& tau);

/// Connected components of the incidence graph, ordered by smallest clause id.
std::vector<Formula> components(const Formula& phi);
std::size_t component_count(const Formula& phi);
inline bool is_connected(const Formula& phi) { return component_count(phi) == 1; }

inline int max_clause_width(const Formula& phi) { return phi.max_clause_width(); }

enum class VertexKind : std::uint8_t { Clause = 0, Variable = 1 };

/// Incidence-graph vertex. Ordering puts clauses before variables, then ids.
struct Vertex {
  VertexKind kind = VertexKind::Clause;
  std::int32_t id = 0;

  static Vertex clause(ClauseId c) { return {VertexKind::Clause, c}; }
  static Vertex variable(Var v) { return {VertexKind::Variable, v}; }
  bool is_clause() const { return kind == VertexKind::Clause; }
  bool is_variable() const { return kind == VertexKind::Variable; }

  auto operator<=>(const Vertex&) const = default;
};

std::string to_string(const Vertex& v);

/// Signed bipartite incidence graph of a formula. Holds a copy of the formula
/// so it can outlive the source.
class IncidenceGraph {
 public:
  struct Edge {
    Vertex to;
    Polarity polarity;
  };

  explicit IncidenceGraph(Formula phi);

  const Formula& formula() const { return phi_; }
  bool has_vertex(const Vertex& v) const;
  /// Neighbours in ascending vertex order.
  std::vector<Edge> neighbors(const Vertex& v) const;
  std::optional<Polarity> edge(Var v, ClauseId c) const;
  std::vector<Vertex> vertices() const;

 private:
  std::size_t var_index(Var v) const;  // npos when absent

  Formula phi_;
  // occurrences_[var_index] = (clause id, polarity), clause ids ascending
  std::vector<std::vector<std::pair<ClauseId, Polarity>>> occurrences_;
};

/// Shortest path (edge count) from any source to any target, as a vertex list
/// starting at a source. Multi-source BFS, neighbours visited in ascending
/// vertex order; among targets of the first reached layer the smallest wins.
std::optional<std::vector<Vertex>> shortest_path(const IncidenceGraph& g,
                                                 std::span<const Vertex> sources,
                                                 std::span<const Vertex> targets);

/// Largest eccentricity over all components; 0 when there are no edges.
int component_diameter(const Formula& phi);

std::string to_string(const Formula& phi);

}  // namespace rbdsat
