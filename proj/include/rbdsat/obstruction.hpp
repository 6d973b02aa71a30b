#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbdsat/cnf.hpp"

namespace rbdsat {

/// 4 * 2^k.
std::int64_t lambda(int k);
/// 3^(i-d) * lambda(k) * d.
std::int64_t g(int i, int d, int k);
/// 3^k * lambda(k) * k^2, the depth bound for detected backdoors.
std::int64_t depth_bound(int k);

class ObstructionTree;
using ObstructionPtr = std::shared_ptr<const ObstructionTree>;

/// Obstruction tree: a width-d clause (level d), or two level-i trees joined by
/// a short incidence-graph path (level i+1). Immutable; children are shared.
class ObstructionTree {
 public:
  enum class Kind { Base, Join };

  static ObstructionPtr base(const Clause& clause);
  static ObstructionPtr join(ObstructionPtr left, std::vector<Vertex> path, ObstructionPtr right);

  Kind kind() const { return kind_; }
  int level() const { return level_; }
  int degree() const { return degree_; }

  ClauseId clause() const { return clause_; }             // Base
  const ObstructionPtr& left() const { return left_; }     // Join
  const ObstructionPtr& right() const { return right_; }   // Join
  const std::vector<Vertex>& path() const { return path_; }  // Join

  /// V(T), ascending.
  const std::vector<Vertex>& elements() const { return elements_; }
  std::vector<ClauseId> clauses() const;
  std::vector<Var> variables() const;
  bool contains(const Vertex& v) const;

 private:
  ObstructionTree() = default;

  Kind kind_ = Kind::Base;
  int level_ = 0;
  int degree_ = 0;
  ClauseId clause_ = 0;
  ObstructionPtr left_, right_;
  std::vector<Vertex> path_;
  std::vector<Vertex> elements_;
};

/// N†_G(T): var(T) plus every variable with a positive edge to one clause of T
/// and a negative edge to another (or the same) clause of T. Base trees: var(T).
std::vector<Var> destroy_neighborhood(const ObstructionTree& t, const Formula& g);

struct ObstructionViolation {
  std::string path;  // e.g. "root/left/right"
  std::string message;
};

/// Checks every structural condition and size bound of an (i,d,k)-obstruction
/// tree in `g`. Returns all violations.
std::vector<ObstructionViolation> validate_obstruction(const ObstructionTree& t, const Formula& g, int i,
                                                       int d, int k);

/// A tree together with the assignment that produces its host formula from
/// the input formula.
struct ObstructionCertificate {
  ObstructionPtr tree;
  Assignment host_assignment;
  int k = 0;
};

/// JSON document with schema tag "rbdsat.obstruction/1".
nlohmann::json obstruction_to_json(const ObstructionCertificate& cert);
ObstructionCertificate obstruction_from_json(const nlohmann::json& j);

}  // namespace rbdsat
