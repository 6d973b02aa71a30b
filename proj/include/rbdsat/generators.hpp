#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "rbdsat/cnf.hpp"

namespace rbdsat {

class GeneratorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Grid family
//
// Numbering for G_k (k >= 1), with grid positions (r, c) in 1..k:
//   grid clause (r, c)          id (r-1)*k + c
//   grid edges                  e = 0, 1, ...: row-major over positions, the
//                               horizontal edge (r,c)-(r,c+1) before the
//                               vertical edge (r,c)-(r+1,c)
//   path variables of edge e    3e+1, 3e+2, 3e+3 (3e+1 next to the endpoint
//                               with the smaller clause id)
//   path clauses of edge e      k*k + 2e + 1 = {a, b, x},
//                               k*k + 2e + 2 = {b, c, -x}
//   corner variables            after the path variables, one per distinct
//                               corner clause in order (1,1), (1,k), (k,1), (k,k)
//   special variable x          the largest id
// Grid clauses contain their adjacent path variables and corner variable
// positively.

struct GridRoles {
  int k = 0;
  std::vector<ClauseId> grid_clauses;  // row-major
  std::vector<ClauseId> path_clauses;
  std::vector<Var> path_variables;
  std::vector<Var> corner_variables;
  Var special = 0;
};

struct GridInstance {
  Formula formula;
  GridRoles roles;
};

GridInstance gen_grid_family(int k);
nlohmann::json grid_sidecar(const GridRoles& roles);

// ---------------------------------------------------------------------------
// Set-Cover reduction

struct SetCoverInstance {
  int universe_size = 0;               // elements are 1..universe_size
  std::vector<std::vector<int>> sets;  // S_1..S_n
  int k = 0;
};

void validate_instance(const SetCoverInstance& inst);

/// At most k sets whose union is the universe.
bool has_set_cover(const SetCoverInstance& inst);

struct SetCoverRoles {
  std::vector<Var> b_variables;   // b_1..b_{k+2} = 1..k+2
  std::vector<Var> s_variables;   // s_j = k+2+j
  std::vector<ClauseId> beta;     // beta_i has id i
  std::vector<ClauseId> sigma;    // sigma_u has id k+2+u
};

struct SetCoverReduction {
  Formula formula;
  int budget = 0;  // k+1
  SetCoverRoles roles;
};

SetCoverReduction gen_setcover_reduction(const SetCoverInstance& inst);
nlohmann::json setcover_sidecar(const SetCoverInstance& inst, const SetCoverReduction& red);

/// Every instance with universe size <= max_universe, at most max_sets sets
/// (each a nonempty or empty subset, repeats allowed, order ignored) and
/// k <= max_k.
void for_each_setcover_instance(int max_universe, int max_sets, int max_k,
                                const std::function<void(const SetCoverInstance&)>& fn);

// ---------------------------------------------------------------------------
// Random and exhaustive corpora

/// m distinct clauses over variables 1..n, widths uniform in [1, max_width],
/// variables without replacement, uniform polarities. Deterministic in seed.
Formula gen_random(int n, int m, int max_width, std::uint64_t seed);

/// Every formula with variables among 1..max_vars, at most max_clauses
/// distinct clauses of width at most max_width, in canonical order. Clause ids
/// are 1..m in canonical clause order. Returns false from `fn` to stop early.
void enumerate_small(int max_vars, int max_clauses, int max_width,
                     const std::function<bool(const Formula&)>& fn);

/// Number of formulas enumerate_small would produce.
std::uint64_t enumerate_small_count(int max_vars, int max_clauses, int max_width);

}  // namespace rbdsat
