#include "rbdsat/generators.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace rbdsat {

// ---------------------------------------------------------------------------
// Grid family

GridInstance gen_grid_family(int k) {
  if (k < 1) throw GeneratorError("grid family needs k >= 1");
  auto grid_id = [k](int r, int c) { return static_cast<ClauseId>((r - 1) * k + c); };

  std::vector<std::pair<ClauseId, ClauseId>> edges;
  for (int r = 1; r <= k; ++r)
    for (int c = 1; c <= k; ++c) {
      if (c < k) edges.emplace_back(grid_id(r, c), grid_id(r, c + 1));
      if (r < k) edges.emplace_back(grid_id(r, c), grid_id(r + 1, c));
    }

  GridInstance out;
  auto& roles = out.roles;
  roles.k = k;
  const auto cells = static_cast<std::size_t>(k) * k;
  std::vector<std::vector<Literal>> grid(cells);
  std::vector<Clause> clauses;

  const Var path_vars = static_cast<Var>(3 * edges.size());
  std::vector<ClauseId> corners{grid_id(1, 1), grid_id(1, k), grid_id(k, 1), grid_id(k, k)};
  std::sort(corners.begin(), corners.end());
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
  const Var x = edges.empty() ? 0 : path_vars + static_cast<Var>(corners.size()) + 1;
  roles.special = x;

  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Var a = static_cast<Var>(3 * e + 1), b = a + 1, c = a + 2;
    roles.path_variables.insert(roles.path_variables.end(), {a, b, c});
    grid[edges[e].first - 1].push_back({a, Polarity::Positive});
    grid[edges[e].second - 1].push_back({c, Polarity::Positive});
    const auto first = static_cast<ClauseId>(cells + 2 * e + 1);
    clauses.push_back({first, {{a, Polarity::Positive}, {b, Polarity::Positive}, {x, Polarity::Positive}}});
    clauses.push_back({first + 1, {{b, Polarity::Positive}, {c, Polarity::Positive}, {x, Polarity::Negative}}});
    roles.path_clauses.insert(roles.path_clauses.end(), {first, first + 1});
  }
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const Var v = path_vars + static_cast<Var>(i) + 1;
    roles.corner_variables.push_back(v);
    grid[corners[i] - 1].push_back({v, Polarity::Positive});
  }
  for (std::size_t i = 0; i < cells; ++i) {
    roles.grid_clauses.push_back(static_cast<ClauseId>(i + 1));
    clauses.push_back({static_cast<ClauseId>(i + 1), grid[i]});
  }
  out.formula = Formula(std::move(clauses));
  return out;
}

nlohmann::json grid_sidecar(const GridRoles& roles) {
  nlohmann::json j;
  j["schema"] = "rbdsat.roles/1";
  j["family"] = "grid";
  j["k"] = roles.k;
  j["grid_clauses"] = roles.grid_clauses;
  j["path_clauses"] = roles.path_clauses;
  j["path_variables"] = roles.path_variables;
  j["corner_variables"] = roles.corner_variables;
  j["special_variable"] = roles.special ? nlohmann::json(roles.special) : nlohmann::json();
  return j;
}

// ---------------------------------------------------------------------------
// Set-Cover reduction

void validate_instance(const SetCoverInstance& inst) {
  if (inst.universe_size < 0) throw GeneratorError("universe size must be >= 0");
  if (inst.k < 0) throw GeneratorError("set cover budget k must be >= 0");
  for (const auto& s : inst.sets)
    for (int u : s)
      if (u < 1 || u > inst.universe_size)
        throw GeneratorError("set element " + std::to_string(u) + " outside universe 1.." +
                             std::to_string(inst.universe_size));
}

bool has_set_cover(const SetCoverInstance& inst) {
  validate_instance(inst);
  const auto n = inst.sets.size();
  const std::uint32_t full = (std::uint32_t{1} << inst.universe_size) - 1;
  std::vector<std::uint32_t> masks;
  for (const auto& s : inst.sets) {
    std::uint32_t m = 0;
    for (int u : s) m |= std::uint32_t{1} << (u - 1);
    masks.push_back(m);
  }
  for (std::uint32_t pick = 0; pick < (std::uint32_t{1} << n); ++pick) {
    if (std::popcount(pick) > inst.k) continue;
    std::uint32_t covered = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (pick >> i & 1) covered |= masks[i];
    if ((covered & full) == full) return true;
  }
  return false;
}

SetCoverReduction gen_setcover_reduction(const SetCoverInstance& inst) {
  validate_instance(inst);
  SetCoverReduction red;
  const int nb = inst.k + 2;
  std::vector<Clause> clauses;
  for (int i = 1; i <= nb; ++i) {
    red.roles.b_variables.push_back(i);
    red.roles.beta.push_back(i);
    clauses.push_back({i, {{i, Polarity::Positive}}});
  }
  for (std::size_t j = 1; j <= inst.sets.size(); ++j) red.roles.s_variables.push_back(nb + static_cast<Var>(j));
  for (int u = 1; u <= inst.universe_size; ++u) {
    Clause sigma{nb + u, {}};
    for (int i = 1; i <= nb; ++i) sigma.literals.push_back({i, Polarity::Negative});
    for (std::size_t j = 0; j < inst.sets.size(); ++j)
      if (std::find(inst.sets[j].begin(), inst.sets[j].end(), u) != inst.sets[j].end())
        sigma.literals.push_back({nb + static_cast<Var>(j) + 1, Polarity::Positive});
    red.roles.sigma.push_back(sigma.id);
    clauses.push_back(std::move(sigma));
  }
  red.formula = Formula(std::move(clauses));
  red.budget = inst.k + 1;
  return red;
}

nlohmann::json setcover_sidecar(const SetCoverInstance& inst, const SetCoverReduction& red) {
  nlohmann::json j;
  j["schema"] = "rbdsat.roles/1";
  j["family"] = "setcover";
  j["universe_size"] = inst.universe_size;
  j["sets"] = inst.sets;
  j["k"] = inst.k;
  j["budget"] = red.budget;
  j["b_variables"] = red.roles.b_variables;
  j["s_variables"] = red.roles.s_variables;
  j["beta_clauses"] = red.roles.beta;
  j["sigma_clauses"] = red.roles.sigma;
  return j;
}

void for_each_setcover_instance(int max_universe, int max_sets, int max_k,
                                const std::function<void(const SetCoverInstance&)>& fn) {
  for (int u = 0; u <= max_universe; ++u) {
    const int subsets = 1 << u;
    std::vector<std::vector<int>> subset_list(subsets);
    for (int m = 0; m < subsets; ++m)
      for (int e = 0; e < u; ++e)
        if (m >> e & 1) subset_list[m].push_back(e + 1);
    for (int n = 0; n <= max_sets; ++n) {
      // Non-decreasing index sequences = multisets of subsets.
      std::vector<int> idx(n, 0);
      while (true) {
        for (int k = 0; k <= max_k; ++k) {
          SetCoverInstance inst{u, {}, k};
          for (int i : idx) inst.sets.push_back(subset_list[i]);
          fn(inst);
        }
        int p = n - 1;
        while (p >= 0 && idx[p] == subsets - 1) --p;
        if (p < 0) break;
        ++idx[p];
        for (int q = p + 1; q < n; ++q) idx[q] = idx[p];
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Random formulas

namespace {

// Uniform integer in [0, bound) by rejection; portable across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do r = rng(); while (r >= limit);
  return r % bound;
}

std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::uint64_t b = 1;
  for (int i = 1; i <= r; ++i) b = b * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
  return b;
}

}  // namespace

Formula gen_random(int n, int m, int max_width, std::uint64_t seed) {
  if (n < 0 || m < 0) throw GeneratorError("n and m must be >= 0");
  if (max_width < 1) throw GeneratorError("max_width must be >= 1");
  if (m == 0) return Formula();
  if (max_width > n)
    throw GeneratorError("max_width " + std::to_string(max_width) + " exceeds variable count " + std::to_string(n));
  std::uint64_t distinct = 0;
  for (int w = 1; w <= max_width; ++w) distinct += binomial(n, w) << w;
  if (static_cast<std::uint64_t>(m) > distinct)
    throw GeneratorError("cannot draw " + std::to_string(m) + " distinct clauses, only " +
                         std::to_string(distinct) + " exist");

  std::mt19937_64 rng(seed);
  std::set<std::vector<Literal>> seen;
  std::vector<Clause> clauses;
  std::vector<Var> pool(n);
  while (clauses.size() < static_cast<std::size_t>(m)) {
    const int w = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(max_width)));
    std::iota(pool.begin(), pool.end(), 1);
    std::vector<Literal> lits;
    for (int i = 0; i < w; ++i) {
      auto j = static_cast<std::size_t>(i) + uniform_below(rng, static_cast<std::uint64_t>(n - i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
      lits.push_back({pool[static_cast<std::size_t>(i)], uniform_below(rng, 2) ? Polarity::Negative : Polarity::Positive});
    }
    std::sort(lits.begin(), lits.end());
    if (!seen.insert(lits).second) continue;
    clauses.push_back({static_cast<ClauseId>(clauses.size() + 1), std::move(lits)});
  }
  return Formula(std::move(clauses));
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

namespace {

void check_small_bounds(int max_vars, int max_clauses, int max_width) {
  if (max_vars < 0 || max_clauses < 0 || max_width < 0) throw GeneratorError("bounds must be >= 0");
  if (max_vars > 4 || max_clauses > 4 || max_width > 3)
    throw GeneratorError("enumeration bounds above 4 variables / 4 clauses / width 3 are refused");
}

// All clauses over 1..max_vars of width <= max_width, by width then literals.
std::vector<std::vector<Literal>> clause_universe(int max_vars, int max_width) {
  std::vector<std::vector<Literal>> out;
  for (int w = 0; w <= std::min(max_width, max_vars); ++w) {
    std::vector<std::vector<Literal>> layer;
    for (std::uint32_t vars = 0; vars < (1u << max_vars); ++vars) {
      if (std::popcount(vars) != w) continue;
      for (std::uint32_t signs = 0; signs < (1u << w); ++signs) {
        std::vector<Literal> lits;
        int bit = 0;
        for (int v = 0; v < max_vars; ++v)
          if (vars >> v & 1) lits.push_back({v + 1, (signs >> bit++ & 1) ? Polarity::Negative : Polarity::Positive});
        layer.push_back(std::move(lits));
      }
    }
    std::sort(layer.begin(), layer.end());
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

}  // namespace

void enumerate_small(int max_vars, int max_clauses, int max_width,
                     const std::function<bool(const Formula&)>& fn) {
  check_small_bounds(max_vars, max_clauses, max_width);
  const auto universe = clause_universe(max_vars, max_width);
  const int u = static_cast<int>(universe.size());
  for (int m = 0; m <= std::min(max_clauses, u); ++m) {
    std::vector<int> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<Clause> clauses;
      for (int i = 0; i < m; ++i) clauses.push_back({i + 1, universe[idx[i]]});
      if (!fn(Formula::from_normalized(std::move(clauses)))) return;
      int p = m - 1;
      while (p >= 0 && idx[p] == u - m + p) --p;
      if (p < 0) break;
      ++idx[p];
      for (int q = p + 1; q < m; ++q) idx[q] = idx[q - 1] + 1;
    }
  }
}

std::uint64_t enumerate_small_count(int max_vars, int max_clauses, int max_width) {
  check_small_bounds(max_vars, max_clauses, max_width);
  const int u = static_cast<int>(clause_universe(max_vars, max_width).size());
  std::uint64_t total = 0;
  for (int m = 0; m <= std::min(max_clauses, u); ++m) total += binomial(u, m);
  return total;
}

}  // namespace rbdsat
