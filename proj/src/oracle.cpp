#include "rbdsat/oracle.hpp"

#include <algorithm>

namespace rbdsat {

std::string to_string(const DepthResult& r) {
  switch (r.kind) {
    case DepthResult::Kind::Finite:
      return std::to_string(r.value);
    case DepthResult::Kind::Infinite:
      return "infinite";
    case DepthResult::Kind::ExceedsCap:
      return "exceeds-cap(" + std::to_string(r.value) + ")";
  }
  return "?";
}

namespace {

struct ClauseMasks {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
};

std::vector<ClauseMasks> masks_for(const Formula& phi, const OracleOptions& options) {
  const auto n = phi.variable_count();
  if (n > static_cast<std::size_t>(options.truth_table_max_vars) || n > 31)
    throw OracleRefused("truth table refused: " + std::to_string(n) + " variables exceed the limit of " +
                        std::to_string(std::min(options.truth_table_max_vars, 31)));
  const auto& vars = phi.variables();
  std::vector<ClauseMasks> masks;
  for (const auto& c : phi.clauses()) {
    ClauseMasks m;
    for (const auto& l : c.literals) {
      auto bit = std::uint32_t{1} << (std::lower_bound(vars.begin(), vars.end(), l.var) - vars.begin());
      (l.polarity == Polarity::Positive ? m.pos : m.neg) |= bit;
    }
    masks.push_back(m);
  }
  return masks;
}

template <class OnModel>
void enumerate_models(const Formula& phi, const OracleOptions& options, OnModel&& on_model) {
  auto masks = masks_for(phi, options);
  ResourceGuard guard(options.limits);
  const std::uint64_t total = std::uint64_t{1} << phi.variable_count();
  for (std::uint64_t a = 0; a < total; ++a) {
    guard.tick();
    const auto bits = static_cast<std::uint32_t>(a);
    bool ok = true;
    for (const auto& m : masks)
      if (!(bits & m.pos) && !(~bits & m.neg)) {
        ok = false;
        break;
      }
    if (ok && !on_model()) return;
  }
}

}  // namespace

bool truth_table_sat(const Formula& phi, const OracleOptions& options) {
  bool found = false;
  enumerate_models(phi, options, [&] {
    found = true;
    return false;
  });
  return found;
}

Count truth_table_count(const Formula& phi, const OracleOptions& options) {
  std::uint64_t count = 0;
  enumerate_models(phi, options, [&] {
    ++count;
    return true;
  });
  return Count(count);
}

// ---------------------------------------------------------------------------

void ExactOracle::check_size(const Formula& phi) const {
  if (phi.variable_count() > static_cast<std::size_t>(options_.depth_max_vars))
    throw OracleRefused("depth oracle refused: " + std::to_string(phi.variable_count()) +
                        " variables exceed the limit of " + std::to_string(options_.depth_max_vars));
}

bool ExactOracle::strong(const Formula& phi, int budget) {
  guard_.tick();
  if (phi.in_class(0)) return true;
  auto key = phi.canonical_key();
  if (auto it = srbd_memo_.find(key); it != srbd_memo_.end()) {
    if (it->second.known_true >= 0 && budget >= it->second.known_true) return true;
    if (budget <= it->second.known_false) return false;
  }
  bool result;
  auto comps = components(phi);
  if (comps.size() == 1) {
    result = false;
    if (budget > 0) {
      for (Var x : phi.variables()) {
        if (strong(apply(phi, Literal{x, Polarity::Positive}), budget - 1) &&
            strong(apply(phi, Literal{x, Polarity::Negative}), budget - 1)) {
          result = true;
          break;
        }
      }
    }
  } else {
    result = std::all_of(comps.begin(), comps.end(), [&](const Formula& c) { return strong(c, budget); });
  }
  auto& b = srbd_memo_[key];
  if (result) {
    if (b.known_true < 0 || budget < b.known_true) b.known_true = budget;
  } else {
    b.known_false = std::max(b.known_false, budget);
  }
  return result;
}

bool ExactOracle::weak(const Formula& phi, int budget) {
  guard_.tick();
  if (phi.in_class(0)) return !phi.has_clauses();
  auto key = phi.canonical_key();
  if (auto it = wrbd_memo_.find(key); it != wrbd_memo_.end()) {
    if (it->second.known_true >= 0 && budget >= it->second.known_true) return true;
    if (budget <= it->second.known_false) return false;
  }
  bool result;
  auto comps = components(phi);
  if (comps.size() == 1) {
    result = false;
    if (budget > 0) {
      for (Var x : phi.variables()) {
        if (weak(apply(phi, Literal{x, Polarity::Positive}), budget - 1) ||
            weak(apply(phi, Literal{x, Polarity::Negative}), budget - 1)) {
          result = true;
          break;
        }
      }
    }
  } else {
    result = std::all_of(comps.begin(), comps.end(), [&](const Formula& c) { return weak(c, budget); });
  }
  auto& b = wrbd_memo_[key];
  if (result) {
    if (b.known_true < 0 || budget < b.known_true) b.known_true = budget;
  } else {
    b.known_false = std::max(b.known_false, budget);
  }
  return result;
}

bool ExactOracle::srbd_at_most(const Formula& phi, int budget) {
  check_size(phi);
  return budget >= 0 && strong(phi, budget);
}

bool ExactOracle::wrbd_at_most(const Formula& phi, int budget) {
  check_size(phi);
  return budget >= 0 && weak(phi, budget);
}

DepthResult ExactOracle::srbd(const Formula& phi, int cap) {
  check_size(phi);
  for (int b = 0; b <= cap; ++b)
    if (strong(phi, b)) return DepthResult::finite(b);
  return DepthResult::exceeds_cap(cap);
}

DepthResult ExactOracle::wrbd(const Formula& phi, int cap) {
  check_size(phi);
  for (int b = 0; b <= cap; ++b)
    if (weak(phi, b)) return DepthResult::finite(b);
  // A satisfiable formula has weak depth at most its number of variables.
  const int n = static_cast<int>(phi.variable_count());
  if (cap >= n || !weak(phi, n)) return DepthResult::infinite();
  return DepthResult::exceeds_cap(cap);
}

DepthResult srbd_exact(const Formula& phi, int cap, const OracleOptions& options) {
  return ExactOracle(options).srbd(phi, cap);
}

DepthResult wrbd_exact(const Formula& phi, int cap, const OracleOptions& options) {
  return ExactOracle(options).wrbd(phi, cap);
}

}  // namespace rbdsat
