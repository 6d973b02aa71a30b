#include "rbdsat/wrb.hpp"

#include <optional>
#include <unordered_map>

namespace rbdsat {

namespace {

class WrbSearch {
 public:
  explicit WrbSearch(const WrbOptions& options) : options_(options), guard_(options.limits) {}

  std::optional<Assignment> solve(const Formula& phi, int budget) {
    guard_.tick();
    if (phi.in_class(0)) return phi.has_clauses() ? std::nullopt : std::optional<Assignment>(Assignment{});
    std::string key;
    if (options_.memoize) {
      key = phi.canonical_key();
      if (auto it = failed_.find(key); it != failed_.end() && budget <= it->second) return std::nullopt;
    }
    auto result = search(phi, budget);
    if (!result && options_.memoize) {
      auto [it, inserted] = failed_.emplace(key, budget);
      if (!inserted && it->second < budget) it->second = budget;
    }
    return result;
  }

  std::uint64_t nodes() const { return guard_.nodes(); }

 private:
  std::optional<Assignment> search(const Formula& phi, int budget) {
    auto comps = components(phi);
    if (comps.size() > 1) {
      Assignment merged;
      for (const auto& c : comps) {
        auto w = solve(c, budget);
        if (!w) return std::nullopt;
        merged = merged.united(*w);
      }
      return merged;
    }
    if (budget == 0) return std::nullopt;
    for (Var x : phi.variables())
      for (Polarity p : {Polarity::Positive, Polarity::Negative}) {
        auto w = solve(apply(phi, Literal{x, p}), budget - 1);
        if (w) {
          w->set(x, p);
          return w;
        }
      }
    return std::nullopt;
  }

  WrbOptions options_;
  ResourceGuard guard_;
  std::unordered_map<std::string, int> failed_;  // largest failed budget per residual
};

}  // namespace

WrbOutcome wrb_solve(const Formula& phi, int k, const WrbOptions& options) {
  WrbOutcome out;
  if (k < 0) return out;
  WrbSearch search(options);
  auto w = search.solve(phi, k);
  out.nodes = search.nodes();
  if (w) {
    out.kind = WrbOutcome::Kind::Satisfiable;
    out.witness = std::move(*w);
  }
  return out;
}

Assignment complete_witness(const Formula& phi, const Assignment& witness) {
  Assignment full = witness;
  for (Var v : phi.variables())
    if (!full.contains(v)) full.set(v, Polarity::Positive);
  return full;
}

}  // namespace rbdsat
