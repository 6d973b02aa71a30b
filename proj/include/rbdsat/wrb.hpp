#pragma once

#include <cstdint>

#include "rbdsat/cnf.hpp"
#include "rbdsat/resource.hpp"

namespace rbdsat {

struct WrbOptions {
  ResourceLimits limits;
  /// Remember failed (residual, budget) pairs.
  bool memoize = true;
};

struct WrbOutcome {
  enum class Kind { Satisfiable, NotWithinDepth };

  Kind kind = Kind::NotWithinDepth;
  /// Assignment to the branching variables; any completion satisfies phi.
  Assignment witness;
  std::uint64_t nodes = 0;

  bool satisfiable() const { return kind == Kind::Satisfiable; }
};

/// Depth-bounded branching over literals with component splitting.
/// NotWithinDepth: phi is unsatisfiable or its weak depth exceeds k.
WrbOutcome wrb_solve(const Formula& phi, int k, const WrbOptions& options = {});

/// The witness extended with the positive polarity on every other variable.
Assignment complete_witness(const Formula& phi, const Assignment& witness);

}  // namespace rbdsat
