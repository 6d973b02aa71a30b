#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "rbdsat/cnf.hpp"
#include "rbdsat/obstruction.hpp"
#include "rbdsat/resource.hpp"
#include "rbdsat/srb_tree.hpp"

namespace rbdsat {

class DetectorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TooDeepReason {
  ClauseWidth,  // a clause wider than k
  Obstruction,  // a level k+1 obstruction tree
  Diameter,     // a join path longer than lambda_k
};

std::string to_string(TooDeepReason r);

struct TooDeep {
  TooDeepReason reason = TooDeepReason::ClauseWidth;
  std::string detail;
  std::optional<ObstructionCertificate> certificate;
};

/// Called for every obstruction tree the detector builds, with the formula it
/// was built in and its level.
using ObstructionObserver = std::function<void(const ObstructionTree& t, const Formula& host, int level)>;

struct DetectorOptions {
  ResourceLimits limits;
  ObstructionObserver on_obstruction;
};

struct DetectionOutcome {
  enum class Kind { Obstruction, Backdoor, TooDeep };

  Kind kind = Kind::TooDeep;
  ObstructionPtr obstruction;  // Obstruction
  SrbTree backdoor;            // Backdoor, to the class of width d-1
  TooDeep too_deep;            // TooDeep
};

/// For G of width at most d and d <= i <= k+1: an (i,d,k)-obstruction tree of
/// G, a recursive backdoor of G to width d-1 of depth at most g(i,d,k), or
/// TooDeep. Throws DetectorError on violated preconditions.
DetectionOutcome find_obstruction_or_backdoor(const Formula& g, int i, int d, int k,
                                              const DetectorOptions& options = {});

struct SrbResult {
  std::optional<SrbTree> tree;  // empty means TooDeep
  TooDeep too_deep;
  std::uint64_t detector_calls = 0;
};

/// Recursive backdoor to the empty class of depth at most depth_bound(k), or
/// TooDeep, which certifies that the strong depth exceeds k.
SrbResult find_srb(const Formula& g, int k, const DetectorOptions& options = {});

enum class Verdict { Sat, Unsat, TooDeep };
std::string to_string(Verdict v);

struct PermissiveResult {
  Verdict verdict = Verdict::TooDeep;
  SrbResult detection;
};

PermissiveResult permissive_solve(const Formula& phi, int k, const DetectorOptions& options = {});

}  // namespace rbdsat
