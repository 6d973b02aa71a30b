#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "rbdsat/cnf.hpp"
#include "rbdsat/resource.hpp"
#include "rbdsat/srb_tree.hpp"

namespace rbdsat {

/// Raised when an instance is larger than the oracle is configured to handle.
class OracleRefused : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct DepthResult {
  enum class Kind { Finite, Infinite, ExceedsCap };

  Kind kind = Kind::Finite;
  int value = 0;  // the depth when Finite, the cap when ExceedsCap

  static DepthResult finite(int v) { return {Kind::Finite, v}; }
  static DepthResult infinite() { return {Kind::Infinite, 0}; }
  static DepthResult exceeds_cap(int cap) { return {Kind::ExceedsCap, cap}; }

  bool is_finite() const { return kind == Kind::Finite; }
  bool operator==(const DepthResult&) const = default;
};

std::string to_string(const DepthResult& r);

struct OracleOptions {
  int truth_table_max_vars = 25;
  int depth_max_vars = 64;
  ResourceLimits limits;
};

bool truth_table_sat(const Formula& phi, const OracleOptions& options = {});
Count truth_table_count(const Formula& phi, const OracleOptions& options = {});

/// Exact recursive backdoor depths to the class of empty formulas.
///
/// The memo tables persist across calls on the same object, so one oracle can
/// be reused over a corpus. Not thread-safe; use one instance per thread.
class ExactOracle {
 public:
  explicit ExactOracle(OracleOptions options = {}) : options_(options), guard_(options.limits) {}

  DepthResult srbd(const Formula& phi, int cap);
  DepthResult wrbd(const Formula& phi, int cap);

  /// Decision versions: is the depth at most `budget`?
  bool srbd_at_most(const Formula& phi, int budget);
  bool wrbd_at_most(const Formula& phi, int budget);

  std::uint64_t nodes() const { return guard_.nodes(); }
  void clear() {
    srbd_memo_.clear();
    wrbd_memo_.clear();
  }

 private:
  // Largest budget known to fail and smallest budget known to succeed.
  struct Bounds {
    int known_false = -1;
    int known_true = -1;
  };

  bool strong(const Formula& phi, int budget);
  bool weak(const Formula& phi, int budget);
  void check_size(const Formula& phi) const;

  OracleOptions options_;
  ResourceGuard guard_;
  std::unordered_map<std::string, Bounds> srbd_memo_;
  std::unordered_map<std::string, Bounds> wrbd_memo_;
};

DepthResult srbd_exact(const Formula& phi, int cap, const OracleOptions& options = {});
DepthResult wrbd_exact(const Formula& phi, int cap, const OracleOptions& options = {});

}  // namespace rbdsat
