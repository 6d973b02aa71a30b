#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace rbdsat {

/// Thrown when a wall-clock or node-count limit is hit. Never a statement
/// about backdoor depth.
class ResourceExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ResourceLimits {
  std::optional<double> max_seconds;
  std::optional<std::uint64_t> max_nodes;
};

class ResourceGuard {
 public:
  ResourceGuard() : ResourceGuard(ResourceLimits{}) {}
  explicit ResourceGuard(const ResourceLimits& limits)
      : limits_(limits), start_(std::chrono::steady_clock::now()) {}

  /// Counts one unit of work and throws once a limit is exceeded.
  void tick() {
    ++nodes_;
    if (limits_.max_nodes && nodes_ > *limits_.max_nodes)
      throw ResourceExhausted("node limit of " + std::to_string(*limits_.max_nodes) + " exceeded");
    if (limits_.max_seconds && (nodes_ & 0xff) == 0 && elapsed_seconds() > *limits_.max_seconds)
      throw ResourceExhausted("time limit of " + std::to_string(*limits_.max_seconds) + "s exceeded");
  }

  std::uint64_t nodes() const { return nodes_; }
  double elapsed_seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  ResourceLimits limits_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t nodes_ = 0;
};

}  // namespace rbdsat
