#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rbdsat/cnf.hpp"

namespace rbdsat {

class DimacsError : public std::runtime_error {
 public:
  DimacsError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct DimacsOptions {
  /// Drop tautological clauses (x and -x) instead of rejecting the input.
  bool sanitize = false;
};

struct ParseResult {
  Formula formula;
  int declared_variables = 0;
  int declared_clauses = 0;
  /// Variables in 1..declared_variables that occur in no clause.
  std::vector<Var> dropped_variables;
  /// Human-readable notes: removed tautologies, collapsed duplicates, count mismatch.
  std::vector<std::string> warnings;
};

ParseResult parse_dimacs(std::string_view text, const DimacsOptions& options = {});
ParseResult parse_dimacs(std::istream& in, const DimacsOptions& options = {});
ParseResult parse_dimacs_file(const std::string& path, const DimacsOptions& options = {});

/// "p cnf <max var> <m>" followed by one line per clause in id order,
/// literals by ascending variable. Lines are LF separated, no trailing LF.
std::string serialize_dimacs(const Formula& phi);

}  // namespace rbdsat
