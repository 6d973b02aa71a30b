#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rbdsat::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalid = 1,
  kInputError = 2,
  kSat = 10,
  kUnsat = 20,
  kTooDeep = 20,  // detect only
  kNotDecided = 30,
  kResources = 40,
};

/// Runs one command line (without the program name) and returns its exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rbdsat::cli
