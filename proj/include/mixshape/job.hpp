#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

// Command dispatch shared by the command-line tool and the test suites.
// Payloads carry matrices as arrays of decimal strings so certificates stay
// lossless at any magnitude.

namespace mixshape::cli {

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunResult {
  int exit_code = 0;           // 0 computed, 2 parse error, 3 contract violation
  nlohmann::json report;       // machine-readable, stable key order
  std::string summary;         // one-line human text
};

// Executes one subcommand; never throws (errors are mapped to exit codes and
// an "error" report).
RunResult run(const std::string& command, const nlohmann::json& payload);

// The commands `run` accepts.
const std::vector<std::string>& commands();

}  // namespace mixshape::cli
