#pragma once

#include <string>
#include <vector>

#include "woldlab/tolerance.hpp"

namespace woldlab {

enum class OutputFormat { json, text };

struct RunConfig {
  std::string command;              // wold | wander | pair | spectral | catalog
  std::vector<std::string> inputs;  // file paths or catalog:<name>
  int depth = kDefaultDepth;
  int horizon = kDefaultDepth;
  OutputFormat format = OutputFormat::json;
  std::string vector;  // inline HVector for `wander`
  bool strong = false;
};

/// Exit codes.
inline constexpr int kExitDecided = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUndecided = 2;

struct RunResult {
  int exit_code = kExitDecided;
  std::string report;  // empty on invalid input
  std::string error;
};

RunResult run(const RunConfig& config);

}  // namespace woldlab
