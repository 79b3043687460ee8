#pragma once

// The subcommands of the `logstrain` executable. Each takes the parsed JSON
// config, writes its CSV output under `out_dir`, and returns the JSON summary.

#include <cstdint>
#include <exception>
#include <string>

#include "logstrain/config.hpp"

namespace logstrain {

struct CommandOptions {
  std::string out_dir = ".";
  int threads = 0;  // 0 = hardware concurrency
  std::uint64_t seed = 0;
};

Json cmd_eval(const Json& config, const CommandOptions& options);
Json cmd_counterexample(const Json& config, const CommandOptions& options);
Json cmd_scan(const Json& config, const CommandOptions& options);
Json cmd_path(const Json& config, const CommandOptions& options);
Json cmd_compare(const Json& config, const CommandOptions& options);

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitDomain = 3,
  kExitIo = 4,
  kExitNonConvergence = 5,
};

// Maps an exception thrown by a command to the process exit code.
int exit_code_for(const std::exception& e);

}  // namespace logstrain
