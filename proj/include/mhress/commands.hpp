#pragma once

// The five tool commands. Each loads the config, writes its artifacts into the
// output directory and maps the outcome to an exit code.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mhress {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNotCertified = 2,
  kExitInternal = 3,
};

struct CommandOptions {
  std::string command;
  std::optional<std::string> config_path;
  std::vector<std::string> overrides;  // KEY=VAL
  std::string out_dir = ".";
  std::string format = "both";         // csv | json | both
  std::optional<std::string> trace_path;
};

const char* tool_version();
const std::vector<std::string>& command_names();

/// Runs one command; progress and verdicts go to `out`, diagnostics to `err`.
int run_command(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace mhress
