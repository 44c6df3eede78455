#pragma once

#include <string>
#include <vector>

#include "specflow/config.hpp"
#include "specflow/error.hpp"

namespace specflow::cli {

struct Report {
  config::json summary;
  std::string csv;
  std::string svg;
  int exit_code = 0;  // 1 when a verified property failed
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand. Throws Error for malformed input or violated preconditions.
Report execute(const std::string& subcommand, const config::ExperimentConfig& cfg);

/// 2 malformed input, 3 precondition violation, 1 assertion failure.
int exit_code_for(ErrorKind kind);

/// Entry point of the command-line tool.
int run(int argc, char** argv);

}  // namespace specflow::cli
