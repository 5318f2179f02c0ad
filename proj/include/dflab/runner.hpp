#pragma once

// Command execution: builds the model from a RunConfig, runs the requested
// computation, writes the report files into the output directory and hands
// back the report document. Exit-code convention: 0 ok, 2 config error,
// 3 numeric failure, 4 claim failure.

#include <string>

#include <json.hpp>

#include "dflab/config.hpp"

namespace dflab {

struct CommandOutcome {
  nlohmann::json report;
  int exit_code = 0;
  std::vector<std::string> files_written;
};

// command: solve-df | solve-ephf | mittleman | verify | sweep | dump-model.
// Throws ConfigError for unknown commands; numeric failures are caught and
// reported with exit code 3.
CommandOutcome run_command(const RunConfig& cfg, const std::string& command);

}  // namespace dflab
