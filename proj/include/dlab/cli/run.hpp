#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dlab/cli/config.hpp"

namespace dlab::cli {

// Module failure during a run, prefixed with the command name.
class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunReport {
  std::string config_hash;  // SHA-256 of the compact dump of report["config"]
  std::string version;
  nlohmann::json report;  // contents of report.json
  std::vector<std::string> csv_files;  // names relative to the output directory
  double wall_seconds = 0.0;  // kept out of the written files
};

std::string tool_version();

// Hex SHA-256 digest.
std::string sha256_hex(const std::string& bytes);

// Executes the configured study and writes report.json and its CSV tables into
// config.output_dir (created if needed). Throws ConfigError or RunError.
RunReport run(const RunConfig& config);

}  // namespace dlab::cli
