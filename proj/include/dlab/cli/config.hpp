#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dlab/bridge.hpp"
#include "dlab/hitting.hpp"
#include "dlab/setgeom.hpp"
#include "dlab/timelaw.hpp"

namespace dlab::cli {

// Invalid configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { simulate, capacity, hitting, experiment };

std::string_view command_name(Command c);

struct RunConfig {
  Command command = Command::experiment;
  std::uint64_t seed = 0;
  std::optional<DefaultLaw> law;     // simulate, experiment
  std::optional<SetDescriptor> set;  // capacity, hitting
  std::vector<int> levels{2, 4, 8};
  std::size_t n_paths = 10000;
  double s = 0.5;
  double tolerance = 1e-8;
  double pin = 1.0;  // hitting: pin time r of the bridge
  double threshold = 0.05;
  int background_steps = 0;
  int n_max = 1000;  // simulate: announcing-sequence length
  GridPolicy grid;
  SearchOptions search;
  std::string output_dir = "out";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Parses and validates a configuration document. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);

// Reads a JSON file and parses it. Throws ConfigError for unreadable files too.
RunConfig load_config(const std::filesystem::path& path);

// Canonical JSON form; parse_config(serialize(c)) == c.
nlohmann::json serialize(const RunConfig& config);

nlohmann::json law_to_json(const DefaultLaw& law);
nlohmann::json set_to_json(const SetDescriptor& set);

}  // namespace dlab::cli
