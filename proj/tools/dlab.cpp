#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "dlab/cli/config.hpp"
#include "dlab/cli/run.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Default-time predictability lab: bridge simulation, capacities, hitting, experiments"};
  app.set_version_flag("--version", dlab::cli::tool_version());

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> paths;
  std::optional<int> level;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--seed", seed, "Override the master seed");
  app.add_option("--out", out_dir, "Override the output directory");
  app.add_option("--paths", paths, "Override the number of paths")->check(CLI::PositiveNumber);
  app.add_option("--level", level, "Run a single cover level")->check(CLI::Range(0, 64));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    dlab::cli::RunConfig config = dlab::cli::load_config(config_path);
    if (seed) config.seed = *seed;
    if (out_dir) config.output_dir = *out_dir;
    if (paths) config.n_paths = *paths;
    if (level) config.levels = {*level};

    const dlab::cli::RunReport report = dlab::cli::run(config);
    std::cout << "wrote " << config.output_dir << "/report.json";
    for (const auto& f : report.csv_files) std::cout << ", " << f;
    std::cout << "\nconfig sha256 " << report.config_hash << "\n";
    std::cerr << "wall time " << report.wall_seconds << " s\n";
    return 0;
  } catch (const dlab::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
