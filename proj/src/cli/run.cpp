#include "dlab/cli/run.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "dlab/parallel.hpp"
#include "dlab/potential.hpp"
#include "dlab/predict.hpp"

#ifndef DLAB_VERSION
#define DLAB_VERSION "0.0.0"
#endif

namespace dlab::cli {

using nlohmann::json;

namespace {

// Number of simulated paths written out in full by the simulate command.
constexpr std::size_t kPathsWritten = 20;

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

class Output {
 public:
  explicit Output(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw RunError("output: cannot create " + dir_.string() + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& contents) {
    std::ofstream out(dir_ / name, std::ios::binary);
    out << contents;
    if (!out) throw RunError("output: cannot write " + (dir_ / name).string());
  }

  void csv(const std::string& name, const std::string& contents) {
    write(name, contents);
    files_.push_back(name);
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

json run_capacity(const RunConfig& c, Output& out) {
  const auto reports = capacity_vs_level(*c.set, c.s, c.levels, c.tolerance);
  std::string table = "k,n_intervals,min_energy,capacity\n";
  json rows = json::array();
  for (const EnergyReport& r : reports) {
    table += fmt::format("{},{},{},{}\n", r.level, r.n_intervals, num(r.energy), num(r.capacity));
    rows.push_back({{"level", r.level},
                    {"n_intervals", r.n_intervals},
                    {"energy", finite_or_null(r.energy)},
                    {"infinite", r.infinite},
                    {"capacity", r.capacity},
                    {"iterations", r.iterations},
                    {"achieved_tolerance", r.achieved_tolerance},
                    {"converged", r.converged}});
  }
  out.csv("capacity.csv", table);
  return {{"s", c.s},
          {"set", set_to_json(*c.set)},
          {"dimension", hausdorff_dimension_analytic(*c.set)},
          {"levels", rows}};
}

json run_hitting(const RunConfig& c, Output& out) {
  HittingOptions opt;
  opt.search = c.search;
  opt.background_steps = c.background_steps;
  const auto estimates = hitting_vs_level_report(*c.set, c.pin, c.levels, c.n_paths, c.seed, opt);
  std::string table = "level,n_intervals,n_paths,estimate,ci_halfwidth,seed\n";
  json rows = json::array();
  for (const HittingEstimate& e : estimates) {
    table += fmt::format("{},{},{},{},{},{}\n", e.level, num(e.n_intervals), e.n_paths,
                         num(e.estimate), num(e.half_width), e.seed);
    rows.push_back({{"level", e.level},
                    {"n_intervals", e.n_intervals},
                    {"n_paths", e.n_paths},
                    {"hits", e.hits},
                    {"estimate", e.estimate},
                    {"ci_halfwidth", e.half_width},
                    {"pruned_mass", e.pruned_mass}});
  }
  out.csv("hitting.csv", table);
  return {{"set", set_to_json(*c.set)}, {"pin", c.pin}, {"levels", rows}};
}

json run_experiment(const RunConfig& c, Output& out) {
  ExperimentOptions opt;
  opt.grid = c.grid;
  opt.search = c.search;
  opt.threshold = c.threshold;
  const ExperimentReport rep = predictability_experiment(*c.law, c.levels, c.n_paths, c.seed, opt);

  std::string table = "level,n_intervals,n_paths,estimate,ci_halfwidth,pruned_mass\n";
  json levels = json::array();
  for (const LevelEstimate& e : rep.levels) {
    table += fmt::format("{},{},{},{},{},{}\n", e.level, num(e.n_intervals), e.n_paths,
                         num(e.estimate), num(e.half_width), num(e.pruned_mass));
    levels.push_back({{"level", e.level},
                      {"n_intervals", e.n_intervals},
                      {"n_paths", e.n_paths},
                      {"strict_hits", e.strict_hits},
                      {"estimate", e.estimate},
                      {"ci_halfwidth", e.half_width},
                      {"pruned_mass", e.pruned_mass}});
  }
  out.csv("experiment.csv", table);

  json result = {{"law", law_to_json(*c.law)},
                 {"support", set_to_json(support_of(*c.law))},
                 {"dimension", rep.dimension},
                 {"lower", rep.lower},
                 {"horizon", rep.horizon},
                 {"threshold", rep.threshold},
                 {"estimate", rep.finest().estimate},
                 {"ci_halfwidth", rep.finest().half_width},
                 {"levels", levels},
                 {"verdict",
                  {{"hypothesis_holds", rep.verdict.hypothesis_holds},
                   {"consistent_with_predictable", rep.verdict.consistent_with_predictable},
                   {"positive_hitting", rep.verdict.positive_hitting}}}};

  if (!rep.per_atom.empty()) {
    std::string atoms = "time,weight,n_paths,estimate,ci_halfwidth\n";
    json rows = json::array();
    for (const AtomEstimate& a : rep.per_atom) {
      atoms += fmt::format("{},{},{},{},{}\n", num(a.time), num(a.weight), a.n_paths,
                           num(a.estimate), num(a.half_width));
      rows.push_back({{"time", a.time},
                      {"weight", a.weight},
                      {"n_paths", a.n_paths},
                      {"hits", a.hits},
                      {"estimate", a.estimate},
                      {"ci_halfwidth", a.half_width}});
    }
    out.csv("per_atom.csv", atoms);
    result["per_atom"] = rows;
  }
  if (rep.mixture) {
    const MixtureCheck& m = *rep.mixture;
    result["mixture"] = {{"joint", m.joint},
                         {"mixture", m.mixture},
                         {"difference", m.difference},
                         {"ci", m.ci},
                         {"holds", m.holds}};
  }
  return result;
}

struct SimulatedPath {
  double tau = 0.0;
  ZeroHit hit;
  double announce_max = 0.0;
  double base_spacing = 0.0;
  std::size_t zero_set_violations = 0;
  bool announce_monotone = true;
  bool announce_below_hit = true;
  InfoPath info;
};

json run_simulate(const RunConfig& c, Output& out) {
  const SetDescriptor gamma = support_of(*c.law);
  GridPolicy grid = c.grid;
  if (!(grid.horizon > 0.0)) grid.horizon = default_horizon(*c.law);
  const ZeroHitOptions zopt{c.levels.back(), c.search};

  std::vector<SimulatedPath> paths(c.n_paths);
  parallel_for(c.n_paths, [&](std::size_t i) {
    Rng rng = Rng::stream(c.seed, i);
    SimulatedPath& p = paths[i];
    p.info = sample_information_path(*c.law, grid, rng);
    p.tau = p.info.tau;
    for (std::size_t j = 0; j < p.info.grid.size(); ++j) {
      const double t = p.info.grid[j];
      if (t > 0.0 && ((p.info.values[j] == 0.0) != (t >= p.tau))) ++p.zero_set_violations;
    }
    const XPath x = build_x_path(p.info, gamma);
    p.base_spacing = x.base_spacing;
    Rng search = Rng::stream(c.seed ^ kSaltSearch, i);
    p.hit = first_zero_hit(x, gamma, zopt, search);
    const std::vector<double> seq = announcing_sequence(with_hit(x, p.hit, gamma), c.n_max);
    p.announce_max = seq.back();
    for (std::size_t n = 0; n < seq.size(); ++n) {
      if (n > 0 && seq[n] < seq[n - 1]) p.announce_monotone = false;
      if (seq[n] > p.hit.time) p.announce_below_hit = false;
    }
    if (i >= kPathsWritten) p.info = InfoPath{};
  });

  std::string table = "path,t,value,is_after_tau\n";
  for (std::size_t i = 0; i < std::min(kPathsWritten, c.n_paths); ++i) {
    const InfoPath& info = paths[i].info;
    for (std::size_t j = 0; j < info.grid.size(); ++j)
      table += fmt::format("{},{},{},{}\n", i, num(info.grid[j]), num(info.values[j]),
                           info.grid[j] >= info.tau ? 1 : 0);
  }
  out.csv("paths.csv", table);

  std::string summary = "path,tau,first_zero,strict,announce_max,gap_spacings\n";
  std::size_t violations = 0, strict = 0, non_monotone = 0, above_hit = 0;
  double tau_sum = 0.0, max_gap = 0.0;
  for (std::size_t i = 0; i < c.n_paths; ++i) {
    const SimulatedPath& p = paths[i];
    const double gap = (p.hit.time - p.announce_max) / p.base_spacing;
    summary += fmt::format("{},{},{},{},{},{}\n", i, num(p.tau), num(p.hit.time),
                           p.hit.strict ? 1 : 0, num(p.announce_max), num(gap));
    violations += p.zero_set_violations;
    strict += p.hit.strict ? 1 : 0;
    non_monotone += p.announce_monotone ? 0 : 1;
    above_hit += p.announce_below_hit ? 0 : 1;
    tau_sum += p.tau;
    if (std::isfinite(gap)) max_gap = std::max(max_gap, gap);
  }
  out.csv("xpaths.csv", summary);

  const double n = static_cast<double>(c.n_paths);
  return {{"law", law_to_json(*c.law)},
          {"n_paths", c.n_paths},
          {"level", zopt.level},
          {"n_max", c.n_max},
          {"horizon", grid.horizon},
          {"mean_tau", tau_sum / n},
          {"zero_set_violations", violations},
          {"strict_fraction", static_cast<double>(strict) / n},
          {"announcing",
           {{"non_monotone_paths", non_monotone},
            {"paths_above_first_zero", above_hit},
            {"max_gap_spacings", max_gap}}}};
}

}  // namespace

std::string tool_version() { return DLAB_VERSION; }

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw RunError("sha256: digest failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

RunReport run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const std::string command(command_name(config.command));

  // The output location does not affect results, so it stays out of the echo.
  json echo = serialize(config);
  echo.erase("output_dir");

  RunReport rr;
  rr.version = tool_version();
  rr.config_hash = sha256_hex(echo.dump());
  Output out(config.output_dir);

  json results;
  try {
    switch (config.command) {
      case Command::simulate: results = run_simulate(config, out); break;
      case Command::capacity: results = run_capacity(config, out); break;
      case Command::hitting: results = run_hitting(config, out); break;
      case Command::experiment: results = run_experiment(config, out); break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const RunError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(command + ": " + e.what());
  } catch (const std::exception& e) {
    throw RunError(command + ": " + e.what());
  }

  rr.csv_files = out.files();
  rr.report = {{"tool", "dlab"},
               {"version", rr.version},
               {"command", command},
               {"seed", config.seed},
               {"config", echo},
               {"config_hash", rr.config_hash},
               {"results", results},
               {"artifacts", rr.csv_files}};
  out.write("report.json", rr.report.dump(2) + "\n");
  rr.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rr;
}

}  // namespace dlab::cli
