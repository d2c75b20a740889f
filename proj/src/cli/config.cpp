#include <fstream>
#include <initializer_list>

#include "dlab/cli/config.hpp"

namespace dlab::cli {

using nlohmann::json;

namespace {

std::string join(std::string_view prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : std::string(prefix) + "." + std::string(key);
}

const json& require_object(const json& doc, std::string_view where) {
  if (!doc.is_object())
    throw ConfigError(std::string(where.empty() ? "config" : where) + ": expected a JSON object");
  return doc;
}

void reject_unknown(const json& obj, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (std::string_view k : allowed) known = known || item.key() == k;
    if (!known) throw ConfigError(join(where, item.key()) + ": unknown key");
  }
}

const json& member(const json& obj, std::string_view where, const char* key) {
  if (!obj.contains(key)) throw ConfigError(join(where, key) + ": required key is missing");
  return obj.at(key);
}

double as_double(const json& v, const std::string& name) {
  if (!v.is_number()) throw ConfigError(name + ": expected a number");
  return v.get<double>();
}

long long as_integer(const json& v, const std::string& name) {
  if (!v.is_number_integer()) throw ConfigError(name + ": expected an integer");
  return v.get<long long>();
}

std::vector<double> as_doubles(const json& v, const std::string& name) {
  if (!v.is_array()) throw ConfigError(name + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(as_double(x, name));
  return out;
}

double get_double(const json& obj, std::string_view where, const char* key) {
  return as_double(member(obj, where, key), join(where, key));
}

int get_int(const json& obj, std::string_view where, const char* key) {
  return static_cast<int>(as_integer(member(obj, where, key), join(where, key)));
}

template <typename Build>
auto wrap(std::string_view where, Build&& build) {
  try {
    return build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(where) + ": " + e.what());
  }
}

DefaultLaw parse_law(const json& doc) {
  const std::string where = "law";
  require_object(doc, where);
  const json& kind_v = member(doc, where, "kind");
  if (!kind_v.is_string()) throw ConfigError("law.kind: expected a string");
  const std::string kind = kind_v.get<std::string>();
  if (kind == "atomic") {
    reject_unknown(doc, where, {"kind", "times", "weights"});
    auto times = as_doubles(member(doc, where, "times"), "law.times");
    auto weights = as_doubles(member(doc, where, "weights"), "law.weights");
    return wrap(where, [&] { return DefaultLaw::atomic(std::move(times), std::move(weights)); });
  }
  if (kind == "uniform") {
    reject_unknown(doc, where, {"kind", "left", "right"});
    const double l = get_double(doc, where, "left"), r = get_double(doc, where, "right");
    return wrap(where, [&] { return DefaultLaw::uniform(l, r); });
  }
  if (kind == "exponential") {
    reject_unknown(doc, where, {"kind", "rate"});
    const double rate = get_double(doc, where, "rate");
    return wrap(where, [&] { return DefaultLaw::exponential(rate); });
  }
  if (kind == "cantor") {
    reject_unknown(doc, where, {"kind", "left", "right", "branches", "ratio"});
    const double l = get_double(doc, where, "left"), r = get_double(doc, where, "right");
    const int m = get_int(doc, where, "branches");
    const double rho = get_double(doc, where, "ratio");
    return wrap(where, [&] { return DefaultLaw::cantor(l, r, m, rho); });
  }
  throw ConfigError("law.kind: unknown law '" + kind + "'");
}

SetDescriptor parse_set(const json& doc) {
  const std::string where = "set";
  require_object(doc, where);
  const json& kind_v = member(doc, where, "variant");
  if (!kind_v.is_string()) throw ConfigError("set.variant: expected a string");
  const std::string kind = kind_v.get<std::string>();
  if (kind == "empty") {
    reject_unknown(doc, where, {"variant"});
    return SetDescriptor::empty();
  }
  if (kind == "points") {
    reject_unknown(doc, where, {"variant", "points"});
    auto pts = as_doubles(member(doc, where, "points"), "set.points");
    return wrap(where, [&] { return SetDescriptor::points(std::move(pts)); });
  }
  if (kind == "intervals") {
    reject_unknown(doc, where, {"variant", "intervals"});
    const json& arr = member(doc, where, "intervals");
    if (!arr.is_array()) throw ConfigError("set.intervals: expected an array of [left, right] pairs");
    std::vector<Interval> ivs;
    for (const auto& p : arr) {
      const auto lr = as_doubles(p, "set.intervals");
      if (lr.size() != 2) throw ConfigError("set.intervals: expected [left, right] pairs");
      ivs.push_back({lr[0], lr[1]});
    }
    return wrap(where, [&] { return SetDescriptor::intervals(std::move(ivs)); });
  }
  if (kind == "cantor") {
    reject_unknown(doc, where, {"variant", "left", "right", "branches", "ratio"});
    const double l = get_double(doc, where, "left"), r = get_double(doc, where, "right");
    const int m = get_int(doc, where, "branches");
    const double rho = get_double(doc, where, "ratio");
    return wrap(where, [&] { return SetDescriptor::cantor(l, r, m, rho); });
  }
  throw ConfigError("set.variant: unknown set '" + kind + "'");
}

GridPolicy parse_grid(const json& doc) {
  const std::string where = "grid";
  require_object(doc, where);
  reject_unknown(doc, where, {"kind", "horizon", "steps", "ratio", "floor_fraction"});
  GridPolicy g;
  if (doc.contains("kind")) {
    const json& k = doc.at("kind");
    if (k == "uniform")
      g.kind = GridPolicyKind::uniform;
    else if (k == "geometric")
      g.kind = GridPolicyKind::geometric_near_target;
    else
      throw ConfigError("grid.kind: expected \"uniform\" or \"geometric\"");
  }
  if (doc.contains("horizon")) g.horizon = get_double(doc, where, "horizon");
  if (doc.contains("steps")) g.steps = get_int(doc, where, "steps");
  if (doc.contains("ratio")) g.ratio = get_double(doc, where, "ratio");
  if (doc.contains("floor_fraction")) g.floor_fraction = get_double(doc, where, "floor_fraction");
  if (g.steps < 1) throw ConfigError("grid.steps: must be >= 1");
  if (!(g.ratio > 0.0 && g.ratio < 1.0)) throw ConfigError("grid.ratio: must lie in (0, 1)");
  if (!(g.floor_fraction > 0.0)) throw ConfigError("grid.floor_fraction: must be positive");
  if (g.horizon < 0.0) throw ConfigError("grid.horizon: must be >= 0 (0 derives it from the law)");
  return g;
}

SearchOptions parse_search(const json& doc) {
  const std::string where = "search";
  require_object(doc, where);
  reject_unknown(doc, where, {"prune_below", "floor_fraction"});
  SearchOptions o;
  if (doc.contains("prune_below")) o.prune_below = get_double(doc, where, "prune_below");
  if (doc.contains("floor_fraction")) o.floor_fraction = get_double(doc, where, "floor_fraction");
  if (!(o.prune_below >= 0.0 && o.prune_below < 1.0))
    throw ConfigError("search.prune_below: must lie in [0, 1)");
  if (!(o.floor_fraction > 0.0 && o.floor_fraction < 1.0))
    throw ConfigError("search.floor_fraction: must lie in (0, 1)");
  return o;
}

Command parse_command(const json& v) {
  if (!v.is_string()) throw ConfigError("command: expected a string");
  const std::string c = v.get<std::string>();
  if (c == "simulate") return Command::simulate;
  if (c == "capacity") return Command::capacity;
  if (c == "hitting") return Command::hitting;
  if (c == "experiment") return Command::experiment;
  throw ConfigError("command: unknown command '" + c +
                    "' (expected simulate, capacity, hitting or experiment)");
}

}  // namespace

std::string_view command_name(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::capacity: return "capacity";
    case Command::hitting: return "hitting";
    case Command::experiment: return "experiment";
  }
  return "unknown";
}

RunConfig parse_config(const json& doc) {
  require_object(doc, "");
  reject_unknown(doc, "",
                 {"command", "seed", "law", "set", "levels", "n_paths", "s", "tolerance", "pin",
                  "threshold", "background_steps", "n_max", "grid", "search", "output_dir"});
  RunConfig c;
  c.command = parse_command(member(doc, "", "command"));
  const json& seed = member(doc, "", "seed");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
    throw ConfigError("seed: expected a nonnegative integer");
  c.seed = seed.get<std::uint64_t>();

  if (doc.contains("law")) c.law = parse_law(doc.at("law"));
  if (doc.contains("set")) c.set = parse_set(doc.at("set"));
  if (doc.contains("levels")) {
    const json& lv = doc.at("levels");
    if (!lv.is_array() || lv.empty()) throw ConfigError("levels: expected a nonempty array");
    c.levels.clear();
    for (const auto& k : lv) {
      const long long v = as_integer(k, "levels");
      if (v < 0 || v > 64) throw ConfigError("levels: each level must lie in [0, 64]");
      c.levels.push_back(static_cast<int>(v));
    }
  }
  if (doc.contains("n_paths")) {
    const long long n = as_integer(doc.at("n_paths"), "n_paths");
    if (n < 1) throw ConfigError("n_paths: must be >= 1");
    c.n_paths = static_cast<std::size_t>(n);
  }
  if (doc.contains("s")) c.s = get_double(doc, "", "s");
  if (doc.contains("tolerance")) c.tolerance = get_double(doc, "", "tolerance");
  if (doc.contains("pin")) c.pin = get_double(doc, "", "pin");
  if (doc.contains("threshold")) c.threshold = get_double(doc, "", "threshold");
  if (doc.contains("background_steps")) c.background_steps = get_int(doc, "", "background_steps");
  if (doc.contains("n_max")) c.n_max = get_int(doc, "", "n_max");
  if (doc.contains("grid")) c.grid = parse_grid(doc.at("grid"));
  if (doc.contains("search")) c.search = parse_search(doc.at("search"));
  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) throw ConfigError("output_dir: expected a string");
    c.output_dir = doc.at("output_dir").get<std::string>();
  }

  if (!(c.s > 0.0 && c.s < 1.0)) throw ConfigError("s: must lie in (0, 1)");
  if (!(c.tolerance > 0.0)) throw ConfigError("tolerance: must be positive");
  if (!(c.pin > 0.0)) throw ConfigError("pin: must be positive");
  if (!(c.threshold > 0.0 && c.threshold < 1.0)) throw ConfigError("threshold: must lie in (0, 1)");
  if (c.background_steps < 0) throw ConfigError("background_steps: must be >= 0");
  if (c.n_max < 1) throw ConfigError("n_max: must be >= 1");

  const bool needs_law = c.command == Command::simulate || c.command == Command::experiment;
  if (needs_law && !c.law)
    throw ConfigError("law: required by the " + std::string(command_name(c.command)) + " command");
  if (!needs_law && !c.set)
    throw ConfigError("set: required by the " + std::string(command_name(c.command)) + " command");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: invalid JSON in " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace dlab::cli
