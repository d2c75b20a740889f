#include "dlab/cli/config.hpp"

namespace dlab::cli {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json cantor_json(const CantorSet& c, const char* tag) {
  return {{tag, "cantor"},
          {"left", c.left},
          {"right", c.right},
          {"branches", c.branches},
          {"ratio", c.ratio}};
}

}  // namespace

json law_to_json(const DefaultLaw& law) {
  return std::visit(
      overloaded{
          [](const AtomicLaw& a) -> json {
            return {{"kind", "atomic"}, {"times", a.times}, {"weights", a.weights}};
          },
          [](const UniformLaw& u) -> json {
            return {{"kind", "uniform"}, {"left", u.left}, {"right", u.right}};
          },
          [](const ExponentialLaw& e) -> json { return {{"kind", "exponential"}, {"rate", e.rate}}; },
          [](const CantorLaw& c) { return cantor_json(c.set, "kind"); }},
      law.params());
}

json set_to_json(const SetDescriptor& set) {
  if (set.is_empty()) return {{"variant", "empty"}};
  return std::visit(overloaded{[](const FinitePoints& p) -> json {
                                 return {{"variant", "points"}, {"points", p.points}};
                               },
                               [](const IntervalUnion& u) -> json {
                                 json ivs = json::array();
                                 for (const auto& iv : u.intervals)
                                   ivs.push_back(json::array({iv.left, iv.right}));
                                 return {{"variant", "intervals"}, {"intervals", ivs}};
                               },
                               [](const CantorSet& c) { return cantor_json(c, "variant"); }},
                    set.variant());
}

json serialize(const RunConfig& c) {
  json doc;
  doc["command"] = std::string(command_name(c.command));
  doc["seed"] = c.seed;
  if (c.law) doc["law"] = law_to_json(*c.law);
  if (c.set) doc["set"] = set_to_json(*c.set);
  doc["levels"] = c.levels;
  doc["n_paths"] = c.n_paths;
  doc["s"] = c.s;
  doc["tolerance"] = c.tolerance;
  doc["pin"] = c.pin;
  doc["threshold"] = c.threshold;
  doc["background_steps"] = c.background_steps;
  doc["n_max"] = c.n_max;
  doc["grid"] = {{"kind", c.grid.kind == GridPolicyKind::uniform ? "uniform" : "geometric"},
                 {"horizon", c.grid.horizon},
                 {"steps", c.grid.steps},
                 {"ratio", c.grid.ratio},
                 {"floor_fraction", c.grid.floor_fraction}};
  doc["search"] = {{"prune_below", c.search.prune_below},
                   {"floor_fraction", c.search.floor_fraction}};
  doc["output_dir"] = c.output_dir;
  return doc;
}

}  // namespace dlab::cli
