#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlab/bridge.hpp"
#include "dlab/hitting.hpp"
#include "dlab/setgeom.hpp"
#include "dlab/timelaw.hpp"

namespace dlab {

// Two-component process X_t = (distance from t to the support, beta_t) on a grid.
struct XPath {
  double tau = 0.0;
  std::vector<double> times;
  std::vector<double> distance;
  std::vector<double> beta;
  double base_spacing = 0.0;
  // Index of the first grid point where X = (0, 0); times.size() if none.
  std::size_t first_hit_index = 0;
};

// Both components on the info path's grid. The default time lies in the
// support, so the distance there is set to exactly 0.
XPath build_x_path(const InfoPath& info, const SetDescriptor& gamma);

struct ZeroHit {
  double time = 0.0;
  bool strict = false;  // time < tau
};

struct ZeroHitOptions {
  int level = 8;
  SearchOptions search;
};

// First zero of X: the earliest level-k cover interval of the support within
// [inf / 2, tau] where beta crosses zero, else tau itself.
ZeroHit first_zero_hit(const XPath& x, const SetDescriptor& gamma, const ZeroHitOptions& options,
                       Rng& rng);

// Copy of x with a strict hit inserted as a grid point where beta = 0.
XPath with_hit(const XPath& x, const ZeroHit& hit, const SetDescriptor& gamma);

// T_n (n = 1..n_max): first grid time with |X_t| <= 1/n. Levels that are never
// reached repeat the previous entry (NaN before the first reached level).
std::vector<double> announcing_sequence(const XPath& x, int n_max);

struct ExperimentOptions {
  GridPolicy grid;
  SearchOptions search;
  double threshold = 0.05;
  bool per_atom = true;  // conditional runs per atom for atomic laws
};

struct LevelEstimate {
  int level = 0;
  double n_intervals = 0.0;
  std::size_t n_paths = 0;
  std::size_t strict_hits = 0;
  double estimate = 0.0;
  double half_width = 0.0;
  double pruned_mass = 0.0;
};

// Conditional hitting estimate for the bridge pinned at one atom.
struct AtomEstimate {
  double time = 0.0;
  double weight = 0.0;
  std::size_t n_paths = 0;
  std::size_t hits = 0;
  double estimate = 0.0;
  double half_width = 0.0;
};

struct MixtureCheck {
  double joint = 0.0;
  double mixture = 0.0;  // sum of weight * conditional estimate
  double difference = 0.0;
  double ci = 0.0;  // combined 95% half-width
  bool holds = false;
};

struct Verdict {
  bool hypothesis_holds = false;  // 0 outside the support and dimension <= 1/2
  bool consistent_with_predictable = false;
  bool positive_hitting = false;
};

struct ExperimentReport {
  std::string law_kind;
  std::uint64_t seed = 0;
  std::size_t n_paths = 0;
  double threshold = 0.0;
  double lower = 0.0;  // truncation point: half the infimum of the support
  double horizon = 0.0;
  double dimension = 0.0;
  std::vector<LevelEstimate> levels;
  std::vector<AtomEstimate> per_atom;  // at the finest level
  std::optional<MixtureCheck> mixture;
  Verdict verdict;

  const LevelEstimate& finest() const { return levels.back(); }
};

// Thrown when the law violates the experiment's hypotheses (0 in the support).
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Estimates P(first zero of X < tau) at each level from n_paths information
// paths. Levels must be nonempty and >= 0; all levels share the paths.
ExperimentReport predictability_experiment(const DefaultLaw& law, std::span<const int> levels,
                                           std::size_t n_paths, std::uint64_t seed,
                                           const ExperimentOptions& options = {});

}  // namespace dlab
