#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "dlab/random.hpp"
#include "dlab/timelaw.hpp"

namespace dlab {

// One-step law of a bridge pinned to 0 at time r, from value x at time s to time t.
struct Transition {
  double mean = 0.0;
  double variance = 0.0;
};

// Requires 0 <= s < t <= r; throws std::invalid_argument otherwise.
Transition bridge_transition(double x, double s, double t, double r);

// Value at time t of a Brownian bridge from (s, x) to (u, y), s < t < u.
double sample_between(double s, double x, double u, double y, double t, Rng& rng);

enum class GridPolicyKind { uniform, geometric_near_target };

struct GridPolicy {
  GridPolicyKind kind = GridPolicyKind::geometric_near_target;
  double horizon = 0.0;  // <= 0: derived from the law's support
  int steps = 2000;      // uniform base steps over [0, horizon]
  double ratio = 0.5;    // geometric refinement ratio towards targets
  double floor_fraction = 1e-9;  // smallest spacing, relative to the target time
  friend bool operator==(const GridPolicy&, const GridPolicy&) = default;
};

class TimeGrid {
 public:
  TimeGrid() = default;
  // Requires finite, strictly increasing times starting at 0. A nonpositive
  // base spacing is replaced by the mean spacing.
  TimeGrid(std::vector<double> times, GridPolicyKind policy, double base_spacing = 0.0);

  static TimeGrid uniform(double horizon, int steps);
  // Uniform base grid plus points target +- h * ratio^j (h the base spacing)
  // down to spacing floor_fraction * target, plus the targets themselves.
  static TimeGrid refined(double horizon, int steps, std::span<const double> targets,
                          double ratio, double floor_fraction);

  std::span<const double> times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  double operator[](std::size_t i) const { return times_[i]; }
  GridPolicyKind policy() const { return policy_; }
  // Uniform base spacing (horizon / steps).
  double base_spacing() const { return base_spacing_; }

 private:
  std::vector<double> times_;
  GridPolicyKind policy_ = GridPolicyKind::uniform;
  double base_spacing_ = 0.0;
};

struct BridgePath {
  TimeGrid grid;
  double pin = 0.0;
  std::vector<double> values;  // exact 0 at t = 0 and at every t >= pin
};

// Information process path: the bridge pinned at the realized default time.
struct InfoPath {
  double tau = 0.0;
  TimeGrid grid;
  std::vector<double> values;  // exact 0 at t = 0 and at every t >= tau
};

// Sequential exact sampling through bridge_transition.
BridgePath sample_bridge_path(double r, const TimeGrid& grid, Rng& rng);

// Horizon used when the policy leaves it unset.
double default_horizon(const DefaultLaw& law);

TimeGrid grid_for(const GridPolicy& policy, double horizon, double tau);

// Draws tau from the law, then samples the path given tau as the bridge pinned at tau.
InfoPath sample_information_path(const DefaultLaw& law, const GridPolicy& policy, Rng& rng);

// CSV rows "t,value,is_after_tau" with a header.
void write_path_csv(std::ostream& os, const InfoPath& path);

}  // namespace dlab
