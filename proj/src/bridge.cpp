#include "dlab/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "dlab/setgeom.hpp"

namespace dlab {

Transition bridge_transition(double x, double s, double t, double r) {
  if (!(s >= 0.0) || !(s < t)) throw std::invalid_argument("bridge_transition: need 0 <= s < t");
  if (t > r) throw std::invalid_argument("bridge_transition: t must not exceed the pin time");
  const double span = r - s;
  return {x * (r - t) / span, (t - s) * (r - t) / span};
}

double sample_between(double s, double x, double u, double y, double t, Rng& rng) {
  const double span = u - s;
  const double mean = x + (y - x) * (t - s) / span;
  const double var = (t - s) * (u - t) / span;
  return mean + std::sqrt(std::max(var, 0.0)) * rng.normal();
}

TimeGrid::TimeGrid(std::vector<double> times, GridPolicyKind policy, double base_spacing)
    : times_(std::move(times)), policy_(policy), base_spacing_(base_spacing) {
  if (times_.empty() || times_.front() != 0.0)
    throw std::invalid_argument("TimeGrid: must start at t = 0");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!std::isfinite(times_[i]) || !(times_[i - 1] < times_[i]))
      throw std::invalid_argument("TimeGrid: times must be finite and strictly increasing");
  if (!(base_spacing_ > 0.0) && times_.size() > 1)
    base_spacing_ = times_.back() / static_cast<double>(times_.size() - 1);
}

TimeGrid TimeGrid::uniform(double horizon, int steps) {
  if (!(horizon > 0.0) || steps < 1)
    throw std::invalid_argument("TimeGrid::uniform: need horizon > 0 and steps >= 1");
  std::vector<double> t(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) t[static_cast<std::size_t>(i)] = horizon * i / steps;
  return TimeGrid(std::move(t), GridPolicyKind::uniform, horizon / steps);
}

TimeGrid TimeGrid::refined(double horizon, int steps, std::span<const double> targets,
                           double ratio, double floor_fraction) {
  if (!(ratio > 0.0 && ratio < 1.0) || !(floor_fraction > 0.0))
    throw std::invalid_argument("TimeGrid::refined: need 0 < ratio < 1 and floor_fraction > 0");
  const TimeGrid base = uniform(horizon, steps);
  std::vector<double> t(base.times_.begin(), base.times_.end());
  const double h = base.base_spacing_;
  for (double c : targets) {
    if (!(c > 0.0) || c > horizon) continue;
    t.push_back(c);
    const double floor = floor_fraction * c;
    for (double d = h * ratio; d >= floor; d *= ratio) {
      if (c - d > 0.0) t.push_back(c - d);
      if (c + d <= horizon) t.push_back(c + d);
    }
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return TimeGrid(std::move(t), GridPolicyKind::geometric_near_target, h);
}

BridgePath sample_bridge_path(double r, const TimeGrid& grid, Rng& rng) {
  if (!(r > 0.0)) throw std::invalid_argument("sample_bridge_path: pin time must be positive");
  BridgePath path{grid, r, std::vector<double>(grid.size(), 0.0)};
  double s = 0.0, x = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double t = grid[i];
    if (t >= r) break;  // zero sentinel from here on
    const Transition tr = bridge_transition(x, s, t, r);
    x = tr.mean + std::sqrt(tr.variance) * rng.normal();
    s = t;
    path.values[i] = x;
  }
  return path;
}

double default_horizon(const DefaultLaw& law) {
  const SetDescriptor support = support_of(law);
  if (const auto* e = std::get_if<ExponentialLaw>(&law.params()))
    return -std::log(1e-3) / e->rate;
  return support.sup();
}

TimeGrid grid_for(const GridPolicy& policy, double horizon, double tau) {
  if (policy.kind == GridPolicyKind::uniform) {
    // The default time is always a grid node so that the zero set starts on the grid.
    const TimeGrid base = TimeGrid::uniform(horizon, policy.steps);
    std::vector<double> t(base.times().begin(), base.times().end());
    if (tau > 0.0 && tau <= horizon) t.push_back(tau);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return TimeGrid(std::move(t), GridPolicyKind::uniform, base.base_spacing());
  }
  const double targets[] = {tau};
  return TimeGrid::refined(horizon, policy.steps, targets, policy.ratio, policy.floor_fraction);
}

InfoPath sample_information_path(const DefaultLaw& law, const GridPolicy& policy, Rng& rng) {
  const double tau = sample_default_time(law, rng);
  const double horizon = policy.horizon > 0.0 ? policy.horizon : default_horizon(law);
  TimeGrid grid = grid_for(policy, horizon, tau);
  BridgePath bridge = sample_bridge_path(tau, grid, rng);
  return InfoPath{tau, std::move(bridge.grid), std::move(bridge.values)};
}

void write_path_csv(std::ostream& os, const InfoPath& path) {
  os << "t,value,is_after_tau\n";
  char buf[64];
  for (std::size_t i = 0; i < path.grid.size(); ++i) {
    const double t = path.grid[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", t, path.values[i], t >= path.tau ? 1 : 0);
    os << buf;
  }
}

}  // namespace dlab
