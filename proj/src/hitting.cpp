#include "dlab/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "dlab/bridge.hpp"
#include "dlab/parallel.hpp"

namespace dlab {

double crossing_probability(double a, double b, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("crossing_probability: delta must be positive");
  if (a * b <= 0.0) return 1.0;
  return std::exp(-2.0 * a * b / delta);
}

namespace {

// Inverse Gaussian with mean mu and shape lambda (Michael, Schucany and Haas),
// with the root rewritten to avoid cancellation when mu * y / lambda is large.
double sample_inverse_gaussian(double mu, double lambda, Rng& rng) {
  const double z = rng.normal();
  const double w = mu * z * z / (2.0 * lambda);
  const double x = mu / (1.0 + w + std::sqrt(w * w + 2.0 * w));
  return rng.uniform() * (mu + x) <= mu ? x : mu * mu / x;
}

}  // namespace

double sample_first_zero(double a, double b, double delta, Rng& rng) {
  if (!(delta > 0.0)) throw std::invalid_argument("sample_first_zero: delta must be positive");
  if (a == 0.0) return 0.0;
  const double root = std::sqrt(delta);
  const double start = std::abs(a) / root;
  const double drift = std::abs(b) / root;
  double passage = 0.0;
  if (drift == 0.0) {
    const double z = rng.normal();
    passage = start * start / (z * z);
  } else {
    passage = sample_inverse_gaussian(start / drift, start * start, rng);
  }
  return std::min(delta * passage / (1.0 + passage), delta);
}

namespace {

struct Knot {
  double t;
  double v;
};

using Knots = std::vector<Knot>;

// Value at t, sampled from the neighbouring knots and recorded when new.
// t must lie within [front.t, back.t].
double value_at(Knots& knots, double t, Rng& rng) {
  auto it = std::lower_bound(knots.begin(), knots.end(), t,
                             [](const Knot& k, double x) { return k.t < x; });
  if (it != knots.end() && it->t == t) return it->v;
  const Knot hi = *it;
  const Knot lo = *(it - 1);
  const double v = sample_between(lo.t, lo.v, hi.t, hi.v, t, rng);
  knots.insert(it, Knot{t, v});
  return v;
}

// Knots inside [left, right] shifted to start at 0; both ends must be knots.
Knots slice(const Knots& knots, double left, double right) {
  auto lo = std::lower_bound(knots.begin(), knots.end(), left,
                             [](const Knot& k, double x) { return k.t < x; });
  Knots out;
  for (auto it = lo; it != knots.end() && it->t <= right; ++it) out.push_back({it->t - left, it->v});
  return out;
}

double crossing_mass(const Knots& knots) {
  double log_survival = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double p = crossing_probability(knots[i].v, knots[i + 1].v, knots[i + 1].t - knots[i].t);
    if (p >= 1.0) return 1.0;
    log_survival += std::log1p(-p);
  }
  return -std::expm1(log_survival);
}

class CoverSearch {
 public:
  CoverSearch(const CantorSet* cantor, const SearchOptions& options, Rng& rng, SearchOutcome& out)
      : cantor_(cantor), options_(options), rng_(rng), out_(out) {}

  // First zero on the cover of a node lying entirely before the pin, as an offset.
  std::optional<double> complete(Knots knots, int remaining) {
    ++out_.nodes;
    if (remaining == 0 || cantor_ == nullptr) return fire(knots);
    const double mass = crossing_mass(knots);
    if (mass < options_.prune_below) {
      out_.pruned_mass += mass;
      return std::nullopt;
    }
    const double length = knots.back().t;
    const int m = cantor_->branches;
    std::vector<double> bounds;
    bounds.reserve(2 * static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      const double left = j == 0 ? 0.0 : cantor_->child_offset(j, length);
      const double right = j == m - 1 ? length : left + cantor_->ratio * length;
      bounds.push_back(left);
      bounds.push_back(right);
    }
    for (double b : bounds) value_at(knots, b, rng_);
    for (int j = 0; j < m; ++j) {
      const double left = bounds[2 * static_cast<std::size_t>(j)];
      const double right = bounds[2 * static_cast<std::size_t>(j) + 1];
      if (auto hit = complete(slice(knots, left, right), remaining - 1)) return left + *hit;
    }
    return std::nullopt;
  }

  // Exact crossing draw over the segments of a cover interval, left to right.
  std::optional<double> fire(const Knots& knots) {
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      const double a = knots[i].v, b = knots[i + 1].v;
      const double delta = knots[i + 1].t - knots[i].t;
      if (rng_.uniform() < crossing_probability(a, b, delta))
        return knots[i].t + sample_first_zero(a, b, delta, rng_);
    }
    return std::nullopt;
  }

 private:
  const CantorSet* cantor_;
  const SearchOptions& options_;
  Rng& rng_;
  SearchOutcome& out_;
};

}  // namespace

SearchOutcome first_zero_on_cover(const SetDescriptor& set, int level, double pin, double lower,
                                  std::span<const double> times, std::span<const double> values,
                                  Rng& rng, const SearchOptions& options) {
  if (level < 0) throw std::invalid_argument("first_zero_on_cover: level must be >= 0");
  if (!(pin > 0.0) || !std::isfinite(pin))
    throw std::invalid_argument("first_zero_on_cover: pin must be positive and finite");
  if (!(lower >= 0.0)) throw std::invalid_argument("first_zero_on_cover: lower must be >= 0");
  if (times.empty() || times.size() != values.size() || times.front() != 0.0)
    throw std::invalid_argument("first_zero_on_cover: path must start at t = 0");

  Knots skeleton;
  skeleton.reserve(times.size() + 64);
  for (std::size_t i = 0; i < times.size() && times[i] < pin; ++i)
    skeleton.push_back({times[i], values[i]});
  skeleton.push_back({pin, 0.0});

  SearchOutcome out;
  const auto* cantor = std::get_if<CantorSet>(&set.variant());
  CoverSearch search(cantor, options, rng, out);

  auto finish = [&](double time) {
    out.hit = true;
    out.time = time;
    return out;
  };
  // Cover node [left, right] lying before the pin.
  auto search_complete = [&](double left, double right, int remaining) -> std::optional<double> {
    value_at(skeleton, left, rng);
    value_at(skeleton, right, rng);
    if (auto hit = search.complete(slice(skeleton, left, right), remaining)) return left + *hit;
    return std::nullopt;
  };
  // Cover interval reaching the pin; the pinned end is a zero, so it always fires.
  auto fire_to_pin = [&](double left) -> std::optional<double> {
    ++out.nodes;
    value_at(skeleton, left, rng);
    if (auto hit = search.fire(slice(skeleton, left, pin))) return left + *hit;
    return std::nullopt;
  };

  if (const auto* u = std::get_if<IntervalUnion>(&set.variant())) {
    for (const Interval& iv : u->intervals) {
      if (iv.degenerate() || iv.right < lower) continue;
      const double left = std::max(iv.left, lower);
      if (left >= pin) break;
      const auto hit = iv.right < pin ? search_complete(left, iv.right, 0) : fire_to_pin(left);
      if (hit) return finish(*hit);
    }
    return out;
  }
  if (cantor == nullptr) return out;  // points have capacity zero and are never charged

  if (cantor->right < lower || cantor->left >= pin) return out;
  if (cantor->left < lower)
    throw std::invalid_argument("first_zero_on_cover: lower bound cuts into the Cantor set");
  if (cantor->right < pin) {
    if (auto hit = search_complete(cantor->left, cantor->right, level)) return finish(*hit);
    return out;
  }
  if (level == 0) {
    if (auto hit = fire_to_pin(cantor->left)) return finish(*hit);
    return out;
  }

  // Nodes containing the pin are split without spending a level; the walk stops
  // when the pin falls in a gap or the node shrinks below the floor.
  Interval node{cantor->left, cantor->right};
  const double floor = options.floor_fraction * pin;
  while (node.length() >= floor) {
    std::optional<Interval> next;
    for (int j = 0; j < cantor->branches; ++j) {
      const Interval child = cantor->child(node, j);
      if (child.left >= pin) break;
      if (child.right < pin) {
        if (auto hit = search_complete(child.left, child.right, level - 1)) return finish(*hit);
      } else {
        next = child;
        break;
      }
    }
    if (!next) break;
    node = *next;
  }
  return out;
}

double binomial_half_width(double p, std::size_t n) {
  if (n == 0) return 0.0;
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

HittingEstimate estimate_bridge_hitting(const SetDescriptor& set, double r, int k,
                                        std::size_t n_paths, std::uint64_t seed,
                                        const HittingOptions& options) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::invalid_argument("estimate_bridge_hitting: r must be positive and finite");
  if (k < 0) throw std::invalid_argument("estimate_bridge_hitting: level must be >= 0");
  if (n_paths == 0) throw std::invalid_argument("estimate_bridge_hitting: n_paths must be >= 1");
  if (!set.is_empty() && (!(set.inf() > 0.0) || set.sup() > r))
    throw std::invalid_argument("estimate_bridge_hitting: set must lie in (0, r]");
  if (options.background_steps < 0)
    throw std::invalid_argument("estimate_bridge_hitting: background_steps must be >= 0");

  HittingEstimate est;
  est.n_paths = n_paths;
  est.level = k;
  est.n_intervals = set.is_empty() ? 0.0 : cover_size(set, k);
  est.pin = r;
  est.seed = seed;
  if (set.is_empty()) return est;

  const TimeGrid grid = options.background_steps > 0
                            ? TimeGrid::uniform(r, options.background_steps)
                            : TimeGrid(std::vector<double>{0.0}, GridPolicyKind::uniform);
  std::vector<unsigned char> hit(n_paths, 0);
  std::vector<double> pruned(n_paths, 0.0);
  parallel_for(n_paths, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, i);
    const BridgePath path = sample_bridge_path(r, grid, rng);
    const SearchOutcome o =
        first_zero_on_cover(set, k, r, 0.0, path.grid.times(), path.values, rng, options.search);
    hit[i] = o.hit ? 1 : 0;
    pruned[i] = o.pruned_mass;
  });
  double pruned_total = 0.0;
  for (std::size_t i = 0; i < n_paths; ++i) {
    est.hits += hit[i];
    pruned_total += pruned[i];
  }
  est.estimate = static_cast<double>(est.hits) / static_cast<double>(n_paths);
  est.half_width = binomial_half_width(est.estimate, n_paths);
  est.pruned_mass = pruned_total / static_cast<double>(n_paths);
  return est;
}

std::vector<HittingEstimate> hitting_vs_level_report(const SetDescriptor& set, double r,
                                                     std::span<const int> levels,
                                                     std::size_t n_paths, std::uint64_t seed,
                                                     const HittingOptions& options) {
  std::vector<HittingEstimate> out;
  out.reserve(levels.size());
  for (int k : levels) out.push_back(estimate_bridge_hitting(set, r, k, n_paths, seed, options));
  return out;
}

}  // namespace dlab
