#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dlab/random.hpp"
#include "dlab/setgeom.hpp"

namespace dlab {

// Probability that a Brownian bridge from a to b over a duration delta hits 0:
// 1 if a * b <= 0, else exp(-2ab / delta). Throws for delta <= 0.
double crossing_probability(double a, double b, double delta);

// First zero of a Brownian bridge from a to b over [0, delta], conditional on
// a zero occurring. Uses reflection at the first zero (the conditional law
// matches the bridge from a to -|b|) and the time change that turns that bridge
// into Brownian motion with drift, whose passage time is inverse Gaussian.
double sample_first_zero(double a, double b, double delta, Rng& rng);

struct SearchOptions {
  // Cover nodes whose crossing probability falls below this are not refined;
  // the discarded probability is accumulated as a bias bound.
  double prune_below = 1e-12;
  // Nodes containing the pin stop refining once shorter than floor_fraction * pin.
  double floor_fraction = 1e-9;
  friend bool operator==(const SearchOptions&, const SearchOptions&) = default;
};

struct SearchOutcome {
  bool hit = false;
  double time = 0.0;  // first zero found, when hit
  double pruned_mass = 0.0;
  std::size_t nodes = 0;  // cover nodes expanded
};

// Earliest zero of a bridge pinned to 0 at `pin` on the level-k cover of `set`
// restricted to [lower, pin). The bridge is known at `times` (sorted, starting
// at 0) through `values`; every further value is sampled conditionally on the
// nearest known neighbours, so the search stays consistent with the given path.
//
// Cover nodes are visited depth-first from left to right in coordinates
// relative to the node, so levels far below double resolution in absolute time
// stay exact. A node whose interior cannot cross zero (probability below the
// prune threshold) is not refined. Cover intervals of level k fire with the
// exact crossing law of their sub-segments. A node that contains the pin is
// split without spending a level: its children left of the pin are searched k-1
// levels further down, which is the level-k cover adapted to the pin.
SearchOutcome first_zero_on_cover(const SetDescriptor& set, int level, double pin, double lower,
                                  std::span<const double> times, std::span<const double> values,
                                  Rng& rng, const SearchOptions& options = {});

struct HittingOptions {
  SearchOptions search;
  int background_steps = 0;  // uniform background grid on [0, r]; 0 = none
  friend bool operator==(const HittingOptions&, const HittingOptions&) = default;
};

struct HittingEstimate {
  double estimate = 0.0;
  double half_width = 0.0;  // 1.96 * sqrt(p (1 - p) / N)
  std::size_t n_paths = 0;
  std::size_t hits = 0;
  int level = 0;
  double n_intervals = 0.0;  // size of the level-k cover
  double pin = 0.0;
  double pruned_mass = 0.0;  // mean per path
  std::uint64_t seed = 0;
};

double binomial_half_width(double p, std::size_t n);

// Estimates P(the bridge pinned at r hits 0 on the level-k cover of set), an
// upper bound for P(gamma^r_set < r) that is nonincreasing in k.
// Requires set within (0, r] and n_paths >= 1.
HittingEstimate estimate_bridge_hitting(const SetDescriptor& set, double r, int k,
                                        std::size_t n_paths, std::uint64_t seed,
                                        const HittingOptions& options = {});

// One estimate per level, all levels sharing the per-path streams.
std::vector<HittingEstimate> hitting_vs_level_report(const SetDescriptor& set, double r,
                                                     std::span<const int> levels,
                                                     std::size_t n_paths, std::uint64_t seed,
                                                     const HittingOptions& options = {});

}  // namespace dlab
