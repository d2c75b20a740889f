#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dlab/setgeom.hpp"

namespace dlab {

// Probability measure spreading weight w_i uniformly over interval i
// (a point mass when the interval is degenerate).
struct DiscreteMeasure {
  std::vector<Interval> intervals;  // sorted, non-overlapping (touching allowed)
  std::vector<double> weights;      // >= 0, sum to 1 within 1e-12

  // Throws std::invalid_argument when the invariants fail.
  static DiscreteMeasure make(std::vector<Interval> intervals, std::vector<double> weights);
};

// Unnormalized double integral of |x - y|^(-s) over a x b. The intervals must
// be identical or non-overlapping, with positive length. 0 < s < 1.
double kernel_integral(const Interval& a, const Interval& b, double s);

// Riesz s-energy; +inf when some atom carries positive weight.
double riesz_energy(const DiscreteMeasure& nu, double s);

// Space-time kernel exp(-dx^2 / (2 dt)) / dt^(1/2) in one space dimension.
double parabolic_kernel(double dt, double dx);

// Parabolic 0-energy of nu (x) delta_0, evaluated through the lag distribution
// of each interval pair rather than the Riesz closed forms.
double parabolic_zero_energy(const DiscreteMeasure& nu);

struct EnergyReport {
  double energy = 0.0;
  bool infinite = false;
  double capacity = 0.0;  // 1 / energy, exactly 0 when infinite
  std::size_t iterations = 0;
  double achieved_tolerance = 0.0;  // duality gap relative to the energy
  bool converged = true;
  int level = 0;
  std::size_t n_intervals = 0;
};

struct EnergyMinimum {
  DiscreteMeasure measure;
  EnergyReport report;
};

// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::span<const double> v);

// Minimizes the s-energy over piecewise-uniform probability measures carried
// by the cover intervals. Degenerate intervals receive zero weight; a cover of
// atoms only has infinite energy. Stops once the Frank-Wolfe gap is below
// tol * energy, which bounds the suboptimality by the same amount.
EnergyMinimum minimize_energy(const CoverLevel& cover, double s, double tol = 1e-8,
                              std::size_t max_iterations = 100000);

// Cover capacity at level k, an upper estimate of the set's capacity.
// The empty set has capacity 0.
EnergyReport capacity_estimate(const SetDescriptor& set, double s, int k, double tol = 1e-8);

std::vector<EnergyReport> capacity_vs_level(const SetDescriptor& set, double s,
                                            std::span<const int> levels, double tol = 1e-8);

}  // namespace dlab
