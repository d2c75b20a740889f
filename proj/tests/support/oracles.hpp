#pragma once

// Reference computations used as independent checks. They share no code with
// the library beyond plain data types.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "dlab/setgeom.hpp"

namespace oracle {

// Does a Brownian bridge from a to b over [0, delta] hit 0? Midpoints are drawn
// by Levy's construction and segments are halved until a sign change shows up,
// both ends sit more than 8 sqrt(length) away from 0 (crossing chance e^-128),
// or the segment is shorter than 2^-40 delta.
inline bool segment_hits(double a, double b, double delta, std::mt19937_64& gen) {
  if (a * b <= 0.0) return true;
  std::normal_distribution<double> normal(0.0, 1.0);
  struct Seg {
    double t0, v0, t1, v1;
  };
  std::vector<Seg> stack{{0.0, a, delta, b}};
  const double floor = std::ldexp(delta, -40);
  while (!stack.empty()) {
    const Seg s = stack.back();
    stack.pop_back();
    const double d = s.t1 - s.t0;
    if (std::min(std::abs(s.v0), std::abs(s.v1)) > 8.0 * std::sqrt(d)) continue;
    if (d < floor) continue;
    const double tm = 0.5 * (s.t0 + s.t1);
    const double vm = 0.5 * (s.v0 + s.v1) + std::sqrt(d / 4.0) * normal(gen);
    if (vm * s.v0 <= 0.0) return true;
    stack.push_back({tm, vm, s.t1, s.v1});
    stack.push_back({s.t0, s.v0, tm, vm});
  }
  return false;
}

// Value at t of a bridge from (s, x) to (u, y).
inline double bridge_point(double s, double x, double u, double y, double t,
                           std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double mean = x + (y - x) * (t - s) / (u - s);
  const double var = (t - s) * (u - t) / (u - s);
  return mean + std::sqrt(var) * normal(gen);
}

// int int |x - y|^(-s) over a x b as a one-dimensional integral over the lag
// u = y - x, weighted by the overlap length, by tanh-sinh quadrature.
inline double kernel_by_quadrature(const dlab::Interval& a, const dlab::Interval& b, double s) {
  auto overlap = [&](double u) {
    return std::max(0.0, std::min(a.right, b.right - u) - std::max(a.left, b.left - u));
  };
  std::vector<double> knots{b.left - a.right, b.left - a.left, b.right - a.right,
                            b.right - a.left};
  if (knots.front() < 0.0 && knots.back() > 0.0) knots.push_back(0.0);
  std::sort(knots.begin(), knots.end());
  boost::math::quadrature::tanh_sinh<double> integrator;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i], hi = knots[i + 1];
    if (!(hi > lo)) continue;
    total += integrator.integrate(
        [&](double u) { return u == 0.0 ? 0.0 : std::pow(std::abs(u), -s) * overlap(u); }, lo,
        hi);
  }
  return total;
}

// Normalized kernel matrix of piecewise-uniform densities on the intervals.
inline std::vector<std::vector<double>> kernel_matrix(std::span<const dlab::Interval> ivs,
                                                      double s) {
  const std::size_t n = ivs.size();
  std::vector<std::vector<double>> K(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      K[i][j] = K[j][i] =
          kernel_by_quadrature(ivs[i], ivs[j], s) / (ivs[i].length() * ivs[j].length());
  return K;
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
    std::swap(A[c], A[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= A[i][k] * x[k];
    x[i] = acc / A[i][i];
  }
  return x;
}

struct QuadraticMinimum {
  std::vector<double> weights;
  double energy = 0.0;
  bool interior = false;  // all weights positive, so the closed form is the simplex minimum
};

// Minimum of w' K w on the simplex when it is interior: w = K^-1 1 / (1' K^-1 1).
inline QuadraticMinimum interior_minimum(const std::vector<std::vector<double>>& K) {
  const std::size_t n = K.size();
  const std::vector<double> x = solve(K, std::vector<double>(n, 1.0));
  double sum = 0.0;
  for (double v : x) sum += v;
  QuadraticMinimum m;
  m.interior = true;
  for (double v : x) {
    m.weights.push_back(v / sum);
    m.interior = m.interior && v > 0.0;
  }
  m.energy = 1.0 / sum;
  return m;
}

// sup |F_n - F| for samples against a continuous CDF.
inline double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

inline double ks_two_sample(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

// 99% band for the two-sample statistic.
inline double ks_band_two_sample(std::size_t n, std::size_t m) {
  const double a = static_cast<double>(n), b = static_cast<double>(m);
  return 1.628 * std::sqrt((a + b) / (a * b));
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // unbiased
  double n = 0.0;
  double mean_se() const { return std::sqrt(var / n); }
  // Standard error of the sample variance under normality.
  double var_se() const { return var * std::sqrt(2.0 / (n - 1.0)); }
};

inline Moments moments(std::span<const double> x) {
  Moments m;
  m.n = static_cast<double>(x.size());
  for (double v : x) m.mean += v;
  m.mean /= m.n;
  for (double v : x) m.var += (v - m.mean) * (v - m.mean);
  m.var /= (m.n - 1.0);
  return m;
}

struct CovarianceEstimate {
  double cov = 0.0;
  double se = 0.0;
};

// Sample covariance with the normal-theory standard error sqrt((VarX VarY + Cov^2) / n).
inline CovarianceEstimate covariance(std::span<const double> x, std::span<const double> y) {
  const Moments mx = moments(x), my = moments(y);
  double c = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) c += (x[i] - mx.mean) * (y[i] - my.mean);
  c /= (mx.n - 1.0);
  return {c, std::sqrt((mx.var * my.var + c * c) / mx.n)};
}

}  // namespace oracle
