#include "dlab/potential.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace dlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_order(double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("energy order s must lie in (0, 1)");
}

bool has_charged_atom(const DiscreteMeasure& nu) {
  for (std::size_t i = 0; i < nu.intervals.size(); ++i)
    if (nu.weights[i] > 0.0 && nu.intervals[i].degenerate()) return true;
  return false;
}

// Antiderivative pieces: int int (y - x)^(-s) over a x b for a left of b is
// F(b2 - a1) - F(b2 - b1) - F(a2 - a1) + F(a2 - b1), F(u) = u^(2-s) / ((1-s)(2-s)).
double separated_closed_form(const Interval& a, const Interval& b, double s) {
  const double e = 2.0 - s;
  const double c = 1.0 / ((1.0 - s) * (2.0 - s));
  auto F = [e](double u) { return u > 0.0 ? std::pow(u, e) : 0.0; };
  return c * (F(b.right - a.left) - F(b.right - a.right) - F(b.left - a.left) + F(b.left - a.right));
}

// Tensor Gauss-Legendre for well-separated pairs, where the closed form loses
// digits to cancellation and the integrand is analytic.
double separated_quadrature(const Interval& a, const Interval& b, double s) {
  using boost::math::quadrature::gauss;
  auto inner = [&](double x) {
    return gauss<double, 10>::integrate([&](double y) { return std::pow(y - x, -s); }, b.left,
                                        b.right);
  };
  return gauss<double, 10>::integrate(inner, a.left, a.right);
}

// int_p^q h^(-1/2) (alpha + beta h) dh for 0 <= p < q.
long double weighted_root_integral(long double p, long double q, long double alpha,
                                   long double beta) {
  const long double sp = std::sqrt(p), sq = std::sqrt(q);
  return alpha * 2.0L * (sq - sp) + beta * (2.0L / 3.0L) * (q * sq - p * sp);
}

// int int |t - u|^(-1/2) over a x b, written as int k(|h|) g(h) dh with
// g(h) = |{t in a : t + h in b}| piecewise linear in the lag h.
long double lag_integral(const Interval& a, const Interval& b) {
  const long double a1 = a.left, b1 = a.right, a2 = b.left, b2 = b.right;
  auto overlap = [&](long double h) {
    const long double lo = std::max(a1, a2 - h);
    const long double hi = std::min(b1, b2 - h);
    return std::max(0.0L, hi - lo);
  };
  std::vector<long double> knots{a2 - b1, a2 - a1, b2 - b1, b2 - a1};
  if (knots.front() < 0.0L && knots.back() > 0.0L) knots.push_back(0.0L);
  std::sort(knots.begin(), knots.end());
  long double total = 0.0L;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const long double x = knots[i], y = knots[i + 1];
    if (!(y > x)) continue;
    const long double gx = overlap(x), gy = overlap(y);
    if (x >= 0.0L) {
      const long double beta = (gy - gx) / (y - x);
      total += weighted_root_integral(x, y, gx - beta * x, beta);
    } else {
      // Negative lags: substitute u = -h on [-y, -x].
      const long double p = -y, q = -x;
      const long double beta = (gx - gy) / (q - p);
      total += weighted_root_integral(p, q, gy - beta * p, beta);
    }
  }
  return total;
}

// Solves K_SS x = 1 by Cholesky; nothing when the system is not numerically
// positive definite or some component is not positive.
std::optional<std::vector<double>> solve_on_support(const std::vector<double>& K, std::size_t m,
                                                    const std::vector<std::size_t>& support) {
  const std::size_t n = support.size();
  if (n == 0) return std::nullopt;
  std::vector<double> L(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = K[support[i] * m + support[j]];
      for (std::size_t k = 0; k < j; ++k) acc -= L[i * n + k] * L[j * n + k];
      if (i == j) {
        if (!(acc > 0.0)) return std::nullopt;
        L[i * n + i] = std::sqrt(acc);
      } else {
        L[i * n + j] = acc / L[j * n + j];
      }
    }
  }
  std::vector<double> y(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 1.0;
    for (std::size_t k = 0; k < i; ++k) acc -= L[i * n + k] * y[k];
    y[i] = acc / L[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = y[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= L[k * n + i] * x[k];
    x[i] = acc / L[i * n + i];
    if (!(x[i] > 0.0)) return std::nullopt;
  }
  return x;
}

}  // namespace

DiscreteMeasure DiscreteMeasure::make(std::vector<Interval> intervals, std::vector<double> weights) {
  if (intervals.empty() || intervals.size() != weights.size())
    throw std::invalid_argument("DiscreteMeasure: need one weight per interval");
  double total = 0.0;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const Interval& iv = intervals[i];
    if (!std::isfinite(iv.left) || !std::isfinite(iv.right) || iv.right < iv.left)
      throw std::invalid_argument("DiscreteMeasure: intervals must be finite with left <= right");
    if (i > 0 && intervals[i - 1].right > iv.left)
      throw std::invalid_argument("DiscreteMeasure: intervals must be sorted and disjoint");
    if (!(weights[i] >= 0.0)) throw std::invalid_argument("DiscreteMeasure: negative weight");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("DiscreteMeasure: weights must sum to 1");
  return DiscreteMeasure{std::move(intervals), std::move(weights)};
}

double kernel_integral(const Interval& a, const Interval& b, double s) {
  check_order(s);
  if (a == b) return 2.0 * std::pow(a.length(), 2.0 - s) / ((1.0 - s) * (2.0 - s));
  const Interval& lo = (a.left <= b.left) ? a : b;
  const Interval& hi = (a.left <= b.left) ? b : a;
  if (lo.right > hi.left)
    throw std::invalid_argument("kernel_integral: intervals overlap without being identical");
  const double gap = hi.left - lo.right;
  if (gap >= 2.0 * std::max(lo.length(), hi.length())) return separated_quadrature(lo, hi, s);
  return separated_closed_form(lo, hi, s);
}

double riesz_energy(const DiscreteMeasure& nu, double s) {
  check_order(s);
  if (has_charged_atom(nu)) return kInf;
  const std::size_t n = nu.intervals.size();
  double diag = 0.0, off = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = nu.weights[i];
    if (wi == 0.0) continue;
    const Interval& I = nu.intervals[i];
    diag += wi * wi * kernel_integral(I, I, s) / (I.length() * I.length());
    for (std::size_t j = i + 1; j < n; ++j) {
      const double wj = nu.weights[j];
      if (wj == 0.0) continue;
      const Interval& J = nu.intervals[j];
      off += wi * wj * kernel_integral(I, J, s) / (I.length() * J.length());
    }
  }
  return diag + 2.0 * off;
}

double parabolic_kernel(double dt, double dx) {
  return std::exp(-dx * dx / (2.0 * dt)) / std::sqrt(dt);
}

double parabolic_zero_energy(const DiscreteMeasure& nu) {
  if (has_charged_atom(nu)) return kInf;
  // Both space marginals are delta_0, so the Gaussian factor of the kernel is
  // exp(0) = 1 for every time lag and only dt^(-1/2) remains.
  long double total = 0.0L;
  const std::size_t n = nu.intervals.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (nu.weights[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (nu.weights[j] == 0.0) continue;
      const Interval& I = nu.intervals[i];
      const Interval& J = nu.intervals[j];
      const long double density = static_cast<long double>(nu.weights[i]) * nu.weights[j] /
                                  (static_cast<long double>(I.length()) * J.length());
      total += density * lag_integral(I, J);
    }
  }
  return static_cast<double>(total);
}

std::vector<double> project_to_simplex(std::span<const double> v) {
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

EnergyMinimum minimize_energy(const CoverLevel& cover, double s, double tol,
                              std::size_t max_iterations) {
  check_order(s);
  if (cover.intervals.empty()) throw std::invalid_argument("minimize_energy: empty cover");
  const std::size_t n = cover.intervals.size();

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i)
    if (!cover.intervals[i].degenerate()) active.push_back(i);

  EnergyMinimum out;
  out.report.level = cover.level;
  out.report.n_intervals = n;
  out.measure.intervals = cover.intervals;
  out.measure.weights.assign(n, 0.0);

  if (active.empty()) {
    // Every probability measure on finitely many points has an atom.
    std::fill(out.measure.weights.begin(), out.measure.weights.end(), 1.0 / static_cast<double>(n));
    out.report.energy = kInf;
    out.report.infinite = true;
    out.report.capacity = 0.0;
    return out;
  }

  const std::size_t m = active.size();
  std::vector<double> K(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    const Interval& I = cover.intervals[active[a]];
    for (std::size_t b = a; b < m; ++b) {
      const Interval& J = cover.intervals[active[b]];
      const double k = kernel_integral(I, J, s) / (I.length() * J.length());
      K[a * m + b] = k;
      K[b * m + a] = k;
    }
  }
  auto apply = [&](const std::vector<double>& w, std::vector<double>& Kw) {
    for (std::size_t a = 0; a < m; ++a) {
      double acc = 0.0;
      const double* row = &K[a * m];
      for (std::size_t b = 0; b < m; ++b) acc += row[b] * w[b];
      Kw[a] = acc;
    }
  };
  auto dot = [m](const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t a = 0; a < m; ++a) acc += x[a] * y[a];
    return acc;
  };

  // Gradient of w'Kw is 2Kw with Lipschitz constant 2 lambda_max <= 2 max row sum.
  double row_max = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    double r = 0.0;
    for (std::size_t b = 0; b < m; ++b) r += std::abs(K[a * m + b]);
    row_max = std::max(row_max, r);
  }
  double step = 1.0 / (2.0 * row_max);

  std::vector<double> w(m, 1.0 / static_cast<double>(m)), Kw(m), trial(m), Ktrial(m), grad(m);
  apply(w, Kw);
  double f = dot(w, Kw);
  double gap = 0.0;
  std::size_t it = 0;
  bool converged = false;
  for (; it < max_iterations; ++it) {
    gap = 2.0 * (f - *std::min_element(Kw.begin(), Kw.end()));
    if (gap <= tol * f) {
      converged = true;
      break;
    }
    for (std::size_t a = 0; a < m; ++a) grad[a] = 2.0 * Kw[a];
    double eta = 2.0 * step;
    double f_trial = f;
    for (int tries = 0; tries < 60; ++tries) {
      for (std::size_t a = 0; a < m; ++a) trial[a] = w[a] - eta * grad[a];
      trial = project_to_simplex(trial);
      apply(trial, Ktrial);
      f_trial = dot(trial, Ktrial);
      double lin = 0.0, sq = 0.0;
      for (std::size_t a = 0; a < m; ++a) {
        const double d = trial[a] - w[a];
        lin += grad[a] * d;
        sq += d * d;
      }
      if (f_trial <= f + lin + sq / (2.0 * eta) + 1e-15 * f) break;
      eta *= 0.5;
    }
    step = eta;
    if (!(f_trial < f)) {
      // No further decrease representable in double precision.
      gap = 2.0 * (f - *std::min_element(Kw.begin(), Kw.end()));
      converged = gap <= tol * f;
      break;
    }
    w.swap(trial);
    Kw.swap(Ktrial);
    f = f_trial;
  }
  if (it == max_iterations) gap = 2.0 * (f - *std::min_element(Kw.begin(), Kw.end()));

  // Ill-conditioned kernels stall the gradient steps once f is exact to rounding
  // while the gap certificate is still above tol. On the current support the
  // optimality conditions are linear (K_SS w = f 1), so solve them directly and
  // keep the result when it is feasible and certifies a smaller gap.
  if (!converged) {
    std::vector<std::size_t> support;
    for (std::size_t a = 0; a < m; ++a)
      if (w[a] > 0.0) support.push_back(a);
    if (auto x = solve_on_support(K, m, support)) {
      double total = 0.0;
      for (double v : *x) total += v;
      std::vector<double> polished(m, 0.0);
      for (std::size_t i = 0; i < support.size(); ++i) polished[support[i]] = (*x)[i] / total;
      std::vector<double> Kp(m);
      apply(polished, Kp);
      const double fp = dot(polished, Kp);
      const double gp = 2.0 * (fp - *std::min_element(Kp.begin(), Kp.end()));
      if (gp < gap && fp <= f * (1.0 + 1e-14)) {
        w.swap(polished);
        f = fp;
        gap = std::max(gp, 0.0);
        converged = gap <= tol * f;
      }
    }
  }

  for (std::size_t a = 0; a < m; ++a) out.measure.weights[active[a]] = w[a];
  out.report.energy = f;
  out.report.capacity = 1.0 / f;
  out.report.iterations = it;
  out.report.achieved_tolerance = gap / f;
  out.report.converged = converged;
  return out;
}

EnergyReport capacity_estimate(const SetDescriptor& set, double s, int k, double tol) {
  check_order(s);
  if (set.is_empty()) {
    EnergyReport r;
    r.energy = kInf;
    r.infinite = true;
    r.capacity = 0.0;
    r.level = k;
    return r;
  }
  return minimize_energy(cover_intervals(set, k), s, tol).report;
}

std::vector<EnergyReport> capacity_vs_level(const SetDescriptor& set, double s,
                                            std::span<const int> levels, double tol) {
  std::vector<EnergyReport> out;
  out.reserve(levels.size());
  for (int k : levels) out.push_back(capacity_estimate(set, s, k, tol));
  return out;
}

}  // namespace dlab
