#include "dlab/timelaw.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void validate(const AtomicLaw& a) {
  if (a.times.empty()) throw std::invalid_argument("atomic law: needs at least one atom");
  if (a.times.size() != a.weights.size())
    throw std::invalid_argument("atomic law: times and weights differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    if (!std::isfinite(a.times[i]) || !(a.times[i] > 0.0))
      throw std::invalid_argument("atomic law: atoms must be strictly positive");
    if (i > 0 && !(a.times[i - 1] < a.times[i]))
      throw std::invalid_argument("atomic law: atoms must be strictly increasing");
    if (!std::isfinite(a.weights[i]) || a.weights[i] < 0.0)
      throw std::invalid_argument("atomic law: weights must be nonnegative");
    total += a.weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("atomic law: weights must sum to 1");
}

void validate(const UniformLaw& u) {
  if (!std::isfinite(u.left) || !std::isfinite(u.right) || u.left < 0.0 || !(u.left < u.right))
    throw std::invalid_argument("uniform law: needs 0 <= left < right");
}

void validate(const ExponentialLaw& e) {
  if (!std::isfinite(e.rate) || !(e.rate > 0.0))
    throw std::invalid_argument("exponential law: rate must be positive");
}

void validate(const CantorLaw& c) {
  // Reuses the set invariants (including branches * ratio <= 1).
  SetDescriptor check(c.set);
}

// Cantor function of the uniform Cantor measure.
double cantor_cdf(const CantorSet& c, double t) {
  if (t < c.left) return 0.0;
  if (t >= c.right) return 1.0;
  Interval node{c.left, c.right};
  double below = 0.0;
  double mass = 1.0;
  const double share = 1.0 / static_cast<double>(c.branches);
  for (int level = 0; level < kCantorSampleDepth; ++level) {
    mass *= share;
    int inside = -1;
    for (int j = 0; j < c.branches; ++j) {
      const Interval ch = c.child(node, j);
      if (t < ch.left) break;
      if (t < ch.right || (j == c.branches - 1 && t <= ch.right)) {
        inside = j;
        break;
      }
      below += mass;  // child j lies entirely at or below t
    }
    if (inside < 0) return below;
    node = c.child(node, inside);
    if (node.length() <= 0.0) break;
  }
  return below;
}

}  // namespace

DefaultLaw::DefaultLaw(Params p) : p_(std::move(p)) {
  std::visit([](const auto& x) { validate(x); }, p_);
}

DefaultLaw DefaultLaw::atomic(std::vector<double> times, std::vector<double> weights) {
  return DefaultLaw(AtomicLaw{std::move(times), std::move(weights)});
}

DefaultLaw DefaultLaw::uniform(double left, double right) {
  return DefaultLaw(UniformLaw{left, right});
}

DefaultLaw DefaultLaw::exponential(double rate) { return DefaultLaw(ExponentialLaw{rate}); }

DefaultLaw DefaultLaw::cantor(double left, double right, int branches, double ratio) {
  return DefaultLaw(CantorLaw{CantorSet{left, right, branches, ratio}});
}

std::string_view DefaultLaw::kind_name() const {
  return std::visit(overloaded{[](const AtomicLaw&) { return std::string_view("atomic"); },
                               [](const UniformLaw&) { return std::string_view("uniform"); },
                               [](const ExponentialLaw&) { return std::string_view("exponential"); },
                               [](const CantorLaw&) { return std::string_view("cantor"); }},
                    p_);
}

double sample_default_time(const DefaultLaw& law, Rng& rng) {
  return std::visit(
      overloaded{
          [&](const AtomicLaw& a) {
            const double u = rng.uniform();
            double acc = 0.0;
            for (std::size_t i = 0; i < a.times.size(); ++i) {
              acc += a.weights[i];
              if (u < acc && a.weights[i] > 0.0) return a.times[i];
            }
            // Rounding left u above the running total: last atom with mass.
            for (std::size_t i = a.times.size(); i-- > 0;)
              if (a.weights[i] > 0.0) return a.times[i];
            return a.times.back();
          },
          [&](const UniformLaw& u) {
            double t = 0.0;
            do {
              t = u.left + (u.right - u.left) * rng.uniform();
            } while (!(t > 0.0));
            return t;
          },
          [&](const ExponentialLaw& e) { return -std::log(rng.uniform_open()) / e.rate; },
          [&](const CantorLaw& c) {
            const CantorSet& s = c.set;
            double t = 0.0;
            do {
              // tau = left + sum_j d_j * stride * ratio^(j-1); small terms summed first.
              std::array<int, kCantorSampleDepth> digits{};
              for (auto& d : digits)
                d = static_cast<int>(rng.below(static_cast<std::uint64_t>(s.branches)));
              const double stride = (1.0 - s.ratio) * s.length() / (s.branches - 1);
              double sum = 0.0;
              for (int j = kCantorSampleDepth; j-- > 0;)
                sum += digits[static_cast<std::size_t>(j)] * stride * std::pow(s.ratio, j);
              t = std::min(s.left + sum, s.right);
            } while (!(t > 0.0));
            return t;
          }},
      law.params());
}

double law_cdf(const DefaultLaw& law, double t) {
  return std::visit(
      overloaded{[t](const AtomicLaw& a) {
                   double acc = 0.0;
                   for (std::size_t i = 0; i < a.times.size() && a.times[i] <= t; ++i)
                     acc += a.weights[i];
                   return std::min(acc, 1.0);
                 },
                 [t](const UniformLaw& u) {
                   if (t <= u.left) return 0.0;
                   if (t >= u.right) return 1.0;
                   return (t - u.left) / (u.right - u.left);
                 },
                 [t](const ExponentialLaw& e) { return t <= 0.0 ? 0.0 : -std::expm1(-e.rate * t); },
                 [t](const CantorLaw& c) { return cantor_cdf(c.set, t); }},
      law.params());
}

SetDescriptor support_of(const DefaultLaw& law) {
  return std::visit(
      overloaded{[](const AtomicLaw& a) {
                   std::vector<double> pts;
                   for (std::size_t i = 0; i < a.times.size(); ++i)
                     if (a.weights[i] > 0.0) pts.push_back(a.times[i]);
                   return SetDescriptor::points(std::move(pts));
                 },
                 [](const UniformLaw& u) { return SetDescriptor::intervals({{u.left, u.right}}); },
                 [](const ExponentialLaw&) {
                   return SetDescriptor::intervals(
                       {{0.0, std::numeric_limits<double>::infinity()}});
                 },
                 [](const CantorLaw& c) { return SetDescriptor(c.set); }},
      law.params());
}

}  // namespace dlab
