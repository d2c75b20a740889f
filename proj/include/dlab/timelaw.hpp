#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "dlab/random.hpp"
#include "dlab/setgeom.hpp"

namespace dlab {

struct AtomicLaw {
  std::vector<double> times;    // strictly increasing, > 0
  std::vector<double> weights;  // >= 0, sum to 1
  friend bool operator==(const AtomicLaw&, const AtomicLaw&) = default;
};

struct UniformLaw {
  double left = 1.0;
  double right = 2.0;
  friend bool operator==(const UniformLaw&, const UniformLaw&) = default;
};

struct ExponentialLaw {
  double rate = 1.0;
  friend bool operator==(const ExponentialLaw&, const ExponentialLaw&) = default;
};

// Uniform (Cantor) measure on a self-similar Cantor set: every branch gets
// mass 1/branches at each construction step.
struct CantorLaw {
  CantorSet set;
  friend bool operator==(const CantorLaw&, const CantorLaw&) = default;
};

// Digits drawn per Cantor sample; ratio^64 is below double resolution for ratio <= 1/2.
inline constexpr int kCantorSampleDepth = 64;

// Law of the default time. Immutable after construction.
class DefaultLaw {
 public:
  using Params = std::variant<AtomicLaw, UniformLaw, ExponentialLaw, CantorLaw>;

  // Throws std::invalid_argument when the parameters are invalid.
  explicit DefaultLaw(Params p);

  static DefaultLaw atomic(std::vector<double> times, std::vector<double> weights);
  static DefaultLaw uniform(double left, double right);
  static DefaultLaw exponential(double rate);
  static DefaultLaw cantor(double left, double right, int branches, double ratio);

  const Params& params() const { return p_; }
  std::string_view kind_name() const;

  friend bool operator==(const DefaultLaw&, const DefaultLaw&) = default;

 private:
  Params p_;
};

// One draw from the law; always strictly positive.
double sample_default_time(const DefaultLaw& law, Rng& rng);

double law_cdf(const DefaultLaw& law, double t);

// Topological support. Zero-weight atoms are not part of it.
SetDescriptor support_of(const DefaultLaw& law);

}  // namespace dlab
