#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dlab/timelaw.hpp"
#include "support/oracles.hpp"

using namespace dlab;

namespace {

constexpr std::size_t kSamples = 100000;

std::vector<double> draw(const DefaultLaw& law, std::uint64_t seed, std::size_t n = kSamples) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (double& t : x) t = sample_default_time(law, rng);
  return x;
}

double band(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

// Cantor function of the middle-thirds set by its ternary digits.
double ternary_cantor_function(double t) {
  double value = 0.0, scale = 0.5;
  for (int i = 0; i < 60; ++i) {
    t *= 3.0;
    const int digit = std::min(2, static_cast<int>(std::floor(t)));
    t -= digit;
    if (digit == 1) return value + scale;
    value += scale * (digit / 2);
    scale *= 0.5;
  }
  return value;
}

}  // namespace

TEST_CASE("law validation") {
  CHECK_THROWS_AS(DefaultLaw::atomic({1.0, 2.0}, {0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(DefaultLaw::atomic({0.0, 2.0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(DefaultLaw::atomic({2.0, 1.0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(DefaultLaw::uniform(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DefaultLaw::exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(DefaultLaw::cantor(1.0, 2.0, 3, 0.5), std::invalid_argument);
}

TEST_CASE("cdf examples") {
  const auto one = DefaultLaw::atomic({2.0}, {1.0});
  CHECK(law_cdf(one, 1.9) == 0.0);
  CHECK(law_cdf(one, 2.0) == 1.0);
  CHECK(law_cdf(DefaultLaw::uniform(1.0, 2.0), 1.5) == doctest::Approx(0.5));
  const auto c = DefaultLaw::cantor(0.0, 1.0, 2, 1.0 / 3.0);
  CHECK(law_cdf(c, 1.0 / 3.0) == doctest::Approx(0.5).epsilon(1e-12));
  for (double t : {0.05, 0.1, 0.2, 0.25, 0.4, 0.7, 0.75, 0.8, 0.95})
    CHECK(law_cdf(c, t) == doctest::Approx(ternary_cantor_function(t)).epsilon(1e-9));
  CHECK(law_cdf(DefaultLaw::exponential(2.0), 1.0) == doctest::Approx(1.0 - std::exp(-2.0)));
}

TEST_CASE("cdf is monotone with limits 0 and 1") {
  const DefaultLaw laws[] = {DefaultLaw::atomic({1.0, 1.5, 2.0}, {0.2, 0.3, 0.5}),
                             DefaultLaw::uniform(1.0, 2.0), DefaultLaw::exponential(1.0),
                             DefaultLaw::cantor(1.0, 2.0, 2, 0.2)};
  for (const auto& law : laws) {
    double prev = 0.0;
    CHECK(law_cdf(law, 0.0) == 0.0);
    for (int i = 0; i <= 3000; ++i) {
      const double f = law_cdf(law, 0.001 * i);
      CHECK(f >= prev);
      prev = f;
    }
    CHECK(law_cdf(law, 1e6) == doctest::Approx(1.0));
  }
}

TEST_CASE("supports") {
  CHECK(support_of(DefaultLaw::atomic({1.0, 2.0}, {0.5, 0.5})) == SetDescriptor::points({1.0, 2.0}));
  CHECK(support_of(DefaultLaw::atomic({1.0, 2.0}, {0.0, 1.0})) == SetDescriptor::points({2.0}));
  CHECK(support_of(DefaultLaw::uniform(1.0, 2.0)) == SetDescriptor::intervals({{1.0, 2.0}}));
  CHECK(support_of(DefaultLaw::cantor(1.0, 2.0, 2, 1.0 / 3.0)) ==
        SetDescriptor::cantor(1.0, 2.0, 2, 1.0 / 3.0));
  const auto e = support_of(DefaultLaw::exponential(1.0));
  CHECK(e.inf() == 0.0);
  CHECK(std::isinf(e.sup()));
}

TEST_CASE("continuous samplers pass the one-sample KS test") {
  const DefaultLaw laws[] = {DefaultLaw::uniform(1.0, 2.0), DefaultLaw::exponential(1.5),
                             DefaultLaw::cantor(1.0, 2.0, 2, 0.2),
                             DefaultLaw::cantor(0.0, 1.0, 3, 0.25)};
  std::uint64_t seed = 100;
  for (const auto& law : laws) {
    const auto x = draw(law, ++seed);
    for (double t : x) REQUIRE(t > 0.0);
    const double d = oracle::ks_one_sample(x, [&](double t) { return law_cdf(law, t); });
    CAPTURE(law.kind_name());
    CHECK(d < band(x.size()));
  }
}

TEST_CASE("atomic sampler passes the KS test") {
  const auto law = DefaultLaw::atomic({1.0, 1.5, 2.0}, {0.2, 0.3, 0.5});
  auto x = draw(law, 7);
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (double atom : {1.0, 1.5, 2.0}) {
    const double below = static_cast<double>(std::count_if(x.begin(), x.end(), [&](double t) { return t <= atom; }));
    d = std::max(d, std::abs(below / n - law_cdf(law, atom)));
  }
  CHECK(d < band(x.size()));
  for (double t : x) CHECK((t == 1.0 || t == 1.5 || t == 2.0));
}

TEST_CASE("Cantor samples lie on every cover level") {
  const auto law = DefaultLaw::cantor(1.0, 2.0, 2, 0.2);
  const SetDescriptor support = support_of(law);
  const auto x = draw(law, 9, 2000);
  for (int k = 1; k <= 20; ++k)
    for (double t : x) REQUIRE(distance_to_set(support, t, k) <= std::pow(0.2, k) * 1.0);
}

TEST_CASE("a Cantor law based at 0 never returns 0") {
  const auto law = DefaultLaw::cantor(0.0, 1.0, 2, 0.5);
  const auto x = draw(law, 11, 10000);
  for (double t : x) CHECK(t > 0.0);
}
