#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "dlab/predict.hpp"

using namespace dlab;

namespace {

GridPolicy small_grid() {
  GridPolicy g;
  g.steps = 400;
  return g;
}

}  // namespace

TEST_CASE("x path construction") {
  const DefaultLaw laws[] = {DefaultLaw::atomic({1.0, 1.5, 2.0}, {0.3, 0.3, 0.4}),
                             DefaultLaw::uniform(1.0, 2.0), DefaultLaw::cantor(1.0, 2.0, 2, 0.2)};
  for (const auto& law : laws) {
    const SetDescriptor gamma = support_of(law);
    for (std::size_t i = 0; i < 200; ++i) {
      Rng rng = Rng::stream(8, i);
      const InfoPath info = sample_information_path(law, small_grid(), rng);
      const XPath x = build_x_path(info, gamma);
      REQUIRE(x.times.size() == info.grid.size());
      REQUIRE(x.first_hit_index < x.times.size());
      CHECK(x.times[x.first_hit_index] == info.tau);
      CHECK(x.distance[x.first_hit_index] == 0.0);
      CHECK(x.beta[x.first_hit_index] == 0.0);
      for (std::size_t j = 0; j < x.times.size(); ++j) {
        CHECK(x.distance[j] >= 0.0);
        CHECK(x.beta[j] == info.values[j]);
        if (x.times[j] != info.tau) CHECK(x.distance[j] == distance_to_set(gamma, x.times[j]));
        if (membership(gamma, x.times[j], kCantorDepth)) CHECK(x.distance[j] == 0.0);
      }
    }
  }
}

TEST_CASE("first zero never exceeds tau") {
  const DefaultLaw laws[] = {DefaultLaw::atomic({1.0, 1.5, 2.0}, {0.3, 0.3, 0.4}),
                             DefaultLaw::uniform(1.0, 2.0), DefaultLaw::cantor(1.0, 2.0, 2, 0.2)};
  for (const auto& law : laws) {
    const SetDescriptor gamma = support_of(law);
    for (std::size_t i = 0; i < 300; ++i) {
      Rng rng = Rng::stream(9, i);
      const XPath x = build_x_path(sample_information_path(law, small_grid(), rng), gamma);
      const ZeroHit hit = first_zero_hit(x, gamma, {6, {}}, rng);
      CHECK(hit.time <= x.tau);
      CHECK(hit.strict == (hit.time < x.tau));
      if (hit.strict) CHECK(hit.time >= gamma.inf());
    }
  }
}

TEST_CASE("single atom: the first zero is tau") {
  const auto law = DefaultLaw::atomic({1.3}, {1.0});
  const SetDescriptor gamma = support_of(law);
  for (std::size_t i = 0; i < 100; ++i) {
    Rng rng = Rng::stream(10, i);
    const XPath x = build_x_path(sample_information_path(law, small_grid(), rng), gamma);
    const ZeroHit hit = first_zero_hit(x, gamma, {8, {}}, rng);
    CHECK(hit.time == 1.3);
    CHECK_FALSE(hit.strict);
  }
}

TEST_CASE("uniform support: strict hits occur") {
  const auto law = DefaultLaw::uniform(1.0, 2.0);
  const SetDescriptor gamma = support_of(law);
  int strict = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    Rng rng = Rng::stream(11, i);
    const XPath x = build_x_path(sample_information_path(law, small_grid(), rng), gamma);
    strict += first_zero_hit(x, gamma, {0, {}}, rng).strict ? 1 : 0;
  }
  CHECK(strict > 0);
}

TEST_CASE("announcing sequence on a hand-built path") {
  XPath x;
  x.tau = 3.0;
  x.times = {0.0, 1.0, 2.0, 3.0};
  x.distance = {1.0, 0.0, 0.0, 0.0};
  x.beta = {0.0, 0.8, 0.3, 0.0};
  x.base_spacing = 1.0;
  x.first_hit_index = 3;
  const auto seq = announcing_sequence(x, 5);
  const std::vector<double> expected{0.0, 2.0, 2.0, 3.0, 3.0};
  CHECK(seq == expected);
  CHECK_THROWS_AS(announcing_sequence(x, 0), std::invalid_argument);

  XPath far = x;
  far.times = {0.0, 1.0};
  far.distance = {1.0, 0.6};
  far.beta = {0.0, 0.0};
  const auto s2 = announcing_sequence(far, 3);
  CHECK(std::isnan(s2[0]) == false);
  CHECK(s2[0] == 0.0);
  CHECK(s2[1] == 0.0);  // level 1/2 never reached: the previous entry repeats
  CHECK(s2[2] == 0.0);
}

TEST_CASE("announcing sequences are monotone and stay below the first zero") {
  const DefaultLaw laws[] = {DefaultLaw::atomic({1.0, 1.5, 2.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3}),
                             DefaultLaw::uniform(1.0, 2.0), DefaultLaw::cantor(1.0, 2.0, 2, 0.2)};
  for (const auto& law : laws) {
    const SetDescriptor gamma = support_of(law);
    for (std::size_t i = 0; i < 1000; ++i) {
      Rng rng = Rng::stream(12, i);
      const XPath x = build_x_path(sample_information_path(law, GridPolicy{}, rng), gamma);
      const ZeroHit hit = first_zero_hit(x, gamma, {8, {}}, rng);
      const XPath xh = with_hit(x, hit, gamma);
      CHECK(xh.times[xh.first_hit_index] == hit.time);
      const auto seq = announcing_sequence(xh, 1000);
      for (std::size_t n = 1; n < seq.size(); ++n) REQUIRE(seq[n] >= seq[n - 1]);
      for (double t : seq) REQUIRE(t <= hit.time);
    }
  }
}

TEST_CASE("announcing sequence reaches the first zero on the uniform law") {
  const auto law = DefaultLaw::uniform(1.0, 2.0);
  const SetDescriptor gamma = support_of(law);
  for (std::size_t i = 0; i < 1000; ++i) {
    Rng rng = Rng::stream(13, i);
    const XPath x = build_x_path(sample_information_path(law, GridPolicy{}, rng), gamma);
    const ZeroHit hit = first_zero_hit(x, gamma, {8, {}}, rng);
    const auto seq = announcing_sequence(with_hit(x, hit, gamma), 1000);
    CHECK(hit.time - seq.back() <= 2.0 * x.base_spacing);
  }
}

TEST_CASE("experiment rejects supports containing 0") {
  const int levels[] = {2};
  CHECK_THROWS_AS(predictability_experiment(DefaultLaw::exponential(1.0), levels, 10, 1),
                  HypothesisError);
  try {
    predictability_experiment(DefaultLaw::cantor(0.0, 1.0, 2, 0.2), levels, 10, 1);
  } catch (const HypothesisError& e) {
    CHECK(std::string(e.what()).find("contains 0") != std::string::npos);
  }
}

TEST_CASE("atomic experiment: no strict hits and the mixture identity") {
  const auto law = DefaultLaw::atomic({1.0, 1.5, 2.0}, {0.2, 0.3, 0.5});
  const int levels[] = {2, 6};
  const auto rep = predictability_experiment(law, levels, 2000, 4);
  CHECK(rep.finest().estimate == 0.0);
  REQUIRE(rep.per_atom.size() == 3);
  CHECK(rep.per_atom[1].weight == 0.3);
  REQUIRE(rep.mixture.has_value());
  CHECK(rep.mixture->holds);
  CHECK(rep.verdict.hypothesis_holds);
  CHECK(rep.verdict.consistent_with_predictable);
  CHECK_FALSE(rep.verdict.positive_hitting);
  CHECK(rep.lower == 0.5);
}

TEST_CASE("interval and thick supports never get the predictable verdict") {
  const int levels[] = {0, 4};
  const auto uni = predictability_experiment(DefaultLaw::uniform(1.0, 2.0), levels, 1000, 5);
  CHECK_FALSE(uni.verdict.hypothesis_holds);
  CHECK_FALSE(uni.verdict.consistent_with_predictable);
  CHECK(uni.verdict.positive_hitting);
  CHECK(uni.per_atom.empty());
  CHECK_FALSE(uni.mixture.has_value());
  const auto thick = predictability_experiment(DefaultLaw::cantor(1.0, 2.0, 2, 0.45), levels, 1000, 5);
  CHECK_FALSE(thick.verdict.hypothesis_holds);
  CHECK_FALSE(thick.verdict.consistent_with_predictable);
}

TEST_CASE("thin Cantor law: estimates decrease with the level") {
  const int levels[] = {2, 8, 16};
  const auto rep = predictability_experiment(DefaultLaw::cantor(1.0, 2.0, 2, 0.2), levels, 3000, 6);
  for (std::size_t i = 1; i < rep.levels.size(); ++i)
    CHECK(rep.levels[i].estimate <=
          rep.levels[i - 1].estimate + rep.levels[i].half_width + rep.levels[i - 1].half_width);
  CHECK(rep.verdict.hypothesis_holds);
  const auto again = predictability_experiment(DefaultLaw::cantor(1.0, 2.0, 2, 0.2), levels, 3000, 6);
  for (std::size_t i = 0; i < rep.levels.size(); ++i)
    CHECK(rep.levels[i].strict_hits == again.levels[i].strict_hits);
}
