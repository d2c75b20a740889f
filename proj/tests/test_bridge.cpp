#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dlab/bridge.hpp"
#include "support/oracles.hpp"

using namespace dlab;

TEST_CASE("transition formula") {
  const Transition end = bridge_transition(0.7, 0.2, 1.0, 1.0);
  CHECK(end.mean == 0.0);
  CHECK(end.variance == 0.0);
  const Transition half = bridge_transition(0.0, 0.0, 1.0, 2.0);
  CHECK(half.mean == 0.0);
  CHECK(half.variance == doctest::Approx(0.5));
  const Transition gen = bridge_transition(0.4, 0.5, 0.8, 2.0);
  CHECK(gen.mean == doctest::Approx(0.4 * 1.2 / 1.5));
  CHECK(gen.variance == doctest::Approx(0.3 * 1.2 / 1.5));
  CHECK(bridge_transition(1.0, 0.5, 0.5 + 1e-12, 1.0).variance < 1e-11);
  CHECK_THROWS_AS(bridge_transition(0.0, 0.5, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bridge_transition(0.0, 0.1, 1.5, 1.0), std::invalid_argument);
}

TEST_CASE("grid construction") {
  CHECK_THROWS_AS(TimeGrid({0.0, 0.5, 0.5}, GridPolicyKind::uniform), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid({0.1, 0.5}, GridPolicyKind::uniform), std::invalid_argument);
  const TimeGrid u = TimeGrid::uniform(2.0, 4);
  CHECK(u.size() == 5);
  CHECK(u[2] == 1.0);
  CHECK(u.base_spacing() == 0.5);
  const double targets[] = {0.3};
  const TimeGrid g = TimeGrid::refined(1.0, 10, targets, 0.5, 1e-9);
  CHECK(g.policy() == GridPolicyKind::geometric_near_target);
  bool has_target = false;
  double closest = 1.0;
  for (double t : g.times()) {
    has_target = has_target || t == 0.3;
    if (t != 0.3) closest = std::min(closest, std::abs(t - 0.3));
  }
  CHECK(has_target);
  CHECK(closest < 1e-9 * 0.3 * 2.0);
  CHECK(closest >= 1e-9 * 0.3);
  GridPolicy pol;
  pol.kind = GridPolicyKind::uniform;
  pol.steps = 10;
  const TimeGrid with_tau = grid_for(pol, 1.0, 0.333);
  CHECK(with_tau.size() == 12);
}

TEST_CASE("bridge paths are pinned") {
  Rng rng(5);
  const TimeGrid grid = TimeGrid::uniform(2.0, 100);
  for (int i = 0; i < 100; ++i) {
    const BridgePath p = sample_bridge_path(1.3, grid, rng);
    CHECK(p.values[0] == 0.0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (grid[j] >= 1.3) CHECK(p.values[j] == 0.0);
      if (grid[j] > 0.0 && grid[j] < 1.3) CHECK(p.values[j] != 0.0);
    }
  }
}

TEST_CASE("bridge moments and covariance") {
  const TimeGrid grid({0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}, GridPolicyKind::uniform);
  const std::size_t n = 100000;
  std::vector<std::vector<double>> v(grid.size(), std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::stream(77, i);
    const BridgePath p = sample_bridge_path(1.0, grid, rng);
    for (std::size_t j = 0; j < grid.size(); ++j) v[j][i] = p.values[j];
  }
  for (std::size_t j : {1u, 3u, 5u}) {
    const double t = grid[j];
    const auto m = oracle::moments(v[j]);
    CAPTURE(t);
    CHECK(std::abs(m.mean) < 3.0 * m.mean_se());
    CHECK(std::abs(m.var - t * (1.0 - t)) < 3.0 * m.var_se());
  }
  const auto c = oracle::covariance(v[2], v[4]);
  CHECK(std::abs(c.cov - 0.0625) < 3.0 * c.se);
}

TEST_CASE("grid refinement leaves the marginal variance unchanged") {
  const std::size_t n = 40000;
  auto variance_at_half = [&](int steps, std::uint64_t seed) {
    const TimeGrid grid = TimeGrid::uniform(1.0, steps);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng = Rng::stream(seed, i);
      x[i] = sample_bridge_path(1.0, grid, rng).values[static_cast<std::size_t>(steps / 2)];
    }
    return oracle::moments(x);
  };
  const auto coarse = variance_at_half(50, 1);
  const auto fine = variance_at_half(100, 2);
  CHECK(std::abs(coarse.var - fine.var) <
        3.0 * std::sqrt(coarse.var_se() * coarse.var_se() + fine.var_se() * fine.var_se()));
}

TEST_CASE("information paths vanish exactly from tau on") {
  const DefaultLaw laws[] = {DefaultLaw::atomic({1.0, 1.5, 2.0}, {0.3, 0.3, 0.4}),
                             DefaultLaw::uniform(1.0, 2.0), DefaultLaw::cantor(1.0, 2.0, 2, 0.2)};
  GridPolicy pol;
  pol.steps = 400;
  for (const auto& law : laws) {
    std::size_t violations = 0;
    for (std::size_t i = 0; i < 2000; ++i) {
      Rng rng = Rng::stream(3, i);
      const InfoPath p = sample_information_path(law, pol, rng);
      bool tau_on_grid = false;
      for (std::size_t j = 0; j < p.grid.size(); ++j) {
        const double t = p.grid[j];
        tau_on_grid = tau_on_grid || t == p.tau;
        if (t > 0.0 && ((p.values[j] == 0.0) != (t >= p.tau))) ++violations;
      }
      CHECK(tau_on_grid);
      CHECK(p.values[0] == 0.0);
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("conditional law given tau is the bridge law") {
  const auto law = DefaultLaw::atomic({1.0, 1.5, 2.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  GridPolicy pol;
  pol.kind = GridPolicyKind::uniform;
  pol.steps = 40;
  std::vector<double> info, bridge;
  for (std::size_t i = 0; info.size() < 10000; ++i) {
    Rng rng = Rng::stream(21, i);
    const InfoPath p = sample_information_path(law, pol, rng);
    if (p.tau != 1.0) continue;
    for (std::size_t j = 0; j < p.grid.size(); ++j)
      if (p.grid[j] == 0.5) info.push_back(p.values[j]);
  }
  const TimeGrid grid = TimeGrid::uniform(1.0, 2);
  for (std::size_t i = 0; i < 10000; ++i) {
    Rng rng = Rng::stream(22, i);
    bridge.push_back(sample_bridge_path(1.0, grid, rng).values[1]);
  }
  CHECK(oracle::ks_two_sample(info, bridge) < oracle::ks_band_two_sample(info.size(), bridge.size()));
}

TEST_CASE("path csv") {
  InfoPath p{0.5, TimeGrid({0.0, 0.5, 1.0}, GridPolicyKind::uniform), {0.0, 0.0, 0.0}};
  std::ostringstream os;
  write_path_csv(os, p);
  CHECK(os.str() == "t,value,is_after_tau\n0,0,0\n0.5,0,1\n1,0,1\n");
}
