#include "dlab/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dlab/parallel.hpp"

namespace dlab {

namespace {

ZeroHit zero_hit_on(std::span<const double> times, std::span<const double> beta, double tau,
                    const SetDescriptor& gamma, int level, const SearchOptions& search, Rng& rng) {
  if (gamma.is_empty()) return {tau, false};
  const double lower = gamma.inf() / 2.0;
  const SearchOutcome o = first_zero_on_cover(gamma, level, tau, lower, times, beta, rng, search);
  if (o.hit && o.time < tau) return {o.time, true};
  return {tau, false};
}

std::size_t first_exact_zero(const XPath& x) {
  for (std::size_t i = 0; i < x.times.size(); ++i)
    if (x.times[i] > 0.0 && x.distance[i] == 0.0 && x.beta[i] == 0.0) return i;
  return x.times.size();
}

}  // namespace

XPath build_x_path(const InfoPath& info, const SetDescriptor& gamma) {
  XPath x;
  x.tau = info.tau;
  x.times.assign(info.grid.times().begin(), info.grid.times().end());
  x.beta = info.values;
  x.base_spacing = info.grid.base_spacing();
  x.distance.resize(x.times.size());
  for (std::size_t i = 0; i < x.times.size(); ++i)
    x.distance[i] = x.times[i] == info.tau ? 0.0 : distance_to_set(gamma, x.times[i]);
  x.first_hit_index = first_exact_zero(x);
  return x;
}

ZeroHit first_zero_hit(const XPath& x, const SetDescriptor& gamma, const ZeroHitOptions& options,
                       Rng& rng) {
  return zero_hit_on(x.times, x.beta, x.tau, gamma, options.level, options.search, rng);
}

XPath with_hit(const XPath& x, const ZeroHit& hit, const SetDescriptor& gamma) {
  if (!hit.strict) return x;
  const auto pos = std::lower_bound(x.times.begin(), x.times.end(), hit.time);
  const auto i = static_cast<std::size_t>(pos - x.times.begin());
  XPath out = x;
  if (i < x.times.size() && x.times[i] == hit.time) {
    out.beta[i] = 0.0;
  } else {
    const auto at = static_cast<std::ptrdiff_t>(i);
    out.times.insert(out.times.begin() + at, hit.time);
    out.beta.insert(out.beta.begin() + at, 0.0);
    out.distance.insert(out.distance.begin() + at, distance_to_set(gamma, hit.time));
  }
  out.first_hit_index = i;
  return out;
}

std::vector<double> announcing_sequence(const XPath& x, int n_max) {
  if (n_max < 1) throw std::invalid_argument("announcing_sequence: n_max must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n_max));
  double previous = std::numeric_limits<double>::quiet_NaN();
  std::size_t start = 0;  // the level sets are nested, so each scan resumes where the last stopped
  for (int n = 1; n <= n_max; ++n) {
    const double radius = 1.0 / n;
    std::size_t i = start;
    while (i < x.times.size() && std::hypot(x.distance[i], x.beta[i]) > radius) ++i;
    if (i < x.times.size()) {
      previous = x.times[i];
      start = i;
    } else {
      start = x.times.size();
    }
    out[static_cast<std::size_t>(n - 1)] = previous;
  }
  return out;
}

ExperimentReport predictability_experiment(const DefaultLaw& law, std::span<const int> levels,
                                           std::size_t n_paths, std::uint64_t seed,
                                           const ExperimentOptions& options) {
  const SetDescriptor gamma = support_of(law);
  if (gamma.is_empty() || !(gamma.inf() > 0.0))
    throw HypothesisError("experiment: the support of the default time contains 0 (hypothesis 0 "
                          "outside the support fails)");
  if (levels.empty()) throw std::invalid_argument("experiment: at least one level is required");
  for (int k : levels)
    if (k < 0) throw std::invalid_argument("experiment: levels must be >= 0");
  if (n_paths == 0) throw std::invalid_argument("experiment: n_paths must be >= 1");
  if (!(options.threshold > 0.0 && options.threshold < 1.0))
    throw std::invalid_argument("experiment: threshold must lie in (0, 1)");

  ExperimentReport report;
  report.law_kind = std::string(law.kind_name());
  report.seed = seed;
  report.n_paths = n_paths;
  report.threshold = options.threshold;
  report.lower = gamma.inf() / 2.0;
  report.horizon = options.grid.horizon > 0.0 ? options.grid.horizon : default_horizon(law);
  report.dimension = hausdorff_dimension_analytic(gamma);
  GridPolicy grid = options.grid;
  grid.horizon = report.horizon;

  const std::size_t n_levels = levels.size();
  std::vector<unsigned char> strict(n_paths * n_levels, 0);
  std::vector<double> pruned(n_paths * n_levels, 0.0);
  parallel_for(n_paths, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, i);
    const InfoPath info = sample_information_path(law, grid, rng);
    Rng search_rng = Rng::stream(seed ^ kSaltSearch, i);
    for (std::size_t l = 0; l < n_levels; ++l) {
      const SearchOutcome o = first_zero_on_cover(gamma, levels[l], info.tau, report.lower,
                                                  info.grid.times(), info.values, search_rng,
                                                  options.search);
      strict[i * n_levels + l] = (o.hit && o.time < info.tau) ? 1 : 0;
      pruned[i * n_levels + l] = o.pruned_mass;
    }
  });
  for (std::size_t l = 0; l < n_levels; ++l) {
    LevelEstimate e;
    e.level = levels[l];
    e.n_intervals = cover_size(gamma, levels[l]);
    e.n_paths = n_paths;
    double pruned_total = 0.0;
    for (std::size_t i = 0; i < n_paths; ++i) {
      e.strict_hits += strict[i * n_levels + l];
      pruned_total += pruned[i * n_levels + l];
    }
    e.estimate = static_cast<double>(e.strict_hits) / static_cast<double>(n_paths);
    e.half_width = binomial_half_width(e.estimate, n_paths);
    e.pruned_mass = pruned_total / static_cast<double>(n_paths);
    report.levels.push_back(e);
  }

  const auto* atomic = std::get_if<AtomicLaw>(&law.params());
  if (atomic != nullptr && options.per_atom) {
    const int finest = levels.back();
    double mixture = 0.0, mixture_var = 0.0;
    for (std::size_t a = 0; a < atomic->times.size(); ++a) {
      if (atomic->weights[a] == 0.0) continue;
      const double r = atomic->times[a];
      const TimeGrid atom_grid = grid_for(grid, report.horizon, r);
      std::vector<unsigned char> hit(n_paths, 0);
      parallel_for(n_paths, [&](std::size_t i) {
        Rng rng = Rng::stream(seed ^ kSaltConditional, a * n_paths + i);
        const BridgePath path = sample_bridge_path(r, atom_grid, rng);
        const SearchOutcome o = first_zero_on_cover(gamma, finest, r, report.lower,
                                                    path.grid.times(), path.values, rng,
                                                    options.search);
        hit[i] = (o.hit && o.time < r) ? 1 : 0;
      });
      AtomEstimate ae;
      ae.time = r;
      ae.weight = atomic->weights[a];
      ae.n_paths = n_paths;
      for (unsigned char h : hit) ae.hits += h;
      ae.estimate = static_cast<double>(ae.hits) / static_cast<double>(n_paths);
      ae.half_width = binomial_half_width(ae.estimate, n_paths);
      mixture += ae.weight * ae.estimate;
      mixture_var += ae.weight * ae.weight * ae.estimate * (1.0 - ae.estimate) /
                     static_cast<double>(n_paths);
      report.per_atom.push_back(ae);
    }
    const LevelEstimate& joint = report.finest();
    MixtureCheck m;
    m.joint = joint.estimate;
    m.mixture = mixture;
    m.difference = std::abs(m.joint - m.mixture);
    const double joint_var =
        joint.estimate * (1.0 - joint.estimate) / static_cast<double>(n_paths);
    m.ci = 1.96 * std::sqrt(joint_var + mixture_var);
    m.holds = m.difference <= m.ci;
    report.mixture = m;
  }

  Verdict& v = report.verdict;
  v.hypothesis_holds = report.dimension <= 0.5;
  bool nonincreasing = true;
  for (std::size_t l = 1; l < n_levels; ++l) {
    const LevelEstimate& prev = report.levels[l - 1];
    const LevelEstimate& cur = report.levels[l];
    if (cur.estimate > prev.estimate + prev.half_width + cur.half_width) nonincreasing = false;
  }
  const LevelEstimate& last = report.finest();
  v.consistent_with_predictable =
      v.hypothesis_holds && nonincreasing && last.estimate < options.threshold;
  v.positive_hitting = last.estimate - last.half_width > 0.0;
  return report;
}

}  // namespace dlab
