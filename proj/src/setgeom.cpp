#include "dlab/setgeom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void validate(const FinitePoints& p) {
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    const double t = p.points[i];
    if (!std::isfinite(t) || t < 0.0)
      throw std::invalid_argument("finite-points: times must be finite and nonnegative");
    if (i > 0 && !(p.points[i - 1] < t))
      throw std::invalid_argument("finite-points: times must be strictly increasing");
  }
}

void validate(const IntervalUnion& u) {
  for (std::size_t i = 0; i < u.intervals.size(); ++i) {
    const auto& iv = u.intervals[i];
    if (!std::isfinite(iv.left) || iv.left < 0.0 || std::isnan(iv.right) || iv.right < iv.left)
      throw std::invalid_argument("interval-union: each interval needs 0 <= left <= right");
    if (!std::isfinite(iv.right) && i + 1 != u.intervals.size())
      throw std::invalid_argument("interval-union: only the last interval may be unbounded");
    if (i > 0 && !(u.intervals[i - 1].right < iv.left))
      throw std::invalid_argument("interval-union: intervals must be sorted and pairwise disjoint");
  }
}

void validate(const CantorSet& c) {
  if (!std::isfinite(c.left) || !std::isfinite(c.right) || c.left < 0.0 || !(c.left < c.right))
    throw std::invalid_argument("cantor: base interval needs 0 <= left < right");
  if (c.branches < 2) throw std::invalid_argument("cantor: branches must be at least 2");
  if (!(c.ratio > 0.0))
    throw std::invalid_argument("cantor: ratio must be positive");
  if (c.branches * c.ratio > 1.0 + 1e-12)
    throw std::invalid_argument(
        "cantor: branches * ratio must not exceed 1 (branches must be disjoint)");
}

// Index of the child of `node` containing t, or -1 when t falls in a gap.
// On a gap, `gap_distance` receives the distance to the nearest child.
int locate_child(const CantorSet& c, const Interval& node, double t, double& gap_distance) {
  for (int j = 0; j < c.branches; ++j) {
    const Interval ch = c.child(node, j);
    if (t < ch.left) {
      // t lies between child j-1 and child j (j > 0 since t >= node.left).
      const Interval prev = c.child(node, j - 1);
      gap_distance = std::min(t - prev.right, ch.left - t);
      return -1;
    }
    if (t <= ch.right) return j;
  }
  gap_distance = 0.0;  // unreachable for t inside node
  return -1;
}

void count_cantor_boxes(const CantorSet& c, const Interval& node, double eps, int depth,
                        std::vector<long long>& boxes) {
  const auto jl = static_cast<long long>(std::floor(node.left / eps));
  const auto ju = static_cast<long long>(std::floor(node.right / eps));
  // Node endpoints always belong to the set, so a node meeting at most two
  // boxes meets exactly the boxes of its endpoints.
  if (ju - jl <= 1 || depth > 200) {
    boxes.push_back(jl);
    boxes.push_back(ju);
    return;
  }
  for (int j = 0; j < c.branches; ++j) count_cantor_boxes(c, c.child(node, j), eps, depth + 1, boxes);
}

}  // namespace

double CantorSet::child_offset(int j, double L) const {
  return static_cast<double>(j) * (1.0 - ratio) * L / static_cast<double>(branches - 1);
}

Interval CantorSet::child(const Interval& parent, int j) const {
  const double L = parent.length();
  Interval out;
  out.left = (j == 0) ? parent.left : parent.left + child_offset(j, L);
  out.right = (j == branches - 1) ? parent.right : out.left + ratio * L;
  return out;
}

SetDescriptor::SetDescriptor(Variant v) : v_(std::move(v)) {
  std::visit([](const auto& x) { validate(x); }, v_);
}

SetDescriptor SetDescriptor::points(std::vector<double> pts) {
  return SetDescriptor(FinitePoints{std::move(pts)});
}

SetDescriptor SetDescriptor::intervals(std::vector<Interval> ivs) {
  return SetDescriptor(IntervalUnion{std::move(ivs)});
}

SetDescriptor SetDescriptor::cantor(double left, double right, int branches, double ratio) {
  return SetDescriptor(CantorSet{left, right, branches, ratio});
}

std::string_view SetDescriptor::variant_name() const {
  return std::visit(overloaded{[](const FinitePoints&) { return std::string_view("points"); },
                               [](const IntervalUnion&) { return std::string_view("intervals"); },
                               [](const CantorSet&) { return std::string_view("cantor"); }},
                    v_);
}

bool SetDescriptor::is_empty() const {
  return std::visit(overloaded{[](const FinitePoints& p) { return p.points.empty(); },
                               [](const IntervalUnion& u) { return u.intervals.empty(); },
                               [](const CantorSet&) { return false; }},
                    v_);
}

double SetDescriptor::inf() const {
  if (is_empty()) return 0.0;
  return std::visit(overloaded{[](const FinitePoints& p) { return p.points.front(); },
                               [](const IntervalUnion& u) { return u.intervals.front().left; },
                               [](const CantorSet& c) { return c.left; }},
                    v_);
}

double SetDescriptor::sup() const {
  if (is_empty()) return 0.0;
  return std::visit(overloaded{[](const FinitePoints& p) { return p.points.back(); },
                               [](const IntervalUnion& u) { return u.intervals.back().right; },
                               [](const CantorSet& c) { return c.right; }},
                    v_);
}

CoverLevel cover_intervals(const SetDescriptor& set, int k) {
  if (k < 0) throw std::invalid_argument("cover_intervals: level must be nonnegative");
  CoverLevel cover{k, {}};
  std::visit(overloaded{
                 [&](const FinitePoints& p) {
                   for (double t : p.points) cover.intervals.push_back({t, t});
                 },
                 [&](const IntervalUnion& u) { cover.intervals = u.intervals; },
                 [&](const CantorSet& c) {
                   if (cover_size(set, k) > static_cast<double>(1 << 26))
                     throw std::length_error("cover_intervals: level too deep to materialize");
                   cover.intervals = {{c.left, c.right}};
                   for (int level = 0; level < k; ++level) {
                     std::vector<Interval> next;
                     next.reserve(cover.intervals.size() * static_cast<std::size_t>(c.branches));
                     for (const auto& iv : cover.intervals)
                       for (int j = 0; j < c.branches; ++j) next.push_back(c.child(iv, j));
                     cover.intervals = std::move(next);
                   }
                 }},
             set.variant());
  return cover;
}

void write_cover_csv(std::ostream& os, const CoverLevel& cover) {
  os << "level,left,right\n";
  char buf[96];
  for (const Interval& iv : cover.intervals) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", cover.level, iv.left, iv.right);
    os << buf;
  }
}

double cover_size(const SetDescriptor& set, int k) {
  return std::visit(
      overloaded{[](const FinitePoints& p) { return static_cast<double>(p.points.size()); },
                 [](const IntervalUnion& u) { return static_cast<double>(u.intervals.size()); },
                 [k](const CantorSet& c) { return std::pow(static_cast<double>(c.branches), k); }},
      set.variant());
}

double distance_to_set(const SetDescriptor& set, double t, int depth) {
  if (set.is_empty()) return std::numeric_limits<double>::infinity();
  return std::visit(
      overloaded{
          [t](const FinitePoints& p) {
            const auto it = std::lower_bound(p.points.begin(), p.points.end(), t);
            double d = std::numeric_limits<double>::infinity();
            if (it != p.points.end()) d = *it - t;
            if (it != p.points.begin()) d = std::min(d, t - *std::prev(it));
            return d;
          },
          [t](const IntervalUnion& u) {
            double d = std::numeric_limits<double>::infinity();
            for (const auto& iv : u.intervals) {
              if (iv.contains(t)) return 0.0;
              d = std::min(d, t < iv.left ? iv.left - t : t - iv.right);
            }
            return d;
          },
          [t, depth](const CantorSet& c) {
            Interval node{c.left, c.right};
            if (t < node.left) return node.left - t;
            if (t > node.right) return t - node.right;
            for (int level = 0; level < depth; ++level) {
              double gap = 0.0;
              const int j = locate_child(c, node, t, gap);
              if (j < 0) return gap;
              node = c.child(node, j);
            }
            return 0.0;
          }},
      set.variant());
}

bool membership(const SetDescriptor& set, double t, int depth) {
  if (depth < 0) throw std::invalid_argument("membership: depth must be nonnegative");
  return std::visit(
      overloaded{[t](const FinitePoints& p) {
                   return std::binary_search(p.points.begin(), p.points.end(), t);
                 },
                 [t](const IntervalUnion& u) {
                   return std::any_of(u.intervals.begin(), u.intervals.end(),
                                      [t](const Interval& iv) { return iv.contains(t); });
                 },
                 [t, depth](const CantorSet& c) {
                   Interval node{c.left, c.right};
                   if (!node.contains(t)) return false;
                   for (int level = 0; level < depth; ++level) {
                     double gap = 0.0;
                     const int j = locate_child(c, node, t, gap);
                     if (j < 0) return false;
                     node = c.child(node, j);
                   }
                   return true;
                 }},
      set.variant());
}

double hausdorff_dimension_analytic(const SetDescriptor& set) {
  return std::visit(
      overloaded{[](const FinitePoints&) { return 0.0; },
                 [](const IntervalUnion& u) {
                   const bool any = std::any_of(u.intervals.begin(), u.intervals.end(),
                                                [](const Interval& iv) { return !iv.degenerate(); });
                   return any ? 1.0 : 0.0;
                 },
                 [](const CantorSet& c) {
                   return std::log(static_cast<double>(c.branches)) / std::log(1.0 / c.ratio);
                 }},
      set.variant());
}

std::size_t box_count(const SetDescriptor& set, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("box_count: box size must be positive");
  std::vector<long long> boxes;
  std::visit(overloaded{[&](const FinitePoints& p) {
                          for (double t : p.points)
                            boxes.push_back(static_cast<long long>(std::floor(t / eps)));
                        },
                        [&](const IntervalUnion& u) {
                          for (const auto& iv : u.intervals) {
                            if (!std::isfinite(iv.right))
                              throw std::invalid_argument("box_count: unbounded set");
                            const auto lo = static_cast<long long>(std::floor(iv.left / eps));
                            const auto hi = static_cast<long long>(std::floor(iv.right / eps));
                            for (long long j = lo; j <= hi; ++j) boxes.push_back(j);
                          }
                        },
                        [&](const CantorSet& c) {
                          count_cantor_boxes(c, {c.left, c.right}, eps, 0, boxes);
                        }},
             set.variant());
  std::sort(boxes.begin(), boxes.end());
  return static_cast<std::size_t>(std::unique(boxes.begin(), boxes.end()) - boxes.begin());
}

BoxCountingResult box_counting_estimate(const SetDescriptor& set, std::span<const double> scales) {
  if (scales.size() < 3)
    throw std::invalid_argument("box_counting_estimate: need at least three scales");
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (!(scales[i] < scales[i - 1]))
      throw std::invalid_argument("box_counting_estimate: scales must be strictly decreasing");

  BoxCountingResult out;
  std::vector<double> xs, ys;
  for (double eps : scales) {
    const std::size_t n = box_count(set, eps);
    out.counts.push_back(n);
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(std::log(static_cast<double>(std::max<std::size_t>(n, 1))));
  }
  if (std::all_of(out.counts.begin(), out.counts.end(),
                  [&](std::size_t n) { return n == out.counts.front(); })) {
    out.degenerate = true;
    out.dimension = 0.0;
    return out;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  out.dimension = sxy / sxx;
  return out;
}

std::vector<Interval> clip_intervals(std::span<const Interval> ivs, double lo, double hi) {
  std::vector<Interval> out;
  for (const auto& iv : ivs) {
    const Interval c{std::max(iv.left, lo), std::min(iv.right, hi)};
    if (c.left <= c.right) out.push_back(c);
  }
  return out;
}

}  // namespace dlab
