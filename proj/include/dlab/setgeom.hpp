#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace dlab {

// Default recursion depth for Cantor distance and membership queries.
inline constexpr int kCantorDepth = 40;

struct Interval {
  double left = 0.0;
  double right = 0.0;

  double length() const { return right - left; }
  bool degenerate() const { return right == left; }
  bool contains(double t) const { return left <= t && t <= right; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct FinitePoints {
  std::vector<double> points;  // strictly increasing
  friend bool operator==(const FinitePoints&, const FinitePoints&) = default;
};

struct IntervalUnion {
  std::vector<Interval> intervals;  // sorted, pairwise disjoint
  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;
};

// Self-similar Cantor set on [left, right]: each construction step keeps
// `branches` equally spaced closed pieces of relative length `ratio`.
struct CantorSet {
  double left = 0.0;
  double right = 1.0;
  int branches = 2;
  double ratio = 1.0 / 3.0;

  double length() const { return right - left; }
  // Offset of child j inside a parent of length L, measured from the parent's left end.
  double child_offset(int j, double L) const;
  // Child j of `parent`; the first and last children share the parent's endpoints exactly.
  Interval child(const Interval& parent, int j) const;
  friend bool operator==(const CantorSet&, const CantorSet&) = default;
};

// A closed subset of [0, inf) in time units.
class SetDescriptor {
 public:
  using Variant = std::variant<FinitePoints, IntervalUnion, CantorSet>;

  // Throws std::invalid_argument when the variant's invariants fail.
  explicit SetDescriptor(Variant v);

  static SetDescriptor points(std::vector<double> pts);
  static SetDescriptor intervals(std::vector<Interval> ivs);
  static SetDescriptor cantor(double left, double right, int branches, double ratio);
  static SetDescriptor empty() { return points({}); }

  const Variant& variant() const { return v_; }
  std::string_view variant_name() const;
  bool is_empty() const;
  // Infimum and supremum; both 0 for the empty set.
  double inf() const;
  double sup() const;

  friend bool operator==(const SetDescriptor&, const SetDescriptor&) = default;

 private:
  Variant v_;
};

struct CoverLevel {
  int level = 0;
  std::vector<Interval> intervals;
};

// Level-k cover: the Cantor construction at step k, degenerate intervals for
// point sets, and the set itself for interval unions.
CoverLevel cover_intervals(const SetDescriptor& set, int k);

// CSV rows "level,left,right" with a header.
void write_cover_csv(std::ostream& os, const CoverLevel& cover);

// Number of intervals in the level-k cover without materializing it.
double cover_size(const SetDescriptor& set, int k);

double distance_to_set(const SetDescriptor& set, double t, int depth = kCantorDepth);

// True iff t lies in the level-`depth` cover.
bool membership(const SetDescriptor& set, double t, int depth);

double hausdorff_dimension_analytic(const SetDescriptor& set);

struct BoxCountingResult {
  double dimension = 0.0;
  bool degenerate = false;  // all counts equal; dimension reported as 0
  std::vector<std::size_t> counts;
};

// Least-squares slope of log N(eps) against log(1/eps) over grid-aligned boxes.
// `scales` must hold at least three strictly decreasing box sizes.
BoxCountingResult box_counting_estimate(const SetDescriptor& set, std::span<const double> scales);

// Exact number of grid boxes [j*eps, (j+1)*eps) meeting the set.
std::size_t box_count(const SetDescriptor& set, double eps);

// Intersection of a list of closed intervals with [lo, hi]; empty pieces dropped.
std::vector<Interval> clip_intervals(std::span<const Interval> ivs, double lo, double hi);

}  // namespace dlab
