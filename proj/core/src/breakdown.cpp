#include "otbdp/breakdown.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "otbdp/depth.hpp"

namespace otbdp {
namespace {

constexpr std::size_t kExhaustiveLimit = 22;
// Pruning slack; far above rounding noise, far below any weight.
constexpr double kPruneSlack = 1e-9;

double canonical_sum(std::span<const double> weights, const std::vector<std::size_t>& subset) {
  double s = 0.0;
  for (std::size_t i : subset) s += weights[i];
  return s;
}

struct Incumbent {
  double sum = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> subset;

  // `subset` must be sorted ascending.
  void offer(double s, const std::vector<std::size_t>& candidate) {
    if (s < sum || (s == sum && candidate < subset)) {
      sum = s;
      subset = candidate;
    }
  }
};

void validate(std::span<const double> weights, double threshold) {
  if (weights.empty()) throw Error(ErrorCode::InvalidArgument, "subset search needs at least one weight");
  for (double w : weights) {
    if (!(w > 0.0)) throw Error(ErrorCode::InvalidArgument, "subset weights must be positive");
  }
  if (!(threshold >= 0.0) || threshold > 1.0 + kThresholdSlack) {
    throw Error(ErrorCode::InfeasibleThreshold, "threshold must lie in [0, 1]");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (total < threshold - kThresholdSlack) {
    throw Error(ErrorCode::InfeasibleThreshold, "no subset reaches the threshold");
  }
}

}  // namespace

std::size_t modified_ceil(double x, std::size_t n) {
  const double shifted = x - static_cast<double>(n) * kThresholdSlack;
  if (shifted <= 0.0) return 1;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(shifted)));
}

double empirical_breakdown(std::size_t n, double depth) {
  return static_cast<double>(modified_ceil(static_cast<double>(n) * depth, n)) / static_cast<double>(n);
}

SubsetMin min_subset_exhaustive(std::span<const double> weights, double threshold) {
  validate(weights, threshold);
  const std::size_t n = weights.size();
  const double level = threshold - kThresholdSlack;
  Incumbent best;
  std::vector<std::size_t> current;
  current.reserve(n);
  // Indices are appended in increasing order, so `partial` is always the
  // canonical left-to-right sum of `current`.
  const auto visit = [&](auto&& self, std::size_t next, double partial) -> void {
    if (!current.empty() && partial >= level) best.offer(partial, current);
    for (std::size_t i = next; i < n; ++i) {
      current.push_back(i);
      self(self, i + 1, partial + weights[i]);
      current.pop_back();
    }
  };
  visit(visit, 0, 0.0);
  return {best.sum, best.subset};
}

SubsetMin min_subset_branch_and_bound(std::span<const double> weights, double threshold) {
  validate(weights, threshold);
  const std::size_t n = weights.size();
  const double level = threshold - kThresholdSlack;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  // suffix[k] = total weight of order[k..n)
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] + weights[order[k]];

  Incumbent best;
  std::vector<std::size_t> chosen;
  chosen.reserve(n);

  const auto branch = [&](auto&& self, std::size_t k, double partial) -> void {
    if (!chosen.empty() && partial >= level - kPruneSlack) {
      std::vector<std::size_t> sorted = chosen;
      std::sort(sorted.begin(), sorted.end());
      const double s = canonical_sum(weights, sorted);
      if (s >= level) {
        // Any superset is heavier; stop here.
        best.offer(s, sorted);
        return;
      }
    }
    if (k == n) return;
    if (partial + suffix[k] < level - kPruneSlack) return;
    if (partial > best.sum + kPruneSlack) return;
    chosen.push_back(order[k]);
    self(self, k + 1, partial + weights[order[k]]);
    chosen.pop_back();
    self(self, k + 1, partial);
  };
  branch(branch, 0, 0.0);
  return {best.sum, best.subset};
}

SubsetMin min_subset_at_least(std::span<const double> weights, double threshold) {
  if (std::adjacent_find(weights.begin(), weights.end(), std::not_equal_to<>{}) == weights.end()) {
    // Equal weights: {0, ..., k-1} is the lexicographically smallest k-subset.
    validate(weights, threshold);
    const double level = threshold - kThresholdSlack;
    SubsetMin out;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      out.sum += weights[i];
      out.subset.push_back(i);
      if (out.sum >= level) return out;
    }
  }
  if (weights.size() <= kExhaustiveLimit) return min_subset_exhaustive(weights, threshold);
  return min_subset_branch_and_bound(weights, threshold);
}

BreakdownReport breakdown_point(const ReferenceMeasure& reference, const DiscreteMeasure& target,
                                std::span<const double> u) {
  require_dim(u, reference.dim());
  if (target.dim() != reference.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "target dimension differs from the reference dimension");
  }
  if (!reference.contains(u)) {
    throw Error(ErrorCode::OutsideSupport, "breakdown point is defined for points of the support");
  }
  const double hd = depth(reference, u).value;
  auto best = min_subset_at_least(target.weights(), hd);
  BreakdownReport report{best.sum, std::move(best.subset), hd, std::nullopt};
  if (target.is_empirical()) {
    // k atoms of mass 1/n: report k/n rather than its rounded running sum.
    report.empirical_form = empirical_breakdown(target.size(), hd);
    report.bdp = static_cast<double>(report.achieving_subset.size()) / static_cast<double>(target.size());
  }
  return report;
}

MedianBreakdown median_breakdown(const ReferenceMeasure& reference, const DiscreteMeasure& target) {
  MedianBreakdown out;
  out.median = tukey_median(reference);
  out.report = breakdown_point(reference, target, out.median);
  const double bound_level = 1.0 / static_cast<double>(reference.dim() + 1);
  out.lower_bound = min_subset_at_least(target.weights(), bound_level).sum;
  out.lower_bound_holds = out.report.bdp >= out.lower_bound - kThresholdSlack;
  return out;
}

}  // namespace otbdp
