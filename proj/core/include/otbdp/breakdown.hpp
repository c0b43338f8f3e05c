#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "otbdp/measures.hpp"
#include "otbdp/types.hpp"

namespace otbdp {

/// Slack applied to every "sum >= threshold" comparison. Equal-weight test
/// vectors land exactly on the jumps of the ceiling (t = 1/2 with n even),
/// where accumulated rounding would otherwise decide the outcome.
inline constexpr double kThresholdSlack = 1e-12;

/// Ceiling with the convention ceil(0) = 1, evaluated with the same slack as
/// the subset search: smallest k >= 1 with k >= x - n * kThresholdSlack is
/// what callers get from modified_ceil(n * t, n).
std::size_t modified_ceil(double x, std::size_t n = 1);

/// ceil(n * depth) / n with ceil(0) = 1: the breakdown point for an
/// empirical target.
double empirical_breakdown(std::size_t n, double depth);

/// Lightest nonempty subset whose weight reaches a threshold.
/// `sum` is accumulated over `subset` in ascending index order, so it equals
/// the stored weights' subset sum bit for bit. Ties in `sum` go to the
/// lexicographically smallest index list.
struct SubsetMin {
  double sum = 0.0;
  std::vector<std::size_t> subset;
};

/// min { sum_{i in I} w_i : I nonempty, sum_{i in I} w_i >= t }.
/// Exhaustive for n <= 22, branch-and-bound above. Throws
/// InfeasibleThreshold when t exceeds the total weight.
SubsetMin min_subset_at_least(std::span<const double> weights, double threshold);

/// Depth-first enumeration of all 2^n - 1 subsets.
SubsetMin min_subset_exhaustive(std::span<const double> weights, double threshold);

/// Branch-and-bound over weights sorted in decreasing order, pruning with
/// the remaining-mass and incumbent bounds. Exact.
SubsetMin min_subset_branch_and_bound(std::span<const double> weights, double threshold);

struct BreakdownReport {
  double bdp = 0.0;
  std::vector<std::size_t> achieving_subset;
  double depth_used = 0.0;
  std::optional<double> empirical_form;  // ceil(n HD)/n, only for equal weights
};

/// Breakdown point of Q_nu(u): the lightest atom subset whose mass reaches
/// HD(u, mu). Depends on the atoms only through their weights.
/// For equal weights `bdp` is the exact fraction k/n. Throws OutsideSupport.
BreakdownReport breakdown_point(const ReferenceMeasure& reference, const DiscreteMeasure& target,
                                std::span<const double> u);

struct MedianBreakdown {
  BreakdownReport report;
  Point median;
  double lower_bound = 0.0;  // lightest subset reaching 1/(d+1)
  bool lower_bound_holds = false;
};

/// Breakdown point of the OT median Q_nu(u*), checked against the
/// 1/(d+1) subset bound.
MedianBreakdown median_breakdown(const ReferenceMeasure& reference, const DiscreteMeasure& target);

}  // namespace otbdp
