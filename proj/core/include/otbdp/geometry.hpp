#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "otbdp/measures.hpp"
#include "otbdp/types.hpp"

namespace otbdp {

/// Closed halfspace {z : <normal, z - anchor> >= offset}.
struct Halfspace {
  Halfspace(Point normal, Point anchor, double offset);

  bool contains(std::span<const double> z) const;

  Point normal;
  Point anchor;
  double offset;
};

/// Power (Laguerre) diagram of weighted sites restricted to the support of a
/// reference measure. Cell i is
///
///   { u in S : ||u - x_i||^2 - w_i <= ||u - x_j||^2 - w_j  for all j }.
///
/// Cells are never built explicitly; every query is a classification by the
/// exact argmin of the power distance, with ties going to the smallest index.
class PowerDiagram {
 public:
  PowerDiagram(ReferenceMeasure reference, PointSet sites, std::vector<double> weights);

  const ReferenceMeasure& reference() const noexcept { return reference_; }
  const PointSet& sites() const noexcept { return sites_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return sites_.size(); }
  std::size_t dim() const noexcept { return sites_.dim(); }

  /// Index of the cell containing `point`. Throws OutsideSupport when the
  /// point is not in the support of the reference.
  std::size_t classify(std::span<const double> point) const;

  /// Same as classify() without the dimension and support checks.
  std::size_t classify_unchecked(const double* point) const noexcept;

  double power_distance(std::size_t i, std::span<const double> point) const;

  /// Monte-Carlo estimate of mu(cell i) from `budget` reference samples.
  /// Counts partition the sample, so the estimates sum to one.
  std::vector<double> cell_masses(std::size_t budget, std::uint64_t seed) const;

  /// Raw per-cell counts behind cell_masses().
  std::vector<std::size_t> cell_counts(std::size_t budget, std::uint64_t seed) const;

  /// d = 1 only: the n - 1 breakpoints between consecutive sites, clamped to
  /// the support interval and made non-decreasing. Sites must be strictly
  /// increasing.
  std::vector<double> cell_boundary_1d() const;

  PowerDiagram with_weights(std::vector<double> weights) const;

 private:
  ReferenceMeasure reference_;
  PointSet sites_;
  std::vector<double> weights_;
};

}  // namespace otbdp
