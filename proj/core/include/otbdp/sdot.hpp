#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "otbdp/geometry.hpp"
#include "otbdp/measures.hpp"
#include "otbdp/types.hpp"

namespace otbdp {

struct SolveConfig {
  double mass_tolerance = 1e-3;
  std::size_t max_iterations = 500;
  std::size_t mc_budget = 1'000'000;
  std::uint64_t seed = 1;

  /// Throws InvalidArgument unless mass_tolerance > 0, mc_budget >= 1000
  /// and max_iterations >= 1.
  void validate() const;
};

struct SolveStats {
  std::size_t iterations = 0;          // quasi-Newton steps plus coordinate sweeps
  std::size_t quasi_newton_steps = 0;
  std::size_t coordinate_sweeps = 0;
  std::size_t evaluations = 0;         // full passes over the fixed sample
  std::size_t empty_cell_rejections = 0;
  std::vector<double> dual_trace;      // dual value after each accepted update
  double validation_residual = 0.0;    // max |mu(cell i) - lambda_i| on an independent sample
};

/// Solved semi-discrete transport map Q_nu from a reference to a target.
///
/// The diagram is stored in a frame where the target is centred at its
/// weighted mean: site i is x_i - shift and the diagram weights are adapted
/// to those sites. Translating the atoms leaves the sites (and therefore the
/// partition of the reference) unchanged, which is how translation
/// equivariance holds bit for bit in practice.
class TransportMap {
 public:
  TransportMap(PowerDiagram diagram, DiscreteMeasure target, Point shift, double residual,
               SolveStats stats = {});

  const PowerDiagram& diagram() const noexcept { return diagram_; }
  const DiscreteMeasure& target() const noexcept { return target_; }
  const ReferenceMeasure& reference() const noexcept { return diagram_.reference(); }
  const Point& shift() const noexcept { return shift_; }
  /// max_i |mu_hat(cell i) - lambda_i| on the solver's fixed sample.
  double residual() const noexcept { return residual_; }
  const SolveStats& stats() const noexcept { return stats_; }

  /// Cell index of `point`; throws OutsideSupport.
  std::size_t classify(std::span<const double> point) const { return diagram_.classify(point); }
  /// Q_nu(point) = x_{classify(point)}.
  std::span<const double> transport(std::span<const double> point) const {
    return target_.atom(diagram_.classify(point));
  }

  /// Weight vector adapted to the original atoms (power distance
  /// ||u - x_i||^2 - w_i), gauge-fixed so that w_1 = 0.
  std::vector<double> atom_weights() const;

 private:
  PowerDiagram diagram_;
  DiscreteMeasure target_;
  Point shift_;
  double residual_;
  SolveStats stats_;
};

/// Kantorovich dual on a fixed sample u_1..u_N:
///
///   F(w) = sum_i lambda_i w_i + (1/N) sum_k min_i (||u_k - x_i||^2 - w_i),
///
/// together with the cell counts whose ratios give the partial derivatives
/// dF/dw_i = lambda_i - count_i / N.
struct DualEvaluation {
  double value = 0.0;
  std::vector<std::size_t> counts;
  std::vector<double> masses;
};

DualEvaluation evaluate_dual(const PointSet& sites, std::span<const double> lambda, const PointSet& sample,
                             std::span<const double> weights);

/// Adapted weight vector by ascent on the fixed-sample dual: one exact
/// coordinate sweep from the Voronoi start, then limited-memory quasi-Newton
/// steps with a backtracking line search that refuses to empty a cell;
/// a failed line search, or an iterate with an empty cell, falls back to
/// another coordinate sweep. In one dimension with distinct atoms the
/// sweep is replaced by the exact fixed-sample optimum (cells cut at
/// cumulative sample counts). Success is
/// re-checked on an independent sample (slack 4/sqrt(budget)).
///
/// Throws NotConverged(residual) when max_iterations is exhausted or the
/// independent check fails.
TransportMap solve(const ReferenceMeasure& reference, const DiscreteMeasure& target, const SolveConfig& config = {});

/// OT ranks: the mu-barycentre of every cell, estimated from `budget`
/// reference samples. Throws EmptyCellRank(i) when no sample hits cell i.
PointSet ranks(const TransportMap& map, std::size_t budget, std::uint64_t seed);

}  // namespace otbdp
