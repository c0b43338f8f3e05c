#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "otbdp/measures.hpp"
#include "otbdp/sdot.hpp"
#include "otbdp/types.hpp"

namespace otbdp {

/// Moves the whole mass of the atoms in `contaminated` to y = u + R v0.
/// The uncontaminated atoms keep their positions and weights; y takes the
/// slot of the smallest contaminated index. Throws InvalidArgument (empty or
/// out-of-range indices, R <= 0) and AtomCollision.
DiscreteMeasure contaminate_ray(const DiscreteMeasure& target, std::span<const double> u,
                                std::span<const std::size_t> contaminated, double radius,
                                std::span<const double> direction);

/// The pair (nu(t), nu(-t)) with
///
///   nu(t) = sum_{I^c} l_i d_{x_i} + sum_{I^c} l_i d_{x_i + t} + (1 - 2 sum_{I^c} l_i) d_{t/2},
///
/// and nu(-t) built as nu(t) translated by -t atom by atom. The t/2 atom is
/// dropped when its weight vanishes. Throws InsufficientContaminationMass
/// when the contaminated weight is below 1/2.
std::pair<DiscreteMeasure, DiscreteMeasure> contaminate_symmetric(const DiscreteMeasure& target,
                                                                  std::span<const std::size_t> contaminated,
                                                                  std::span<const double> t);

struct LocalIntegral {
  double value = 0.0;      // mean of ||Q_a(x) - Q_b(x)|| 1[x in B_delta(u)]
  double ball_mass = 0.0;  // fraction of the sample in B_delta(u)
};

/// Monte-Carlo estimate of the integral of ||Q_a - Q_b|| over B_delta(u)
/// with respect to the reference. Throws InvalidArgument (delta <= 0, maps
/// on different references).
LocalIntegral local_integral(const TransportMap& a, const TransportMap& b, std::span<const double> u, double delta,
                             std::size_t budget, std::uint64_t seed);

struct DivergenceConfig {
  double delta = 0.1;
  std::vector<double> radii{10.0, 20.0, 40.0, 80.0};  // multiples of the atom-cloud diameter
  SolveConfig solve{};
  std::size_t integral_budget = 1'000'000;
  std::uint64_t integral_seed = 7;
  double slope_factor = 0.25;
  std::optional<Point> direction;  // v0 of the depth at u when empty

  void validate() const;
};

struct DivergenceProfile {
  std::vector<double> radii;      // distances ||y_R - u||
  std::vector<double> integrals;
  double delta = 0.0;
  double slope = 0.0;             // least-squares slope of integrals against radii
  double ball_mass = 0.0;
  double slope_threshold = 0.0;   // slope_factor * ball_mass
  bool diverges = false;          // slope > slope_threshold
  bool bounded = false;           // max integral <= 1.1 * the mid-grid integral
  Point direction;
};

/// Solves the clean and the ray-contaminated problems along the grid and
/// records the local integrals. Propagates NotConverged.
DivergenceProfile divergence_experiment(const ReferenceMeasure& reference, const DiscreteMeasure& target,
                                        std::span<const double> u, std::span<const std::size_t> contaminated,
                                        const DivergenceConfig& config = {});

/// Same, reusing an already solved clean map.
DivergenceProfile divergence_experiment(const TransportMap& clean, std::span<const double> u,
                                        std::span<const std::size_t> contaminated,
                                        const DivergenceConfig& config = {});

}  // namespace otbdp
