#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "otbdp/measures.hpp"
#include "otbdp/sdot.hpp"
#include "otbdp/types.hpp"

namespace otbdp {

struct TrimResult {
  std::vector<std::size_t> kept_indices;  // ascending
  Point trimmed_mean;
  double h_value = 0.0;
  double beta = 0.0;
};

/// ceil(n (1 - beta)) with ceil(0) = 1.
std::size_t trimmed_count(std::size_t n, double beta);

/// Keeps the atoms whose ranks are closest to the cube centre in Chebyshev
/// distance; h_value is the distance of the last kept rank. Ties go to the
/// smaller atom index.
TrimResult trim_cube_ranks(const PointSet& atoms, const PointSet& ranks, double beta);

/// Keeps the atoms whose ranks are deepest; h_value is the depth of the last
/// kept rank. Ties go to the smaller atom index.
TrimResult trim_depth_ranks(const ReferenceMeasure& reference, const PointSet& atoms, const PointSet& ranks,
                            double beta);

/// Cube-trimmed mean from the OT ranks of `map`. Throws WrongReferenceKind
/// (reference is not a cube) and NonEmpiricalTarget.
TrimResult trim_cube(const TransportMap& map, double beta, std::size_t budget = 1'000'000, std::uint64_t seed = 1);

/// Depth-region-trimmed mean from the OT ranks of `map`. Throws
/// NonEmpiricalTarget.
TrimResult trim_depth(const TransportMap& map, double beta, std::size_t budget = 1'000'000, std::uint64_t seed = 1);

}  // namespace otbdp
