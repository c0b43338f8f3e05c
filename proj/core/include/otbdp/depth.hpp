#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "otbdp/measures.hpp"
#include "otbdp/types.hpp"

namespace otbdp {

/// Tukey halfspace depth HD(u, mu): the smallest mu-mass of a closed
/// halfspace containing u, with the inner normal v0 of a minimal halfspace
/// {z : <v0, z - u> >= 0}. `approximate` is set when the value comes from a
/// directional search rather than a closed form.
struct DepthResult {
  double value = 0.0;
  Point direction;
  bool approximate = false;
};

/// Closed forms where available:
///   gauss          Phi(-||u||)
///   ball, sphunif  P(X_1 >= ||u||) from the marginal quadrature
///   cube d = 1, 2  min(u, 1-u)  and  2 min(u1,1-u1) min(u2,1-u2)
/// The cube for d >= 3 falls back to directional_depth() (approximate).
/// Points outside a compact support, or on its boundary, have depth 0.
DepthResult depth(const ReferenceMeasure& measure, std::span<const double> u);

struct DirectionalSearch {
  std::size_t directions = 4096;
  std::size_t refinements = 50;
  std::uint64_t seed = 1;
};

/// Minimizes the anchored halfspace mass over a quasi-uniform direction set
/// followed by local refinement. For kinds with exact halfspace masses the
/// result is an upper bound on HD(u, mu).
DepthResult directional_depth(const ReferenceMeasure& measure, std::span<const double> u,
                              const DirectionalSearch& search = {});

/// mu({z : <v, z - u> >= s}).
double anchored_halfspace_mass(const ReferenceMeasure& measure, std::span<const double> u,
                               std::span<const double> v, double s);

/// s(v) = sup{ s : mu({z : <v, z - u> >= s}) >= HD(u, mu) } for u in the
/// interior of the support, by bisection on the monotone anchored mass.
/// Throws NotInterior.
double offset_map(const ReferenceMeasure& measure, std::span<const double> u, std::span<const double> v);

/// Membership of the depth region R(h, mu) = {u in S : HD(u, mu) >= h}.
bool depth_region_contains(const ReferenceMeasure& measure, double h, std::span<const double> point);

/// Orthogonal-invariant kinds only: R(h, mu) is the centred closed ball of
/// this radius. Empty optional when the region is empty (h > 1/2).
std::optional<double> depth_region_radius(const ReferenceMeasure& measure, double h);

/// Tukey median u* = argmax HD(., mu); the symmetry centre for every
/// built-in kind, where the depth is 1/2.
Point tukey_median(const ReferenceMeasure& measure);

}  // namespace otbdp
