#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "otbdp/types.hpp"

namespace otbdp {

enum class ReferenceKind { UniformCube, UniformBall, SphericalUniform, StandardGaussian };

std::string_view to_string(ReferenceKind kind);

/// Sample budget and seed of the Monte-Carlo halfspace mass used for the
/// unit cube in general directions when d >= 3.
inline constexpr std::size_t kCubeMassBudget = 200'000;
inline constexpr std::uint64_t kCubeMassSeed = 0x5eedc0beULL;

/// Absolutely continuous reference measure mu with convex support.
///
///   UniformCube       uniform on [0,1]^d
///   UniformBall       uniform on the closed unit ball
///   SphericalUniform  ||X|| ~ U[0,1], direction uniform on the sphere
///   StandardGaussian  N(0, I_d), support R^d
///
/// Immutable and cheap to copy; safe to share between threads.
class ReferenceMeasure {
 public:
  ReferenceMeasure(ReferenceKind kind, std::size_t dim);

  /// Parses `cube:d`, `ball:d`, `sphunif:d` or `gauss:d`.
  static ReferenceMeasure parse(std::string_view spec);
  /// Inverse of parse().
  std::string spec() const;

  ReferenceKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }

  bool is_compact() const noexcept { return kind_ != ReferenceKind::StandardGaussian; }
  /// Ball kinds and the Gaussian: mu(OB) = mu(B) for orthogonal O.
  bool is_orthogonal_invariant() const noexcept { return kind_ != ReferenceKind::UniformCube; }
  /// Symmetry centre: cube centre or the origin.
  Point center() const;

  /// Writes sample points [first, first + count) of the stream keyed by
  /// `seed` into `out` (row-major, count * dim values). Sample i depends only
  /// on (seed, i).
  void sample_into(std::uint64_t seed, std::size_t first, std::size_t count, std::span<double> out) const;

  /// mu({z : <v, z> >= offset}) for a unit vector v.
  double halfspace_mass(std::span<const double> direction, double offset) const;

  bool contains(std::span<const double> point) const;
  bool interior_contains(std::span<const double> point) const;

  friend bool operator==(const ReferenceMeasure& a, const ReferenceMeasure& b) noexcept {
    return a.kind_ == b.kind_ && a.dim_ == b.dim_;
  }

 private:
  double cube_halfspace_mass(std::span<const double> v, double s) const;

  ReferenceKind kind_;
  std::size_t dim_;
  // Fixed-seed sample backing the cube mass in general directions (d >= 3).
  std::shared_ptr<const std::vector<double>> cube_sample_;
};

/// `count` i.i.d. points from mu; deterministic given `seed`.
PointSet sample(const ReferenceMeasure& measure, std::size_t count, std::uint64_t seed);

/// Standard normal upper tail P(Z >= s).
double normal_upper_tail(double s);

/// Area of {z in [0,1]^2 : <v, z> >= s}, by clipping the unit square.
double unit_square_halfplane_area(std::span<const double> v, double s);

/// Finite target nu = sum_i lambda_i delta_{x_i}.
///
/// Weights must be positive and finite; they are renormalized to sum to one
/// on construction. Atoms must be pairwise distinct (distance > 1e-12).
class DiscreteMeasure {
 public:
  DiscreteMeasure(PointSet atoms, std::vector<double> weights);
  /// Empirical measure: all weights 1/n.
  static DiscreteMeasure empirical(PointSet atoms);

  std::size_t size() const noexcept { return atoms_.size(); }
  std::size_t dim() const noexcept { return atoms_.dim(); }
  const PointSet& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::span<const double> atom(std::size_t i) const { return atoms_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// True when all weights agree to 1e-12.
  bool is_empirical() const;
  /// Largest pairwise distance between atoms (0 for a single atom).
  double diameter() const;
  /// lambda-weighted mean of the atoms.
  Point mean() const;
  /// Same weights, every atom moved by `shift`.
  DiscreteMeasure translated(std::span<const double> shift) const;

 private:
  PointSet atoms_;
  std::vector<double> weights_;
};

}  // namespace otbdp
