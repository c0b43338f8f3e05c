#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "otbdp/measures.hpp"

namespace otbdp {

/// Breakdown curves alpha -> BDP(Q_nu(alpha v)) for the two orthogonal-
/// invariant references on the unit ball.
struct CurveSpec {
  std::vector<ReferenceKind> kinds{ReferenceKind::SphericalUniform, ReferenceKind::UniformBall};
  std::vector<std::size_t> dims{1, 2, 3, 5, 10};
  std::vector<double> alphas;            // empty: alpha_grid(201)
  std::optional<std::size_t> n;          // finite-n curve ceil(n b)/n; asymptotic when empty

  /// Throws InvalidArgument (alphas outside [0,1] or not increasing, d = 0,
  /// n = 0) or WrongReferenceKind (cube, gauss).
  void validate() const;
};

struct CurvePoint {
  ReferenceKind kind;
  std::size_t dim;
  double alpha;
  double value;
};

/// Evenly spaced grid of `count` points on [0, 1], endpoints exact.
std::vector<double> alpha_grid(std::size_t count = 201);

/// Asymptotic breakdown point mu(B_1 and {alpha <= u_1 <= 1}); (1 - alpha)/2
/// for d = 1.
double asymptotic_bdp(ReferenceKind kind, std::size_t dim, double alpha);

/// Rows ordered by kind, then dimension, then alpha, as listed in the spec.
std::vector<CurvePoint> bdp_curve(const CurveSpec& spec);

/// Long-format CSV with header `kind,d,alpha,bdp`.
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& rows);

/// bdp_curve() followed by write_curve_csv().
void emit_figure1(std::ostream& out, const CurveSpec& spec = {});

}  // namespace otbdp
