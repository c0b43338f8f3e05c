#pragma once

#include <cstddef>

namespace otbdp {

/// One-dimensional marginals of the two orthogonal-invariant references on
/// the closed unit ball. Every quantity here is a function of the first
/// coordinate X_1 only; by invariance the same law holds for <v, X> with any
/// unit v.

/// Normalizing constant Gamma(d/2) / (sqrt(pi) Gamma((d-1)/2)) of the
/// spherical-uniform marginal, d >= 2.
double spherical_marginal_constant(std::size_t d);

/// Normalizing constant Gamma((d+2)/2) / (sqrt(pi) Gamma((d+1)/2)) of the
/// uniform-ball marginal, d >= 1.
double ball_marginal_constant(std::size_t d);

/// Density f_1 of X_1 when ||X|| ~ U[0,1] and X/||X|| is uniform on the
/// sphere:
///
///   f_1(x) = c_d * int_{|x|}^1 r^{-(d-2)} (r^2 - x^2)^{(d-3)/2} dr.
///
/// The radial integral is evaluated after r = |x| cosh(tau), which turns the
/// integrand into tanh(tau)^{d-2} on [0, acosh(1/|x|)] and removes the
/// endpoint singularity. Returns +inf at x = 0 (log singularity) and 0 for
/// |x| >= 1. Throws UnsupportedDimension for d < 2.
double spherical_marginal_density(std::size_t d, double x);

/// Density of X_1 under the uniform law on the unit ball:
/// c_d (1 - x^2)^{(d-1)/2} on [-1, 1].
double ball_marginal_density(std::size_t d, double x);

/// P(X_1 >= alpha) for the spherical-uniform reference, alpha in R.
/// d = 1 is the uniform law on [-1, 1].
double spherical_upper_tail(std::size_t d, double alpha);

/// P(X_1 >= alpha) for the uniform reference on the unit ball.
double ball_upper_tail(std::size_t d, double alpha);

/// Absolute error bound every tail evaluation must meet; QuadratureFailure
/// is raised otherwise.
inline constexpr double kTailAbsTolerance = 1e-8;

}  // namespace otbdp
