#include "otbdp/marginals.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "otbdp/types.hpp"

namespace otbdp {
namespace {

constexpr double kRelTolerance = 1e-10;
constexpr unsigned kMaxDepth = 24;

template <class F>
double integrate(F&& f, double a, double b, const char* what) {
  if (!(b > a)) return 0.0;
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, kMaxDepth, kRelTolerance, &error);
  if (!(error <= kTailAbsTolerance) || !std::isfinite(value)) {
    throw Error(ErrorCode::QuadratureFailure,
                std::string(what) + ": quadrature error bound " + std::to_string(error) + " exceeds tolerance",
                error);
  }
  return value;
}

void require_sph_dim(std::size_t d) {
  if (d < 2) {
    throw Error(ErrorCode::UnsupportedDimension,
                "spherical marginal density is defined through Gamma((d-1)/2) and needs d >= 2");
  }
}

double log_cosh(double L) { return L + std::log1p(std::exp(-2.0 * L)) - std::numbers::ln2; }

// int_0^L tanh(tau)^k dtau
double tanh_power_integral(std::size_t k, double L) {
  if (k == 0) return L;
  if (k == 1) return log_cosh(L);
  const double kk = static_cast<double>(k);
  if (L < 1e-3) {
    // tanh(t)^k = t^k (1 - k t^2 / 3 + O(t^4))
    return std::pow(L, kk + 1.0) * (1.0 / (kk + 1.0) - kk * L * L / (3.0 * (kk + 3.0)));
  }
  if (L < 1.0) {
    // The recurrence cancels badly for small L.
    return integrate([kk](double t) { return std::pow(std::tanh(t), kk); }, 0.0, L,
                     "radial integral");
  }
  // I_k = I_{k-2} - tanh(L)^{k-1} / (k-1)
  const double th = std::tanh(L);
  double value = k % 2 == 0 ? L : log_cosh(L);
  for (std::size_t j = k % 2 == 0 ? 2 : 3; j <= k; j += 2) {
    value -= std::pow(th, static_cast<double>(j - 1)) / static_cast<double>(j - 1);
  }
  return value;
}

double spherical_tail_nonneg(std::size_t d, double alpha) {
  if (alpha >= 1.0) return 0.0;
  if (alpha == 0.0) return 0.5;
  // x = sech(v), then by parts:
  // int_alpha^1 f = c (int_0^V sech(v) tanh(v)^k dv - alpha T_k(V)), V = acosh(1/alpha).
  const std::size_t k = d - 2;
  const double V = std::acosh(1.0 / alpha);
  const double head = integrate(
      [k](double v) { return std::pow(std::tanh(v), static_cast<double>(k)) / std::cosh(v); }, 0.0, V,
      "spherical tail");
  return spherical_marginal_constant(d) * (head - alpha * tanh_power_integral(k, V));
}

double ball_tail_nonneg(std::size_t d, double alpha) {
  if (alpha >= 1.0) return 0.0;
  if (alpha == 0.0) return 0.5;
  // x = sin(theta): (1 - x^2)^{(d-1)/2} dx = cos(theta)^d dtheta.
  const double c = ball_marginal_constant(d);
  const double theta0 = std::asin(alpha);
  return c * integrate([d](double th) { return std::pow(std::cos(th), static_cast<double>(d)); }, theta0,
                       std::numbers::pi / 2.0, "ball tail");
}

}  // namespace

double spherical_marginal_constant(std::size_t d) {
  require_sph_dim(d);
  const double dd = static_cast<double>(d);
  return std::exp(std::lgamma(dd / 2.0) - std::lgamma((dd - 1.0) / 2.0)) / std::sqrt(std::numbers::pi);
}

double ball_marginal_constant(std::size_t d) {
  if (d < 1) throw Error(ErrorCode::UnsupportedDimension, "dimension must be positive");
  const double dd = static_cast<double>(d);
  return std::exp(std::lgamma((dd + 2.0) / 2.0) - std::lgamma((dd + 1.0) / 2.0)) / std::sqrt(std::numbers::pi);
}

double spherical_marginal_density(std::size_t d, double x) {
  require_sph_dim(d);
  const double ax = std::abs(x);
  if (ax >= 1.0) return 0.0;
  if (ax == 0.0) return std::numeric_limits<double>::infinity();
  const double upper = std::acosh(1.0 / ax);
  return spherical_marginal_constant(d) * tanh_power_integral(d - 2, upper);
}

double ball_marginal_density(std::size_t d, double x) {
  const double ax = std::abs(x);
  if (ax > 1.0) return 0.0;
  return ball_marginal_constant(d) * std::pow(1.0 - ax * ax, (static_cast<double>(d) - 1.0) / 2.0);
}

double spherical_upper_tail(std::size_t d, double alpha) {
  if (d == 0) throw Error(ErrorCode::UnsupportedDimension, "dimension must be positive");
  if (d == 1) return std::clamp((1.0 - alpha) / 2.0, 0.0, 1.0);
  if (alpha <= -1.0) return 1.0;
  if (alpha < 0.0) return 1.0 - spherical_tail_nonneg(d, -alpha);
  return spherical_tail_nonneg(d, alpha);
}

double ball_upper_tail(std::size_t d, double alpha) {
  if (d == 0) throw Error(ErrorCode::UnsupportedDimension, "dimension must be positive");
  if (d == 1) return std::clamp((1.0 - alpha) / 2.0, 0.0, 1.0);
  if (alpha <= -1.0) return 1.0;
  if (alpha < 0.0) return 1.0 - ball_tail_nonneg(d, -alpha);
  return ball_tail_nonneg(d, alpha);
}

}  // namespace otbdp
