#include "otbdp/depth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "otbdp/parallel.hpp"
#include "otbdp/rng.hpp"

namespace otbdp {
namespace {

Point axis(std::size_t d, std::size_t k, double sign) {
  Point v(d, 0.0);
  v[k] = sign;
  return v;
}

// Depth of a point that is not interior to the (compact) cube: 0, with the
// outward normal of a violated or touched face.
DepthResult cube_boundary_depth(std::span<const double> u) {
  std::size_t k_best = 0;
  double worst = std::numeric_limits<double>::infinity();
  double sign = -1.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k] < worst) {
      worst = u[k];
      k_best = k;
      sign = -1.0;
    }
    if (1.0 - u[k] < worst) {
      worst = 1.0 - u[k];
      k_best = k;
      sign = 1.0;
    }
  }
  return {0.0, axis(u.size(), k_best, sign), false};
}

DepthResult cube_depth(const ReferenceMeasure& measure, std::span<const double> u) {
  const std::size_t d = u.size();
  if (!measure.interior_contains(u)) return cube_boundary_depth(u);
  const auto side = [](double x) { return x <= 0.5 ? -1.0 : 1.0; };
  if (d == 1) return {std::min(u[0], 1.0 - u[0]), {side(u[0])}, false};
  if (d == 2) {
    const double a = std::min(u[0], 1.0 - u[0]);
    const double b = std::min(u[1], 1.0 - u[1]);
    // The minimal halfspace cuts off the corner triangle whose hypotenuse
    // is bisected by u (legs 2a and 2b). When u sits on a mid-line the
    // axis-aligned slab has the same mass and is reported instead.
    Point v;
    if (b == 0.5) {
      v = axis(2, 0, side(u[0]));
    } else if (a == 0.5) {
      v = axis(2, 1, side(u[1]));
    } else {
      v = normalized(std::vector<double>{side(u[0]) * b, side(u[1]) * a});
    }
    return {2.0 * a * b, std::move(v), false};
  }
  auto result = directional_depth(measure, u);
  result.approximate = true;
  return result;
}

DepthResult radial_depth(const ReferenceMeasure& measure, std::span<const double> u) {
  const double r = norm(u);
  Point v = r > 0.0 ? normalized(u) : axis(u.size(), 0, 1.0);
  if (measure.is_compact() && r >= 1.0) return {0.0, std::move(v), false};
  return {measure.halfspace_mass(v, r), std::move(v), false};
}

// Orthonormal basis of the tangent space at v.
std::vector<Point> tangent_basis(const Point& v) {
  const std::size_t d = v.size();
  std::vector<Point> basis;
  basis.reserve(d - 1);
  for (std::size_t k = 0; k < d && basis.size() + 1 < d; ++k) {
    Point t = axis(d, k, 1.0);
    double proj = dot(t, v);
    for (std::size_t j = 0; j < d; ++j) t[j] -= proj * v[j];
    for (const auto& b : basis) {
      proj = dot(t, b);
      for (std::size_t j = 0; j < d; ++j) t[j] -= proj * b[j];
    }
    const double n = norm(t);
    if (n > 1e-8) {
      for (auto& x : t) x /= n;
      basis.push_back(std::move(t));
    }
  }
  return basis;
}

std::vector<Point> candidate_directions(std::size_t d, const DirectionalSearch& search) {
  std::vector<Point> dirs;
  if (d == 1) return {{1.0}, {-1.0}};
  const std::size_t m = std::max<std::size_t>(search.directions, 4);
  dirs.reserve(m + 2 * d);
  if (d == 2) {
    for (std::size_t k = 0; k < m; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
      dirs.push_back({std::cos(theta), std::sin(theta)});
    }
    return dirs;
  }
  for (std::size_t k = 0; k < d; ++k) {
    dirs.push_back(axis(d, k, 1.0));
    dirs.push_back(axis(d, k, -1.0));
  }
  if (d == 3) {
    // Fibonacci lattice on the sphere.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < m; ++k) {
      const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(m);
      const double rho = std::sqrt(1.0 - z * z);
      const double phi = golden * static_cast<double>(k);
      dirs.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
    return dirs;
  }
  for (std::size_t k = 0; k < m; ++k) {
    CounterRng rng(search.seed, k);
    Point v(d);
    for (auto& x : v) x = rng.normal();
    dirs.push_back(normalized(v));
  }
  return dirs;
}

}  // namespace

double anchored_halfspace_mass(const ReferenceMeasure& measure, std::span<const double> u,
                               std::span<const double> v, double s) {
  require_dim(u, measure.dim());
  return measure.halfspace_mass(v, s + dot(v, u));
}

DepthResult directional_depth(const ReferenceMeasure& measure, std::span<const double> u,
                              const DirectionalSearch& search) {
  require_dim(u, measure.dim());
  const std::size_t d = measure.dim();
  const auto dirs = candidate_directions(d, search);
  const auto mass = [&](const Point& v) { return anchored_halfspace_mass(measure, u, v, 0.0); };

  std::vector<double> values(dirs.size());
  for_each_chunk(
      dirs.size(),
      [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) values[k] = mass(dirs[k]);
      },
      64);
  // First minimum by direction ordinal.
  const auto best_it = std::min_element(values.begin(), values.end());
  Point best = dirs[static_cast<std::size_t>(best_it - values.begin())];
  double best_value = *best_it;
  if (d == 1) return {best_value, best, false};

  double step = std::numbers::pi / std::pow(static_cast<double>(dirs.size()), 1.0 / static_cast<double>(d - 1));
  for (std::size_t r = 0; r < search.refinements; ++r) {
    bool improved = false;
    Point candidate_best = best;
    for (const auto& t : tangent_basis(best)) {
      for (double sign : {1.0, -1.0}) {
        Point v(d);
        for (std::size_t j = 0; j < d; ++j) v[j] = best[j] + sign * step * t[j];
        v = normalized(v);
        const double value = mass(v);
        if (value < best_value) {
          best_value = value;
          candidate_best = std::move(v);
          improved = true;
        }
      }
    }
    if (improved) {
      best = std::move(candidate_best);
    } else {
      step *= 0.5;
    }
  }
  return {best_value, best, false};
}

DepthResult depth(const ReferenceMeasure& measure, std::span<const double> u) {
  require_dim(u, measure.dim());
  switch (measure.kind()) {
    case ReferenceKind::StandardGaussian:
    case ReferenceKind::UniformBall:
    case ReferenceKind::SphericalUniform: return radial_depth(measure, u);
    case ReferenceKind::UniformCube: return cube_depth(measure, u);
  }
  return {};
}

double offset_map(const ReferenceMeasure& measure, std::span<const double> u, std::span<const double> v) {
  require_dim(u, measure.dim());
  require_dim(v, measure.dim());
  require_unit(v);
  if (!measure.interior_contains(u)) {
    throw Error(ErrorCode::NotInterior, "offset map needs a point in the interior of the support");
  }
  const double hd = depth(measure, u).value;
  // Slack for the rounding gap between the depth closed form and the mass
  // evaluated at <v, u>.
  const double level = hd - 1e-12;
  const auto reaches = [&](double s) { return anchored_halfspace_mass(measure, u, v, s) >= level; };

  double lo = 0.0;
  double width = 1e-3;
  while (!reaches(lo)) {
    lo -= width;
    width *= 2.0;
  }
  double hi = std::max(lo, 0.0) + 1.0;
  while (reaches(hi)) hi = lo + 2.0 * (hi - lo);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (reaches(mid) ? lo : hi) = mid;
  }
  return lo;
}

bool depth_region_contains(const ReferenceMeasure& measure, double h, std::span<const double> point) {
  if (!(h >= 0.0 && h <= 1.0)) throw Error(ErrorCode::InvalidArgument, "depth level must lie in [0, 1]");
  if (!measure.contains(point)) return false;
  if (h == 0.0) return true;
  return depth(measure, point).value >= h;
}

std::optional<double> depth_region_radius(const ReferenceMeasure& measure, double h) {
  if (!measure.is_orthogonal_invariant()) {
    throw Error(ErrorCode::WrongReferenceKind, "depth regions are centred balls only for orthogonal-invariant kinds");
  }
  if (!(h >= 0.0 && h <= 1.0)) throw Error(ErrorCode::InvalidArgument, "depth level must lie in [0, 1]");
  if (h > 0.5) return std::nullopt;
  if (h == 0.0) {
    return measure.is_compact() ? 1.0 : std::numeric_limits<double>::infinity();
  }
  const Point e1 = axis(measure.dim(), 0, 1.0);
  // Radial depth profile r -> mu({x_1 >= r}) is decreasing; invert it.
  double lo = 0.0;
  double hi = 1.0;
  if (!measure.is_compact()) {
    while (measure.halfspace_mass(e1, hi) >= h) hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (measure.halfspace_mass(e1, mid) >= h ? lo : hi) = mid;
  }
  return lo;
}

Point tukey_median(const ReferenceMeasure& measure) { return measure.center(); }

}  // namespace otbdp
