#include "otbdp/measures.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

#include "otbdp/marginals.hpp"
#include "otbdp/parallel.hpp"
#include "otbdp/rng.hpp"

namespace otbdp {

std::string_view to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::UniformCube: return "cube";
    case ReferenceKind::UniformBall: return "ball";
    case ReferenceKind::SphericalUniform: return "sphunif";
    case ReferenceKind::StandardGaussian: return "gauss";
  }
  return "unknown";
}

ReferenceMeasure::ReferenceMeasure(ReferenceKind kind, std::size_t dim) : kind_(kind), dim_(dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "reference dimension must be positive");
  if (kind == ReferenceKind::UniformCube && dim >= 3) {
    auto pts = std::make_shared<std::vector<double>>(kCubeMassBudget * dim);
    sample_into(kCubeMassSeed, 0, kCubeMassBudget, *pts);
    cube_sample_ = std::move(pts);
  }
}

ReferenceMeasure ReferenceMeasure::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::ParseError, "reference must be spelled <kind>:<dim>, got '" + std::string(spec) + "'");
  }
  const auto name = spec.substr(0, colon);
  const auto digits = spec.substr(colon + 1);
  std::size_t dim = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), dim);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || dim == 0) {
    throw Error(ErrorCode::ParseError, "invalid reference dimension in '" + std::string(spec) + "'");
  }
  for (auto kind : {ReferenceKind::UniformCube, ReferenceKind::UniformBall, ReferenceKind::SphericalUniform,
                    ReferenceKind::StandardGaussian}) {
    if (name == to_string(kind)) return ReferenceMeasure(kind, dim);
  }
  throw Error(ErrorCode::ParseError,
              "unknown reference kind '" + std::string(name) + "' (expected cube, ball, sphunif or gauss)");
}

std::string ReferenceMeasure::spec() const { return std::string(to_string(kind_)) + ":" + std::to_string(dim_); }

Point ReferenceMeasure::center() const {
  return Point(dim_, kind_ == ReferenceKind::UniformCube ? 0.5 : 0.0);
}

void ReferenceMeasure::sample_into(std::uint64_t seed, std::size_t first, std::size_t count,
                                   std::span<double> out) const {
  const std::size_t d = dim_;
  for (std::size_t i = 0; i < count; ++i) {
    CounterRng rng(seed, first + i);
    double* p = out.data() + i * d;
    switch (kind_) {
      case ReferenceKind::UniformCube:
        for (std::size_t k = 0; k < d; ++k) p[k] = rng.uniform();
        break;
      case ReferenceKind::StandardGaussian:
        for (std::size_t k = 0; k < d; ++k) p[k] = rng.normal();
        break;
      case ReferenceKind::UniformBall:
      case ReferenceKind::SphericalUniform: {
        double n2 = 0.0;
        do {
          n2 = 0.0;
          for (std::size_t k = 0; k < d; ++k) {
            p[k] = rng.normal();
            n2 += p[k] * p[k];
          }
        } while (n2 == 0.0);
        const double u = rng.uniform();
        const double radius =
            kind_ == ReferenceKind::SphericalUniform ? u : std::pow(u, 1.0 / static_cast<double>(d));
        const double scale = radius / std::sqrt(n2);
        for (std::size_t k = 0; k < d; ++k) p[k] *= scale;
        break;
      }
    }
  }
}

PointSet sample(const ReferenceMeasure& measure, std::size_t count, std::uint64_t seed) {
  PointSet out(count, measure.dim());
  const std::size_t d = measure.dim();
  for_each_chunk(count, [&](std::size_t, std::size_t begin, std::size_t end) {
    measure.sample_into(seed, begin, end - begin, std::span<double>(out.data()).subspan(begin * d, (end - begin) * d));
  });
  return out;
}

double normal_upper_tail(double s) { return 0.5 * std::erfc(s / std::numbers::sqrt2); }

double unit_square_halfplane_area(std::span<const double> v, double s) {
  // Sutherland-Hodgman clip of the unit square against <v, z> >= s.
  const std::array<std::array<double, 2>, 4> square{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
  std::vector<std::array<double, 2>> poly;
  poly.reserve(8);
  const auto level = [&](const std::array<double, 2>& z) { return v[0] * z[0] + v[1] * z[1] - s; };
  for (std::size_t i = 0; i < square.size(); ++i) {
    const auto& a = square[i];
    const auto& b = square[(i + 1) % square.size()];
    const double la = level(a);
    const double lb = level(b);
    if (la >= 0.0) poly.push_back(a);
    if ((la >= 0.0) != (lb >= 0.0)) {
      const double t = la / (la - lb);
      poly.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
    }
  }
  if (poly.size() < 3) return 0.0;
  double twice_area = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    twice_area += a[0] * b[1] - b[0] * a[1];
  }
  return std::clamp(0.5 * std::abs(twice_area), 0.0, 1.0);
}

double ReferenceMeasure::cube_halfspace_mass(std::span<const double> v, double s) const {
  std::size_t nonzero = 0;
  std::size_t axis = 0;
  for (std::size_t k = 0; k < dim_; ++k) {
    if (std::abs(v[k]) > 1e-15) {
      ++nonzero;
      axis = k;
    }
  }
  if (nonzero == 1) {
    // Slab of the cube orthogonal to one axis.
    return v[axis] > 0.0 ? std::clamp(1.0 - s / v[axis], 0.0, 1.0) : std::clamp(s / v[axis], 0.0, 1.0);
  }
  if (dim_ == 2) return unit_square_halfplane_area(v, s);

  const auto& pts = *cube_sample_;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < kCubeMassBudget; ++i) {
    const double* p = pts.data() + i * dim_;
    double proj = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) proj += v[k] * p[k];
    hits += proj >= s ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(kCubeMassBudget);
}

double ReferenceMeasure::halfspace_mass(std::span<const double> direction, double offset) const {
  require_dim(direction, dim_);
  require_unit(direction);
  switch (kind_) {
    case ReferenceKind::StandardGaussian: return normal_upper_tail(offset);
    case ReferenceKind::UniformBall: return ball_upper_tail(dim_, offset);
    case ReferenceKind::SphericalUniform: return spherical_upper_tail(dim_, offset);
    case ReferenceKind::UniformCube: return cube_halfspace_mass(direction, offset);
  }
  return 0.0;
}

bool ReferenceMeasure::contains(std::span<const double> point) const {
  require_dim(point, dim_);
  switch (kind_) {
    case ReferenceKind::StandardGaussian: return true;
    case ReferenceKind::UniformCube:
      return std::all_of(point.begin(), point.end(), [](double x) { return x >= 0.0 && x <= 1.0; });
    case ReferenceKind::UniformBall:
    case ReferenceKind::SphericalUniform: return dot(point, point) <= 1.0;
  }
  return false;
}

bool ReferenceMeasure::interior_contains(std::span<const double> point) const {
  require_dim(point, dim_);
  switch (kind_) {
    case ReferenceKind::StandardGaussian: return true;
    case ReferenceKind::UniformCube:
      return std::all_of(point.begin(), point.end(), [](double x) { return x > 0.0 && x < 1.0; });
    case ReferenceKind::UniformBall:
    case ReferenceKind::SphericalUniform: return dot(point, point) < 1.0;
  }
  return false;
}

DiscreteMeasure::DiscreteMeasure(PointSet atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.size() == 0) throw Error(ErrorCode::InvalidArgument, "target measure needs at least one atom");
  if (weights_.size() != atoms_.size()) {
    throw Error(ErrorCode::InvalidArgument, "got " + std::to_string(weights_.size()) + " weights for " +
                                                std::to_string(atoms_.size()) + " atoms");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::InvalidArgument, "atom weights must be positive and finite");
    }
    total += w;
  }
  // Already-normalized weights are kept bit for bit so that copies and
  // translates of a measure carry identical weights.
  if (std::abs(total - 1.0) > 1e-15) {
    for (double& w : weights_) w /= total;
  }
  for (double x : atoms_.data()) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "atom coordinates must be finite");
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms_.size(); ++j) {
      if (squared_distance(atoms_[i], atoms_[j]) <= 1e-24) {
        throw Error(ErrorCode::AtomCollision,
                    "atoms " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
}

DiscreteMeasure DiscreteMeasure::empirical(PointSet atoms) {
  const std::size_t n = atoms.size();
  return DiscreteMeasure(std::move(atoms), std::vector<double>(n, 1.0));
}

bool DiscreteMeasure::is_empirical() const {
  const auto [lo, hi] = std::minmax_element(weights_.begin(), weights_.end());
  return *hi - *lo <= 1e-12;
}

double DiscreteMeasure::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) best = std::max(best, squared_distance(atoms_[i], atoms_[j]));
  }
  return std::sqrt(best);
}

Point DiscreteMeasure::mean() const {
  Point m(dim(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    const auto x = atoms_[i];
    for (std::size_t k = 0; k < dim(); ++k) m[k] += weights_[i] * x[k];
  }
  return m;
}

DiscreteMeasure DiscreteMeasure::translated(std::span<const double> shift) const {
  require_dim(shift, dim());
  PointSet moved = atoms_;
  for (std::size_t i = 0; i < moved.size(); ++i) {
    auto x = moved[i];
    for (std::size_t k = 0; k < dim(); ++k) x[k] += shift[k];
  }
  return DiscreteMeasure(std::move(moved), weights_);
}

}  // namespace otbdp
