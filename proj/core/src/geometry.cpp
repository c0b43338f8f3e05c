#include "otbdp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otbdp/parallel.hpp"

namespace otbdp {

Halfspace::Halfspace(Point normal_, Point anchor_, double offset_)
    : normal(std::move(normal_)), anchor(std::move(anchor_)), offset(offset_) {
  require_unit(normal);
  require_dim(anchor, normal.size());
}

bool Halfspace::contains(std::span<const double> z) const {
  require_dim(z, normal.size());
  double lhs = 0.0;
  double rhs = offset;
  for (std::size_t k = 0; k < z.size(); ++k) {
    lhs += normal[k] * z[k];
    rhs += normal[k] * anchor[k];
  }
  return lhs >= rhs;
}

PowerDiagram::PowerDiagram(ReferenceMeasure reference, PointSet sites, std::vector<double> weights)
    : reference_(std::move(reference)), sites_(std::move(sites)), weights_(std::move(weights)) {
  if (sites_.size() == 0) throw Error(ErrorCode::InvalidArgument, "power diagram needs at least one site");
  if (sites_.dim() != reference_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "site dimension differs from the reference dimension");
  }
  if (weights_.size() != sites_.size()) {
    throw Error(ErrorCode::InvalidArgument, "one weight per site is required");
  }
}

std::size_t PowerDiagram::classify_unchecked(const double* point) const noexcept {
  const std::size_t d = dim();
  const double* x = sites_.data().data();
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < weights_.size(); ++i, x += d) {
    double dist = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double t = point[k] - x[k];
      dist += t * t;
    }
    const double value = dist - weights_[i];
    if (value < best_value) {
      best_value = value;
      best = i;
    }
  }
  return best;
}

std::size_t PowerDiagram::classify(std::span<const double> point) const {
  require_dim(point, dim());
  if (!reference_.contains(point)) {
    throw Error(ErrorCode::OutsideSupport, "point lies outside the support of " + reference_.spec());
  }
  return classify_unchecked(point.data());
}

double PowerDiagram::power_distance(std::size_t i, std::span<const double> point) const {
  return squared_distance(point, sites_[i]) - weights_[i];
}

std::vector<std::size_t> PowerDiagram::cell_counts(std::size_t budget, std::uint64_t seed) const {
  if (budget == 0) throw Error(ErrorCode::InvalidArgument, "sample budget must be positive");
  const std::size_t n = size();
  const std::size_t d = dim();
  std::vector<std::vector<std::size_t>> partial(chunk_count(budget));
  for_each_chunk(budget, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::vector<double> buf((end - begin) * d);
    reference_.sample_into(seed, begin, end - begin, buf);
    auto& counts = partial[c];
    counts.assign(n, 0);
    for (std::size_t i = 0; i < end - begin; ++i) ++counts[classify_unchecked(buf.data() + i * d)];
  });
  std::vector<std::size_t> total(n, 0);
  for (const auto& counts : partial) {
    for (std::size_t i = 0; i < n; ++i) total[i] += counts[i];
  }
  return total;
}

std::vector<double> PowerDiagram::cell_masses(std::size_t budget, std::uint64_t seed) const {
  const auto counts = cell_counts(budget, seed);
  std::vector<double> masses(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    masses[i] = static_cast<double>(counts[i]) / static_cast<double>(budget);
  }
  return masses;
}

std::vector<double> PowerDiagram::cell_boundary_1d() const {
  if (dim() != 1) throw Error(ErrorCode::NotOneDimensional, "cell_boundary_1d needs a one-dimensional diagram");
  const auto& x = sites_.data();
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw Error(ErrorCode::UnsortedAtoms, "sites must be strictly increasing");
  }
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  switch (reference_.kind()) {
    case ReferenceKind::UniformCube: lo = 0.0; hi = 1.0; break;
    case ReferenceKind::UniformBall:
    case ReferenceKind::SphericalUniform: lo = -1.0; hi = 1.0; break;
    case ReferenceKind::StandardGaussian: break;
  }
  std::vector<double> breaks;
  breaks.reserve(x.size() - 1);
  double running = lo;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double b = 0.5 * (x[i] + x[i + 1]) + (weights_[i] - weights_[i + 1]) / (2.0 * (x[i + 1] - x[i]));
    running = std::max(running, std::clamp(b, lo, hi));
    breaks.push_back(running);
  }
  return breaks;
}

PowerDiagram PowerDiagram::with_weights(std::vector<double> weights) const {
  return PowerDiagram(reference_, sites_, std::move(weights));
}

}  // namespace otbdp
