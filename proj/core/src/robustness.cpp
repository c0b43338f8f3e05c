#include "otbdp/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "otbdp/depth.hpp"
#include "otbdp/parallel.hpp"

namespace otbdp {
namespace {

std::vector<bool> membership(std::size_t n, std::span<const std::size_t> indices) {
  if (indices.empty()) throw Error(ErrorCode::InvalidArgument, "contaminated set must be nonempty");
  std::vector<bool> in(n, false);
  for (std::size_t i : indices) {
    if (i >= n) throw Error(ErrorCode::InvalidArgument, "contaminated index out of range", static_cast<double>(i));
    if (in[i]) throw Error(ErrorCode::InvalidArgument, "contaminated index repeated", static_cast<double>(i));
    in[i] = true;
  }
  return in;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

DiscreteMeasure contaminate_ray(const DiscreteMeasure& target, std::span<const double> u,
                                std::span<const std::size_t> contaminated, double radius,
                                std::span<const double> direction) {
  require_dim(u, target.dim());
  require_dim(direction, target.dim());
  require_unit(direction);
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::InvalidArgument, "ray radius must be positive");
  const auto in = membership(target.size(), contaminated);
  const std::size_t slot = *std::min_element(contaminated.begin(), contaminated.end());

  Point y(u.begin(), u.end());
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += radius * direction[j];

  PointSet atoms(target.dim());
  std::vector<double> weights;
  double mass = 0.0;
  for (std::size_t i : contaminated) mass += target.weight(i);
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (i == slot) {
      atoms.push_back(y);
      weights.push_back(mass);
    } else if (!in[i]) {
      atoms.push_back(target.atom(i));
      weights.push_back(target.weight(i));
    }
  }
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

std::pair<DiscreteMeasure, DiscreteMeasure> contaminate_symmetric(const DiscreteMeasure& target,
                                                                  std::span<const std::size_t> contaminated,
                                                                  std::span<const double> t) {
  require_dim(t, target.dim());
  const auto in = membership(target.size(), contaminated);
  double kept = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (!in[i]) kept += target.weight(i);
  }
  const double remainder = 1.0 - 2.0 * kept;
  if (remainder < -1e-12) {
    throw Error(ErrorCode::InsufficientContaminationMass, "contaminated weight must be at least 1/2", 1.0 - kept);
  }

  PointSet atoms(target.dim());
  std::vector<double> weights;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (in[i]) continue;
    atoms.push_back(target.atom(i));
    weights.push_back(target.weight(i));
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (in[i]) continue;
    Point x(target.atom(i).begin(), target.atom(i).end());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += t[j];
    atoms.push_back(x);
    weights.push_back(target.weight(i));
  }
  if (remainder > 1e-12) {
    Point half(t.begin(), t.end());
    for (auto& h : half) h *= 0.5;
    atoms.push_back(half);
    weights.push_back(remainder);
  }
  DiscreteMeasure plus(std::move(atoms), std::move(weights));
  Point minus_t(t.begin(), t.end());
  for (auto& x : minus_t) x = -x;
  auto minus = plus.translated(minus_t);
  return {std::move(plus), std::move(minus)};
}

LocalIntegral local_integral(const TransportMap& a, const TransportMap& b, std::span<const double> u, double delta,
                             std::size_t budget, std::uint64_t seed) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  if (!(a.reference() == b.reference())) throw Error(ErrorCode::InvalidArgument, "maps must share the reference");
  if (budget == 0) throw Error(ErrorCode::InvalidArgument, "budget must be positive");
  const auto& ref = a.reference();
  require_dim(u, ref.dim());
  const std::size_t d = ref.dim();
  const double r2 = delta * delta;

  struct Partial {
    double sum = 0.0;
    std::size_t hits = 0;
  };
  std::vector<Partial> partial(chunk_count(budget));
  for_each_chunk(budget, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::vector<double> buf((end - begin) * d);
    ref.sample_into(seed, begin, end - begin, buf);
    Partial p;
    for (std::size_t k = 0; k < end - begin; ++k) {
      const double* x = buf.data() + k * d;
      double dist2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) dist2 += (x[j] - u[j]) * (x[j] - u[j]);
      if (dist2 > r2) continue;
      ++p.hits;
      const auto qa = a.target().atom(a.diagram().classify_unchecked(x));
      const auto qb = b.target().atom(b.diagram().classify_unchecked(x));
      p.sum += std::sqrt(squared_distance(qa, qb));
    }
    partial[c] = p;
  });
  LocalIntegral out;
  std::size_t hits = 0;
  for (const auto& p : partial) {
    out.value += p.sum;
    hits += p.hits;
  }
  out.value /= static_cast<double>(budget);
  out.ball_mass = static_cast<double>(hits) / static_cast<double>(budget);
  return out;
}

void DivergenceConfig::validate() const {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  if (radii.size() < 4) throw Error(ErrorCode::InvalidArgument, "radius grid needs at least four points");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw Error(ErrorCode::InvalidArgument, "radii must be increasing");
  }
  if (integral_budget == 0) throw Error(ErrorCode::InvalidArgument, "integral budget must be positive");
  if (!(slope_factor > 0.0)) throw Error(ErrorCode::InvalidArgument, "slope factor must be positive");
  solve.validate();
}

DivergenceProfile divergence_experiment(const TransportMap& clean, std::span<const double> u,
                                        std::span<const std::size_t> contaminated, const DivergenceConfig& config) {
  config.validate();
  const auto& reference = clean.reference();
  const auto& target = clean.target();
  require_dim(u, reference.dim());
  if (!reference.interior_contains(u)) {
    throw Error(ErrorCode::NotInterior, "divergence experiments need an interior point");
  }
  DivergenceProfile out;
  out.delta = config.delta;
  out.direction = config.direction ? *config.direction : depth(reference, u).direction;
  require_unit(out.direction);
  const double scale = target.size() > 1 ? target.diameter() : 1.0;

  out.radii.resize(config.radii.size());
  out.integrals.resize(config.radii.size());
  for (std::size_t k = 0; k < config.radii.size(); ++k) {
    out.radii[k] = config.radii[k] * scale;
    const auto dirty_target = contaminate_ray(target, u, contaminated, out.radii[k], out.direction);
    const auto dirty = solve(reference, dirty_target, config.solve);
    const auto li = local_integral(clean, dirty, u, config.delta, config.integral_budget, config.integral_seed);
    out.integrals[k] = li.value;
    out.ball_mass = li.ball_mass;
  }
  out.slope = least_squares_slope(out.radii, out.integrals);
  out.slope_threshold = config.slope_factor * out.ball_mass;
  out.diverges = out.slope > out.slope_threshold;
  const double mid = out.integrals[(out.integrals.size() - 1) / 2];
  out.bounded = *std::max_element(out.integrals.begin(), out.integrals.end()) <= 1.1 * mid;
  return out;
}

DivergenceProfile divergence_experiment(const ReferenceMeasure& reference, const DiscreteMeasure& target,
                                        std::span<const double> u, std::span<const std::size_t> contaminated,
                                        const DivergenceConfig& config) {
  config.validate();
  return divergence_experiment(solve(reference, target, config.solve), u, contaminated, config);
}

}  // namespace otbdp
