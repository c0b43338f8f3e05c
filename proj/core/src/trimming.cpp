#include "otbdp/trimming.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "otbdp/breakdown.hpp"
#include "otbdp/depth.hpp"

namespace otbdp {
namespace {

void check_beta(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "beta must lie in [0, 1]");
}

// Keeps the trimmed_count() atoms with the best scores. `better(a, b)` is a
// strict order on scores.
template <class Better>
TrimResult select(const PointSet& atoms, const std::vector<double>& scores, double beta, Better better) {
  check_beta(beta);
  const std::size_t n = atoms.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "nothing to trim");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return better(scores[a], scores[b]); });

  const std::size_t keep = trimmed_count(n, beta);
  TrimResult out;
  out.beta = beta;
  out.h_value = scores[order[keep - 1]];
  out.kept_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
  std::sort(out.kept_indices.begin(), out.kept_indices.end());

  out.trimmed_mean.assign(atoms.dim(), 0.0);
  for (std::size_t i : out.kept_indices) {
    const auto x = atoms[i];
    for (std::size_t j = 0; j < x.size(); ++j) out.trimmed_mean[j] += x[j];
  }
  for (auto& m : out.trimmed_mean) m /= static_cast<double>(keep);
  return out;
}

void check_shapes(const PointSet& atoms, const PointSet& ranks) {
  if (atoms.size() != ranks.size() || atoms.dim() != ranks.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "one rank per atom is required");
  }
}

void require_empirical(const TransportMap& map) {
  if (!map.target().is_empirical()) {
    throw Error(ErrorCode::NonEmpiricalTarget, "trimmed means need an equal-weight target");
  }
}

}  // namespace

std::size_t trimmed_count(std::size_t n, double beta) {
  check_beta(beta);
  return std::min(n, modified_ceil(static_cast<double>(n) * (1.0 - beta), n));
}

TrimResult trim_cube_ranks(const PointSet& atoms, const PointSet& ranks, double beta) {
  check_shapes(atoms, ranks);
  std::vector<double> dist(ranks.size(), 0.0);
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    for (double r : ranks[i]) dist[i] = std::max(dist[i], std::abs(r - 0.5));
  }
  return select(atoms, dist, beta, std::less<>{});
}

TrimResult trim_depth_ranks(const ReferenceMeasure& reference, const PointSet& atoms, const PointSet& ranks,
                            double beta) {
  check_shapes(atoms, ranks);
  if (ranks.dim() != reference.dim()) throw Error(ErrorCode::DimensionMismatch, "rank dimension differs from the reference");
  std::vector<double> hd(ranks.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) hd[i] = depth(reference, ranks[i]).value;
  return select(atoms, hd, beta, std::greater<>{});
}

TrimResult trim_cube(const TransportMap& map, double beta, std::size_t budget, std::uint64_t seed) {
  if (map.reference().kind() != ReferenceKind::UniformCube) {
    throw Error(ErrorCode::WrongReferenceKind, "cube trimming needs a cube reference");
  }
  require_empirical(map);
  check_beta(beta);
  return trim_cube_ranks(map.target().atoms(), ranks(map, budget, seed), beta);
}

TrimResult trim_depth(const TransportMap& map, double beta, std::size_t budget, std::uint64_t seed) {
  require_empirical(map);
  check_beta(beta);
  return trim_depth_ranks(map.reference(), map.target().atoms(), ranks(map, budget, seed), beta);
}

}  // namespace otbdp
