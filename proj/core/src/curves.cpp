#include "otbdp/curves.hpp"

#include <cmath>
#include <iomanip>

#include "otbdp/breakdown.hpp"
#include "otbdp/marginals.hpp"
#include "otbdp/parallel.hpp"
#include "otbdp/types.hpp"

namespace otbdp {

void CurveSpec::validate() const {
  if (kinds.empty() || dims.empty()) throw Error(ErrorCode::InvalidArgument, "curve needs at least one kind and one dimension");
  for (auto k : kinds) {
    if (k != ReferenceKind::SphericalUniform && k != ReferenceKind::UniformBall) {
      throw Error(ErrorCode::WrongReferenceKind, "curves are defined for sphunif and ball only");
    }
  }
  for (auto d : dims) {
    if (d == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  }
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] >= 0.0 && alphas[i] <= 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
    if (i > 0 && !(alphas[i] > alphas[i - 1])) throw Error(ErrorCode::InvalidArgument, "alphas must be increasing");
  }
  if (n && *n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");
}

std::vector<double> alpha_grid(std::size_t count) {
  if (count < 2) throw Error(ErrorCode::InvalidArgument, "alpha grid needs at least two points");
  std::vector<double> grid(count);
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = static_cast<double>(i) / last;
  return grid;
}

double asymptotic_bdp(ReferenceKind kind, std::size_t dim, double alpha) {
  if (dim == 1) return (1.0 - alpha) / 2.0;
  switch (kind) {
    case ReferenceKind::SphericalUniform: return spherical_upper_tail(dim, alpha);
    case ReferenceKind::UniformBall: return ball_upper_tail(dim, alpha);
    default: throw Error(ErrorCode::WrongReferenceKind, "curves are defined for sphunif and ball only");
  }
}

std::vector<CurvePoint> bdp_curve(const CurveSpec& spec) {
  spec.validate();
  const auto alphas = spec.alphas.empty() ? alpha_grid() : spec.alphas;
  std::vector<CurvePoint> rows;
  rows.reserve(spec.kinds.size() * spec.dims.size() * alphas.size());
  for (auto kind : spec.kinds) {
    for (auto d : spec.dims) {
      for (double a : alphas) rows.push_back({kind, d, a, 0.0});
    }
  }
  for_each_chunk(
      rows.size(),
      [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          auto& r = rows[i];
          r.value = asymptotic_bdp(r.kind, r.dim, r.alpha);
          if (spec.n) r.value = empirical_breakdown(*spec.n, r.value);
        }
      },
      16);
  return rows;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& rows) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "kind,d,alpha,bdp\n" << std::setprecision(17);
  for (const auto& r : rows) out << to_string(r.kind) << ',' << r.dim << ',' << r.alpha << ',' << r.value << '\n';
  out.flags(flags);
  out.precision(precision);
}

void emit_figure1(std::ostream& out, const CurveSpec& spec) { write_curve_csv(out, bdp_curve(spec)); }

}  // namespace otbdp
