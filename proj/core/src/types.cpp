#include "otbdp/types.hpp"

#include <cmath>

namespace otbdp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonUnitDirection: return "NonUnitDirection";
    case ErrorCode::OutsideSupport: return "OutsideSupport";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::NotOneDimensional: return "NotOneDimensional";
    case ErrorCode::UnsortedAtoms: return "UnsortedAtoms";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::EmptyCellRank: return "EmptyCellRank";
    case ErrorCode::InfeasibleThreshold: return "InfeasibleThreshold";
    case ErrorCode::AtomCollision: return "AtomCollision";
    case ErrorCode::InsufficientContaminationMass: return "InsufficientContaminationMass";
    case ErrorCode::WrongReferenceKind: return "WrongReferenceKind";
    case ErrorCode::NonEmpiricalTarget: return "NonEmpiricalTarget";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

PointSet PointSet::from_rows(const std::vector<Point>& rows) {
  if (rows.empty()) return PointSet{};
  PointSet out(rows.front().size());
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r);
  return out;
}

Point PointSet::row(std::size_t i) const {
  auto r = (*this)[i];
  return Point(r.begin(), r.end());
}

void PointSet::push_back(std::span<const double> p) {
  if (dim_ == 0 && data_.empty()) dim_ = p.size();
  if (p.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "point of dimension " + std::to_string(p.size()) + " added to a set of dimension " +
                    std::to_string(dim_));
  }
  data_.insert(data_.end(), p.begin(), p.end());
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

Point normalized(std::span<const double> a) {
  const double n = norm(a);
  Point out(a.begin(), a.end());
  if (n > 0.0) {
    for (auto& x : out) x /= n;
  }
  return out;
}

void require_unit(std::span<const double> v) {
  const double n = norm(v);
  if (!(std::abs(n - 1.0) <= 1e-9)) {
    throw Error(ErrorCode::NonUnitDirection, "direction must have unit norm, got norm " + std::to_string(n));
  }
}

void require_dim(std::span<const double> p, std::size_t dim) {
  if (p.size() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "expected a point of dimension " + std::to_string(dim) +
                                                  ", got " + std::to_string(p.size()));
  }
}

}  // namespace otbdp
