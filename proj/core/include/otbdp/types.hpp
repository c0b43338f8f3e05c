#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace otbdp {

using Point = std::vector<double>;

/// Error categories surfaced by the library. The CLI prints `to_string(code)`
/// in its machine-readable error payload, so the spelling is part of the
/// external interface.
enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonUnitDirection,
  OutsideSupport,
  NotInterior,
  NotOneDimensional,
  UnsortedAtoms,
  NotConverged,
  EmptyCellRank,
  InfeasibleThreshold,
  AtomCollision,
  InsufficientContaminationMass,
  WrongReferenceKind,
  NonEmpiricalTarget,
  UnsupportedDimension,
  QuadratureFailure,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, double value = 0.0)
      : std::runtime_error(message), code_(code), value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  /// Numeric payload: residual for NotConverged, achieved error bound for
  /// QuadratureFailure, cell index for EmptyCellRank. Zero otherwise.
  double value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  double value_;
};

/// Dense row-major set of points in R^d.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t count, std::size_t dim) : dim_(dim), data_(count * dim, 0.0) {}

  static PointSet from_rows(const std::vector<Point>& rows);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<double> operator[](std::size_t i) { return {data_.data() + i * dim_, dim_}; }

  Point row(std::size_t i) const;
  void push_back(std::span<const double> p);
  void reserve(std::size_t count) { data_.reserve(count * dim_); }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);
Point normalized(std::span<const double> a);

/// Throws NonUnitDirection unless | ||v|| - 1 | <= 1e-9.
void require_unit(std::span<const double> v);
void require_dim(std::span<const double> p, std::size_t dim);

}  // namespace otbdp
