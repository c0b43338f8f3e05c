#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "otbdp/breakdown.hpp"
#include "otbdp/curves.hpp"
#include "otbdp/depth.hpp"

using namespace otbdp;

TEST(AlphaGrid, EndpointsAndSpacing) {
  const auto g = alpha_grid(201);
  ASSERT_EQ(g.size(), 201u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_EQ(g[100], 0.5);
}

TEST(BdpCurve, OneDimensionalValue) {
  for (auto kind : {ReferenceKind::SphericalUniform, ReferenceKind::UniformBall}) {
    for (double a : alpha_grid(201)) EXPECT_NEAR(asymptotic_bdp(kind, 1, a), (1.0 - a) / 2.0, 1e-10);
  }
}

TEST(BdpCurve, MedianIsOneHalf) {
  for (std::size_t d = 1; d <= 10; ++d) {
    EXPECT_NEAR(asymptotic_bdp(ReferenceKind::SphericalUniform, d, 0.0), 0.5, 1e-8);
    EXPECT_NEAR(asymptotic_bdp(ReferenceKind::UniformBall, d, 0.0), 0.5, 1e-8);
  }
}

TEST(BdpCurve, BallThreeClosedForm) {
  EXPECT_NEAR(asymptotic_bdp(ReferenceKind::UniformBall, 3, 0.5), 0.15625, 1e-8);
  for (double a : alpha_grid(101)) EXPECT_NEAR(asymptotic_bdp(ReferenceKind::UniformBall, 3, a), oracle::ball3_tail(a), 1e-8);
}

TEST(BdpCurve, MonotoneInAlphaAndDimension) {
  CurveSpec spec;
  spec.dims = {1, 2, 3, 5, 10};
  spec.alphas = alpha_grid(51);
  const auto rows = bdp_curve(spec);
  ASSERT_EQ(rows.size(), 2u * 5u * 51u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].kind == rows[i - 1].kind && rows[i].dim == rows[i - 1].dim) EXPECT_LE(rows[i].value, rows[i - 1].value);
  }
  for (std::size_t i = 51; i < rows.size(); ++i) {
    const auto& prev = rows[i - 51];
    if (prev.kind == rows[i].kind && rows[i].alpha > 0.0 && rows[i].alpha < 1.0) EXPECT_LE(rows[i].value, prev.value);
  }
}

TEST(BdpCurve, AgreesWithDepth) {
  std::mt19937_64 g(2);
  std::uniform_int_distribution<std::size_t> D(2, 5);
  std::uniform_real_distribution<double> A(0.0, 0.99);
  for (int k = 0; k < 20; ++k) {
    const std::size_t d = D(g);
    const double a = A(g);
    for (auto kind : {ReferenceKind::SphericalUniform, ReferenceKind::UniformBall}) {
      Point u(d, 0.0);
      u[d - 1] = a;
      EXPECT_NEAR(asymptotic_bdp(kind, d, a), depth(ReferenceMeasure(kind, d), u).value, 2e-6);
    }
  }
}

TEST(BdpCurve, FiniteSampleMatchesBreakdownPoint) {
  for (std::size_t n : {5, 17}) {
    CurveSpec spec;
    spec.dims = {2, 3};
    spec.alphas = alpha_grid(21);
    spec.n = n;
    for (const auto& row : bdp_curve(spec)) {
      const ReferenceMeasure ref(row.kind, row.dim);
      PointSet atoms(row.dim);
      for (std::size_t i = 0; i < n; ++i) {
        Point x(row.dim, 0.0);
        x[0] = static_cast<double>(i);
        atoms.push_back(x);
      }
      Point u(row.dim, 0.0);
      u[0] = row.alpha;
      EXPECT_EQ(row.value, breakdown_point(ref, DiscreteMeasure::empirical(atoms), u).bdp);
    }
  }
}

TEST(EmitFigure1, LongFormatCsv) {
  CurveSpec spec;
  spec.kinds = {ReferenceKind::UniformBall};
  spec.dims = {1, 3};
  spec.alphas = {0.0, 0.5};
  std::ostringstream out;
  emit_figure1(out, spec);
  EXPECT_EQ(out.str(), "kind,d,alpha,bdp\nball,1,0,0.5\nball,1,0.5,0.25\nball,3,0,0.5\nball,3,0.5," +
                           [] {
                             std::ostringstream s;
                             s.precision(17);
                             s << asymptotic_bdp(ReferenceKind::UniformBall, 3, 0.5);
                             return s.str();
                           }() +
                           "\n");
  std::ostringstream full;
  emit_figure1(full);
  std::size_t lines = 0;
  for (char c : full.str()) lines += c == '\n';
  EXPECT_EQ(lines, 1u + 2u * 5u * 201u);
}

TEST(CurveSpec, Validates) {
  CurveSpec spec;
  spec.kinds = {ReferenceKind::UniformCube};
  EXPECT_THROW(spec.validate(), Error);
  spec = {};
  spec.alphas = {0.5, 0.2};
  EXPECT_THROW(spec.validate(), Error);
  spec.alphas = {0.0, 1.5};
  EXPECT_THROW(spec.validate(), Error);
}
