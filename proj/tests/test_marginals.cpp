#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "oracles.hpp"
#include "otbdp/marginals.hpp"
#include "otbdp/types.hpp"

using namespace otbdp;

TEST(Marginals, SphericalDensityMatchesClosedFormInTwoDimensions) {
  for (double x : {0.01, 0.1, 0.33, 0.5, 0.77, 0.99}) {
    EXPECT_NEAR(spherical_marginal_density(2, x), oracle::spherical_density_d2(x), 1e-10) << x;
  }
}

TEST(Marginals, SphericalDensityIsEven) {
  for (std::size_t d : {2, 3, 4, 7}) {
    for (double x : {0.05, 0.3, 0.8}) {
      EXPECT_NEAR(spherical_marginal_density(d, x), spherical_marginal_density(d, -x), 1e-12);
    }
  }
}

TEST(Marginals, SphericalDensityIntegratesToOne) {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (std::size_t d = 2; d <= 10; ++d) {
    const double half = ts.integrate([&](double x) { return spherical_marginal_density(d, x); }, 0.0, 1.0);
    EXPECT_NEAR(2.0 * half, 1.0, 1e-8) << "d=" << d;
  }
}

TEST(Marginals, SphericalDensityEdges) {
  EXPECT_TRUE(std::isinf(spherical_marginal_density(3, 0.0)));
  EXPECT_EQ(spherical_marginal_density(3, 1.0), 0.0);
  EXPECT_EQ(spherical_marginal_density(3, 1.5), 0.0);
  try {
    spherical_marginal_density(1, 0.2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedDimension);
  }
}

TEST(Marginals, BallDensityIntegratesToOne) {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (std::size_t d = 1; d <= 10; ++d) {
    EXPECT_NEAR(ts.integrate([&](double x) { return ball_marginal_density(d, x); }, -1.0, 1.0), 1.0, 1e-10);
  }
}

TEST(Marginals, BallTailMatchesIncompleteBeta) {
  for (std::size_t d = 1; d <= 10; ++d) {
    for (double a : {0.0, 0.1, 0.25, 0.5, 0.9, 0.999}) {
      EXPECT_NEAR(ball_upper_tail(d, a), oracle::ball_tail(d, a), 1e-9) << d << " " << a;
    }
  }
}

TEST(Marginals, BallTailClosedFormInThreeDimensions) {
  for (int k = 0; k <= 100; ++k) {
    const double a = k / 100.0;
    EXPECT_NEAR(ball_upper_tail(3, a), oracle::ball3_tail(a), 1e-8);
  }
}

TEST(Marginals, SphericalTailMatchesRadialMixture) {
  for (std::size_t d = 2; d <= 8; ++d) {
    for (double a : {0.05, 0.2, 0.5, 0.8, 0.95}) {
      EXPECT_NEAR(spherical_upper_tail(d, a), oracle::spherical_tail(d, a), 1e-8) << d << " " << a;
    }
  }
}

TEST(Marginals, TailSymmetryAndEndpoints) {
  for (std::size_t d : {1, 2, 3, 6}) {
    EXPECT_EQ(spherical_upper_tail(d, 0.0), 0.5);
    EXPECT_EQ(ball_upper_tail(d, 0.0), 0.5);
    EXPECT_EQ(spherical_upper_tail(d, 1.0), 0.0);
    EXPECT_EQ(ball_upper_tail(d, -1.0), 1.0);
    EXPECT_NEAR(spherical_upper_tail(d, -0.3) + spherical_upper_tail(d, 0.3), 1.0, 1e-12);
  }
  EXPECT_DOUBLE_EQ(spherical_upper_tail(1, 0.4), 0.3);
  EXPECT_DOUBLE_EQ(ball_upper_tail(1, 0.4), 0.3);
}

TEST(Marginals, Constants) {
  EXPECT_NEAR(spherical_marginal_constant(2), 1.0 / std::numbers::pi, 1e-14);
  EXPECT_NEAR(spherical_marginal_constant(3), 0.5, 1e-14);
  EXPECT_NEAR(ball_marginal_constant(3), 0.75, 1e-14);
  EXPECT_NEAR(ball_marginal_constant(1), 0.5, 1e-14);
}
