#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "otbdp/depth.hpp"
#include "otbdp/robustness.hpp"

using namespace otbdp;

namespace {

DiscreteMeasure cloud(std::uint64_t seed, std::size_t n, std::vector<double> weights = {}) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  PointSet p(2);
  for (std::size_t i = 0; i < n; ++i) p.push_back(Point{U(g), U(g)});
  if (weights.empty()) return DiscreteMeasure::empirical(p);
  return DiscreteMeasure(p, weights);
}

SolveConfig quick() {
  SolveConfig c;
  c.mc_budget = 100'000;
  return c;
}

}  // namespace

TEST(ContaminateRay, MovesContaminatedMassToTheRay) {
  const auto t = cloud(1, 2, {0.3, 0.7});
  const std::vector<std::size_t> I{0};
  const Point u{0.5, 0.5};
  const Point v{0.0, 1.0};
  const auto c = contaminate_ray(t, u, I, 10.0, v);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.atom(0)[1], 10.5);
  EXPECT_EQ(c.weight(0), 0.3);
  EXPECT_EQ(c.atom(1)[0], t.atom(1)[0]);
  EXPECT_EQ(c.weight(1), 0.7);
}

TEST(ContaminateRay, AllAtomsGiveADiracAtTheRay) {
  const auto t = cloud(2, 5);
  const std::vector<std::size_t> I{4, 0, 1, 2, 3};
  const auto c = contaminate_ray(t, Point{0.2, 0.2}, I, 3.0, Point{1.0, 0.0});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c.weight(0), 1.0, 1e-15);
  EXPECT_EQ(c.atom(0)[0], 3.2);
}

TEST(ContaminateRay, MassIsConservedAndErrorsReported) {
  const auto t = cloud(3, 6);
  const std::vector<std::size_t> I{1, 4};
  const auto c = contaminate_ray(t, Point{0.5, 0.5}, I, 5.0, Point{0.6, 0.8});
  EXPECT_NEAR(std::accumulate(c.weights().begin(), c.weights().end(), 0.0), 1.0, 1e-15);
  EXPECT_EQ(c.size(), 5u);
  const std::vector<std::size_t> none;
  EXPECT_THROW(contaminate_ray(t, Point{0.5, 0.5}, none, 5.0, Point{0.6, 0.8}), Error);
  const std::vector<std::size_t> out_of_range{9};
  EXPECT_THROW(contaminate_ray(t, Point{0.5, 0.5}, out_of_range, 5.0, Point{0.6, 0.8}), Error);
  EXPECT_THROW(contaminate_ray(t, Point{0.5, 0.5}, I, -1.0, Point{0.6, 0.8}), Error);
  // y lands on an uncontaminated atom.
  const auto x0 = t.atom(0);
  const Point u{x0[0] - 1.0, x0[1]};
  try {
    contaminate_ray(t, u, I, 1.0, Point{1.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AtomCollision);
  }
}

TEST(ContaminateSymmetric, PairIsATranslate) {
  const auto t = cloud(4, 6);
  const std::vector<std::size_t> I{0, 1, 2, 3};
  const Point shift{30.0, -40.0};
  const auto [plus, minus] = contaminate_symmetric(t, I, shift);
  ASSERT_EQ(plus.size(), minus.size());
  EXPECT_EQ(plus.size(), 5u);
  for (std::size_t i = 0; i < plus.size(); ++i) {
    EXPECT_EQ(minus.atom(i)[0], plus.atom(i)[0] - shift[0]);
    EXPECT_EQ(minus.atom(i)[1], plus.atom(i)[1] - shift[1]);
    EXPECT_EQ(minus.weight(i), plus.weight(i));
  }
  EXPECT_NEAR(std::accumulate(plus.weights().begin(), plus.weights().end(), 0.0), 1.0, 1e-15);
  // Uncontaminated atoms keep their positions in nu(t).
  EXPECT_EQ(plus.atom(0)[0], t.atom(4)[0]);
  EXPECT_EQ(plus.atom(1)[1], t.atom(5)[1]);
}

TEST(ContaminateSymmetric, FullContaminationIsAPairOfDiracs) {
  const auto t = cloud(5, 3);
  const std::vector<std::size_t> I{0, 1, 2};
  const auto [plus, minus] = contaminate_symmetric(t, I, Point{2.0, 4.0});
  ASSERT_EQ(plus.size(), 1u);
  EXPECT_EQ(plus.atom(0)[0], 1.0);
  EXPECT_EQ(minus.atom(0)[1], -2.0);
}

TEST(ContaminateSymmetric, NeedsHalfTheMass) {
  const auto t = cloud(6, 4);
  const std::vector<std::size_t> I{0};
  try {
    contaminate_symmetric(t, I, Point{1.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientContaminationMass);
  }
}

TEST(LocalIntegral, ZeroForIdenticalMaps) {
  const auto ref = ReferenceMeasure::parse("cube:2");
  const auto map = solve(ref, cloud(7, 5), quick());
  const auto li = local_integral(map, map, Point{0.4, 0.4}, 0.1, 100'000, 3);
  EXPECT_EQ(li.value, 0.0);
  EXPECT_NEAR(li.ball_mass, std::numbers::pi * 0.01, 3e-3);
  EXPECT_THROW(local_integral(map, map, Point{0.4, 0.4}, 0.0, 1000, 3), Error);
}

TEST(LocalIntegral, ShiftedTargetGivesNormTimesBallMass) {
  const auto ref = ReferenceMeasure::parse("gauss:2");
  const auto t = cloud(8, 6);
  const Point shift{3.0, 4.0};
  const auto a = solve(ref, t, quick());
  const auto b = solve(ref, t.translated(shift), quick());
  const auto li = local_integral(a, b, Point{0.2, -0.1}, 0.3, 200'000, 4);
  EXPECT_NEAR(li.value, 5.0 * li.ball_mass, 1e-12);
}

TEST(LocalIntegral, SymmetricPairMatchesProofDisplay) {
  const auto ref = ReferenceMeasure::parse("cube:2");
  const auto t = cloud(9, 6);
  const std::vector<std::size_t> I{0, 1, 2, 3};
  const Point shift{20.0, 10.0};
  const auto [plus, minus] = contaminate_symmetric(t, I, shift);
  const auto a = solve(ref, plus, quick());
  const auto b = solve(ref, minus, quick());
  const auto li = local_integral(a, b, Point{0.5, 0.5}, 0.2, 200'000, 5);
  const double norm_t = std::sqrt(500.0);
  // Exact equivariance: every sample lands in matching cells.
  EXPECT_NEAR(li.value, norm_t * li.ball_mass, 1e-9 * norm_t);
}

TEST(DivergenceExperiment, AllAtomsDiverge) {
  const auto ref = ReferenceMeasure::parse("cube:2");
  const auto t = cloud(10, 5);
  DivergenceConfig cfg;
  cfg.solve = quick();
  cfg.integral_budget = 100'000;
  const std::vector<std::size_t> I{0, 1, 2, 3, 4};
  const auto p = divergence_experiment(ref, t, Point{0.4, 0.6}, I, cfg);
  EXPECT_TRUE(p.diverges);
  ASSERT_EQ(p.radii.size(), 4u);
  for (std::size_t k = 1; k < p.radii.size(); ++k) EXPECT_GT(p.radii[k], p.radii[k - 1]);
  for (double v : p.integrals) EXPECT_GE(v, 0.0);
  // Every point of the ball goes to y_R, so the slope tends to the ball mass.
  EXPECT_NEAR(p.slope, p.ball_mass, 1e-2 * p.ball_mass);
}

TEST(DivergenceExperiment, SmallContaminationStaysBounded) {
  const auto ref = ReferenceMeasure::parse("cube:2");
  const auto t = cloud(11, 8);
  DivergenceConfig cfg;
  cfg.solve = quick();
  cfg.integral_budget = 100'000;
  cfg.delta = 0.05;
  const std::vector<std::size_t> I{0};
  const auto p = divergence_experiment(ref, t, Point{0.5, 0.5}, I, cfg);
  EXPECT_FALSE(p.diverges);
  EXPECT_TRUE(p.bounded);
}

TEST(DivergenceConfig, Validates) {
  DivergenceConfig c;
  c.radii = {10.0, 20.0, 40.0};
  EXPECT_THROW(c.validate(), Error);
  c.radii = {10.0, 5.0, 40.0, 80.0};
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.delta = -1.0;
  EXPECT_THROW(c.validate(), Error);
}
