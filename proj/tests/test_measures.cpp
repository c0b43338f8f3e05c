#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "otbdp/measures.hpp"
#include "otbdp/parallel.hpp"

using namespace otbdp;

TEST(ReferenceMeasure, ParseRoundTrip) {
  for (const char* s : {"cube:2", "ball:3", "sphunif:5", "gauss:1"}) {
    EXPECT_EQ(ReferenceMeasure::parse(s).spec(), s);
  }
  for (const char* bad : {"cube", "cube:0", "disc:2", "ball:x", "gauss:-1", ""}) {
    EXPECT_THROW(ReferenceMeasure::parse(bad), Error) << bad;
  }
}

TEST(ReferenceMeasure, Centers) {
  EXPECT_EQ(ReferenceMeasure::parse("cube:3").center(), (Point{0.5, 0.5, 0.5}));
  EXPECT_EQ(ReferenceMeasure::parse("ball:2").center(), (Point{0.0, 0.0}));
}

TEST(ReferenceMeasure, SamplesAreDeterministicAndThreadIndependent) {
  const auto ref = ReferenceMeasure::parse("sphunif:3");
  set_max_threads(1);
  const auto a = sample(ref, 40'000, 9);
  set_max_threads(4);
  const auto b = sample(ref, 40'000, 9);
  set_max_threads(0);
  EXPECT_EQ(a.data(), b.data());
  const auto c = sample(ref, 40'000, 10);
  EXPECT_NE(a.data(), c.data());
  // A prefix request reproduces the same points.
  std::vector<double> buf(3 * 5);
  ref.sample_into(9, 100, 5, buf);
  for (std::size_t k = 0; k < 15; ++k) EXPECT_EQ(buf[k], a.data()[300 + k]);
}

TEST(ReferenceMeasure, SamplesLieInSupport) {
  for (const char* s : {"cube:3", "ball:4", "sphunif:2"}) {
    const auto ref = ReferenceMeasure::parse(s);
    const auto pts = sample(ref, 20'000, 3);
    for (std::size_t i = 0; i < pts.size(); ++i) ASSERT_TRUE(ref.contains(pts[i]));
  }
}

TEST(ReferenceMeasure, SphericalUniformRadiusIsUniform) {
  const auto ref = ReferenceMeasure::parse("sphunif:3");
  const auto pts = sample(ref, 200'000, 5);
  std::size_t inner = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) inner += norm(pts[i]) <= 0.5;
  EXPECT_NEAR(static_cast<double>(inner) / 200'000.0, 0.5, 5e-3);
}

TEST(ReferenceMeasure, HalfspaceMassMatchesSamples) {
  for (const char* s : {"cube:2", "cube:3", "ball:2", "sphunif:3", "gauss:2"}) {
    const auto ref = ReferenceMeasure::parse(s);
    const auto pts = sample(ref, 400'000, 77);
    Point v(ref.dim(), 1.0);
    v = normalized(v);
    const double off = ref.kind() == ReferenceKind::UniformCube ? 0.9 : 0.3;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) hits += dot(pts[i], v) >= off;
    EXPECT_NEAR(ref.halfspace_mass(v, off), static_cast<double>(hits) / 400'000.0, 4e-3) << s;
  }
}

TEST(ReferenceMeasure, ClosedHalfspaceMasses) {
  const auto gauss = ReferenceMeasure::parse("gauss:3");
  EXPECT_NEAR(gauss.halfspace_mass(Point{0.0, 1.0, 0.0}, 1.2), oracle::normal_tail(1.2), 1e-15);
  const auto ball = ReferenceMeasure::parse("ball:3");
  EXPECT_NEAR(ball.halfspace_mass(Point{0.0, 0.0, -1.0}, 0.5), 0.15625, 1e-10);
  const auto cube = ReferenceMeasure::parse("cube:2");
  EXPECT_DOUBLE_EQ(cube.halfspace_mass(Point{1.0, 0.0}, 0.3), 0.7);
  EXPECT_DOUBLE_EQ(cube.halfspace_mass(Point{-1.0, 0.0}, -0.3), 0.3);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(cube.halfspace_mass(Point{r, r}, 1.5 * r), 0.125, 1e-14);
  EXPECT_THROW(cube.halfspace_mass(Point{1.0, 1.0}, 0.0), Error);
}

TEST(ReferenceMeasure, UnitSquareClipping) {
  EXPECT_NEAR(unit_square_halfplane_area(Point{0.6, 0.8}, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(unit_square_halfplane_area(Point{0.6, 0.8}, 10.0), 0.0, 1e-15);
  EXPECT_NEAR(unit_square_halfplane_area(Point{1.0, 0.0}, 0.25), 0.75, 1e-15);
}

TEST(ReferenceMeasure, SupportPredicates) {
  const auto cube = ReferenceMeasure::parse("cube:2");
  EXPECT_TRUE(cube.contains(Point{0.0, 1.0}));
  EXPECT_FALSE(cube.interior_contains(Point{0.0, 0.5}));
  EXPECT_FALSE(cube.contains(Point{1.1, 0.5}));
  const auto ball = ReferenceMeasure::parse("ball:2");
  EXPECT_TRUE(ball.contains(Point{1.0, 0.0}));
  EXPECT_FALSE(ball.interior_contains(Point{1.0, 0.0}));
  EXPECT_TRUE(ReferenceMeasure::parse("gauss:2").interior_contains(Point{1e6, -1e6}));
}

TEST(DiscreteMeasure, NormalizesAndValidates) {
  PointSet atoms(1);
  atoms.push_back(Point{0.0});
  atoms.push_back(Point{1.0});
  const DiscreteMeasure m(atoms, {1.0, 3.0});
  EXPECT_DOUBLE_EQ(m.weight(0), 0.25);
  EXPECT_DOUBLE_EQ(m.weight(1), 0.75);
  EXPECT_FALSE(m.is_empirical());
  EXPECT_TRUE(DiscreteMeasure::empirical(atoms).is_empirical());
  EXPECT_THROW(DiscreteMeasure(atoms, {1.0, -1.0}), Error);
  EXPECT_THROW(DiscreteMeasure(atoms, {1.0}), Error);
  PointSet dup(1);
  dup.push_back(Point{0.5});
  dup.push_back(Point{0.5});
  try {
    DiscreteMeasure::empirical(dup);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AtomCollision);
  }
}

TEST(DiscreteMeasure, MeanDiameterTranslate) {
  PointSet atoms(2);
  atoms.push_back(Point{0.0, 0.0});
  atoms.push_back(Point{3.0, 4.0});
  const auto m = DiscreteMeasure::empirical(atoms);
  EXPECT_DOUBLE_EQ(m.diameter(), 5.0);
  EXPECT_EQ(m.mean(), (Point{1.5, 2.0}));
  const auto t = m.translated(Point{1.0, -1.0});
  EXPECT_EQ(t.atom(1)[0], 4.0);
  EXPECT_EQ(t.atom(1)[1], 3.0);
  EXPECT_EQ(t.weights(), m.weights());
}

TEST(ReferenceMeasure, SampleMoments) {
  const auto s3 = sample(ReferenceMeasure::parse("sphunif:3"), 1'000'000, 1);
  double r = 0.0;
  for (std::size_t i = 0; i < s3.size(); ++i) r += norm(s3[i]);
  EXPECT_NEAR(r / 1e6, 0.5, 3e-3);
  const auto g2 = sample(ReferenceMeasure::parse("gauss:2"), 1'000'000, 1);
  double m0 = 0.0, m1 = 0.0, v0 = 0.0, v1 = 0.0;
  for (std::size_t i = 0; i < g2.size(); ++i) {
    m0 += g2[i][0];
    m1 += g2[i][1];
    v0 += g2[i][0] * g2[i][0];
    v1 += g2[i][1] * g2[i][1];
  }
  EXPECT_NEAR(m0 / 1e6, 0.0, 3e-3);
  EXPECT_NEAR(m1 / 1e6, 0.0, 3e-3);
  EXPECT_NEAR(v0 / 1e6, 1.0, 5e-3);
  EXPECT_NEAR(v1 / 1e6, 1.0, 5e-3);
  const auto c = sample(ReferenceMeasure::parse("cube:2"), 4, 7);
  EXPECT_EQ(c.data(), sample(ReferenceMeasure::parse("cube:2"), 4, 7).data());
}

TEST(ReferenceMeasure, HalfspaceMassLimits) {
  for (const char* s : {"cube:2", "ball:3", "sphunif:2", "gauss:2"}) {
    const auto ref = ReferenceMeasure::parse(s);
    Point v(ref.dim(), 0.0);
    v[0] = 1.0;
    EXPECT_NEAR(ref.halfspace_mass(v, 50.0), 0.0, 1e-12) << s;
    EXPECT_NEAR(ref.halfspace_mass(v, -50.0), 1.0, 1e-12) << s;
  }
  EXPECT_EQ(ReferenceMeasure::parse("gauss:4").halfspace_mass(Point{0.0, 0.0, 1.0, 0.0}, 0.0), 0.5);
}
