#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "coxlab/lorentz.hpp"
#include "coxlab/trig.hpp"
#include "oracles.hpp"

using namespace coxlab;

TEST(Mink, Examples) {
  EXPECT_EQ(mink({1, 0, 0}, {1, 0, 0}), -1.0);
  EXPECT_EQ(mink({0, 1, 0}, {0, 1, 0}), 1.0);
  EXPECT_NEAR(mink({1, 0, 0}, {std::cosh(1.0), std::sinh(1.0), 0}), -1.5430806348152437, 1e-15);
}

TEST(Distance, Examples) {
  const HPoint o;
  EXPECT_EQ(distance(o, o), 0.0);
  EXPECT_NEAR(distance(o, HPoint::polar(1.0, 0.0)), 1.0, 1e-14);
  EXPECT_NEAR(distance(o, HPoint::polar(1e-9, 0.3)), 1e-9, 1e-20);
}

TEST(Distance, MetricOnRandomTriples) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    const HPoint a = oracle::random_point(rng), b = oracle::random_point(rng), c = oracle::random_point(rng);
    EXPECT_EQ(distance(a, b), distance(b, a));
    EXPECT_LE(distance(a, c), distance(a, b) + distance(b, c) + 1e-12);
  }
}

TEST(Distance, RejectsInvalidInput) {
  EXPECT_THROW(HPoint::from({0.5, 0, 0}), DomainError);
  EXPECT_THROW(HPoint::from({-1, 0, 0}), DomainError);
}

TEST(Reflect, Examples) {
  const Geodesic g = Geodesic::from_pole({0, 0, 1});
  const LorentzVector x{std::cosh(1.0), 0, std::sinh(1.0)};
  const LorentzVector y = reflect(g, x);
  EXPECT_NEAR(y.x0, std::cosh(1.0), 1e-15);
  EXPECT_NEAR(y.x2, -std::sinh(1.0), 1e-15);
  const LorentzVector on{std::cosh(2.0), std::sinh(2.0), 0};
  EXPECT_LT(max_abs_diff(reflect(g, on), on), 1e-15);
}

TEST(Reflect, InvolutionAndIsometry) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const HPoint p = oracle::random_point(rng), q = oracle::random_point(rng), x = oracle::random_point(rng);
    const Geodesic g = geodesic_through(p, q);
    EXPECT_LT(max_abs_diff(reflect(g, reflect(g, x)), x.vec()), 1e-12 * std::max(1.0, x.vec().x0 * 50));
    const Isometry m = Isometry::reflection(g);
    EXPECT_TRUE(m.is_lorentz(1e-10));
    EXPECT_LT((m * m).max_entry_distance(Isometry()), 1e-10);
    EXPECT_NEAR(distance(m.apply(p), p), 0.0, 1e-7);
  }
}

TEST(GeodesicThrough, Examples) {
  const Geodesic g = geodesic_through({1, 0, 0}, {std::cosh(1.0), std::sinh(1.0), 0});
  EXPECT_NEAR(std::abs(g.pole().x2), 1.0, 1e-15);
  const Geodesic h = geodesic_through({1, 1, 0}, {1, -1, 0});
  EXPECT_NEAR(std::abs(h.pole().x2), 1.0, 1e-15);
  EXPECT_THROW(geodesic_through({1, 0, 0}, {2, 0, 0}), DegenerateInput);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const HPoint p = oracle::random_point(rng), q = oracle::random_point(rng);
    const Geodesic k = geodesic_through(p, q);
    EXPECT_NEAR(mink(k.pole(), p), 0.0, 1e-12 * p.vec().x0 * q.vec().x0);
    EXPECT_NEAR(mink(k.pole(), q), 0.0, 1e-12 * p.vec().x0 * q.vec().x0);
    EXPECT_NEAR(mink(k.pole(), k.pole()), 1.0, 1e-14);
  }
}

TEST(DistPointGeodesic, FermiAndFoot) {
  const Geodesic g = Geodesic::from_pole({0, 0, 1});
  const HPoint x = HPoint::from({std::cosh(0.7), 0, std::sinh(0.7)});
  EXPECT_NEAR(dist_point_geodesic(x, g), 0.7, 1e-15);
  EXPECT_EQ(dist_point_geodesic(HPoint(), g), 0.0);

  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const HPoint p = oracle::random_point(rng), q = oracle::random_point(rng), y = oracle::random_point(rng);
    const Geodesic k = geodesic_through(p, q);
    EXPECT_NEAR(dist_point_geodesic(y, k), distance(y, foot_of_perpendicular(y, k)), 1e-12);
  }
}

TEST(DistPointSegment, Examples) {
  const HPoint a, b = HPoint::polar(1.0, 0.0);
  EXPECT_NEAR(dist_point_segment(HPoint::polar(0.5, 0.0), Vertex::finite(a), Vertex::finite(b)), 0.0, 1e-8);
  const HPoint beyond = HPoint::polar(2.0, 0.1);
  EXPECT_NEAR(dist_point_segment(beyond, Vertex::finite(a), Vertex::finite(b)), distance(beyond, b), 1e-14);
  EXPECT_THROW(dist_point_segment(beyond, Vertex::finite(a), Vertex::finite(a)), DegenerateInput);
  // towards an ideal endpoint the foot is always interior
  const Vertex inf = Vertex::at_infinity(IdealPoint::at_angle(0.0));
  EXPECT_NEAR(dist_point_segment(beyond, Vertex::finite(a), inf),
              dist_point_geodesic(beyond, Geodesic::from_pole({0, 0, 1})), 1e-14);
}

TEST(DistPointSegment, MatchesDenseSampling) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const HPoint a = oracle::random_point(rng, 1.5), b = oracle::random_point(rng, 1.5);
    const HPoint x = oracle::random_point(rng, 2.0);
    const double d = dist_point_segment(x, Vertex::finite(a), Vertex::finite(b));
    EXPECT_NEAR(d, oracle::sampled_segment_distance(x, a, b, 100000), 1e-6);
  }
}

TEST(ExpMap, Examples) {
  const HPoint o;
  EXPECT_LT(max_abs_diff(exp_map(o, {0, 0, 0}).vec(), o.vec()), 1e-15);
  const HPoint p = exp_map(o, {0, 0.8, 0});
  EXPECT_NEAR(p.vec().x0, std::cosh(0.8), 1e-15);
  EXPECT_NEAR(p.vec().x1, std::sinh(0.8), 1e-15);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const HPoint x = oracle::random_point(rng);
    const LorentzVector t = tangent_toward(x, oracle::random_point(rng).vec());
    EXPECT_NEAR(distance(x, exp_map(x, t)), 1.0, 1e-12);
  }
  EXPECT_THROW(exp_map(o, {1, 0, 0}), DomainError);
}

TEST(IsometryTest, RenormalizeRestoresInvariant) {
  const Isometry r = Isometry::rotation(0.3);
  Mat3 m = r.matrix();
  m[1][1] *= 1 + 1e-7;
  const Isometry drift = Isometry::from_matrix(m, 1.0);
  EXPECT_FALSE(drift.is_lorentz(1e-10));
  EXPECT_TRUE(drift.renormalized().is_lorentz(1e-12));
  EXPECT_LT(drift.inverse().renormalized().max_entry_distance(r.inverse()), 1e-6);
}

TEST(SideFromAngles, Examples) {
  // cosh c = cos(pi/7) / sin(pi/3)
  EXPECT_NEAR(side_from_angles(kPi / 2, kPi / 3, kPi / 7), 0.28312815336765745, 1e-12);
  EXPECT_NEAR(std::cosh(side_from_angles(kPi / 4, kPi / 4, kPi / 4)), 1.0 + std::sqrt(2.0), 1e-12);
  EXPECT_LT(side_from_angles(1.0, 1.0, kPi - 2.0 - 1e-9), 1e-3);
  EXPECT_THROW(side_from_angles(1.0, 1.0, kPi - 2.0), DomainError);
}

TEST(SideFromAngles, RoundTripsWithCosineRule) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng);
    if (a + b + c >= kPi - 0.05) continue;
    const double sa = side_from_angles(b, c, a), sb = side_from_angles(a, c, b), sc = side_from_angles(a, b, c);
    const auto ang = angles_from_sides(sa, sb, sc);
    EXPECT_NEAR(ang[0], a, 1e-10);
    EXPECT_NEAR(ang[1], b, 1e-10);
    EXPECT_NEAR(ang[2], c, 1e-10);
  }
}

TEST(HeronArea, Examples) {
  EXPECT_NEAR(heron_area(2.0, 1.2, 0.8), 0.0, 1e-7);
  EXPECT_NEAR(heron_area(0.9, 1.3, 1.7), heron_area(1.7, 0.9, 1.3), 1e-14);
  const double a = side_from_angles(kPi / 3, kPi / 7, kPi / 2);
  const double b = side_from_angles(kPi / 2, kPi / 7, kPi / 3);
  const double c = side_from_angles(kPi / 2, kPi / 3, kPi / 7);
  EXPECT_NEAR(heron_area(a, b, c), kPi / 42, 1e-12);
  EXPECT_THROW(heron_area(3.0, 1.0, 1.0), DomainError);
}

TEST(HeronArea, AgreesWithGaussBonnet) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.05, kPi / 2);
  int checked = 0;
  while (checked < 10000) {
    const double A = u(rng), B = u(rng), C = u(rng);
    if (A + B + C >= kPi) continue;
    const double a = side_from_angles(B, C, A), b = side_from_angles(A, C, B), c = side_from_angles(A, B, C);
    const auto ang = angles_from_sides(a, b, c);
    ASSERT_NEAR(heron_area(a, b, c), gauss_bonnet_area({ang[0], ang[1], ang[2]}), 1e-9);
    ++checked;
  }
}

TEST(GaussBonnet, Examples) {
  EXPECT_NEAR(gauss_bonnet_area({kPi / 2, kPi / 3, kPi / 7}), kPi / 42, 1e-15);
  EXPECT_EQ(gauss_bonnet_area({0.0, 0.0, 0.0}), kPi);
  EXPECT_NEAR(gauss_bonnet_area({kPi / 2, kPi / 2, kPi / 2, kPi / 2, kPi / 2}), kPi / 2, 1e-15);
  EXPECT_THROW(gauss_bonnet_area({kPi / 2, kPi / 2, kPi / 2, kPi / 2}), DomainError);
}

TEST(EquidistantJacobian, MatchesFiniteDifferences) {
  EXPECT_EQ(equidistant_jacobian(0.0), 1.0);
  EXPECT_NEAR(equidistant_jacobian(1.0), 0.6480542736638855, 1e-15);
  for (int k = 0; k < 100; ++k) {
    const double t = (k + 0.5) / 100.0;
    EXPECT_NEAR(equidistant_jacobian(t), oracle::finite_difference_jacobian(t, 0.37), 1e-6);
  }
  double lo = 1.0;
  for (int k = 0; k <= 1000; ++k) lo = std::min(lo, oracle::finite_difference_jacobian(std::min(k / 1000.0, 1.0 - 1e-5), 0.0));
  EXPECT_NEAR(lo, 1.0 / std::cosh(1.0), 1e-5);
  EXPECT_THROW(equidistant_jacobian(1.5), DomainError);
}
