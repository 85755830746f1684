#include <gtest/gtest.h>

#include "coxlab/thinpart.hpp"
#include "oracles.hpp"

using namespace coxlab;

namespace {

// Area of {x in P : d(x, boundary) >= t} by quadrature in polar coordinates
// about c. The set is convex and contains c, so each ray meets it in an
// interval [0, r*(theta)].
double core_area_quadrature(const Polygon& P, const HPoint& c, double t, int steps = 20000) {
  const Isometry to_c = [&] {
    // isometry taking the origin to c: boost along the direction of c
    const double r = distance(HPoint{}, c);
    const double th = std::atan2(c.vec().x2, c.vec().x1);
    const double ch = std::cosh(r), sh = std::sinh(r);
    const Mat3 boost{{{ch, sh, 0}, {sh, ch, 0}, {0, 0, 1}}};
    return Isometry::rotation(th) * Isometry::from_matrix(boost) * Isometry::rotation(-th);
  }();
  auto depth = [&](double r, double th) { return P.inner_distance(to_c.apply(HPoint::polar(r, th).vec())); };
  const double h = 2 * kPi / steps;
  double sum = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double th = (k + 0.5) * h;
    double lo = 0.0, hi = 1.0;
    while (depth(hi, th) >= t) hi *= 2;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (depth(mid, th) >= t ? lo : hi) = mid;
    }
    sum += std::cosh(lo) - 1.0;
  }
  return sum * h;
}

}  // namespace

TEST(ThinFractionConstant, FromJacobianMinimum) {
  double eps = kInf;
  for (int k = 0; k <= 100; ++k) eps = std::min(eps, oracle::finite_difference_jacobian(k / 100.0, 0.3));
  EXPECT_NEAR(collar_epsilon(), eps, 1e-6);
  EXPECT_NEAR(thin_fraction_constant(), 1.0 / (1.0 + 1.0 / eps), 1e-6);
  EXPECT_NEAR(thin_fraction_constant(), 1.0 / (1.0 + std::cosh(1.0)), 1e-15);
  EXPECT_LT(thin_fraction_constant(), 1.0);
}

TEST(ThinRatio, Extremes) {
  const auto P = regular_coxeter_polygon(7, 3);
  EXPECT_EQ(thin_ratio(P, 0.0, 10000).ratio, 0.0);
  EXPECT_EQ(thin_ratio(P, 2.0 * inradius(P) + 1e-9, 10000).ratio, 1.0);
  EXPECT_THROW(thin_ratio(P, -1.0, 10), PreconditionViolation);
  const auto e = thin_ratio(P, 0.5, 10000, {.seed = 77});
  EXPECT_EQ(e.n_samples, 10000u);
  EXPECT_EQ(e.seed, 77u);
  EXPECT_DOUBLE_EQ(e.std_error, std::sqrt(e.ratio * (1 - e.ratio) / 10000));
}

TEST(ThinRatio, CoupledEstimatesAreMonotone) {
  const auto P = ideal_regular_polygon(12);
  const std::vector<double> Rs{0.1, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0};
  const auto es = thin_ratios(P, Rs, 50000, {.seed = 4});
  for (std::size_t i = 1; i < es.size(); ++i) EXPECT_GE(es[i].ratio, es[i - 1].ratio);
}

TEST(ThinRatio, MatchesQuadratureOracle) {
  for (const CoxeterPolygon& P : {regular_coxeter_polygon(7, 3), triangle_polygon(3, 4, 5), ideal_regular_polygon(5)}) {
    const HPoint c = incenter(P);
    const double r = inradius(P);
    for (double t : {0.25 * r, 0.6 * r}) {
      const double expected = 1.0 - core_area_quadrature(P, c, t) / area(P);
      const auto e = thin_ratio(P, 2 * t, 400000, {.seed = 21});
      EXPECT_NEAR(e.ratio, expected, 4 * binomial_std_error(expected, e.n_samples)) << "t=" << t;
    }
  }
}

TEST(ThinRatio, LowerBoundOnIdealPolygon) {
  const auto e = thin_ratio(ideal_regular_polygon(50), 2.0, 200000, {.seed = 8});
  EXPECT_GE(e.ratio, thin_fraction_constant() - 3 * e.std_error);
}

TEST(Collar, SmallPolygonHasEmptyCore) {
  const auto P = right_angled_pentagon(1.0, 1.2);
  ASSERT_LT(inradius(P), 1.0);
  const auto rep = collar_inequality_check(P, 20000);
  EXPECT_EQ(rep.vol_core, 0.0);
  EXPECT_TRUE(rep.passed);
}

TEST(Collar, LargeRegularPolygon) {
  const auto P = regular_coxeter_polygon(50, 3);
  const auto rep = collar_inequality_check(P, 200000, {.seed = 6});
  EXPECT_TRUE(rep.compact);
  EXPECT_GT(rep.vol_core, 0.0);
  EXPECT_TRUE(rep.passed);
  EXPECT_NEAR(rep.vol_P, area(P), 1e-9);
  EXPECT_LE(std::abs(rep.partition_defect), 3 * std::hypot(rep.se_U, rep.se_core));
}

TEST(CrossCheck, GroupAndDistanceIndicatorsAgree) {
  for (const CoxeterPolygon& P : {triangle_polygon(2, 3, 7), triangle_polygon(3, 3, 4), right_angled_pentagon(1.0, 1.2)}) {
    for (double R : {0.0, inradius(P), 2.0}) {
      const auto ball = cross_check_ball(P, R);
      const auto rep = group_thin_cross_check(P, R, 20000, ball, {.seed = 13});
      EXPECT_TRUE(rep.ball_sufficient);
      EXPECT_LE(rep.rate, 0.005) << "R=" << R;
      EXPECT_EQ(rep.thin_geometric + rep.disagreements >= rep.thin_group, true);
      if (R == 0.0) {
        EXPECT_EQ(rep.thin_group, 0u);
      }
      if (R == inradius(P)) {
        EXPECT_GT(rep.thin_geometric, 0u);
        EXPECT_LT(rep.thin_geometric, rep.n_samples - rep.excluded);
      }
    }
  }
}

TEST(CrossCheck, WarnsOnSmallBall) {
  const auto P = triangle_polygon(3, 3, 4);
  const auto ball = ball_by_radius(P, 0.5, incenter(P));
  const auto rep = group_thin_cross_check(P, 2.0, 100, ball);
  EXPECT_FALSE(rep.ball_sufficient);
  EXPECT_FALSE(rep.warning.empty());
}

TEST(ThickFraction, NonIncreasingInR) {
  std::vector<NamedPolygon> fam;
  for (int n : {10, 30}) fam.push_back({"ideal" + std::to_string(n), ideal_regular_polygon(n).shape});
  const std::vector<double> Rs{1, 2, 3, 4, 6};
  const auto rows = thick_fraction_decay(fam, Rs, 50000, {.seed = 2});
  ASSERT_EQ(rows.size(), 10u);
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].polygon_id == rows[i - 1].polygon_id) {
      EXPECT_LE(rows[i].thick, rows[i - 1].thick);
    }
  EXPECT_EQ(rows.back().n_vertices, 30u);
}

TEST(ThinOutput, CsvAndJsonCarryAllFields) {
  const ThinRatioEstimate e{0.25, 0.01, 100, 2.0, 5};
  EXPECT_EQ(thin_csv_row("p", 7, e), "p,7,2,0.25,0.01,100,5," + fmt17(thin_fraction_constant()));
  const auto j = thin_json("p", 7, e);
  EXPECT_EQ(j["n_samples"], 100);
  EXPECT_EQ(j["stderr"], 0.01);
}
