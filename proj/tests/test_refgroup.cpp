#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "coxlab/refgroup.hpp"

using namespace coxlab;

namespace {

// Every word of length <= L, deduplicated by pairwise matrix comparison.
// Returns (matrix, shortest length) pairs.
std::vector<std::pair<Isometry, int>> brute_force_ball(const std::vector<Isometry>& gens, int L) {
  std::vector<std::pair<Isometry, int>> out{{Isometry(), 0}};
  std::vector<Isometry> frontier{Isometry()};
  for (int len = 1; len <= L; ++len) {
    std::vector<Isometry> next;
    for (const auto& w : frontier) {
      for (const auto& s : gens) {
        const Isometry g = w * s;
        next.push_back(g);
        bool seen = false;
        for (const auto& [h, l] : out) seen = seen || h.max_entry_distance(g) < 1e-8 * std::max(1.0, g(0, 0));
        if (!seen) out.push_back({g, len});
      }
    }
    frontier = std::move(next);
  }
  return out;
}

std::uint64_t letters(const std::vector<int>& word) {
  std::uint64_t m = 0;
  for (int s : word) m |= std::uint64_t{1} << s;
  return m;
}

std::vector<CoxeterPolygon> corpus() {
  return {triangle_polygon(2, 3, 7), triangle_polygon(2, 4, 5), triangle_polygon(3, 3, 4), right_angled_pentagon(1.0, 1.2),
          right_angled_hexagon(1.0, 1.0, 1.0)};
}

}  // namespace

TEST(SideReflections, InvolutionsFixingTheirSides) {
  const auto P = regular_coxeter_polygon(7, 3);
  const auto gens = side_reflections(P);
  ASSERT_EQ(gens.size(), 7u);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    EXPECT_LT((gens[i] * gens[i]).max_entry_distance(Isometry()), 1e-12);
    for (double t : {0.0, 0.3, 1.0}) {
      const auto a = P.shape.vertex(i).v, b = P.shape.vertex(i + 1).v;
      const LorentzVector x = HPoint::normalize((1 - t) * a + t * b).vec();
      EXPECT_LT(max_abs_diff(gens[i].apply(x), x), 1e-12);
    }
  }
}

TEST(SideReflections, VertexProductsHaveOrderM) {
  for (const auto& P : corpus()) {
    const auto gens = side_reflections(P);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const int m = P.orders[(i + 1) % gens.size()].value();
      const Isometry r = gens[i] * gens[(i + 1) % gens.size()];
      Isometry p;
      for (int k = 0; k < m; ++k) p = p * r;
      EXPECT_LT(p.max_entry_distance(Isometry()), 1e-8);
      if (m > 1) {
        Isometry q;
        for (int k = 0; k < m - 1; ++k) q = q * r;
        EXPECT_GT(q.max_entry_distance(Isometry()), 1e-3);
      }
    }
  }
}

TEST(GroupBall, SmallLengths) {
  const auto P = triangle_polygon(2, 3, 7);
  const HPoint o = incenter(P);
  EXPECT_EQ(ball_by_length(P, 0, o).size(), 1u);
  EXPECT_EQ(ball_by_length(P, 1, o).size(), 4u);
  EXPECT_EQ(ball_by_length(P, 2, o).size(), brute_force_ball(side_reflections(P), 2).size());
  EXPECT_THROW(ball_by_length(P, 15, o), PreconditionViolation);
}

TEST(GroupBall, MatchesBruteForceEnumeration) {
  for (const auto& P : corpus()) {
    const HPoint o = incenter(P);
    const int L = P.shape.size() == 3 ? 7 : 5;
    const auto ball = ball_by_length(P, L, o);
    const auto brute = brute_force_ball(ball.generators(), L);
    ASSERT_EQ(ball.size(), brute.size());
    for (const auto& [g, len] : brute) {
      const auto i = ball.find(g);
      ASSERT_TRUE(i.has_value());
      EXPECT_EQ(ball.element(*i).length(), len);
    }
  }
}

TEST(GroupBall, WordsReproduceMatricesAndAuditIsClean) {
  const auto P = triangle_polygon(2, 3, 7);
  const auto ball = ball_by_length(P, 10, incenter(P));
  for (const auto& e : ball.elements()) {
    const Isometry w = word_matrix(ball.generators(), e.word);
    EXPECT_LT(matrix_separation(w, e.matrix), 1e-9);
    EXPECT_TRUE(e.matrix.is_lorentz(1e-9 * e.matrix(0, 0) * e.matrix(0, 0)));
  }
  EXPECT_GT(ball.min_separation(), 1e-4);
}

TEST(GroupBall, SizeCap) {
  const auto P = triangle_polygon(2, 3, 7);
  EXPECT_THROW(ball_by_length(P, 10, incenter(P), {.cap = 50}), SizeLimitError);
}

// All reduced words of a Coxeter group element use the same letters.
TEST(MinimalSupport, EqualsLettersOfAnyMinimalWord) {
  for (const auto& P : corpus()) {
    const auto ball = ball_by_length(P, P.shape.size() == 3 ? 9 : 6, incenter(P));
    for (std::size_t i = 0; i < ball.size(); ++i) ASSERT_EQ(ball.support_mask(i), letters(ball.element(i).word));
  }
}

TEST(MinimalSupport, Examples) {
  const auto P = triangle_polygon(2, 3, 7);  // orders (2, 3, 7) at vertices 0, 1, 2
  const auto ball = ball_by_length(P, 4, incenter(P));
  const auto& g = ball.generators();
  EXPECT_EQ(minimal_support(ball, g[1]), std::vector<int>{1});
  EXPECT_EQ(minimal_support(ball, g[0] * g[1]), (std::vector<int>{0, 1}));  // m = 3 at vertex 1
  // edges 2 and 0 meet at vertex 0 with m = 2: both orders are minimal
  const auto i = ball.find(g[2] * g[0]);
  ASSERT_TRUE(i.has_value());
  EXPECT_EQ(ball.parents(*i).size(), 2u);
  EXPECT_EQ(minimal_support(ball, *i), (std::vector<int>{0, 2}));
  EXPECT_THROW(minimal_support(ball, word_matrix(g, {0, 1, 2, 0, 1, 2})), NotInBall);
}

TEST(MinLength, GeneratorsInMinimalSupportMoveLess) {
  for (const auto& P : corpus()) {
    const int L = P.shape.size() == 3 ? 8 : 6;
    const auto rep = check_gens_minlength(P, incenter(P), L);
    EXPECT_TRUE(rep.passed()) << rep.violations.size() << " violations";
    EXPECT_GT(rep.checks, rep.elements);
  }
}

TEST(MinLength, HoldsAtOffCentreBasepoints) {
  std::mt19937_64 rng(3);
  const auto P = right_angled_pentagon(0.8, 1.5);
  const auto samples = std::vector<LorentzVector>{P.shape.vertex(0).v, P.shape.vertex(2).v, P.shape.vertex(3).v};
  for (int k = 0; k < 5; ++k) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const double a = u(rng), b = u(rng), c = u(rng);
    const HPoint o = HPoint::normalize(a * samples[0] + b * samples[1] + c * samples[2]);
    EXPECT_TRUE(check_gens_minlength(P, o, 6).passed());
  }
}

TEST(BoundedFactorization, ExhaustiveOnTriangleGroup) {
  const auto P = triangle_polygon(2, 3, 7);
  const auto ball = ball_by_length(P, 8, incenter(P));
  EXPECT_TRUE(bounded_factorization(ball, 0, 0.0).empty());
  for (std::size_t i = 1; i < ball.size(); ++i) {
    const double R = ball.displacement(i);
    const auto w = bounded_factorization(ball, i, R);
    ASSERT_EQ(static_cast<int>(w.size()), ball.element(i).length());
    EXPECT_LT(matrix_separation(word_matrix(ball.generators(), w), ball.element(i).matrix), 1e-9);
    for (int s : w) EXPECT_LE(distance(ball.base(), ball.generators()[s].apply(ball.base())), R + 1e-9);
  }
  EXPECT_THROW(bounded_factorization(ball, 5, 0.0), PreconditionViolation);
}

TEST(RadiusBall, AgreesWithLengthBall) {
  const auto P = right_angled_hexagon(1.0, 1.0, 1.0);
  const HPoint o = incenter(P);
  const double R = 3.0;
  const auto rb = ball_by_radius(P, R, o);
  const auto lb = ball_by_length(P, 8, o);
  std::size_t within = 0;
  for (std::size_t i = 0; i < lb.size(); ++i) {
    if (lb.displacement(i) > R) continue;
    ++within;
    const auto j = rb.find(lb.element(i).matrix);
    ASSERT_TRUE(j.has_value());
    EXPECT_EQ(rb.element(*j).length(), lb.element(i).length());
  }
  std::size_t rb_within = 0;
  for (std::size_t i = 0; i < rb.size(); ++i) rb_within += rb.displacement(i) <= R;
  EXPECT_EQ(rb_within, within);  // no element within R needs more than 8 letters here
  EXPECT_THROW(ball_by_radius(ideal_regular_polygon(4), 1.0, HPoint{}), PreconditionViolation);
}

TEST(Packing, OrbitCountBoundedByArea) {
  for (const auto& P : corpus()) {
    const HPoint o = incenter(P);
    const auto ball = ball_by_radius(P, 3.0, o);
    for (double R : {1.0, 2.0, 3.0}) {
      const auto rep = packing_check(ball, P, R);
      EXPECT_TRUE(rep.passed) << rep.count << " > " << rep.bound;
    }
  }
}

TEST(LocalSmallDisplacement, WallsAndDeepInterior) {
  const auto P = regular_coxeter_polygon(8, 2);
  const HPoint o = incenter(P);
  const auto ball = ball_by_radius(P, 2.0 * vertex_radius(o, P) + 0.5, o);
  const HPoint x = foot_of_perpendicular(o, P.shape.edge_geodesic(3));
  const auto near = local_small_displacement(ball, x, 0.0 + 1e-9);
  EXPECT_TRUE(near.ball_sufficient);
  ASSERT_EQ(near.elements.size(), 1u);
  EXPECT_LT(ball.element(near.elements[0]).matrix.max_entry_distance(ball.generators()[3]), 1e-9);
  const double depth = P.shape.inner_distance(o.vec());
  EXPECT_TRUE(local_small_displacement(ball, o, 1.9 * depth).elements.empty());
  // the nearest-wall reflection moves a point by twice its distance to the wall
  EXPECT_EQ(local_small_displacement(ball, o, 2.0 * depth + 1e-9).elements.size(), 8u);
}

TEST(BallExport, JsonAndGrowthCsv) {
  const auto P = triangle_polygon(2, 3, 7);
  const HPoint o = incenter(P.shape);
  const auto b = ball_by_length(P.shape, 3, o);
  const auto j = ball_json(b);
  ASSERT_EQ(j["elements"].size(), b.size());
  EXPECT_EQ(j["max_length"], 3);
  for (const auto& e : j["elements"]) {
    const auto w = e["word"].get<std::vector<int>>();
    const auto g = word_matrix(b.generators(), w);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(e["matrix"][r][c].get<double>(), g(r, c), 1e-9);
  }
  EXPECT_TRUE(j["min_separation"].is_number());
  EXPECT_TRUE(ball_json(ball_by_length(P.shape, 0, o))["min_separation"].is_null());

  const auto csv = ball_growth_csv(P.shape, 3, o);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "L,size,min_separation");
  for (int l = 0; l <= 3; ++l) {
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_EQ(std::stoi(line), l);
    EXPECT_EQ(std::stoul(line.substr(line.find(',') + 1)), ball_by_length(P.shape, l, o).size());
  }
  EXPECT_FALSE(std::getline(in, line));
}
