#include <gtest/gtest.h>

#include <set>

#include "coxlab/sampler.hpp"
#include "coxlab/triangulation.hpp"

using namespace coxlab;

namespace {

bool chords_cross(std::pair<std::size_t, std::size_t> p, std::pair<std::size_t, std::size_t> q) {
  auto strictly_between = [](std::size_t a, std::size_t b, std::size_t x) { return a < x && x < b; };
  const auto [a, b] = p;
  const auto [c, d] = q;
  if (a == c || a == d || b == c || b == d) return false;
  return strictly_between(a, b, c) != strictly_between(a, b, d);
}

// Root distances by BFS over triangles sharing two vertices.
std::vector<int> brute_depths(const Triangulation& T, std::size_t root) {
  const std::size_t m = T.triangles.size();
  auto shared = [&](std::size_t s, std::size_t t) {
    int c = 0;
    for (auto a : T.triangles[s])
      for (auto b : T.triangles[t]) c += a == b;
    return c;
  };
  std::vector<int> d(m, -1);
  d[root] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < m; ++s)
      for (std::size_t t = 0; t < m; ++t)
        if (d[s] >= 0 && d[t] < 0 && shared(s, t) == 2) {
          d[t] = d[s] + 1;
          changed = true;
        }
  }
  return d;
}

}  // namespace

TEST(Triangulation, SmallCases) {
  const auto t3 = balanced_triangulate(3);
  EXPECT_EQ(t3.triangulation.triangles.size(), 1u);
  EXPECT_EQ(radius_from_root(t3.tree), 0);
  EXPECT_EQ(min_leaf_depth(t3.tree), 0);
  const auto t4 = balanced_triangulate(4);
  EXPECT_EQ(t4.triangulation.triangles.size(), 2u);
  EXPECT_EQ(radius_from_root(t4.tree), 1);
  const auto t19 = balanced_triangulate(19);
  EXPECT_EQ(t19.triangulation.triangles.size(), 17u);
  EXPECT_LE(radius_from_root(t19.tree), 5);
  EXPECT_THROW(balanced_triangulate(2), DomainError);
}

TEST(Triangulation, CombinatorialInvariants) {
  for (std::size_t n = 3; n <= 200; ++n) {
    for (bool cw : {true, false}) {
      const auto TR = balanced_triangulate(n, cw);
      const auto& T = TR.triangulation;
      ASSERT_EQ(T.triangles.size(), n - 2);
      ASSERT_EQ(T.diagonals.size(), n - 3);
      for (std::size_t i = 0; i < T.diagonals.size(); ++i)
        for (std::size_t j = i + 1; j < T.diagonals.size(); ++j) ASSERT_FALSE(chords_cross(T.diagonals[i], T.diagonals[j]));
      // every boundary edge in exactly one triangle, every diagonal in two
      std::map<std::pair<std::size_t, std::size_t>, int> uses;
      for (const auto& t : T.triangles) {
        ASSERT_TRUE(t[0] < t[1] && t[1] < t[2]);
        for (int k = 0; k < 3; ++k) uses[std::minmax(t[k], t[(k + 1) % 3])]++;
      }
      for (std::size_t i = 0; i < n; ++i) ASSERT_EQ((uses[std::minmax(i, (i + 1) % n)]), 1);
      for (const auto& d : T.diagonals) ASSERT_EQ(uses[d], 2);
      // tree: n-3 edges, connected, degrees <= 3
      std::size_t edges = 0;
      for (const auto& a : TR.tree.adj) {
        ASSERT_LE(a.size(), 3u);
        edges += a.size();
      }
      ASSERT_EQ(edges, 2 * (n - 3));
      const auto d = brute_depths(T, TR.tree.root);
      ASSERT_EQ(d, TR.tree.depth);
      ASSERT_EQ(TR.tree.root, n - 3);
    }
  }
}

TEST(Triangulation, TrianglesTileThePolygon) {
  for (const CoxeterPolygon& P : {regular_coxeter_polygon(11, 3), ideal_regular_polygon(9)}) {
    const auto TR = balanced_triangulate(P);
    double sum = 0.0;
    for (const auto& t : TR.triangulation.triangles)
      sum += area(Polygon({P.shape.vertex(t[0]), P.shape.vertex(t[1]), P.shape.vertex(t[2])}));
    EXPECT_NEAR(sum, area(P), 1e-9);
  }
}

TEST(Triangulation, ClockwiseFlagMirrors) {
  const auto a = balanced_triangulate(13, true), b = balanced_triangulate(13, false);
  std::set<std::array<std::size_t, 3>> mirrored;
  for (auto t : b.triangulation.triangles) {
    for (auto& v : t) v = (13 - v) % 13;
    std::sort(t.begin(), t.end());
    mirrored.insert(t);
  }
  const std::set<std::array<std::size_t, 3>> original(a.triangulation.triangles.begin(), a.triangulation.triangles.end());
  EXPECT_EQ(mirrored, original);
}

TEST(TreeBounds, RadiusWithinLogBound) {
  for (std::size_t n = 3; n <= 1024; ++n) {
    const auto TR = balanced_triangulate(n);
    ASSERT_LE(radius_from_root(TR.tree), static_cast<int>(std::floor(std::log2(n))) + 1) << n;
    ASSERT_LE(min_leaf_depth(TR.tree), radius_from_root(TR.tree));
  }
}

TEST(TreeBounds, PowersOfTwo) {
  for (int k = 2; k <= 10; ++k) {
    const auto TR = balanced_triangulate(std::size_t{1} << k);
    EXPECT_GE(radius_from_root(TR.tree), k - 1);
    EXPECT_LE(radius_from_root(TR.tree), k + 1);
  }
}

TEST(LeavesWithin, ExtremesAndCountBound) {
  for (std::size_t n : {5u, 19u, 24u, 100u, 777u}) {
    const auto TR = balanced_triangulate(n);
    const int rad = radius_from_root(TR.tree);
    EXPECT_EQ(leaves_within(TR.tree, 2 * rad).size(), n - 2);
    const auto leaves = leaves_within(TR.tree, 0);
    for (std::size_t t : leaves) EXPECT_TRUE(TR.tree.is_leaf(t));
    for (std::size_t t = 0; t < n - 2; ++t)
      if (TR.tree.is_leaf(t)) {
        EXPECT_NE(std::find(leaves.begin(), leaves.end(), t), leaves.end());
      }
    for (int S = 0; S <= rad + 1; ++S) {
      const double complement = static_cast<double>(n - 2 - leaves_within(TR.tree, S).size());
      EXPECT_LE(complement, std::pow(2.0, std::log2(static_cast<double>(n)) + 1 - S));
    }
  }
  EXPECT_THROW(leaves_within(balanced_triangulate(5).tree, -1), PreconditionViolation);
}

TEST(EscapePath, LeafTriangleIsOneSegment) {
  const auto P = ideal_regular_polygon(8);
  const auto TR = balanced_triangulate(P);
  const auto& t = TR.triangulation.triangles[0];
  ASSERT_TRUE(TR.tree.is_leaf(0));
  const HPoint x = incenter(Polygon({P.shape.vertex(t[0]), P.shape.vertex(t[1]), P.shape.vertex(t[2])}));
  const auto path = escape_path(x, P, TR);
  EXPECT_EQ(path.steps(), 0);
  EXPECT_EQ(path.start_triangle, 0u);
  EXPECT_NEAR(path.length, dist_to_boundary(x, P), 1e-12);
}

TEST(EscapePath, StructureOnSampledPoints) {
  for (const CoxeterPolygon& P : {ideal_regular_polygon(24), regular_coxeter_polygon(30, 3)}) {
    const auto TR = balanced_triangulate(P);
    for (const auto& x : sample_uniform(P, 3000, {.seed = 12})) {
      const auto path = escape_path(x, P, TR);
      EXPECT_NEAR(max_abs_diff(path.segments.front().first.vec(), x.vec()), 0.0, 0.0);
      for (std::size_t k = 1; k < path.segments.size(); ++k)
        EXPECT_EQ(max_abs_diff(path.segments[k].first.vec(), path.segments[k - 1].second.vec()), 0.0);
      EXPECT_LE(std::abs(P.shape.inner_distance(path.end().vec())), 1e-9);
      EXPECT_GE(path.length, dist_to_boundary(x, P) - 1e-12);
      EXPECT_LE(path.steps(), TR.tree.height[path.start_triangle]);
    }
  }
}

TEST(EscapePath, RejectsPointOutside) {
  const auto P = regular_coxeter_polygon(6, 4);
  const auto TR = balanced_triangulate(P);
  EXPECT_THROW(escape_path(HPoint::polar(5.0, 0.1), P, TR), OutsidePoint);
}

TEST(TreeExport, DotJsonCsv) {
  const auto TR = balanced_triangulate(6);
  const auto dot = tree_dot(TR.tree);
  EXPECT_NE(dot.find("graph dual_tree"), std::string::npos);
  EXPECT_EQ(std::count(dot.begin(), dot.end(), '-') / 2, 3);
  const auto j = triangulation_json(TR);
  EXPECT_EQ(j["triangles"].size(), 4u);
  EXPECT_EQ(j["diagonals"].size(), 3u);
  EXPECT_EQ(tree_bounds_csv(3, 4), "n,radius,min_leaf_depth\n3,0,0\n4,1,1\n");
}
