#pragma once
// Balanced triangulation of an n-gon by repeated ear clipping, its dual tree
// rooted at the last triangle, and escape paths to the boundary.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coxlab/format.hpp"
#include "coxlab/polygon.hpp"

namespace coxlab {

struct Triangulation {
  std::size_t n = 0;
  std::vector<std::array<std::size_t, 3>> triangles;  // increasing indices, hence counterclockwise
  std::vector<std::pair<std::size_t, std::size_t>> diagonals;
};

/// Dual tree of a triangulation. Side k of triangle t joins vertices
/// v[k] and v[k+1]; across[t][k] is the neighbouring triangle or -1.
struct DualTree {
  std::size_t root = 0;
  std::vector<std::vector<std::size_t>> adj;
  std::vector<std::array<long, 3>> across;
  std::vector<long> parent;  // -1 at the root
  std::vector<int> depth;     // distance from the root
  std::vector<int> height;    // longest path away from the root to a leaf
  std::vector<int> leaf_distance;

  std::size_t size() const { return adj.size(); }
  /// Leaves are the non-root nodes of degree 1; a single triangle is its own leaf.
  bool is_leaf(std::size_t t) const { return size() == 1 || (t != root && adj[t].size() == 1); }
  bool is_child(std::size_t t, long u) const { return u >= 0 && parent[static_cast<std::size_t>(u)] == static_cast<long>(t); }
};

struct TriangulationResult {
  Triangulation triangulation;
  DualTree tree;
};

namespace detail {

inline DualTree build_dual_tree(const Triangulation& T, std::size_t root) {
  DualTree D;
  const std::size_t m = T.triangles.size();
  D.root = root;
  D.adj.resize(m);
  D.across.assign(m, {-1, -1, -1});
  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, int>> side_owner;
  for (std::size_t t = 0; t < m; ++t) {
    for (int k = 0; k < 3; ++k) {
      std::size_t a = T.triangles[t][k], b = T.triangles[t][(k + 1) % 3];
      if (a > b) std::swap(a, b);
      auto [it, fresh] = side_owner.try_emplace({a, b}, t, k);
      if (!fresh) {
        const auto [u, ku] = it->second;
        D.across[t][k] = static_cast<long>(u);
        D.across[u][ku] = static_cast<long>(t);
        D.adj[t].push_back(u);
        D.adj[u].push_back(t);
      }
    }
  }
  D.parent.assign(m, -1);
  D.depth.assign(m, -1);
  std::vector<std::size_t> order{root};
  D.depth[root] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t u : D.adj[order[i]]) {
      if (D.depth[u] >= 0) continue;
      D.depth[u] = D.depth[order[i]] + 1;
      D.parent[u] = static_cast<long>(order[i]);
      order.push_back(u);
    }
  }
  D.height.assign(m, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (D.parent[*it] >= 0) {
      auto& h = D.height[static_cast<std::size_t>(D.parent[*it])];
      h = std::max(h, D.height[*it] + 1);
    }
  D.leaf_distance.assign(m, -1);
  std::queue<std::size_t> q;
  for (std::size_t t = 0; t < m; ++t)
    if (D.is_leaf(t)) {
      D.leaf_distance[t] = 0;
      q.push(t);
    }
  while (!q.empty()) {
    const std::size_t t = q.front();
    q.pop();
    for (std::size_t u : D.adj[t])
      if (D.leaf_distance[u] < 0) {
        D.leaf_distance[u] = D.leaf_distance[t] + 1;
        q.push(u);
      }
  }
  return D;
}

}  // namespace detail

/// Starting at vertex 0, repeatedly joins the current vertex to the
/// second-to-next one, clipping the vertex in between, and moves on to
/// that second-to-next vertex, walking round the shrinking cycle until one
/// triangle is left. That last triangle is the root. `clockwise` walks in
/// decreasing index order.
inline TriangulationResult balanced_triangulate(std::size_t n, bool clockwise = true) {
  if (n < 3) throw DomainError("balanced_triangulate: need at least three vertices");
  std::vector<std::size_t> succ(n);
  for (std::size_t i = 0; i < n; ++i) succ[i] = clockwise ? (i + n - 1) % n : (i + 1) % n;
  TriangulationResult r;
  auto& T = r.triangulation;
  T.n = n;
  auto add = [&](std::size_t a, std::size_t b, std::size_t c) {
    std::array<std::size_t, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    T.triangles.push_back(t);
  };
  std::size_t cur = 0, left = n;
  while (left > 3) {
    const std::size_t a = succ[cur], b = succ[a];
    add(cur, a, b);
    T.diagonals.emplace_back(std::min(cur, b), std::max(cur, b));
    succ[cur] = b;
    --left;
    cur = b;
  }
  add(cur, succ[cur], succ[succ[cur]]);
  r.tree = detail::build_dual_tree(T, T.triangles.size() - 1);
  return r;
}

inline TriangulationResult balanced_triangulate(const Polygon& P, bool clockwise = true) {
  return balanced_triangulate(P.size(), clockwise);
}

inline int radius_from_root(const DualTree& D) { return *std::max_element(D.depth.begin(), D.depth.end()); }

inline int min_leaf_depth(const DualTree& D) {
  int best = radius_from_root(D);
  for (std::size_t t = 0; t < D.size(); ++t)
    if (D.is_leaf(t)) best = std::min(best, D.depth[t]);
  return best;
}

/// Triangles at tree distance at most S from some leaf.
inline std::vector<std::size_t> leaves_within(const DualTree& D, int S) {
  if (S < 0) throw PreconditionViolation("leaves_within: S must be non-negative");
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < D.size(); ++t)
    if (D.leaf_distance[t] <= S) out.push_back(t);
  return out;
}

struct EscapePath {
  std::size_t start_triangle = 0;
  std::vector<std::pair<HPoint, HPoint>> segments;
  std::vector<std::size_t> triangles;  // triangle containing each segment
  double length = 0.0;
  int steps() const { return static_cast<int>(segments.size()) - 1; }
  const HPoint& end() const { return segments.back().second; }
};

/// Index of a triangle containing x.
inline std::size_t locate_triangle(const HPoint& x, const Polygon& P, const Triangulation& T,
                                   double tol = kTol.constructed) {
  for (std::size_t t = 0; t < T.triangles.size(); ++t) {
    const auto& v = T.triangles[t];
    bool inside = true;
    for (int k = 0; k < 3 && inside; ++k)
      inside = geodesic_through(P.vertex(v[k]).v, P.vertex(v[(k + 1) % 3]).v).side(x) >= -tol;
    if (inside) return t;
  }
  throw OutsidePoint("point lies in no triangle of the triangulation");
}

/// From x, repeatedly drops a perpendicular to the closest side of the
/// current triangle that is either on the boundary or leads away from the
/// root, until the boundary is reached. Ties go to the side whose
/// neighbour has the smaller index (boundary sides first).
inline EscapePath escape_path(const HPoint& x, const Polygon& P, const TriangulationResult& TR) {
  const auto& T = TR.triangulation;
  const auto& D = TR.tree;
  if (T.n != P.size()) throw PreconditionViolation("triangulation does not match the polygon");
  EscapePath path;
  std::size_t t = path.start_triangle = locate_triangle(x, P, T);
  HPoint p = x;
  for (;;) {
    const auto& v = T.triangles[t];
    double best_d = kInf;
    long best_nb = 0;
    HPoint best_foot;
    for (int k = 0; k < 3; ++k) {
      const long nb = D.across[t][k];
      if (nb >= 0 && !D.is_child(t, nb)) continue;
      const auto proj = closest_point_on_segment(p, P.vertex(v[k]), P.vertex(v[(k + 1) % 3]));
      if (proj.distance < best_d || (proj.distance == best_d && nb < best_nb)) {
        best_d = proj.distance;
        best_nb = nb;
        best_foot = proj.point;
      }
    }
    path.segments.emplace_back(p, best_foot);
    path.triangles.push_back(t);
    path.length += best_d;
    if (best_nb < 0) break;
    t = static_cast<std::size_t>(best_nb);
    p = best_foot;
  }
  return path;
}

inline std::string tree_dot(const DualTree& D) {
  std::ostringstream s;
  s << "graph dual_tree {\n  node [shape=circle];\n";
  s << "  t" << D.root << " [style=filled, fillcolor=lightgray];\n";
  for (std::size_t t = 0; t < D.size(); ++t)
    for (std::size_t u : D.adj[t])
      if (t < u) s << "  t" << t << " -- t" << u << ";\n";
  s << "}\n";
  return s.str();
}

inline nlohmann::json triangulation_json(const TriangulationResult& TR) {
  const auto& T = TR.triangulation;
  nlohmann::json tris = nlohmann::json::array(), diags = nlohmann::json::array();
  for (const auto& t : T.triangles) tris.push_back({t[0], t[1], t[2]});
  for (const auto& [a, b] : T.diagonals) diags.push_back({a, b});
  return {{"n", T.n},
          {"triangles", tris},
          {"diagonals", diags},
          {"root", TR.tree.root},
          {"radius", radius_from_root(TR.tree)},
          {"min_leaf_depth", min_leaf_depth(TR.tree)}};
}

inline std::string tree_bounds_csv(std::size_t n_min, std::size_t n_max) {
  std::ostringstream s;
  s << "n,radius,min_leaf_depth\n";
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const auto TR = balanced_triangulate(n);
    s << n << ',' << radius_from_root(TR.tree) << ',' << min_leaf_depth(TR.tree) << '\n';
  }
  return s.str();
}

}  // namespace coxlab
