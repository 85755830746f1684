#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "coxlab/lorentz.hpp"
#include "coxlab/trig.hpp"

namespace coxlab {

/// Dihedral order m of a vertex: interior angle pi/m, or 0 at an ideal vertex.
class AngleOrder {
 public:
  static AngleOrder finite(int m) {
    if (m < 2) throw DomainError("angle order must be >= 2");
    return AngleOrder(m);
  }
  static AngleOrder infinite() { return AngleOrder(0); }

  bool is_infinite() const { return m_ == 0; }
  int value() const { return m_; }
  double angle() const { return is_infinite() ? 0.0 : kPi / m_; }
  std::string str() const { return is_infinite() ? "inf" : std::to_string(m_); }
  bool operator==(const AngleOrder&) const = default;

 private:
  explicit AngleOrder(int m) : m_(m) {}
  int m_;
};

/// Convex polygon with finite and ideal vertices in counterclockwise order.
/// Edge i joins vertex i to vertex i+1; its geodesic is oriented with the
/// interior on the positive side.
class Polygon {
 public:
  explicit Polygon(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) throw DomainError("polygon needs at least three vertices");
    for (auto& v : vertices_) {
      if (v.ideal) {
        v.v = IdealPoint::from(v.v, 1e-9).vec();
      } else {
        v.v = HPoint::from(v.v, 1e-9).vec();
      }
    }
    edges_.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      edges_.push_back(geodesic_through(vertices_[i].v, vertices_[next(i)].v));
    }
  }

  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(std::size_t i) const { return vertices_[i % size()]; }
  const Geodesic& edge_geodesic(std::size_t i) const { return edges_[i % size()]; }
  std::size_t next(std::size_t i) const { return (i + 1) % vertices_.size(); }
  std::size_t prev(std::size_t i) const { return (i + vertices_.size() - 1) % vertices_.size(); }

  bool is_compact() const {
    return std::none_of(vertices_.begin(), vertices_.end(), [](const Vertex& v) { return v.ideal; });
  }

  double interior_angle(std::size_t i) const {
    const Vertex& v = vertex(i);
    if (v.ideal) return 0.0;
    return angle_at(v.point(), vertex(prev(i)).v, vertex(next(i)).v);
  }

  /// Signed distance to the boundary: min over edges of the signed distance
  /// to the edge geodesic. Equals d(x, boundary) for x inside (a convex set
  /// is the intersection of its half-planes).
  double inner_distance(const LorentzVector& x) const {
    double s = kInf;
    for (const auto& e : edges_) s = std::min(s, e.side(x));
    return std::asinh(s);
  }

  /// Index of the nearest edge geodesic.
  std::size_t nearest_edge(const LorentzVector& x) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < edges_.size(); ++i)
      if (edges_[i].side(x) < edges_[best].side(x)) best = i;
    return best;
  }

 private:
  std::vector<Vertex> vertices_;
  std::vector<Geodesic> edges_;
};

using GeneralPolygon = Polygon;

/// Polygon whose finite angles are pi/m.
struct CoxeterPolygon {
  Polygon shape;
  std::vector<AngleOrder> orders;

  operator const Polygon&() const { return shape; }
  std::size_t size() const { return shape.size(); }
};

struct CoxeterAngleEntry {
  std::size_t index;
  double angle;
  AngleOrder nearest;
  double deviation;
};

struct CoxeterReport {
  std::vector<CoxeterAngleEntry> angles;
  bool convex = false;
  bool orders_match = true;  // declared orders agree with the nearest pi/m
  double max_deviation = 0.0;
  bool passed = false;
};

// ---------------------------------------------------------------------------
// measurements

inline bool contains(const LorentzVector& x, const Polygon& P, double tol = kTol.constructed) {
  for (std::size_t i = 0; i < P.size(); ++i)
    if (P.edge_geodesic(i).side(x) < -tol) return false;
  return true;
}

inline bool is_convex(const Polygon& P, double tol = kTol.constructed) {
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Geodesic& g = P.edge_geodesic(i);
    for (const auto& v : P.vertices()) {
      const double scale = v.ideal ? 1.0 : std::max(1.0, v.v.x0);
      if (g.side(v.v) < -tol * scale) return false;
    }
  }
  for (std::size_t i = 0; i < P.size(); ++i)
    if (!(P.interior_angle(i) < kPi - tol)) return false;
  return true;
}

/// Lengths of the sides in cyclic order (infinite next to an ideal vertex).
inline std::vector<double> edge_lengths(const Polygon& P) {
  std::vector<double> out;
  out.reserve(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Vertex& a = P.vertex(i);
    const Vertex& b = P.vertex(P.next(i));
    out.push_back(a.ideal || b.ideal ? kInf : distance(a.point(), b.point()));
  }
  return out;
}

inline double perimeter(const Polygon& P) {
  double L = 0.0;
  for (double l : edge_lengths(P)) L += l;
  return L;
}

/// Area from the measured interior angles.
inline double area(const Polygon& P) {
  std::vector<double> angles;
  angles.reserve(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) angles.push_back(P.interior_angle(i));
  return gauss_bonnet_area(angles);
}

/// Area from the declared orders.
inline double area(const CoxeterPolygon& P) {
  std::vector<double> angles;
  angles.reserve(P.orders.size());
  for (const auto& o : P.orders) angles.push_back(o.angle());
  return gauss_bonnet_area(angles);
}

/// d(x, boundary of P) as the minimum over the side segments.
inline double dist_to_boundary(const HPoint& x, const Polygon& P) {
  if (!contains(x, P)) throw OutsidePoint("dist_to_boundary: point outside polygon");
  double d = kInf;
  for (std::size_t i = 0; i < P.size(); ++i)
    d = std::min(d, dist_point_segment(x, P.vertex(i), P.vertex(P.next(i))));
  return d;
}

/// Max distance from o to a vertex; infinite if P has an ideal vertex.
inline double vertex_radius(const HPoint& o, const Polygon& P) {
  double r = 0.0;
  for (const auto& v : P.vertices()) {
    if (v.ideal) return kInf;
    r = std::max(r, distance(o, v.point()));
  }
  return r;
}

namespace detail {

inline AngleOrder nearest_order(double angle) {
  if (angle <= 0.0) return AngleOrder::infinite();
  const long m = std::lround(kPi / angle);
  return AngleOrder::finite(static_cast<int>(std::max(2L, std::min(m, 1L << 30))));
}

inline double solve3(const double a[3][3], const double b[3], double x[3]) {
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  for (int k = 0; k < 3; ++k) {
    double m[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = (j == k) ? b[i] : a[i][j];
    x[k] = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
            m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])) /
           det;
  }
  return det;
}

}  // namespace detail

/// The point at equal signed distance from three oriented geodesics, if it exists.
inline std::optional<HPoint> equidistant_point(const Geodesic& g0, const Geodesic& g1, const Geodesic& g2) {
  const Geodesic* gs[3] = {&g0, &g1, &g2};
  double a[3][3];
  for (int i = 0; i < 3; ++i) {
    const LorentzVector& e = gs[i]->pole();
    a[i][0] = -e.x0;
    a[i][1] = e.x1;
    a[i][2] = e.x2;
  }
  const double b[3] = {1.0, 1.0, 1.0};
  double x[3];
  const double det = detail::solve3(a, b, x);
  if (!std::isfinite(det) || std::abs(det) < 1e-300) return std::nullopt;
  const LorentzVector v{x[0], x[1], x[2]};
  if (!(mink(v, v) < 0.0) || !(v.x0 > 0.0)) return std::nullopt;
  return HPoint::normalize(v);
}

/// Point maximizing the distance to the boundary. Triangles are solved in
/// closed form; larger polygons use a coarse Klein-coordinate grid followed
/// by a shrinking pattern search and an exact three-edge polish.
inline HPoint incenter(const Polygon& P) {
  if (P.size() == 3) {
    if (auto c = equidistant_point(P.edge_geodesic(0), P.edge_geodesic(1), P.edge_geodesic(2))) return *c;
  }
  auto eval = [&](double u, double v) {
    const double r2 = u * u + v * v;
    if (r2 >= 1.0) return -kInf;
    return P.inner_distance(LorentzVector{1.0, u, v} / std::sqrt(1.0 - r2));
  };
  double lo[2] = {1.0, 1.0}, hi[2] = {-1.0, -1.0};
  for (const auto& vx : P.vertices()) {
    const double k[2] = {vx.v.x1 / vx.v.x0, vx.v.x2 / vx.v.x0};
    for (int d = 0; d < 2; ++d) {
      lo[d] = std::min(lo[d], k[d]);
      hi[d] = std::max(hi[d], k[d]);
    }
  }
  constexpr int kGrid = 48;
  double bu = 0.0, bv = 0.0, best = -kInf;
  for (int i = 0; i <= kGrid; ++i) {
    for (int j = 0; j <= kGrid; ++j) {
      const double u = lo[0] + (hi[0] - lo[0]) * i / kGrid;
      const double v = lo[1] + (hi[1] - lo[1]) * j / kGrid;
      const double f = eval(u, v);
      if (f > best) {
        best = f;
        bu = u;
        bv = v;
      }
    }
  }
  double h = std::max(hi[0] - lo[0], hi[1] - lo[1]) / kGrid;
  while (h > 1e-15) {
    bool moved = false;
    for (int k = 0; k < 16; ++k) {
      const double th = 2.0 * kPi * k / 16;
      const double u = bu + h * std::cos(th), v = bv + h * std::sin(th);
      const double f = eval(u, v);
      if (f > best) {
        best = f;
        bu = u;
        bv = v;
        moved = true;
      }
    }
    if (!moved) h *= 0.5;
  }
  const double r2 = bu * bu + bv * bv;
  HPoint c = HPoint::normalize(LorentzVector{1.0, bu, bv} / std::sqrt(1.0 - r2));

  // Polish: if three edges are active, the maximizer is their equidistant point.
  std::vector<std::size_t> active;
  const double s = std::sinh(best);
  for (std::size_t i = 0; i < P.size(); ++i)
    if (P.edge_geodesic(i).side(c) < s + 1e-7) active.push_back(i);
  if (active.size() >= 3) {
    for (std::size_t a = 0; a < active.size(); ++a)
      for (std::size_t b = a + 1; b < active.size(); ++b)
        for (std::size_t d = b + 1; d < active.size(); ++d) {
          auto q = equidistant_point(P.edge_geodesic(active[a]), P.edge_geodesic(active[b]),
                                     P.edge_geodesic(active[d]));
          if (q && P.inner_distance(*q) >= P.inner_distance(c)) c = *q;
        }
  }
  return c;
}

inline double inradius(const Polygon& P) { return P.inner_distance(incenter(P)); }

/// Reports each angle against the nearest pi/m and checks convexity.
inline CoxeterReport validate_coxeter(const Polygon& P, double tol = kTol.constructed) {
  CoxeterReport r;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const double a = P.interior_angle(i);
    const AngleOrder m = P.vertex(i).ideal ? AngleOrder::infinite() : detail::nearest_order(a);
    const double dev = std::abs(a - m.angle());
    r.angles.push_back({i, a, m, dev});
    r.max_deviation = std::max(r.max_deviation, dev);
  }
  r.convex = is_convex(P);
  r.passed = r.convex && r.max_deviation < tol;
  return r;
}

inline CoxeterReport validate_coxeter(const CoxeterPolygon& P, double tol = kTol.constructed) {
  CoxeterReport r;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const double a = P.shape.interior_angle(i);
    const AngleOrder m = P.orders[i];
    const double dev = (m.is_infinite() != P.shape.vertex(i).ideal) ? kInf : std::abs(a - m.angle());
    r.angles.push_back({i, a, m, dev});
    r.max_deviation = std::max(r.max_deviation, dev);
    if (!(m == (P.shape.vertex(i).ideal ? AngleOrder::infinite() : detail::nearest_order(a)))) r.orders_match = false;
  }
  r.convex = is_convex(P.shape);
  r.passed = r.convex && r.orders_match && r.max_deviation < tol;
  return r;
}

// ---------------------------------------------------------------------------
// constructors

/// Triangle with angles pi/p, pi/q, pi/r: first vertex at the origin with
/// angle pi/p, first side along the positive x1 axis.
inline CoxeterPolygon triangle_polygon(int p, int q, int r) {
  if (p < 2 || q < 2 || r < 2) throw DomainError("triangle_polygon: orders must be >= 2");
  const long lhs = long{q} * r + long{p} * r + long{p} * q, rhs = long{p} * q * r;
  if (lhs == rhs) throw DomainError("triangle_polygon: 1/p + 1/q + 1/r = 1 (Euclidean, not hyperbolic)");
  if (lhs > rhs) throw DomainError("triangle_polygon: 1/p + 1/q + 1/r > 1 (spherical, not hyperbolic)");
  const double alpha = kPi / p, beta = kPi / q, gamma = kPi / r;
  const double c = side_from_angles(alpha, beta, gamma);  // A to B
  const double b = side_from_angles(alpha, gamma, beta);  // A to C
  std::vector<Vertex> vs{Vertex::finite(HPoint()), Vertex::finite(HPoint::polar(c, 0.0)),
                         Vertex::finite(HPoint::polar(b, alpha))};
  return {Polygon(std::move(vs)), {AngleOrder::finite(p), AngleOrder::finite(q), AngleOrder::finite(r)}};
}

/// Regular n-gon with all angles pi/m centred at the origin, first vertex on
/// the positive x1 axis.
inline CoxeterPolygon regular_coxeter_polygon(int n, int m) {
  if (n < 3 || m < 2) throw DomainError("regular_coxeter_polygon: need n >= 3, m >= 2");
  // angle sum n pi/m against (n - 2) pi
  if (long{n} == long{m} * (n - 2))
    throw DomainError("regular_coxeter_polygon: angle sum equals (n-2)pi (Euclidean, not hyperbolic)");
  if (long{n} > long{m} * (n - 2))
    throw DomainError("regular_coxeter_polygon: angle sum exceeds (n-2)pi (spherical, not hyperbolic)");
  // right triangle centre / vertex / edge midpoint: cosh(rho) = cot(pi/n) cot(pi/2m)
  const double rho = std::acosh(1.0 / (std::tan(kPi / n) * std::tan(kPi / (2.0 * m))));
  std::vector<Vertex> vs;
  for (int k = 0; k < n; ++k) vs.push_back(Vertex::finite(HPoint::polar(rho, 2.0 * kPi * k / n)));
  return {Polygon(std::move(vs)), std::vector<AngleOrder>(n, AngleOrder::finite(m))};
}

/// Side length of regular_coxeter_polygon(n, m): cosh(s/2) = cos(pi/n)/sin(pi/2m).
inline double regular_side_length(int n, int m) {
  return 2.0 * std::acosh(std::cos(kPi / n) / std::sin(kPi / (2.0 * m)));
}

/// Regular ideal n-gon centred at the origin.
inline CoxeterPolygon ideal_regular_polygon(int n) {
  if (n < 3) throw DomainError("ideal_regular_polygon: need n >= 3");
  std::vector<Vertex> vs;
  for (int k = 0; k < n; ++k) vs.push_back(Vertex::at_infinity(IdealPoint::at_angle(2.0 * kPi * k / n)));
  return {Polygon(std::move(vs)), std::vector<AngleOrder>(n, AngleOrder::infinite())};
}

namespace detail {

/// Intersection point of two crossing geodesics.
inline HPoint intersection(const Geodesic& g, const Geodesic& h) {
  LorentzVector x = lorentz_cross(g.pole(), h.pole());
  if (x.x0 < 0.0) x = -x;
  return HPoint::normalize(x);
}

/// Common perpendicular of two ultraparallel geodesics.
inline Geodesic common_perpendicular(const Geodesic& g, const Geodesic& h) {
  return Geodesic::from_pole(lorentz_cross(g.pole(), h.pole()));
}

/// Right-angled polygon bounded by the given side lines, taken in order.
inline CoxeterPolygon right_angled_from_lines(const std::vector<Geodesic>& lines) {
  std::vector<Vertex> vs;
  for (std::size_t i = 0; i < lines.size(); ++i)
    vs.push_back(Vertex::finite(intersection(lines[(i + lines.size() - 1) % lines.size()], lines[i])));
  return {Polygon(std::move(vs)), std::vector<AngleOrder>(lines.size(), AngleOrder::finite(2))};
}

/// Lines of a right-angled chain starting with the side of length a centred
/// on the x1 axis, followed by a perpendicular side of length b at its end.
/// Returns {line before a, line a, line b, line after b}.
inline std::array<Geodesic, 4> right_angle_chain(double a, double b) {
  const LorentzVector up{0.0, 0.0, 1.0};
  const LorentzVector v1{std::cosh(a / 2), std::sinh(a / 2), 0.0};
  const Geodesic before = Geodesic::from_pole({std::sinh(-a / 2), std::cosh(a / 2), 0.0});
  const Geodesic line_a = Geodesic::from_pole(up);
  const Geodesic line_b = Geodesic::from_pole({-std::sinh(a / 2), -std::cosh(a / 2), 0.0});
  const Geodesic after = Geodesic::from_pole(-(std::sinh(b) * v1 + std::cosh(b) * up));
  return {before, line_a, line_b, after};
}

}  // namespace detail

/// Right-angled hexagon with alternate sides (a, b, c). The sides opposite
/// them follow from cosh a' = (cosh b cosh c + cosh a) / (sinh b sinh c).
/// Side order: a, c', b, a', c, b'; side a is centred on the x1 axis.
inline CoxeterPolygon right_angled_hexagon(double a, double b, double c) {
  if (!(a > 0 && b > 0 && c > 0)) throw DomainError("right_angled_hexagon: sides must be positive");
  auto opp = [](double x, double y, double z) {
    return std::acosh((std::cosh(y) * std::cosh(z) + std::cosh(x)) / (std::sinh(y) * std::sinh(z)));
  };
  const double bp = opp(b, c, a), cp = opp(c, a, b);
  const auto fwd = detail::right_angle_chain(a, cp);
  // mirror image of the chain for side b' at the other end of a
  const auto bwd = detail::right_angle_chain(a, bp);
  const Isometry mirror = Isometry::reflection(Geodesic::from_pole({0.0, 1.0, 0.0}));
  const Geodesic line_c = Geodesic::from_pole(-mirror.apply(bwd[3].pole()));
  const Geodesic line_ap = detail::common_perpendicular(fwd[3], line_c);
  auto P = detail::right_angled_from_lines({fwd[0], fwd[1], fwd[2], fwd[3], line_ap, line_c});
  // put side a first: vertices are intersections (prev line, line)
  std::vector<Vertex> vs = P.shape.vertices();
  std::rotate(vs.begin(), vs.begin() + 1, vs.end());
  P.shape = Polygon(std::move(vs));
  const auto L = edge_lengths(P.shape);
  if (std::abs(L[2] - b) > 1e-8 * std::max(1.0, b) || std::abs(L[4] - c) > 1e-8 * std::max(1.0, c)) {
    throw DomainError("right_angled_hexagon: construction inconsistent");
  }
  return P;
}

/// Right-angled pentagon with two consecutive sides a, b (sinh a sinh b > 1).
inline CoxeterPolygon right_angled_pentagon(double a, double b) {
  if (!(std::sinh(a) * std::sinh(b) > 1.0)) throw DomainError("right_angled_pentagon: need sinh a sinh b > 1");
  const auto ch = detail::right_angle_chain(a, b);
  const Geodesic line_4 = detail::common_perpendicular(ch[3], ch[0]);
  auto P = detail::right_angled_from_lines({ch[0], ch[1], ch[2], ch[3], line_4});
  std::vector<Vertex> vs = P.shape.vertices();
  std::rotate(vs.begin(), vs.begin() + 1, vs.end());
  P.shape = Polygon(std::move(vs));
  return P;
}

/// Applies an isometry to every vertex.
inline Polygon transformed(const Polygon& P, const Isometry& g) {
  std::vector<Vertex> vs;
  for (const auto& v : P.vertices()) {
    if (v.ideal) {
      const LorentzVector w = g.apply(v.v);
      vs.push_back({w / w.x0, true});
    } else {
      vs.push_back(Vertex::finite(g.apply(v.point())));
    }
  }
  return Polygon(std::move(vs));
}

}  // namespace coxlab
