#pragma once
// Hyperbolic plane in the hyperboloid model {q(x,x) = -1, x0 > 0} of
// Minkowski 3-space, q(u,v) = -u0 v0 + u1 v1 + u2 v2.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "coxlab/core.hpp"

namespace coxlab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LorentzVector {
  double x0 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? x0 : (i == 1 ? x1 : x2); }
  constexpr double& operator[](int i) { return i == 0 ? x0 : (i == 1 ? x1 : x2); }

  constexpr LorentzVector operator+(const LorentzVector& o) const { return {x0 + o.x0, x1 + o.x1, x2 + o.x2}; }
  constexpr LorentzVector operator-(const LorentzVector& o) const { return {x0 - o.x0, x1 - o.x1, x2 - o.x2}; }
  constexpr LorentzVector operator-() const { return {-x0, -x1, -x2}; }
  constexpr LorentzVector operator*(double s) const { return {x0 * s, x1 * s, x2 * s}; }
  constexpr LorentzVector operator/(double s) const { return {x0 / s, x1 / s, x2 / s}; }
  constexpr bool operator==(const LorentzVector&) const = default;
};

constexpr LorentzVector operator*(double s, const LorentzVector& v) { return v * s; }

/// Minkowski form -u0 v0 + u1 v1 + u2 v2.
constexpr double mink(const LorentzVector& u, const LorentzVector& v) {
  return -u.x0 * v.x0 + u.x1 * v.x1 + u.x2 * v.x2;
}

/// J (u x v) with J = diag(-1,1,1); q-orthogonal to both u and v.
constexpr LorentzVector lorentz_cross(const LorentzVector& u, const LorentzVector& v) {
  return {-(u.x1 * v.x2 - u.x2 * v.x1), u.x2 * v.x0 - u.x0 * v.x2, u.x0 * v.x1 - u.x1 * v.x0};
}

inline double max_abs_diff(const LorentzVector& a, const LorentzVector& b) {
  return std::max({std::abs(a.x0 - b.x0), std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2)});
}

/// A point of the hyperbolic plane.
class HPoint {
 public:
  HPoint() = default;  // the origin (1,0,0)

  /// Validates and renormalizes onto the upper sheet.
  static HPoint from(const LorentzVector& v, double tol = kTol.constructed) {
    const double q = mink(v, v);
    if (!(v.x0 > 0.0) || !(q < 0.0) || std::abs(q + 1.0) > tol * std::max(1.0, v.x0 * v.x0)) {
      throw DomainError("not a point of the hyperboloid");
    }
    return rescaled(v, q);
  }

  /// Projects any future-timelike vector onto the hyperboloid.
  static HPoint normalize(const LorentzVector& v) {
    const double q = mink(v, v);
    if (!(v.x0 > 0.0) || !(q < 0.0)) throw DomainError("vector is not future timelike");
    return rescaled(v, q);
  }

  /// Point at distance r from the origin in direction theta.
  static HPoint polar(double r, double theta) {
    return HPoint({std::cosh(r), std::sinh(r) * std::cos(theta), std::sinh(r) * std::sin(theta)});
  }

  const LorentzVector& vec() const { return v_; }
  operator const LorentzVector&() const { return v_; }

  /// Klein-model coordinates.
  std::array<double, 2> klein() const { return {v_.x1 / v_.x0, v_.x2 / v_.x0}; }

 private:
  explicit HPoint(const LorentzVector& v) : v_(v) {}

  // Far from the origin q(v, v) carries rounding of order x0^2 eps, and
  // dividing by it would move an already normalized point; leave those alone.
  static HPoint rescaled(const LorentzVector& v, double q) {
    if (std::abs(q + 1.0) <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, v.x0 * v.x0)) return HPoint(v);
    return HPoint(v / std::sqrt(-q));
  }

  LorentzVector v_{1.0, 0.0, 0.0};
};

/// A point at infinity, stored as the null vector with x0 = 1.
class IdealPoint {
 public:
  static IdealPoint from(const LorentzVector& v, double tol = kTol.constructed) {
    if (!(v.x0 > 0.0)) throw DomainError("ideal point must have x0 > 0");
    LorentzVector u = v / v.x0;
    if (std::abs(mink(u, u)) > tol) throw DomainError("ideal point must be a null vector");
    const double r = std::hypot(u.x1, u.x2);
    u.x1 /= r;
    u.x2 /= r;
    u.x0 = 1.0;
    return IdealPoint(u);
  }

  static IdealPoint at_angle(double theta) { return IdealPoint({1.0, std::cos(theta), std::sin(theta)}); }

  const LorentzVector& vec() const { return v_; }
  operator const LorentzVector&() const { return v_; }

 private:
  explicit IdealPoint(const LorentzVector& v) : v_(v) {}
  LorentzVector v_{1.0, 1.0, 0.0};
};

/// Polygon vertex or segment endpoint: finite or ideal.
struct Vertex {
  LorentzVector v;
  bool ideal = false;

  static Vertex finite(const HPoint& p) { return {p.vec(), false}; }
  static Vertex at_infinity(const IdealPoint& p) { return {p.vec(), true}; }
  HPoint point() const { return HPoint::normalize(v); }
};

/// Oriented complete geodesic, stored as its unit spacelike pole e.
/// The positive side is {x : q(x, e) > 0}.
class Geodesic {
 public:
  static Geodesic from_pole(const LorentzVector& e) {
    const double q = mink(e, e);
    if (!(q > 0.0)) throw DomainError("geodesic pole must be spacelike");
    return Geodesic(e / std::sqrt(q));
  }

  const LorentzVector& pole() const { return e_; }
  Geodesic flipped() const { return Geodesic(-e_); }

  /// sinh of the signed distance from a point of the hyperboloid.
  double side(const LorentzVector& x) const { return mink(x, e_); }

 private:
  explicit Geodesic(const LorentzVector& e) : e_(e) {}
  LorentzVector e_{0.0, 0.0, 1.0};
};

/// Geodesic through p and q (finite or ideal). The pole is oriented so that
/// the left side of the direction p -> q (counterclockwise in the Klein
/// projection) is the positive side.
inline Geodesic geodesic_through(const LorentzVector& p, const LorentzVector& q) {
  const LorentzVector n = lorentz_cross(p, q);
  const double scale = std::max(1.0, std::abs(p.x0) * std::abs(q.x0));
  if (!(mink(n, n) > 1e-24 * scale * scale)) {
    throw DegenerateInput("geodesic_through: points coincide");
  }
  return Geodesic::from_pole(n);
}

inline double distance(const HPoint& p, const HPoint& q) {
  const double c = -mink(p, q);
  if (c < 1.0 - 1e-9) throw DomainError("distance: -q(p,q) < 1");
  // acosh loses half the digits near 1; use the chordal form there.
  if (c < 1.5) {
    const LorentzVector d = p.vec() - q.vec();
    const double chord2 = std::max(0.0, mink(d, d));  // = 2(c - 1)
    return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
  }
  return std::acosh(c);
}

inline LorentzVector reflect(const Geodesic& g, const LorentzVector& x) {
#ifdef COXLAB_MUTATE_REFLECT
  return x + 2.0 * mink(x, g.pole()) * g.pole();
#else
  return x - 2.0 * mink(x, g.pole()) * g.pole();
#endif
}

inline double dist_point_geodesic(const HPoint& x, const Geodesic& g) {
  return std::asinh(std::abs(g.side(x)));
}

inline HPoint foot_of_perpendicular(const HPoint& x, const Geodesic& g) {
  const double s = g.side(x);
  return HPoint::normalize(x.vec() - s * g.pole());
}

struct SegmentProjection {
  HPoint point;     // closest point of the segment
  double distance;  // hyperbolic distance to it
  bool interior;    // closest point is the perpendicular foot
};

/// Closest point of the geodesic segment [a, b] to x. Segments towards an
/// ideal endpoint are infinite in that direction.
inline SegmentProjection closest_point_on_segment(const HPoint& x, const Vertex& a, const Vertex& b) {
  const Geodesic g = geodesic_through(a.v, b.v);
  const HPoint f = foot_of_perpendicular(x, g);
  // f = lambda a + mu b; the segment is the cone lambda, mu >= 0.
  const double aa = mink(a.v, a.v), ab = mink(a.v, b.v), bb = mink(b.v, b.v);
  const double fa = mink(f, a.v), fb = mink(f, b.v);
  const double det = aa * bb - ab * ab;
  const double lambda = (fa * bb - fb * ab) / det;
  const double mu = (aa * fb - ab * fa) / det;
  if (lambda >= 0.0 && mu >= 0.0) return {f, dist_point_geodesic(x, g), true};
  const Vertex& end = (lambda < 0.0) ? b : a;
  if (end.ideal) return {f, dist_point_geodesic(x, g), true};
  const HPoint e = end.point();
  return {e, distance(x, e), false};
}

inline double dist_point_segment(const HPoint& x, const Vertex& a, const Vertex& b) {
  if (max_abs_diff(a.v, b.v) == 0.0) throw DegenerateInput("dist_point_segment: a == b");
  return closest_point_on_segment(x, a, b).distance;
}

/// Unit tangent at x pointing towards target (finite or ideal).
inline LorentzVector tangent_toward(const HPoint& x, const LorentzVector& target) {
  LorentzVector t = target + mink(x, target) * x.vec();
  // For a nearby point of the hyperboloid the sum above cancels; with
  // d = target - x it equals d - q(d, d)/2 x exactly.
  if (std::abs(mink(target, target) + 1.0) < 1e-9 * std::max(1.0, target.x0 * target.x0) && -mink(x, target) < 1.5) {
    const LorentzVector d = target - x.vec();
    t = d - 0.5 * mink(d, d) * x.vec();
  }
  const double n2 = mink(t, t);
  if (!(n2 > 0.0)) throw DegenerateInput("tangent_toward: target coincides with base point");
  return t / std::sqrt(n2);
}

/// Angle at x between the directions towards a and b.
inline double angle_at(const HPoint& x, const LorentzVector& a, const LorentzVector& b) {
  const LorentzVector ta = tangent_toward(x, a), tb = tangent_toward(x, b);
  const double c = mink(ta, tb);
  // acos loses half the digits near 0 and pi; use chords of the unit circle there
  if (c > 0.5) return 2.0 * std::asin(0.5 * std::sqrt(std::max(0.0, mink(ta - tb, ta - tb))));
  if (c < -0.5) return kPi - 2.0 * std::asin(0.5 * std::sqrt(std::max(0.0, mink(ta + tb, ta + tb))));
  return std::acos(c);
}

/// Exponential map at x of a tangent vector v (q(x, v) = 0).
inline HPoint exp_map(const HPoint& x, const LorentzVector& v) {
  if (std::abs(mink(x, v)) > 1e-9 * std::max(1.0, x.vec().x0)) {
    throw DomainError("exp_map: vector is not tangent at x");
  }
  const double n2 = mink(v, v);
  if (n2 <= 0.0) return x;
  const double len = std::sqrt(n2);
  return HPoint::normalize(std::cosh(len) * x.vec() + (std::sinh(len) / len) * v);
}

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Element of O+(2,1): a 3x3 matrix with m^T J m = J preserving the upper sheet.
class Isometry {
 public:
  Isometry() : m_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}} {}

  static Isometry from_matrix(const Mat3& m, double tol = 1e-10) {
    Isometry g(m);
    if (!g.is_lorentz(tol)) throw DomainError("matrix is not an isometry of the hyperboloid");
    return g;
  }

  static Isometry reflection(const Geodesic& g) {
    // columns are images of the basis vectors
    Mat3 m{};
    for (int j = 0; j < 3; ++j) {
      LorentzVector ej{};
      ej[j] = 1.0;
      const LorentzVector c = reflect(g, ej);
      for (int i = 0; i < 3; ++i) m[i][j] = c[i];
    }
    return Isometry(m);
  }

  /// Rotation by angle about the origin.
  static Isometry rotation(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return Isometry(Mat3{{{1, 0, 0}, {0, c, -s}, {0, s, c}}});
  }

  const Mat3& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_[i][j]; }

  LorentzVector apply(const LorentzVector& x) const {
    LorentzVector y;
    for (int i = 0; i < 3; ++i) y[i] = m_[i][0] * x.x0 + m_[i][1] * x.x1 + m_[i][2] * x.x2;
    return y;
  }
  HPoint apply(const HPoint& x) const { return HPoint::normalize(apply(x.vec())); }

  Isometry operator*(const Isometry& o) const {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r[i][j] = m_[i][0] * o.m_[0][j] + m_[i][1] * o.m_[1][j] + m_[i][2] * o.m_[2][j];
    return Isometry(r);
  }

  /// J m^T J.
  Isometry inverse() const {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r[i][j] = ((i == 0) != (j == 0) ? -1.0 : 1.0) * m_[j][i];
    return Isometry(r);
  }

  /// max |m^T J m - J|.
  double lorentz_defect() const {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const LorentzVector ci{m_[0][i], m_[1][i], m_[2][i]};
        const LorentzVector cj{m_[0][j], m_[1][j], m_[2][j]};
        const double target = (i != j) ? 0.0 : (i == 0 ? -1.0 : 1.0);
        worst = std::max(worst, std::abs(mink(ci, cj) - target));
      }
    }
    return worst;
  }

  bool is_lorentz(double tol = 1e-10) const { return lorentz_defect() <= tol && m_[0][0] > 0.0; }

  /// Lorentz Gram-Schmidt on the columns, applied only once drift exceeds tol.
  Isometry renormalized(double tol = kTol.drift) const {
    if (lorentz_defect() <= tol) return *this;
    LorentzVector c[3];
    for (int j = 0; j < 3; ++j) c[j] = {m_[0][j], m_[1][j], m_[2][j]};
    c[0] = c[0] / std::sqrt(-mink(c[0], c[0]));
    c[1] = c[1] + mink(c[1], c[0]) * c[0];
    c[1] = c[1] / std::sqrt(mink(c[1], c[1]));
    c[2] = c[2] + mink(c[2], c[0]) * c[0] - mink(c[2], c[1]) * c[1];
    c[2] = c[2] / std::sqrt(mink(c[2], c[2]));
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r[i][j] = c[j][i];
    return Isometry(r);
  }

  double max_entry_distance(const Isometry& o) const {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(m_[i][j] - o.m_[i][j]));
    return worst;
  }

 private:
  explicit Isometry(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

}  // namespace coxlab
