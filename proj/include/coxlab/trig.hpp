#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>

#include "coxlab/lorentz.hpp"

namespace coxlab {

/// Side opposite gamma in the triangle with angles alpha, beta, gamma
/// (dual cosine rule).
inline double side_from_angles(double alpha, double beta, double gamma) {
  if (!(alpha > 0.0 && beta > 0.0 && gamma > 0.0)) throw DomainError("side_from_angles: angles must be positive");
  if (!(alpha + beta + gamma < kPi)) throw DomainError("side_from_angles: angle sum must be < pi");
  const double c = (std::cos(alpha) * std::cos(beta) + std::cos(gamma)) / (std::sin(alpha) * std::sin(beta));
  return std::acosh(std::max(1.0, c));
}

/// Angles opposite a, b, c (hyperbolic cosine rule).
inline std::array<double, 3> angles_from_sides(double a, double b, double c) {
  auto opposite = [](double x, double y, double z) {
    const double v = (std::cosh(y) * std::cosh(z) - std::cosh(x)) / (std::sinh(y) * std::sinh(z));
    return std::acos(std::clamp(v, -1.0, 1.0));
  };
  return {opposite(a, b, c), opposite(b, c, a), opposite(c, a, b)};
}

/// Gauss-Bonnet area (n-2) pi - sum of angles of an n-gon.
inline double gauss_bonnet_area(std::span<const double> angles) {
  if (angles.size() < 3) throw DomainError("gauss_bonnet_area: need at least three angles");
  double sum = 0.0;
  for (double a : angles) {
    if (!(a >= 0.0 && a < kPi)) throw DomainError("gauss_bonnet_area: angle outside [0, pi)");
    sum += a;
  }
  const double area = static_cast<double>(angles.size() - 2) * kPi - sum;
  if (!(area > 0.0)) throw DomainError("gauss_bonnet_area: non-positive area");
  return area;
}

inline double gauss_bonnet_area(std::initializer_list<double> angles) {
  return gauss_bonnet_area(std::span<const double>(angles.begin(), angles.size()));
}

/// Area of the triangle with side lengths a, b, c.
///
/// Hyperbolic Heron formula
///   sin(A/2) = sqrt(sinh s sinh(s-a) sinh(s-b) sinh(s-c)) / (2 cosh(a/2) cosh(b/2) cosh(c/2)).
/// A/2 < pi/2 always, but arcsin is ill-conditioned near 1, so large
/// triangles go through the cosine rule and Gauss-Bonnet instead.
inline double heron_area(double a, double b, double c) {
  std::array<double, 3> s3{a, b, c};
  std::sort(s3.begin(), s3.end());
  const double slack = 1e-12 * std::max(1.0, s3[2]);
  if (!(s3[0] > 0.0)) throw DomainError("heron_area: side lengths must be positive");
  if (s3[2] > s3[0] + s3[1] + slack) throw DomainError("heron_area: triangle inequality violated");
  const double s = 0.5 * (s3[0] + s3[1] + s3[2]);
  const double prod = std::sinh(s) * std::sinh(std::max(0.0, s - s3[0])) * std::sinh(std::max(0.0, s - s3[1])) *
                      std::sinh(std::max(0.0, s - s3[2]));
  const double den = 2.0 * std::cosh(0.5 * s3[0]) * std::cosh(0.5 * s3[1]) * std::cosh(0.5 * s3[2]);
  const double rhs = std::sqrt(prod) / den;
  if (rhs < 0.9) return 2.0 * std::asin(rhs);
  const auto ang = angles_from_sides(s3[0], s3[1], s3[2]);
  return std::max(0.0, kPi - ang[0] - ang[1] - ang[2]);
}

/// Jacobian of the inward normal flow (t, y) -> exp_y(t nu) started on the
/// distance-1 equidistant curve of a geodesic, relative to arc length on
/// that curve. In Fermi coordinates the curve at distance r has length
/// element cosh(r) dy, so the flow at time t has Jacobian cosh(1-t)/cosh(1).
inline double equidistant_jacobian(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("equidistant_jacobian: t outside [0, 1]");
  return std::cosh(1.0 - t) / std::cosh(1.0);
}

/// Area of a hyperbolic disc of radius r.
inline double disc_area(double r) { return 2.0 * kPi * (std::cosh(r) - 1.0); }

}  // namespace coxlab
