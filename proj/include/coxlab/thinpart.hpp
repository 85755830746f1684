#pragma once
// Thin parts of polygons, measured by Monte Carlo integration.
//
// Convention: x is R-thin when some non-trivial group element moves it by at
// most R, which for a reflection polygon means d(x, boundary) <= R/2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "coxlab/format.hpp"
#include "coxlab/refgroup.hpp"
#include "coxlab/sampler.hpp"
#include "coxlab/trig.hpp"

namespace coxlab {

struct ThinRatioEstimate {
  double ratio = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  double R = 0.0;
  std::uint64_t seed = 0;
};

inline double binomial_std_error(double p, std::size_t n) {
  return n == 0 ? 0.0 : std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

/// Distances to the boundary of n uniform samples, in sample order.
inline std::vector<double> boundary_distances(const Polygon& P, std::size_t n, const SamplerConfig& cfg) {
  const UniformSampler sampler(P, cfg);
  auto parts = sample_chunks<std::vector<double>>(
      sampler, n, cfg, [&](std::vector<double>& acc, const HPoint& x) { acc.push_back(P.inner_distance(x.vec())); });
  std::vector<double> out;
  out.reserve(n);
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

/// Thin ratios for several R from one shared sample, so they are
/// monotone in R sample by sample.
inline std::vector<ThinRatioEstimate> thin_ratios(const Polygon& P, const std::vector<double>& Rs, std::size_t n,
                                                  const SamplerConfig& cfg = {}) {
  for (double R : Rs)
    if (!(R >= 0.0)) throw PreconditionViolation("thin_ratio: R must be non-negative");
  const auto d = boundary_distances(P, n, cfg);
  std::vector<ThinRatioEstimate> out;
  for (double R : Rs) {
    const auto thin = std::count_if(d.begin(), d.end(), [&](double x) { return x <= 0.5 * R; });
    const double p = n ? static_cast<double>(thin) / static_cast<double>(n) : 0.0;
    out.push_back({p, binomial_std_error(p, n), n, R, cfg.seed});
  }
  return out;
}

inline ThinRatioEstimate thin_ratio(const Polygon& P, double R, std::size_t n, const SamplerConfig& cfg = {}) {
  return thin_ratios(P, {R}, n, cfg).front();
}

/// Lower bound on the fraction of area within distance 1 of the boundary,
/// 1 / (1 + 1/eps) with eps the smallest Jacobian of the inward flow from
/// the distance-1 equidistant curve.
inline double collar_epsilon() { return equidistant_jacobian(1.0); }
inline double thin_fraction_constant() { return 1.0 / (1.0 + 1.0 / collar_epsilon()); }

struct CollarReport {
  std::size_t n_samples = 0;
  bool compact = false;
  double vol_P = 0.0;
  double frac_U = 0.0, frac_core = 0.0;  // d <= 1 and d >= 1
  double se_U = 0.0, se_core = 0.0;
  double vol_U = 0.0, vol_core = 0.0;
  double bound = 0.0;  // cosh(1) vol(U) + 3 sigma vol(P)
  double partition_defect = 0.0;
  bool passed = false;
};

/// Checks vol(P') <= cosh(1) vol(U), U the points within 1 of the boundary
/// and P' the rest.
inline CollarReport collar_inequality_check(const Polygon& P, std::size_t n, const SamplerConfig& cfg = {}) {
  const auto d = boundary_distances(P, n, cfg);
  CollarReport rep;
  rep.n_samples = n;
  rep.compact = P.is_compact();
  rep.vol_P = UniformSampler(P, cfg).area();
  const double N = static_cast<double>(std::max<std::size_t>(n, 1));
  rep.frac_U = std::count_if(d.begin(), d.end(), [](double x) { return x <= 1.0; }) / N;
  rep.frac_core = std::count_if(d.begin(), d.end(), [](double x) { return x >= 1.0; }) / N;
  rep.se_U = binomial_std_error(rep.frac_U, n);
  rep.se_core = binomial_std_error(rep.frac_core, n);
  rep.vol_U = rep.frac_U * rep.vol_P;
  rep.vol_core = rep.frac_core * rep.vol_P;
  rep.bound = std::cosh(1.0) * rep.vol_U + 3.0 * std::hypot(rep.se_U, rep.se_core) * rep.vol_P;
  rep.partition_defect = rep.frac_U + rep.frac_core - 1.0;
  rep.passed = rep.vol_core <= rep.bound;
  return rep;
}

struct CrossCheckReport {
  double R = 0.0;
  std::size_t n_samples = 0, excluded = 0, disagreements = 0;
  std::size_t thin_geometric = 0, thin_group = 0;
  double rate = 0.0;
  bool ball_sufficient = false;
  std::string warning;
};

/// Radius about o needed to see every element moving some point of P by at
/// most R.
inline double cross_check_ball_radius(const Polygon& P, const HPoint& o, double R) {
  return R + 2.0 * vertex_radius(o, P);
}

inline GroupBall cross_check_ball(const Polygon& P, double R) {
  const HPoint o = incenter(P);
  return ball_by_radius(P, cross_check_ball_radius(P, o, R), o);
}

/// Compares [exists g != 1 in ball: d(x, g x) <= R] with [d(x, boundary) <= R/2]
/// on n uniform samples. Samples within `band` of either threshold are
/// excluded.
inline CrossCheckReport group_thin_cross_check(const Polygon& P, double R, std::size_t n, const GroupBall& ball,
                                               const SamplerConfig& cfg = {}, double band = 1e-6) {
  CrossCheckReport rep;
  rep.R = R;
  rep.n_samples = n;
  const HPoint& o = ball.base();
  rep.ball_sufficient = ball.radius() + kTol.constructed >= cross_check_ball_radius(P, o, R);
  if (!rep.ball_sufficient) rep.warning = "ball radius " + fmt17(ball.radius()) + " is below the required " +
                                          fmt17(cross_check_ball_radius(P, o, R));
  // elements sorted by displacement at o, for early exit
  std::vector<std::size_t> order;
  for (std::size_t i = 1; i < ball.size(); ++i) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ball.displacement(a) < ball.displacement(b); });

  struct Acc {
    std::size_t excluded = 0, disagree = 0, geo = 0, grp = 0;
  };
  const UniformSampler sampler(P, cfg);
  const auto parts = sample_chunks<Acc>(sampler, n, cfg, [&](Acc& acc, const HPoint& x) {
    const double d = P.inner_distance(x.vec());
    const double reach = R + 2.0 * distance(o, x) + band;
    double best = kInf;
    for (std::size_t i : order) {
      if (ball.displacement(i) > reach) break;
      best = std::min(best, distance(x, ball.element(i).matrix.apply(x)));
    }
    if (std::abs(d - 0.5 * R) < band || std::abs(best - R) < band) {
      ++acc.excluded;
      return;
    }
    const bool geo = d <= 0.5 * R, grp = best <= R;
    acc.geo += geo;
    acc.grp += grp;
    acc.disagree += geo != grp;
  });
  for (const auto& a : parts) {
    rep.excluded += a.excluded;
    rep.disagreements += a.disagree;
    rep.thin_geometric += a.geo;
    rep.thin_group += a.grp;
  }
  const std::size_t used = n - rep.excluded;
  rep.rate = used ? static_cast<double>(rep.disagreements) / static_cast<double>(used) : 0.0;
  return rep;
}

struct ThickFractionRow {
  std::string polygon_id;
  std::size_t n_vertices = 0;
  double R = 0.0;
  double thick = 0.0, std_error = 0.0;
  std::size_t n_samples = 0;
};

struct NamedPolygon {
  std::string id;
  Polygon polygon;
};

/// 1 - thin_ratio(P, R) for every polygon and R, coupled across R.
inline std::vector<ThickFractionRow> thick_fraction_decay(const std::vector<NamedPolygon>& family,
                                                          const std::vector<double>& Rs, std::size_t n,
                                                          const SamplerConfig& cfg = {}) {
  std::vector<ThickFractionRow> rows;
  for (const auto& [id, P] : family) {
    for (const auto& e : thin_ratios(P, Rs, n, cfg))
      rows.push_back({id, P.size(), e.R, 1.0 - e.ratio, e.std_error, e.n_samples});
  }
  return rows;
}

/// Runs a statistical check once and, on failure, once more with four
/// times the samples.
template <class Check>
bool with_retry(std::size_t n, Check&& check) {
  return check(n) || check(4 * n);
}

inline std::string thin_csv_header() { return "polygon_id,n_vertices,R,ratio,stderr,n_samples,seed,theorem1_constant"; }

inline std::string thin_csv_row(const std::string& id, std::size_t n_vertices, const ThinRatioEstimate& e) {
  std::ostringstream s;
  s << id << ',' << n_vertices << ',' << fmt17(e.R) << ',' << fmt17(e.ratio) << ',' << fmt17(e.std_error) << ','
    << e.n_samples << ',' << e.seed << ',' << fmt17(thin_fraction_constant());
  return s.str();
}

inline nlohmann::json thin_json(const std::string& id, std::size_t n_vertices, const ThinRatioEstimate& e) {
  return {{"polygon_id", id}, {"n_vertices", n_vertices}, {"R", e.R},
          {"ratio", e.ratio}, {"stderr", e.std_error},   {"n_samples", e.n_samples},
          {"seed", e.seed},   {"theorem1_constant", thin_fraction_constant()}};
}

}  // namespace coxlab
