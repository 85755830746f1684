#pragma once
// Invariant suites behind `coxlab verify`. Every check records the measured
// quantity, its bound and the slack between them.

#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coxlab/format.hpp"
#include "coxlab/polygon.hpp"
#include "coxlab/refgroup.hpp"
#include "coxlab/surgery.hpp"
#include "coxlab/thinpart.hpp"
#include "coxlab/triangulation.hpp"
#include "coxlab/trig.hpp"

namespace coxlab {

struct Check {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool upper = true;  // measured <= bound, else measured >= bound
  std::string detail;

  double slack() const { return upper ? bound - measured : measured - bound; }
  bool passed() const { return slack() >= 0.0; }
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
  }
  void at_most(std::string name, double measured, double bound, std::string detail = {}) {
    checks.push_back({std::move(name), measured, bound, true, std::move(detail)});
  }
  void at_least(std::string name, double measured, double bound, std::string detail = {}) {
    checks.push_back({std::move(name), measured, bound, false, std::move(detail)});
  }
};

struct VerifyConfig {
  std::uint64_t seed = 0;
  std::size_t samples = 100'000;
  unsigned threads = 0;
  int ball_length = 8;
  SurgeryConstants surgery{};
  std::size_t surgery_corpus = 512;

  SamplerConfig sampler(std::uint64_t stream) const {
    SamplerConfig s;
    s.seed = substream_seed(seed, stream);
    s.threads = threads;
    return s;
  }
};

struct CorpusPolygon {
  std::string id;
  CoxeterPolygon polygon;
};

/// Regular (n,3) polygons, ideal n-gons and three compact triangle groups.
inline std::vector<CorpusPolygon> thin_part_corpus() {
  std::vector<CorpusPolygon> out;
  for (int n : {7, 12, 20, 50, 100, 200}) out.push_back({"regular-" + std::to_string(n) + "-3", regular_coxeter_polygon(n, 3)});
  for (int n : {3, 10, 19, 24, 50, 200}) out.push_back({"ideal-" + std::to_string(n), ideal_regular_polygon(n)});
  for (auto [p, q, r] : {std::array{2, 3, 7}, std::array{2, 4, 5}, std::array{3, 3, 4}})
    out.push_back({"triangle-" + std::to_string(p) + "-" + std::to_string(q) + "-" + std::to_string(r),
                   triangle_polygon(p, q, r)});
  return out;
}

namespace detail {

// Relative to the matrix scale: products of entries of size s00 carry
// rounding of order s00^2 eps.
inline double reflection_defect(const Polygon& P) {
  double worst = 0.0;
  const auto gens = side_reflections(P);
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto& s = gens[i];
    const double scale = std::max(1.0, std::abs(s(0, 0)));
    worst = std::max(worst, (s * s).max_entry_distance(Isometry()) / (scale * scale));
    worst = std::max(worst, s.lorentz_defect() / (scale * scale));
    for (std::size_t k : {i, i + 1}) {
      const auto& v = P.vertex(k);
      if (v.ideal) continue;
      worst = std::max(worst, max_abs_diff(s.apply(v.v), v.v) / (scale * v.v.x0));
    }
  }
  return worst;
}

// Runs one measurement; an exception counts as an unbounded failure.
template <class F>
void guarded(SuiteReport& rep, const std::string& name, double bound, bool upper, std::string detail, F&& f) {
  try {
    const double m = f();
    rep.checks.push_back({name, m, bound, upper, std::move(detail)});
  } catch (const std::exception& e) {
    rep.checks.push_back({name, upper ? kInf : -kInf, bound, upper, std::string("threw: ") + e.what()});
  }
}

// Inward flow from the distance-1 curve of the geodesic x2 = 0, in
// hyperboloid coordinates; u is arc length on the curve.
inline LorentzVector equidistant_flow(double t, double u) {
  const double r = 1.0 - t, y = u / std::cosh(1.0);
  return {std::cosh(r) * std::cosh(y), std::cosh(r) * std::sinh(y), std::sinh(r)};
}

inline double flow_jacobian_fd(double t, double u, double h = 1e-5) {
  const auto dt = (equidistant_flow(t + h, u) - equidistant_flow(t - h, u)) / (2 * h);
  const auto du = (equidistant_flow(t, u + h) - equidistant_flow(t, u - h)) / (2 * h);
  return std::sqrt(mink(dt, dt) * mink(du, du) - mink(dt, du) * mink(dt, du));
}

}  // namespace detail

inline SuiteReport verify_kernel(const VerifyConfig& cfg) {
  SuiteReport rep{"kernel", {}};
  std::mt19937_64 rng(substream_seed(cfg.seed, 100));
  detail::guarded(rep, "heron_vs_gauss_bonnet", 1e-9, true, "10000 random triangles", [&] {
    std::uniform_real_distribution<double> U(0.05, 0.5 * kPi);
    double worst = 0.0;
    for (int done = 0; done < 10000;) {
      const double A = U(rng), B = U(rng), C = U(rng);
      if (A + B + C >= kPi) continue;
      const double a = side_from_angles(B, C, A), b = side_from_angles(A, C, B), c = side_from_angles(A, B, C);
      const auto ang = angles_from_sides(a, b, c);
      worst = std::max(worst, std::abs(heron_area(a, b, c) - gauss_bonnet_area({ang[0], ang[1], ang[2]})));
      ++done;
    }
    return worst;
  });
  detail::guarded(rep, "area_triangle_2_3_7", 1e-12, true, {},
                  [] { return std::abs(area(triangle_polygon(2, 3, 7).shape) - kPi / 42); });
  detail::guarded(rep, "pentagon_cosh_side", 1e-12, true, {}, [] {
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    double err = 0.0;
    for (double l : edge_lengths(regular_coxeter_polygon(5, 2).shape)) err = std::max(err, std::abs(std::cosh(l) - phi));
    return err;
  });
  detail::guarded(rep, "pentagon_area", 1e-12, true, {},
                  [] { return std::abs(area(regular_coxeter_polygon(5, 2).shape) - 0.5 * kPi); });
  detail::guarded(rep, "jacobian_finite_difference", 1e-6, true, "100 grid points", [] {
    double fd = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double t = (k + 0.5) / 100.0;
      fd = std::max(fd, std::abs(equidistant_jacobian(t) - detail::flow_jacobian_fd(t, 0.37)));
    }
    return fd;
  });
  detail::guarded(rep, "jacobian_minimum", 1e-9, true, {}, [] {
    double lo = kInf;
    for (int k = 0; k <= 1000; ++k) lo = std::min(lo, equidistant_jacobian(k / 1000.0));
    return std::abs(lo - 1.0 / std::cosh(1.0));
  });
  detail::guarded(rep, "side_reflections", kTol.algebraic * 100.0, true,
                  "involution, Lorentz, fixes side endpoints; relative to matrix scale", [] {
                    double refl = 0.0;
                    for (const auto& [id, P] : thin_part_corpus()) refl = std::max(refl, detail::reflection_defect(P.shape));
                    return refl;
                  });
  detail::guarded(rep, "reflections_preserve_distance", kTol.constructed, true, "1000 random pairs", [&] {
    const auto gens = side_reflections(triangle_polygon(2, 3, 7).shape);
    std::uniform_real_distribution<double> r(0.0, 3.0), th(0.0, 2.0 * kPi);
    double iso = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const HPoint x = HPoint::polar(r(rng), th(rng)), y = HPoint::polar(r(rng), th(rng));
      const auto& g = gens[static_cast<std::size_t>(k) % gens.size()];
      iso = std::max(iso, std::abs(distance(g.apply(x), g.apply(y)) - distance(x, y)));
    }
    return iso;
  });
  return rep;
}

inline SuiteReport verify_thin_fraction(const VerifyConfig& cfg) {
  SuiteReport rep{"thm1", {}};
  const double C = thin_fraction_constant();
  std::uint64_t stream = 200;
  for (const auto& [id, P] : thin_part_corpus()) {
    ThinRatioEstimate e;
    const auto sc = cfg.sampler(stream++);
    with_retry(cfg.samples, [&](std::size_t n) {
      e = thin_ratio(P.shape, 2.0, n, sc);
      return e.ratio >= C - 3.0 * e.std_error;
    });
    rep.at_least("thin_ratio_R2:" + id, e.ratio, C - 3.0 * e.std_error,
                 "n=" + std::to_string(e.n_samples) + " stderr=" + fmt17(e.std_error));
  }
  for (const auto& [id, P] : thin_part_corpus()) {
    if (!P.shape.is_compact() || inradius(P.shape) <= 1.0) continue;
    const auto c = collar_inequality_check(P.shape, cfg.samples, cfg.sampler(stream++));
    rep.at_most("collar:" + id, c.vol_core, c.bound, "vol(U)=" + fmt17(c.vol_U));
  }
  return rep;
}

inline SuiteReport verify_tree(const VerifyConfig& cfg, std::size_t n_max = 4096) {
  SuiteReport rep{"tree", {}};
  double radius_slack = kInf, depth_slack = kInf, count_slack = kInf;
  std::size_t depth_failures = 0;
  for (std::size_t n = 3; n <= n_max; ++n) {
    const auto TR = balanced_triangulate(n);
    const double lg = std::log2(static_cast<double>(n));
    const int rad = radius_from_root(TR.tree);
    radius_slack = std::min(radius_slack, std::floor(lg) + 1.0 - rad);
    const double ds = min_leaf_depth(TR.tree) - (lg - 1.0);
    depth_slack = std::min(depth_slack, ds);
    depth_failures += ds < 0.0;
    // complement sizes for every S at once: distance to the nearest leaf
    std::vector<std::size_t> far(static_cast<std::size_t>(rad) + 2, 0);
    for (int d : TR.tree.leaf_distance)
      for (int S = 0; S < d && S < static_cast<int>(far.size()); ++S) ++far[static_cast<std::size_t>(S)];
    for (std::size_t S = 0; S < far.size(); ++S)
      count_slack = std::min(count_slack, std::pow(2.0, lg + 1.0 - static_cast<double>(S)) - static_cast<double>(far[S]));
  }
  const std::string range = "n in 3.." + std::to_string(n_max);
  rep.at_least("radius_upper_bound", radius_slack, 0.0, range + ", slack = min(floor(log2 n) + 1 - radius)");
  rep.at_least("min_leaf_depth_lower_bound", depth_slack, 0.0,
               range + ", " + std::to_string(depth_failures) + " values of n below log2(n) - 1");
  rep.at_least("leaf_count_bound", count_slack, 0.0, range + ", all S");

  std::uint64_t stream = 300;
  for (int n : {19, 24, 100}) {
    const auto P = ideal_regular_polygon(n);
    const auto TR = balanced_triangulate(P.shape);
    const auto pts = sample_uniform(P.shape, std::min<std::size_t>(cfg.samples, 10'000), cfg.sampler(stream++));
    double upper = kInf, lower = kInf;
    for (const auto& x : pts) {
      const auto path = escape_path(x, P.shape, TR);
      const int S = TR.tree.leaf_distance[path.start_triangle];
      upper = std::min(upper, std::log(3.0) * (S + 1) - path.length);
      lower = std::min(lower, path.length - dist_to_boundary(x, P.shape));
    }
    const std::string id = "ideal-" + std::to_string(n);
    rep.at_least("escape_path_upper:" + id, upper, 0.0, std::to_string(pts.size()) + " points, slack of log(3)(S+1)");
    rep.at_least("escape_path_lower:" + id, lower, -kTol.constructed, "slack over d(x, boundary)");
  }
  return rep;
}

inline SuiteReport verify_min_support(const VerifyConfig& cfg) {
  SuiteReport rep{"lemma6", {}};
  const std::vector<std::pair<std::string, std::pair<CoxeterPolygon, int>>> groups = {
      {"triangle-2-3-7", {triangle_polygon(2, 3, 7), cfg.ball_length}},
      {"pentagon-right-angled", {regular_coxeter_polygon(5, 2), std::max(0, cfg.ball_length - 2)}}};
  for (const auto& [id, g] : groups) {
    const auto& [P, L] = g;
    const HPoint o = incenter(P.shape);
    const auto mr = check_gens_minlength(P.shape, o, L);
    rep.at_most("support_generators_move_less:" + id, static_cast<double>(mr.violations.size()), 0.0,
                "L=" + std::to_string(L) + ", " + std::to_string(mr.checks) + " checks");
    const auto ball = ball_by_length(P.shape, L, o);
    std::size_t failures = 0;
    for (std::size_t i = 1; i < ball.size(); ++i) {
      try {
        const auto w = bounded_factorization(ball, i, ball.displacement(i));
        failures += static_cast<int>(w.size()) != ball.element(i).length() ||
                    matrix_separation(word_matrix(ball.generators(), w), ball.element(i).matrix) > kTol.constructed;
      } catch (const CounterexampleError&) {
        ++failures;
      }
    }
    rep.at_most("bounded_factorization:" + id, static_cast<double>(failures), 0.0,
                std::to_string(ball.size()) + " elements");
    rep.at_least("ball_min_separation:" + id, ball.min_separation(), 100.0 * kTol.dedup);
  }
  return rep;
}

inline SuiteReport verify_surgery(const VerifyConfig& cfg) {
  SuiteReport rep{"surgery", {}};
  const auto& c = cfg.surgery;
  const auto corpus_a = short_edge_corpus(substream_seed(cfg.seed, 400), cfg.surgery_corpus, c);
  const auto corpus_b = short_edge_corpus(substream_seed(cfg.seed, 401), cfg.surgery_corpus, c);
  const std::size_t n = std::max<std::size_t>(1000, cfg.samples / 5);

  double min_edge = kInf, merged = kInf, defect = 0.0, inflation = kInf, containment = kInf, angle = kInf;
  std::uint64_t stream = 500;
  for (const auto& [id, P] : corpus_a) {
    const auto [Pp, r] = remove_small_edges(P, c);
    min_edge = std::min(min_edge, r.min_edge);
    for (double e : r.merged_edges) merged = std::min(merged, e);
    defect = std::max(defect, std::abs(r.area_defect));
    const auto t = surgery_thin_comparison(P.shape, Pp, 2.0, n, c, cfg.sampler(stream++));
    inflation = std::min(inflation, 2.0 * t.before.ratio + 3.0 * t.combined_std_error - t.after.ratio);
    containment = std::min(containment, c.eta_prime() - t.max_containment_gap);
    // the short edge ends at each dropped vertex
    for (std::size_t j : r.removed) angle = std::min(angle, angle_estimate_check(P.shape, P.shape.prev(j), c).angle_slack);
  }
  const double bound = (1.0 - c.alpha) * c.eta;
  const std::string size = std::to_string(corpus_a.size()) + " polygons";
  rep.at_least("min_edge_after_surgery", min_edge, bound, size);
  rep.at_least("merged_edges", merged, bound, size);
  rep.at_most("area_bookkeeping", defect, kTol.constructed, "area(P') - (area(P) - sum of removed triangles)");
  rep.at_least("thin_inflation_R2", inflation, 0.0, size + ", slack of 2 ratio(P) + 3 sigma, n=" + std::to_string(n));
  rep.at_least("thin_containment_R2", containment, 0.0, "slack of alpha eta");
  rep.at_least("removed_triangle_angle", angle, 0.0, "slack of pi/2 - u' alpha");

  const auto ca = calibrate_u_prime(corpus_a, c), cb = calibrate_u_prime(corpus_b, c);
  const double spread = std::abs(ca.u_prime - cb.u_prime) / std::max(ca.u_prime, cb.u_prime);
  rep.at_most("u_prime_stability", spread, 0.05,
              "u'=" + fmt17(ca.u_prime) + " and " + fmt17(cb.u_prime) + " on two independent corpora");
  double cross = 0.0;
  for (const auto& inst : corpus_b)
    for (double t : remove_small_edges(inst.polygon, c).report.triangle_areas) cross = std::max(cross, t);
  rep.at_most("removed_area_vs_calibration", cross, 1.05 * ca.u_prime * c.alpha,
              "areas of the second corpus against u' alpha of the first, 5% tolerance");
  rep.at_most("u_prime_analytic", std::max(ca.u_prime, cb.u_prime), c.eta, "right triangle area < short edge");
  return rep;
}

inline const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"kernel", "thm1", "tree", "lemma6", "surgery"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, const VerifyConfig& cfg) {
  if (name == "kernel") return verify_kernel(cfg);
  if (name == "thm1") return verify_thin_fraction(cfg);
  if (name == "tree") return verify_tree(cfg);
  if (name == "lemma6") return verify_min_support(cfg);
  if (name == "surgery") return verify_surgery(cfg);
  throw PreconditionViolation("unknown suite '" + name + "'");
}

inline std::string format_report(const SuiteReport& r) {
  std::ostringstream s;
  for (const auto& c : r.checks) {
    s << (c.passed() ? "PASS " : "FAIL ") << r.suite << '.' << c.name << "  measured=" << fmt17(c.measured)
      << (c.upper ? " <= " : " >= ") << fmt17(c.bound) << "  slack=" << fmt17(c.slack());
    if (!c.detail.empty()) s << "  (" << c.detail << ')';
    s << '\n';
  }
  return s.str();
}

inline nlohmann::json report_json(const SuiteReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"measured", c.measured},
                      {"bound", c.bound},
                      {"relation", c.upper ? "<=" : ">="},
                      {"slack", c.slack()},
                      {"passed", c.passed()},
                      {"detail", c.detail}});
  return {{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}};
}

}  // namespace coxlab
