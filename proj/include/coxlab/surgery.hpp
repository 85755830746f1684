#pragma once
// Removal of very short edges from a compact Coxeter polygon, and the
// estimates that go with it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "coxlab/format.hpp"
#include "coxlab/polygon.hpp"
#include "coxlab/thinpart.hpp"
#include "coxlab/trig.hpp"

namespace coxlab {

struct SurgeryConstants {
  double eta = 0.1;
  double alpha = 0.1;

  double eta_prime() const { return alpha * eta; }
  void validate() const {
    if (!(eta > 0.0)) throw PreconditionViolation("surgery: eta must be positive");
    if (!(alpha > 0.0 && alpha < 0.5)) throw PreconditionViolation("surgery: alpha must lie in (0, 1/2)");
  }
};

struct ThinPair {
  double R = 0.0;
  ThinRatioEstimate before, after;
  double combined_std_error = 0.0;  // of after - 2 before
  bool inflation_ok = false;
  std::size_t thin_after = 0;       // thin sample points of P'
  double max_containment_gap = 0.0;  // max over them of d(x, thin set of P)
  bool containment_ok = false;
  bool passed() const { return inflation_ok && containment_ok; }
};

struct SurgeryReport {
  SurgeryConstants constants;
  std::vector<std::size_t> removed;        // indices in P of dropped vertices
  std::vector<double> triangle_areas;      // area of v_i v_{i+1} v_{i+2}, one per dropped vertex
  std::vector<double> merged_edges;        // d(v_i, v_{i+2})
  double min_edge = 0.0;                   // of P'
  double area_before = 0.0, area_after = 0.0;
  double area_ratio = 1.0;
  double area_defect = 0.0;                // area(P') - (area(P) - sum T_i)
  bool merged_edges_ok = true;             // each > (1 - alpha) eta
  bool min_edge_ok = true;                 // min edge of P' >= (1 - alpha) eta
  std::optional<ThinPair> thin;

  bool passed() const {
    return merged_edges_ok && min_edge_ok && std::abs(area_defect) <= kTol.constructed &&
           (!thin || thin->passed());
  }
};

struct SurgeryResult {
  GeneralPolygon polygon;
  SurgeryReport report;
};

/// Drops v_{i+1} whenever d(v_i, v_{i+1}) <= alpha eta. Requires a compact
/// polygon in which no two adjacent edges are both of length <= eta.
inline SurgeryResult remove_small_edges(const CoxeterPolygon& P, const SurgeryConstants& c = {}) {
  c.validate();
  const Polygon& S = P.shape;
  if (!S.is_compact()) throw PreconditionViolation("remove_small_edges: polygon has ideal vertices");
  const std::size_t n = S.size();
  const auto L = edge_lengths(S);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = S.next(i);
    if (L[i] <= c.eta && L[j] <= c.eta)
      throw PreconditionViolation("remove_small_edges: adjacent edges " + std::to_string(i) + " and " +
                                  std::to_string(j) + " both have length <= eta (" + fmt17(L[i]) + ", " +
                                  fmt17(L[j]) + ")");
  }

  SurgeryReport rep;
  rep.constants = c;
  std::vector<bool> drop(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (L[i] > c.eta_prime()) continue;
    const std::size_t j = S.next(i), k = S.next(j);
    drop[j] = true;
    rep.removed.push_back(j);
    rep.triangle_areas.push_back(area(Polygon({S.vertex(i), S.vertex(j), S.vertex(k)})));
    rep.merged_edges.push_back(distance(S.vertex(i).point(), S.vertex(k).point()));
  }
  std::sort(rep.removed.begin(), rep.removed.end());
  if (n - rep.removed.size() < 3) throw PreconditionViolation("remove_small_edges: fewer than three vertices remain");

  std::vector<Vertex> kept;
  for (std::size_t i = 0; i < n; ++i)
    if (!drop[i]) kept.push_back(S.vertex(i));
  Polygon out(std::move(kept));

  const auto L2 = edge_lengths(out);
  rep.min_edge = *std::min_element(L2.begin(), L2.end());
  rep.area_before = area(S);
  rep.area_after = area(out);
  rep.area_ratio = rep.area_after / rep.area_before;
  double removed_total = 0.0;
  for (double t : rep.triangle_areas) removed_total += t;
  rep.area_defect = rep.area_after - (rep.area_before - removed_total);
  const double bound = (1.0 - c.alpha) * c.eta;
  rep.merged_edges_ok = std::all_of(rep.merged_edges.begin(), rep.merged_edges.end(), [&](double e) { return e > bound; });
  rep.min_edge_ok = rep.min_edge >= bound;
  return {std::move(out), std::move(rep)};
}

/// Monte Carlo thin ratios of P and of the surgered P' at R. Passes when
/// ratio(P') <= 2 ratio(P) + 3 sigma and every thin sample point x of P' is
/// within alpha eta of the thin part of P, i.e. d(x, boundary P) - R/2 <= alpha eta.
inline ThinPair surgery_thin_comparison(const Polygon& P, const Polygon& Pp, double R, std::size_t n,
                                        const SurgeryConstants& c = {}, const SamplerConfig& cfg = {}) {
  ThinPair t;
  t.R = R;
  t.before = thin_ratio(P, R, n, cfg);
  t.after = thin_ratio(Pp, R, n, cfg);
  t.combined_std_error = std::sqrt(t.after.std_error * t.after.std_error + 4.0 * t.before.std_error * t.before.std_error);
  t.inflation_ok = t.after.ratio <= 2.0 * t.before.ratio + 3.0 * t.combined_std_error;

  struct Acc {
    std::size_t thin = 0;
    double gap = 0.0;
  };
  const UniformSampler sampler(Pp, cfg);
  const auto parts = sample_chunks<Acc>(sampler, n, cfg, [&](Acc& a, const HPoint& x) {
    if (Pp.inner_distance(x.vec()) > 0.5 * R) return;
    ++a.thin;
    a.gap = std::max(a.gap, P.inner_distance(x.vec()) - 0.5 * R);
  });
  for (const auto& a : parts) {
    t.thin_after += a.thin;
    t.max_containment_gap = std::max(t.max_containment_gap, a.gap);
  }
  t.containment_ok = t.max_containment_gap <= c.eta_prime() + kTol.constructed;
  return t;
}

// ---------------------------------------------------------------------------
// angle estimate for a removed triangle

/// Angle constant for gamma >= pi/2 - u' alpha. In T_i the angle at v_{i+1}
/// is right, so cos gamma = tanh(l) / tanh(a) with l <= alpha eta and
/// a > eta, and asin(x) <= (pi/2) x.
inline double angle_constant(double eta) { return 0.5 * kPi * eta / std::tanh(eta); }

struct AngleEstimate {
  std::size_t vertex = 0;  // v_i
  double short_edge = 0.0;  // d(v_i, v_{i+1})
  double a = 0.0, c = 0.0;  // d(v_i, v_{i+2}), d(v_{i+1}, v_{i+2})
  double gamma = 0.0;       // angle of T_i at v_i
  double angle_far = 0.0;   // angle of T_i at v_{i+1}
  double sine_bound = 0.0;  // sinh(a - eta) / sinh(a)
  double sine_slack = 0.0;
  double u_prime = 0.0;
  double angle_bound = 0.0;  // pi/2 - u' alpha
  double angle_slack = 0.0;
  double sine_law_residual = 0.0;  // relative, sinh(a) vs sinh(c) / sin(gamma)
  bool passed = false;
};

/// Checks the angle estimates for the triangle v_i v_{i+1} v_{i+2}, where
/// d(v_i, v_{i+1}) is the short edge.
inline AngleEstimate angle_estimate_check(const Polygon& P, std::size_t i, const SurgeryConstants& c = {}) {
  c.validate();
  if (!P.is_compact()) throw PreconditionViolation("angle_estimate_check: polygon has ideal vertices");
  const HPoint v0 = P.vertex(i).point(), v1 = P.vertex(i + 1).point(), v2 = P.vertex(i + 2).point();
  AngleEstimate e;
  e.vertex = i % P.size();
  e.short_edge = distance(v0, v1);
  e.a = distance(v0, v2);
  e.c = distance(v1, v2);
  e.gamma = angle_at(v0, v1.vec(), v2.vec());
  e.angle_far = angle_at(v1, v0.vec(), v2.vec());
  e.sine_bound = std::sinh(e.a - c.eta) / std::sinh(e.a);
  e.sine_slack = std::sin(e.gamma) - e.sine_bound;
  e.u_prime = angle_constant(c.eta);
  e.angle_bound = 0.5 * kPi - e.u_prime * c.alpha;
  e.angle_slack = e.gamma - e.angle_bound;
  // sine law with the angle at v_{i+1}: sinh(a) / sin(angle_far) = sinh(c) / sin(gamma)
  const double lhs = std::sinh(e.a) / std::sin(e.angle_far), rhs = std::sinh(e.c) / std::sin(e.gamma);
  e.sine_law_residual = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
  e.passed = e.sine_slack >= 0.0 && e.angle_slack >= 0.0 && e.sine_law_residual <= 1e-10;
  return e;
}

// ---------------------------------------------------------------------------
// smallest triangle with long sides and non-obtuse angles

struct MinAreaTriangle {
  double l0 = 0.0, span = 0.0;
  double area = 0.0;
  std::array<double, 3> sides{};   // a <= b <= c
  std::array<double, 3> angles{};  // opposite a, b, c
  std::vector<std::string> active;  // e.g. "a=l0", "C=pi/2"
  double upper_face_min = 0.0;      // least area found with some side at l0 + span
  bool boundary_nonoptimal = false;
};

namespace detail {

inline bool feasible_triangle(double a, double b, double c) {
  return a <= b && b <= c && std::cosh(c) <= std::cosh(a) * std::cosh(b);
}

}  // namespace detail

/// Least area over triangles with all sides in [l0, l0 + span] and all
/// angles at most pi/2: a grid of `grid`^3 side triples, then `rounds` finer
/// grids around the best point. Sides are kept sorted, so only the angle
/// opposite the longest side needs checking; each (a, b) also tries the c
/// that makes that angle exactly right.
inline MinAreaTriangle min_area_triangle_search(double l0, int grid = 200, int rounds = 5) {
  if (!(l0 > 0.0)) throw DomainError("min_area_triangle: l0 must be positive");
  MinAreaTriangle m;
  m.l0 = l0;
  m.span = std::max(3.0, l0);
  const double hi = l0 + m.span;
  std::array<double, 3> best{l0, l0, l0};
  double best_area = kInf;
  double face = kInf;
  auto scan = [&](std::array<double, 3> lo3, double step, int count, bool track_face) {
    std::array<double, 3> found = best;
    double found_area = best_area;
    for (int i = 0; i <= count; ++i) {
      const double a = std::clamp(lo3[0] + i * step, l0, hi);
      for (int j = 0; j <= count; ++j) {
        const double b = std::clamp(lo3[1] + j * step, l0, hi);
        if (b < a) continue;
        auto visit = [&](double cc) {
          if (!detail::feasible_triangle(a, b, cc)) return;
          const double A = heron_area(a, b, cc);
          if (track_face && cc == hi) face = std::min(face, A);
          if (A < found_area) {
            found_area = A;
            found = {a, b, cc};
          }
        };
        for (int k = 0; k <= count; ++k) visit(std::clamp(lo3[2] + k * step, l0, hi));
        // the right-angle face cosh c = cosh a cosh b, which grid points only approach
        const double right = std::acosh(std::cosh(a) * std::cosh(b));
        if (right <= hi) visit(right);
      }
    }
    best = found;
    best_area = found_area;
  };
  double step = m.span / grid;
  scan({l0, l0, l0}, step, grid, true);
  constexpr int kFine = 40;
  for (int r = 0; r < rounds; ++r) {
    const double half = 2.0 * step;
    step = 2.0 * half / kFine;
    scan({best[0] - half, best[1] - half, best[2] - half}, step, kFine, false);
  }
  m.area = best_area;
  m.sides = best;
  m.angles = angles_from_sides(best[0], best[1], best[2]);
  const double tol = 1e-6;
  const char* side_names[] = {"a", "b", "c"};
  const char* angle_names[] = {"A", "B", "C"};
  for (int s = 0; s < 3; ++s)
    if (best[s] - l0 <= tol) m.active.push_back(std::string(side_names[s]) + "=l0");
  for (int s = 0; s < 3; ++s)
    if (0.5 * kPi - m.angles[s] <= tol) m.active.push_back(std::string(angle_names[s]) + "=pi/2");
  m.upper_face_min = face;
  m.boundary_nonoptimal = face > best_area;
  return m;
}

inline double min_area_triangle(double l0) { return min_area_triangle_search(l0).area; }

// ---------------------------------------------------------------------------
// corpus of Coxeter polygons with short edges

struct ShortEdgeInstance {
  std::string id;
  CoxeterPolygon polygon;
};

namespace detail {

inline CoxeterPolygon rotated(const CoxeterPolygon& P, std::size_t k) {
  std::vector<Vertex> vs = P.shape.vertices();
  std::rotate(vs.begin(), vs.begin() + static_cast<long>(k % vs.size()), vs.end());
  return {Polygon(std::move(vs)), P.orders};
}

}  // namespace detail

/// Right-angled hexagon with alternate sides (a, b, c), a and c short,
/// centred on the long side between them.
inline CoxeterPolygon two_short_edge_hexagon(double a, double b, double c) {
  auto opp = [](double x, double y, double z) {
    return std::acosh((std::cosh(y) * std::cosh(z) + std::cosh(x)) / (std::sinh(y) * std::sinh(z)));
  };
  return right_angled_hexagon(opp(b, c, a), opp(c, a, b), opp(a, b, c));
}

/// Right-angled hexagons and pentagons with one edge of length in
/// [alpha eta / 10, alpha eta] and every other edge longer than eta. The
/// short edge is built through the origin: a short edge far out (x0 ~ 1e3)
/// only fixes its angles to about x0^2 eps / length. The vertex labelling
/// is then rotated at random.
inline std::vector<ShortEdgeInstance> short_edge_corpus(std::uint64_t seed, std::size_t count,
                                                        const SurgeryConstants& c = {}) {
  c.validate();
  std::mt19937_64 rng(substream_seed(seed, 0));
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto short_len = [&] { return c.eta_prime() * (1.0 - 0.9 * U(rng)); };
  auto long_len = [&] { return std::max(c.eta, 0.5) + 1.5 * U(rng); };
  static const char* kinds[] = {"hex", "pent"};
  std::vector<ShortEdgeInstance> out;
  while (out.size() < count) {
    const std::size_t kind = out.size() % 2;
    std::optional<CoxeterPolygon> P;
    try {
      const double a = short_len(), d = long_len();
      // pentagon: the side opposite the corner after a has length d
      P = kind == 0 ? right_angled_hexagon(a, d, long_len())
                    : right_angled_pentagon(a, std::asinh(std::cosh(d) / std::sinh(a)));
    } catch (const DomainError&) {
      continue;  // construction lost accuracy on the far sides
    }
    const auto L = edge_lengths(P->shape);
    const bool valid = std::all_of(L.begin(), L.end(), [&](double l) { return l <= c.eta_prime() || l > c.eta; });
    if (!valid) continue;
    const std::size_t rot = static_cast<std::size_t>(U(rng) * static_cast<double>(P->size()));
    out.push_back({std::string(kinds[kind]) + "-" + std::to_string(out.size()), detail::rotated(*P, rot)});
  }
  return out;
}

struct Calibration {
  double u_prime = 0.0;  // max area(T_i) / alpha
  std::size_t triangles = 0;
  std::string argmax;
};

/// Largest removed-triangle area divided by alpha over a corpus.
inline Calibration calibrate_u_prime(const std::vector<ShortEdgeInstance>& corpus, const SurgeryConstants& c = {}) {
  Calibration cal;
  for (const auto& [id, P] : corpus) {
    const auto rep = remove_small_edges(P, c).report;
    for (double t : rep.triangle_areas) {
      ++cal.triangles;
      if (t / c.alpha > cal.u_prime) {
        cal.u_prime = t / c.alpha;
        cal.argmax = id;
      }
    }
  }
  return cal;
}

inline nlohmann::json surgery_json(const SurgeryReport& r) {
  nlohmann::json j{{"eta", r.constants.eta},
                   {"alpha", r.constants.alpha},
                   {"eta_prime", r.constants.eta_prime()},
                   {"removed", r.removed},
                   {"triangle_areas", r.triangle_areas},
                   {"merged_edges", r.merged_edges},
                   {"min_edge", r.min_edge},
                   {"area_before", r.area_before},
                   {"area_after", r.area_after},
                   {"area_ratio", r.area_ratio},
                   {"area_defect", r.area_defect},
                   {"merged_edges_ok", r.merged_edges_ok},
                   {"min_edge_ok", r.min_edge_ok},
                   {"passed", r.passed()}};
  if (r.thin) {
    const auto& t = *r.thin;
    j["thin"] = {{"R", t.R},
                 {"ratio_before", t.before.ratio},
                 {"stderr_before", t.before.std_error},
                 {"ratio_after", t.after.ratio},
                 {"stderr_after", t.after.std_error},
                 {"n_samples", t.after.n_samples},
                 {"seed", t.after.seed},
                 {"inflation_ok", t.inflation_ok},
                 {"max_containment_gap", t.max_containment_gap},
                 {"containment_ok", t.containment_ok}};
  }
  return j;
}

}  // namespace coxlab
