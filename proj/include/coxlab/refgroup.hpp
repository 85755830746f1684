#pragma once
// Reflection groups generated by the sides of a polygon: balls in the word
// metric or around a basepoint orbit, minimal expressions, displacement
// checks.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coxlab/format.hpp"
#include "coxlab/polygon.hpp"
#include "coxlab/trig.hpp"

namespace coxlab {

inline std::vector<Isometry> side_reflections(const Polygon& P) {
  std::vector<Isometry> out;
  out.reserve(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) out.push_back(Isometry::reflection(P.edge_geodesic(i)));
  return out;
}

/// Max-entry distance scaled by the larger matrix norm (at least 1).
inline double matrix_separation(const Isometry& a, const Isometry& b) {
  return a.max_entry_distance(b) / std::max({1.0, a(0, 0), b(0, 0)});
}

struct GroupElement {
  std::vector<int> word;
  Isometry matrix;
  int length() const { return static_cast<int>(word.size()); }
};

struct BallOptions {
  std::size_t cap = 1'000'000;
  double dedup = kTol.dedup;
};

inline constexpr int kMaxBallLength = 14;

/// Elements of the reflection group of P found by breadth-first search over
/// words, right-multiplying by generators. Each element keeps every
/// predecessor that realises its word length.
class GroupBall {
 public:
  struct Edge {
    std::size_t parent;
    int generator;
  };

  const std::vector<Isometry>& generators() const { return gens_; }
  const HPoint& base() const { return base_; }
  std::size_t size() const { return elements_.size(); }
  const GroupElement& element(std::size_t i) const { return elements_.at(i); }
  const std::vector<GroupElement>& elements() const { return elements_; }
  const std::vector<Edge>& parents(std::size_t i) const { return parents_.at(i); }
  double displacement(std::size_t i) const { return displacement_.at(i); }
  /// Word length up to which the ball is complete (-1 if built by radius).
  int max_length() const { return max_length_; }
  /// Displacement at the base up to which the ball is complete (0 for
  /// balls built by word length).
  double radius() const { return radius_; }
  /// Bitmask of generators occurring in some minimal expression.
  std::uint64_t support_mask(std::size_t i) const { return support_.at(i); }
  /// Minimum scaled matrix distance over all pairs of stored elements.
  double min_separation() const { return min_separation_; }

  std::optional<std::size_t> find(const Isometry& g) const {
    const double key = g.apply(base_.vec()).x0;
    const double w = window(g);
    for (auto it = index_.lower_bound(key - w); it != index_.end() && it->first <= key + w; ++it) {
      if (matrix_separation(elements_[it->second].matrix, g) < dedup_) return it->second;
    }
    return std::nullopt;
  }

  static GroupBall build(const Polygon& P, const HPoint& o, int max_length, double explore_radius, double radius,
                         const BallOptions& opt) {
    GroupBall b;
    b.gens_ = side_reflections(P);
    if (b.gens_.size() > 64) throw PreconditionViolation("at most 64 generators are supported");
    b.base_ = o;
    b.dedup_ = opt.dedup;
    b.max_length_ = max_length;
    b.radius_ = radius;
    b.o_norm_ = std::abs(o.vec().x0) + std::abs(o.vec().x1) + std::abs(o.vec().x2);
    b.insert({{}, Isometry()}, {}, opt.cap);
    std::size_t layer_begin = 0;
    for (int len = 0; max_length < 0 || len < max_length; ++len) {
      const std::size_t layer_end = b.elements_.size();
      if (layer_begin == layer_end) break;
      for (std::size_t i = layer_begin; i < layer_end; ++i) {
        for (int s = 0; s < static_cast<int>(b.gens_.size()); ++s) {
          const Isometry& m = b.elements_[i].matrix;
          Isometry g = (m * b.gens_[s]).renormalized(kTol.drift * std::max(1.0, m(0, 0) * m(0, 0)));
          if (auto j = b.find(g)) {
            if (b.elements_[*j].length() == len + 1) b.parents_[*j].push_back({i, s});
            continue;
          }
          if (distance(o, g.apply(o)) > explore_radius) continue;
          std::vector<int> word = b.elements_[i].word;
          word.push_back(s);
          b.insert({std::move(word), g}, {{i, s}}, opt.cap);
        }
      }
      layer_begin = layer_end;
    }
    b.finish();
    return b;
  }

 private:
  double window(const Isometry& g) const { return 3.0 * dedup_ * std::max(1.0, g(0, 0)) * o_norm_; }

  void insert(GroupElement e, std::vector<Edge> parents, std::size_t cap) {
    if (elements_.size() >= cap) throw SizeLimitError("group ball exceeds element cap " + std::to_string(cap));
    const LorentzVector x = e.matrix.apply(base_.vec());
    index_.emplace(x.x0, elements_.size());
    displacement_.push_back(distance(base_, HPoint::normalize(x)));
    elements_.push_back(std::move(e));
    parents_.push_back(std::move(parents));
  }

  void finish() {
    support_.assign(elements_.size(), 0);
    for (std::size_t i = 1; i < elements_.size(); ++i)  // parents precede children
      for (const auto& e : parents_[i]) support_[i] |= support_[e.parent] | (std::uint64_t{1} << e.generator);
    min_separation_ = audit_min_separation(elements_.size());
  }

 public:
  /// Collision audit over the first `count` elements. Sorting by the (0,0)
  /// entry bounds the scaled distance from below, so the sweep is exact.
  double audit_min_separation(std::size_t count) const {
    std::vector<std::size_t> order(std::min(count, elements_.size()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto g00 = [&](std::size_t i) { return elements_[i].matrix(0, 0); };
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return g00(a) < g00(b); });
    double best = kInf;
    for (std::size_t a = 0; a < order.size(); ++a) {
      for (std::size_t b = a + 1; b < order.size(); ++b) {
        if ((g00(order[b]) - g00(order[a])) / std::max(1.0, g00(order[b])) >= best) break;
        best = std::min(best, matrix_separation(elements_[order[a]].matrix, elements_[order[b]].matrix));
      }
    }
    return best;
  }

 private:
  std::vector<Isometry> gens_;
  HPoint base_;
  std::vector<GroupElement> elements_;
  std::vector<std::vector<Edge>> parents_;
  std::vector<double> displacement_;
  std::vector<std::uint64_t> support_;
  std::multimap<double, std::size_t> index_;
  double dedup_ = kTol.dedup, o_norm_ = 1.0, radius_ = 0.0, min_separation_ = kInf;
  int max_length_ = -1;
};

/// All elements of word length at most L.
inline GroupBall ball_by_length(const Polygon& P, int L, const HPoint& o, const BallOptions& opt = {}) {
  if (L < 0 || L > kMaxBallLength)
    throw PreconditionViolation("word length must lie in [0, " + std::to_string(kMaxBallLength) + "]");
  return GroupBall::build(P, o, L, kInf, 0.0, opt);
}

/// All elements g with d(o, g o) <= R. The search explores up to R + rho,
/// rho the largest distance from o to a vertex: the chambers met by the
/// segment [o, g o] form a minimal gallery whose orbit points stay within
/// that radius, so every such g is reached with its true word length.
inline GroupBall ball_by_radius(const Polygon& P, double R, const HPoint& o, const BallOptions& opt = {}) {
  if (!(R >= 0.0) || !std::isfinite(R)) throw PreconditionViolation("ball radius must be finite and non-negative");
  if (!P.is_compact()) throw PreconditionViolation("radius balls need a compact polygon");
  if (!contains(o.vec(), P)) throw OutsidePoint("ball basepoint must lie in the polygon");
  const double rho = vertex_radius(o, P);
  return GroupBall::build(P, o, -1, R + rho, R, opt);
}

/// Generator indices occurring in some minimal expression of element i.
inline std::vector<int> minimal_support(const GroupBall& ball, std::size_t i) {
  if (i >= ball.size()) throw NotInBall("element index outside the ball");
  std::vector<int> out;
  for (std::uint64_t m = ball.support_mask(i); m; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

inline std::vector<int> minimal_support(const GroupBall& ball, const Isometry& g) {
  const auto i = ball.find(g);
  if (!i) throw NotInBall("element not in the ball");
  return minimal_support(ball, *i);
}

struct MinLengthViolation {
  std::vector<int> word;
  int generator = 0;
  double displacement = 0.0, generator_displacement = 0.0;
};

struct MinLengthReport {
  int L = 0;
  std::size_t elements = 0, checks = 0;
  std::vector<MinLengthViolation> violations;
  bool passed() const { return violations.empty(); }
};

/// For every w of length <= L and every s in its minimal support, checks
/// d(o, w o) >= d(o, s o).
inline MinLengthReport check_gens_minlength(const Polygon& P, const HPoint& o, int L, double tol = kTol.constructed) {
  if (!contains(o.vec(), P, 0.0) || P.inner_distance(o.vec()) <= 0.0)
    throw OutsidePoint("basepoint must be interior to the polygon");
  const GroupBall ball = ball_by_length(P, L, o);
  MinLengthReport rep;
  rep.L = L;
  rep.elements = ball.size();
  std::vector<double> gen_disp;
  for (const auto& g : ball.generators()) gen_disp.push_back(distance(o, g.apply(o)));
  for (std::size_t i = 1; i < ball.size(); ++i) {
    for (int s : minimal_support(ball, i)) {
      ++rep.checks;
      const double ds = gen_disp[s];
      if (ball.displacement(i) + tol < ds) rep.violations.push_back({ball.element(i).word, s, ball.displacement(i), ds});
    }
  }
  return rep;
}

/// A minimal word for element i all of whose letters move o by at most R.
inline std::vector<int> bounded_factorization(const GroupBall& ball, std::size_t i, double R) {
  if (i >= ball.size()) throw NotInBall("element index outside the ball");
  if (ball.displacement(i) > R + kTol.constructed)
    throw PreconditionViolation("element moves the basepoint further than R");
  const auto& gens = ball.generators();
  std::vector<char> allowed(gens.size());
  for (std::size_t s = 0; s < gens.size(); ++s)
    allowed[s] = distance(ball.base(), gens[s].apply(ball.base())) <= R + kTol.constructed;
  // reach[j]: some minimal word of j uses allowed letters only
  std::vector<char> reach(i + 1, 0);
  reach[0] = 1;
  for (std::size_t j = 1; j <= i; ++j)
    for (const auto& e : ball.parents(j))
      if (allowed[e.generator] && reach[e.parent]) reach[j] = 1;
  if (!reach[i]) throw CounterexampleError("no minimal word with short letters");
  std::vector<int> word;
  for (std::size_t j = i; j != 0;) {
    for (const auto& e : ball.parents(j)) {
      if (allowed[e.generator] && reach[e.parent]) {
        word.push_back(e.generator);
        j = e.parent;
        break;
      }
    }
  }
  std::reverse(word.begin(), word.end());
  return word;
}

/// Product of generator matrices along a word.
inline Isometry word_matrix(const std::vector<Isometry>& gens, const std::vector<int>& word) {
  Isometry g;
  for (int s : word) g = g * gens.at(s);
  return g;
}

/// Ball radius about o that contains every g with d(x, g x) <= r:
/// d(o, g o) <= d(o, x) + d(x, g x) + d(g x, g o).
inline double required_ball_radius(const HPoint& o, const HPoint& x, double r) {
  return r + 2.0 * distance(o, x);
}

struct SmallDisplacement {
  std::vector<std::size_t> elements;
  bool ball_sufficient = true;
};

/// Non-identity elements with d(x, g x) <= r.
inline SmallDisplacement local_small_displacement(const GroupBall& ball, const HPoint& x, double r) {
  SmallDisplacement out;
  out.ball_sufficient = ball.radius() >= required_ball_radius(ball.base(), x, r);
  for (std::size_t i = 1; i < ball.size(); ++i)
    if (distance(x, ball.element(i).matrix.apply(x)) <= r) out.elements.push_back(i);
  return out;
}

struct PackingReport {
  double R = 0.0;
  std::size_t count = 0;
  double bound = 0.0;
  bool passed = false;
};

/// Orbit points within R of o versus the number of disjoint copies of P that
/// fit in the disc of radius R + rho.
inline PackingReport packing_check(const GroupBall& ball, const Polygon& P, double R, double slack = 2.0) {
  if (R > ball.radius()) throw PreconditionViolation("packing radius exceeds the ball radius");
  PackingReport rep;
  rep.R = R;
  for (std::size_t i = 0; i < ball.size(); ++i) rep.count += ball.displacement(i) <= R;
  rep.bound = slack * disc_area(R + vertex_radius(ball.base(), P)) / area(P);
  rep.passed = static_cast<double>(rep.count) <= rep.bound;
  return rep;
}

inline nlohmann::json ball_json(const GroupBall& ball) {
  nlohmann::json elems = nlohmann::json::array();
  for (const auto& e : ball.elements()) {
    nlohmann::json m = nlohmann::json::array();
    for (int i = 0; i < 3; ++i) m.push_back({e.matrix(i, 0), e.matrix(i, 1), e.matrix(i, 2)});
    elems.push_back({{"word", e.word}, {"matrix", m}});
  }
  const auto& o = ball.base().vec();
  nlohmann::json j = {{"generators", ball.generators().size()}, {"base", {o.x0, o.x1, o.x2}}, {"size", ball.size()}};
  if (ball.max_length() >= 0) j["max_length"] = ball.max_length();
  else j["radius"] = ball.radius();
  j["min_separation"] = std::isfinite(ball.min_separation()) ? nlohmann::json(ball.min_separation()) : nlohmann::json();
  j["elements"] = std::move(elems);
  return j;
}

/// One row per word length 0..L: ball size and the audited minimum
/// separation between distinct elements.
inline std::string ball_growth_csv(const Polygon& P, int L, const HPoint& o, const BallOptions& opt = {}) {
  std::ostringstream s;
  s << "L,size,min_separation\n";
  for (int l = 0; l <= L; ++l) {
    const auto b = ball_by_length(P, l, o, opt);
    s << l << ',' << b.size() << ',' << fmt17(b.min_separation()) << '\n';
  }
  return s.str();
}

}  // namespace coxlab
