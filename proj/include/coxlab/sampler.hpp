#pragma once
// Uniform sampling with respect to hyperbolic area.
//
// The polygon is cut into triangles anchored at its incenter A. In polar
// coordinates (r, theta) at A the area element is sinh r dr dtheta, so the
// angular marginal has density cosh r_max(theta) - 1 and its CDF is the area
// of the sub-triangle swept up to theta: a difference of two right triangles
// on the perpendicular from A to the far side, each known in closed form.
// The radial part is inverted in closed form.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "coxlab/polygon.hpp"

namespace coxlab {

struct SamplerConfig {
  int grid = 4096;           // angular CDF table size per triangle
  std::uint64_t seed = 0;
  unsigned threads = 0;      // 0: hardware concurrency
  std::size_t chunk = 4096;  // samples per independent sub-stream
  double truncation_radius = 16.0;  // radial cap of the draw, reached only in cusps
};

/// Seed of sub-stream `chunk` (splitmix64 finalizer).
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t chunk) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (chunk + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using SampleRng = std::mt19937_64;

inline double uniform01(SampleRng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

namespace detail {

// Largest truncation radius: past about cosh 18 the rounding of q(x, x)
// exceeds 1 and a point of the hyperboloid can no longer be stored.
inline constexpr double kMaxSampleRadius = 18.0;

/// Triangle (A, B, C) with A finite, swept by angle from AB towards AC.
class AnchoredTriangle {
 public:
  AnchoredTriangle(const HPoint& a, const Vertex& b, const Vertex& c, int grid, double cap = 16.0)
      : a_(a), cosh_cap_(std::cosh(cap)), cap_(cap) {
    t1_ = tangent_toward(a_, b.v);
    const LorentzVector tc = tangent_toward(a_, c.v);
    LorentzVector t2 = tc - mink(tc, t1_) * t1_;
    t2_ = t2 / std::sqrt(mink(t2, t2));
    alpha_ = std::acos(std::clamp(mink(t1_, tc), -1.0, 1.0));
    far_ = geodesic_through(b.v, c.v);
    if (far_.side(a_) < 0.0) far_ = far_.flipped();
    a_side_ = far_.side(a_);
    cosh_h_ = std::sqrt(1.0 + a_side_ * a_side_);
    const LorentzVector tf = -1.0 * far_.pole() - a_side_ * a_.vec();  // towards the foot
    theta_foot_ = std::atan2(mink(tf, t2_), mink(tf, t1_));
    parallelism_ = std::atan(1.0 / a_side_);
    // pin ideal endpoints to the angle of parallelism
    if (b.ideal) theta_foot_ = std::copysign(parallelism_, theta_foot_);
    if (c.ideal) alpha_ = theta_foot_ + parallelism_;
    area_ = area_up_to(alpha_);
    table_.resize(static_cast<std::size_t>(grid) + 1);
    for (int k = 0; k <= grid; ++k) table_[k] = area_up_to(alpha_ * k / grid);
    table_.back() = area_;
  }

  double area() const { return area_; }

  /// cosh r_max(theta) - 1, the angular density.
  double density(double theta) const {
    const double b = mink(direction(theta), far_.pole());
    const double d2 = b * b - a_side_ * a_side_;
    if (!(b < 0.0) || d2 <= 0.0) return cosh_cap_ - 1.0;
    return std::min(-b / std::sqrt(d2), cosh_cap_) - 1.0;
  }

  /// Area of the sub-triangle with apex angle theta, measured from the foot
  /// F of the perpendicular to the far side: the right triangle with angle
  /// psi at A has angle acos(cosh h sin psi) at its far vertex.
  double area_up_to(double theta) const {
    if (theta <= 0.0) return 0.0;
    return std::max(0.0, right_area(theta - theta_foot_) - right_area(-theta_foot_));
  }

  HPoint sample(SampleRng& rng) const {
    const double target = uniform01(rng) * area_;
    const double theta = invert(target);
    const double w = uniform01(rng) * density(theta);
    const double r = std::min(std::log1p(w + std::sqrt(w * (w + 2.0))), cap_);
    return point_at(r, theta);
  }

  const HPoint& anchor() const { return a_; }
  double alpha() const { return alpha_; }

 private:
  LorentzVector direction(double theta) const { return std::cos(theta) * t1_ + std::sin(theta) * t2_; }

  HPoint point_at(double r, double theta) const {
    return HPoint::normalize(std::cosh(r) * a_.vec() + std::sinh(r) * direction(theta));
  }

  double invert(double target) const {
    const auto it = std::upper_bound(table_.begin(), table_.end(), target);
    const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(it - table_.begin()), 1, table_.size() - 1);
    const int grid = static_cast<int>(table_.size()) - 1;
    double lo = alpha_ * static_cast<double>(k - 1) / grid, hi = alpha_ * static_cast<double>(k) / grid;
    double flo = table_[k - 1] - target;
    double theta = 0.5 * (lo + hi);
    for (int iter = 0; iter < 60 && hi - lo > 1e-15 * std::max(1.0, alpha_); ++iter) {
      const double f = area_up_to(theta) - target;
      if ((f < 0.0) == (flo < 0.0)) {
        lo = theta;
        flo = f;
      } else {
        hi = theta;
      }
      if (f == 0.0) break;
      const double step = theta - f / std::max(density(theta), 1e-300);
      theta = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
      if (std::abs(f) < 1e-15 * std::max(area_, 1e-300)) break;
    }
    return theta;
  }

  double right_area(double psi) const {
    const double p = std::abs(psi);
    if (p >= parallelism_) return std::copysign(0.5 * kPi - parallelism_, psi);
    const double xi = std::acos(std::min(1.0, cosh_h_ * std::sin(p)));
    return std::copysign(std::max(0.0, 0.5 * kPi - p - xi), psi);
  }

  HPoint a_;
  LorentzVector t1_, t2_;
  double cosh_cap_ = 0.0, cap_ = 0.0;
  double alpha_ = 0.0, a_side_ = 0.0, cosh_h_ = 1.0, theta_foot_ = 0.0, parallelism_ = 0.5 * kPi, area_ = 0.0;
  Geodesic far_ = Geodesic::from_pole({0, 0, 1});
  std::vector<double> table_;
};

}  // namespace detail

/// Draws points uniformly distributed in a polygon.
class UniformSampler {
 public:
  UniformSampler(const Polygon& P, const SamplerConfig& cfg = {}) {
    if (cfg.grid < 16) throw SamplerError("sampler grid must have at least 16 points");
    if (!(cfg.truncation_radius >= 1.0 && cfg.truncation_radius <= detail::kMaxSampleRadius))
      throw SamplerError("truncation radius must lie in [1, 18]");
    // Fan from the incenter: every far side is an edge of P at distance at
    // least the inradius, which keeps the angular CDF well conditioned. A fan
    // from a vertex produces slivers whose far side is distant.
    const HPoint c = incenter(P);
    for (std::size_t i = 0; i < P.size(); ++i) add(detail::AnchoredTriangle(c, P.vertex(i), P.vertex(i + 1), cfg.grid, cfg.truncation_radius));
    if (!(total_ > 0.0)) throw SamplerError("polygon has no area to sample");
  }

  double area() const { return total_; }
  const std::vector<detail::AnchoredTriangle>& pieces() const { return pieces_; }

  HPoint sample(SampleRng& rng) const {
    const double u = uniform01(rng) * total_;
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), pieces_.size() - 1);
    return pieces_[k].sample(rng);
  }

 private:
  void add(detail::AnchoredTriangle t) {
    if (!(t.area() > 0.0)) return;
    total_ += t.area();
    cumulative_.push_back(total_);
    pieces_.push_back(std::move(t));
  }

  std::vector<detail::AnchoredTriangle> pieces_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

inline unsigned worker_count(const SamplerConfig& cfg) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return cfg.threads == 0 ? hw : std::min(cfg.threads, hw * 4);
}

/// Runs visit(acc, point) over n samples split into fixed-size sub-streams.
/// Returns one accumulator per sub-stream, in stream order; the result does
/// not depend on the number of worker threads.
template <class Acc, class Visit>
std::vector<Acc> sample_chunks(const UniformSampler& sampler, std::size_t n, const SamplerConfig& cfg, Visit visit) {
  const std::size_t chunk = std::max<std::size_t>(1, cfg.chunk);
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<Acc> out(nchunks);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t c = next++; c < nchunks; c = next++) {
      SampleRng rng(substream_seed(cfg.seed, c));
      const std::size_t end = std::min(n, (c + 1) * chunk);
      for (std::size_t i = c * chunk; i < end; ++i) visit(out[c], sampler.sample(rng));
    }
  };
  const unsigned workers = std::min<std::size_t>(worker_count(cfg), std::max<std::size_t>(1, nchunks));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return out;
}

/// n points i.i.d. uniform in P; deterministic given cfg.seed.
inline std::vector<HPoint> sample_uniform(const Polygon& P, std::size_t n, const SamplerConfig& cfg = {}) {
  const UniformSampler sampler(P, cfg);
  auto parts = sample_chunks<std::vector<HPoint>>(sampler, n, cfg,
                                                  [](std::vector<HPoint>& acc, const HPoint& x) { acc.push_back(x); });
  std::vector<HPoint> out;
  out.reserve(n);
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace coxlab
