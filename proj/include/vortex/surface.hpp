#pragma once

// The two closed surfaces supported by the engine, their chart atlases and the
// conformal metric ds = lambda |dz|.
//
// Sphere: unit round sphere, chart 0 is stereographic projection from the
// north pole (z), chart 1 from the south pole (w = 1/z); lambda = 2/(1+|z|^2)
// in either chart, area 4 pi.
//
// Flat torus: C modulo the lattice Z + tau Z with lambda = 1 and area Im tau.
// One chart; points are kept in the fundamental domain {x + y tau : x,y in [0,1)}.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

#include "vortex/connection.hpp"
#include "vortex/errors.hpp"
#include "vortex/theta.hpp"

namespace vortex {

using cplx = std::complex<double>;

enum class SurfaceKind { Sphere, FlatTorus };

inline std::string to_string(SurfaceKind k) { return k == SurfaceKind::Sphere ? "sphere" : "torus"; }

struct SurfacePoint {
  int chart = 0;
  cplx coord{0.0, 0.0};

  friend bool operator==(const SurfacePoint&, const SurfacePoint&) = default;
};

/// Immutable surface descriptor. Torus-specific theta constants are computed
/// once at construction.
class Surface {
 public:
  static Surface sphere() {
    Surface s;
    s.kind_ = SurfaceKind::Sphere;
    s.tau_ = cplx(0.0, 1.0);
    s.genus_ = 0;
    s.area_ = 4.0 * std::numbers::pi;
    return s;
  }

  static Surface flat_torus(cplx tau) {
    using std::numbers::pi;
    if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag()))
      throw DomainError("flat torus: Im(tau) must be positive and finite");
    Surface s;
    s.kind_ = SurfaceKind::FlatTorus;
    s.tau_ = tau;
    s.genus_ = 1;
    s.area_ = tau.imag();
    const ThetaJet t0 = theta1_jet(cplx(0.0, 0.0), tau);
    s.theta_d1_ = t0.d1;
    s.theta_d3_ = t0.d3;
    // Mean-zero constant of the theta Green function, from the product
    // expansion of theta_1: -Im(tau)/24 + (1/2pi) sum_n log|1 - q^{2n}|.
    double log_prod = 0.0;
    for (int n = 1; n < 2000; ++n) {
      const cplx q2n = std::exp(cplx(0.0, 2.0 * pi * n) * tau);
      log_prod += std::log(std::abs(1.0 - q2n));
      if (std::abs(q2n) < 1e-18) break;
    }
    s.green_constant_ = -tau.imag() / 24.0 + log_prod / (2.0 * pi);
    return s;
  }

  SurfaceKind kind() const noexcept { return kind_; }
  bool is_sphere() const noexcept { return kind_ == SurfaceKind::Sphere; }
  bool is_torus() const noexcept { return kind_ == SurfaceKind::FlatTorus; }
  cplx tau() const noexcept { return tau_; }
  int genus() const noexcept { return genus_; }
  double area() const noexcept { return area_; }
  int chart_count() const noexcept { return is_sphere() ? 2 : 1; }

  /// theta_1'(0 | tau) and theta_1'''(0 | tau); zero for the sphere.
  cplx theta_d1() const noexcept { return theta_d1_; }
  cplx theta_d3() const noexcept { return theta_d3_; }
  /// Additive constant making the torus Green function mean-zero.
  double green_constant() const noexcept { return green_constant_; }

  friend bool operator==(const Surface& a, const Surface& b) {
    return a.kind_ == b.kind_ && (a.is_sphere() || a.tau_ == b.tau_);
  }

 private:
  Surface() = default;
  SurfaceKind kind_ = SurfaceKind::Sphere;
  cplx tau_{0.0, 1.0};
  int genus_ = 0;
  double area_ = 0.0;
  cplx theta_d1_{0.0, 0.0};
  cplx theta_d3_{0.0, 0.0};
  double green_constant_ = 0.0;
};

inline void validate(const Surface& s, const SurfacePoint& p) {
  if (p.chart < 0 || p.chart >= s.chart_count())
    throw DomainError("invalid chart id " + std::to_string(p.chart) + " for " + to_string(s.kind()));
  if (!std::isfinite(p.coord.real()) || !std::isfinite(p.coord.imag()))
    throw DomainError("surface point coordinate is not finite");
}

// ---------------------------------------------------------------------------
// Torus lattice helpers

/// Lattice coordinates (x', y') with z = x' + y' tau.
inline std::pair<double, double> lattice_coords(cplx tau, cplx z) {
  const double yp = z.imag() / tau.imag();
  const double xp = z.real() - yp * tau.real();
  return {xp, yp};
}

struct LatticeShift {
  long m = 0;
  long n = 0;
  friend bool operator==(const LatticeShift&, const LatticeShift&) = default;
};

inline cplx lattice_vector(cplx tau, LatticeShift s) {
  return static_cast<double>(s.m) + static_cast<double>(s.n) * tau;
}

/// Split z = reduced + m + n tau with reduced in the fundamental domain.
inline std::pair<cplx, LatticeShift> reduce_to_domain(cplx tau, cplx z) {
  auto [xp, yp] = lattice_coords(tau, z);
  const double fm = std::floor(xp), fn = std::floor(yp);
  double rx = xp - fm, ry = yp - fn;
  LatticeShift shift{static_cast<long>(fm), static_cast<long>(fn)};
  // floor can leave exactly 1.0 after rounding
  if (rx >= 1.0) { rx -= 1.0; ++shift.m; }
  if (ry >= 1.0) { ry -= 1.0; ++shift.n; }
  return {rx + ry * tau, shift};
}

/// Representative of z modulo the lattice with lattice coordinates in [-1/2, 1/2).
inline cplx reduce_centered(cplx tau, cplx z) {
  auto [xp, yp] = lattice_coords(tau, z);
  xp -= std::floor(xp + 0.5);
  yp -= std::floor(yp + 0.5);
  return xp + yp * tau;
}

// ---------------------------------------------------------------------------
// Charts

/// Canonical representative. Sphere: chart 0 while |z| <= handover_radius,
/// otherwise chart 1. Torus: reduced to the fundamental domain.
inline SurfacePoint canonical(const Surface& s, const SurfacePoint& p, double handover_radius = 1.0) {
  validate(s, p);
  if (s.is_torus()) return {0, reduce_to_domain(s.tau(), p.coord).first};
  if (std::abs(p.coord) <= handover_radius) return p;
  return {1 - p.chart, 1.0 / p.coord};
}

/// Homogeneous coordinates (num, den) of a sphere point as seen from `chart`:
/// the chart coordinate is num/den (den = 0 at the pole of that chart).
inline std::pair<cplx, cplx> homogeneous(const SurfacePoint& p, int chart) {
  if (p.chart == chart) return {p.coord, cplx(1.0, 0.0)};
  return {cplx(1.0, 0.0), p.coord};
}

/// Coordinate of a sphere point in the given chart; PoleError if not covered.
inline cplx coord_in_chart(const Surface& s, const SurfacePoint& p, int chart) {
  validate(s, p);
  if (p.chart == chart) return p.coord;
  if (!s.is_sphere()) throw DomainError("torus has a single chart");
  if (p.coord == cplx(0.0, 0.0)) throw PoleError("point is the pole of the target chart");
  return 1.0 / p.coord;
}

/// Unit-sphere embedding (X, Y, Z) of a sphere point.
inline std::array<double, 3> embed(const SurfacePoint& p) {
  auto [u, v] = homogeneous(p, 0);
  const double nu = std::norm(u), nv = std::norm(v);
  const cplx uv = u * std::conj(v);
  const double d = nu + nv;
  return {2.0 * uv.real() / d, 2.0 * uv.imag() / d, (nu - nv) / d};
}

/// Inverse of embed, canonical chart.
inline SurfacePoint from_embedding(const std::array<double, 3>& x) {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  const double X = x[0] / r, Y = x[1] / r, Z = x[2] / r;
  if (Z <= 0.0) return {0, cplx(X, Y) / (1.0 - Z)};
  return {1, cplx(X, -Y) / (1.0 + Z)};
}

struct Transition {
  SurfacePoint point;
  TransitionJet jet;
};

/// Change of chart on the sphere (w = 1/z); identity when the target is the current chart.
inline Transition transition(const Surface& s, const SurfacePoint& p, int target_chart) {
  validate(s, p);
  validate(s, SurfacePoint{target_chart, {}});
  if (target_chart == p.chart) return {p, TransitionJet::identity()};
  const cplx z = p.coord;
  if (z == cplx(0.0, 0.0)) throw PoleError("point is the pole of the target chart");
  const cplx z2 = z * z;
  return {{target_chart, 1.0 / z}, {-1.0 / z2, 2.0 / (z2 * z), -6.0 / (z2 * z2)}};
}

/// Lattice translation w = z + m + n tau on the torus (chart 0 to chart 0).
inline Transition translate(const Surface& s, const SurfacePoint& p, long m, long n) {
  validate(s, p);
  if (!s.is_torus()) throw DomainError("lattice translation needs a torus");
  return {{0, p.coord + lattice_vector(s.tau(), {m, n})}, TransitionJet::identity()};
}

// ---------------------------------------------------------------------------
// Metric

/// Conformal factor lambda in the chart of p.
inline double lambda(const Surface& s, const SurfacePoint& p) {
  validate(s, p);
  if (s.is_torus()) return 1.0;
  return 2.0 / (1.0 + std::norm(p.coord));
}

/// r_metric = 2 d/dz log lambda in the chart of p.
inline cplx metric_connection(const Surface& s, const SurfacePoint& p) {
  validate(s, p);
  if (s.is_torus()) return {0.0, 0.0};
  return -2.0 * std::conj(p.coord) / (1.0 + std::norm(p.coord));
}

/// d/dzbar log lambda, i.e. conj(r_metric)/2.
inline cplx dzbar_log_lambda(const Surface& s, const SurfacePoint& p) {
  return 0.5 * std::conj(metric_connection(s, p));
}

/// Geodesic distance. Sphere: exact great-circle distance; torus: shortest
/// Euclidean distance over the nine nearest lattice translates.
inline double geodesic_distance(const Surface& s, const SurfacePoint& p, const SurfacePoint& q) {
  validate(s, p);
  validate(s, q);
  if (s.is_sphere()) {
    auto [u, v] = homogeneous(p, 0);
    auto [a, b] = homogeneous(q, 0);
    const double wedge = std::abs(u * b - v * a);
    const double inner = std::abs(u * std::conj(a) + v * std::conj(b));
    return 2.0 * std::atan2(wedge, inner);
  }
  const cplx tau = s.tau();
  const cplx d = reduce_centered(tau, p.coord - q.coord);
  double best = std::abs(d);
  for (long m = -1; m <= 1; ++m)
    for (long n = -1; n <= 1; ++n) best = std::min(best, std::abs(d + lattice_vector(tau, {m, n})));
  return best;
}

}  // namespace vortex
