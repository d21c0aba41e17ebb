#pragma once

// One-point Green function G(z, a) with -d*dG(., a) = delta_a - vol^2/area and
// zero mean over the surface, its regular part
//
//   H(z, a) = 2 pi G(z, a) + log|z - a|
//           = h0 + Re(h1 (z-a)) + Re(h2 (z-a)^2) + h11 |z-a|^2 + O(|z-a|^3),
//
// and the metric-independent two-point potential V(z, w; a, b).
//
// Sphere (chart coordinates, either chart):
//   G = -(1/4pi) (log(|z-a|^2 / ((1+|z|^2)(1+|a|^2))) + 1)
// Torus (w = z - a reduced to the centred cell):
//   G = -(1/2pi) log|theta_1(pi w | tau)| + (Im w)^2 / (2 Im tau) + C(tau)

#include <cmath>
#include <complex>
#include <numbers>

#include "vortex/errors.hpp"
#include "vortex/surface.hpp"
#include "vortex/theta.hpp"

namespace vortex {

struct GreenEvaluation {
  double value = 0.0;
  cplx grad_z{0.0, 0.0};  // dG/dz in the chart of z
  SurfacePoint z;
  SurfacePoint a;
};

struct RobinData {
  double h0 = 0.0;
  cplx h1{0.0, 0.0};
  cplx h2{0.0, 0.0};
  double h11 = 0.0;
  SurfacePoint at;
  int chart = 0;
};

inline constexpr double kCoincidenceTolerance = 1e-12;

inline GreenEvaluation green(const Surface& s, const SurfacePoint& z, const SurfacePoint& a) {
  using std::numbers::pi;
  if (geodesic_distance(s, z, a) <= kCoincidenceTolerance)
    throw SingularityError("green: coincident points");
  GreenEvaluation out{0.0, {}, z, a};
  if (s.is_sphere()) {
    const cplx zc = z.coord;
    auto [p, q] = homogeneous(a, z.chart);
    const double nz = std::norm(zc);
    const double chord2 = std::norm(zc * q - p) / ((1.0 + nz) * (std::norm(p) + std::norm(q)));
    out.value = -(std::log(chord2) + 1.0) / (4.0 * pi);
    out.grad_z = -(q / (q * zc - p) - std::conj(zc) / (1.0 + nz)) / (4.0 * pi);
    return out;
  }
  const cplx tau = s.tau();
  const cplx w = reduce_centered(tau, z.coord - a.coord);
  const ThetaJet th = theta1_jet(pi * w, tau);
  const double y = w.imag();
  out.value = -std::log(std::abs(th.value)) / (2.0 * pi) + y * y / (2.0 * tau.imag()) + s.green_constant();
  out.grad_z = -th.d1 / (4.0 * th.value) - cplx(0.0, y / (2.0 * tau.imag()));
  return out;
}

/// Regular part H(z, a) = 2 pi G + log|z - a| with z and a taken in the chart of a.
inline double green_regular_part(const Surface& s, const SurfacePoint& z, const SurfacePoint& a) {
  using std::numbers::pi;
  const cplx zc = s.is_sphere() ? coord_in_chart(s, z, a.chart) : z.coord;
  cplx d = zc - a.coord;
  if (s.is_torus()) d = reduce_centered(s.tau(), d);
  return 2.0 * pi * green(s, z, a).value + std::log(std::abs(d));
}

/// Taylor coefficients of the regular part at the pole a, in the chart of a.
inline RobinData robin_data(const Surface& s, const SurfacePoint& a) {
  using std::numbers::pi;
  validate(s, a);
  RobinData r;
  r.at = a;
  r.chart = a.chart;
  if (s.is_sphere()) {
    const cplx ab = std::conj(a.coord);
    const double t = 1.0 + std::norm(a.coord);
    r.h0 = std::log(t) - 0.5;
    r.h1 = ab / t;
    r.h2 = -ab * ab / (2.0 * t * t);
    r.h11 = 1.0 / (2.0 * t * t);
    return r;
  }
  const double t2 = s.tau().imag();
  const cplx kappa = pi * pi * s.theta_d3() / (6.0 * s.theta_d1());
  r.h0 = -std::log(pi * std::abs(s.theta_d1())) + 2.0 * pi * s.green_constant();
  r.h1 = {0.0, 0.0};
  r.h2 = -kappa - pi / (2.0 * t2);
  r.h11 = pi / (2.0 * t2);
  return r;
}

/// V(z, w; a, b) = 2 pi (G(z,a) - G(z,b) - G(w,a) + G(w,b)); zero at z = w.
inline double fundamental_potential(const Surface& s, const SurfacePoint& z, const SurfacePoint& w,
                                    const SurfacePoint& a, const SurfacePoint& b) {
  using std::numbers::pi;
  for (const SurfacePoint* p : {&z, &w})
    for (const SurfacePoint* pole : {&a, &b})
      if (geodesic_distance(s, *p, *pole) <= kCoincidenceTolerance)
        throw SingularityError("fundamental_potential: evaluation point hits a pole");
  if (geodesic_distance(s, z, w) == 0.0) return 0.0;
  return 2.0 * pi *
         (green(s, z, a).value - green(s, z, b).value - green(s, w, a).value + green(s, w, b).value);
}

/// Coefficient e^{-h0(a)} of the Robin metric ds = e^{-h0} |da| in the chart of a.
inline double robin_metric(const Surface& s, const SurfacePoint& a) {
  return std::exp(-robin_data(s, a).h0);
}

}  // namespace vortex
