#pragma once

// Point-vortex dynamics on the sphere and the flat torus.
//
// Connection form of the velocity law, for vortex k in any chart:
//
//   lambda(z_k)^2 dz_k/dt = Gamma_k / (2 pi i) * ( conj(c1(z_k)) + d/dzbar log lambda(z_k) )
//   c1(z_k) = h1(z_k) + sum_{j != k} (4 pi Gamma_j / Gamma_k) dG(z_k, z_j)/dz_k
//             + (4 pi / Gamma_k) dU*(z_k)/dz_k
//
// and the renormalised Hamiltonian
//
//   2H = sum_k Gamma_k^2 R(z_k) + sum_{k != j} Gamma_k Gamma_j G(z_k, z_j) + (A, B) P (A, B)^T,
//   R = (h0 + log lambda) / (2 pi),
//
// whose Hamilton equations Gamma_k lambda^2 dz_k/dt = -2i dH/dzbar_k give the
// same motion.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "vortex/errors.hpp"
#include "vortex/green.hpp"
#include "vortex/harmonic.hpp"
#include "vortex/oracles.hpp"
#include "vortex/state.hpp"
#include "vortex/surface.hpp"

namespace vortex {

/// Surface plus the data derived from it once.
struct VortexModel {
  Surface surface;
  PeriodBasis basis;
  double collision_threshold = kDefaultCollisionThreshold;

  explicit VortexModel(Surface s, double threshold = kDefaultCollisionThreshold)
      : surface(std::move(s)), basis(build_basis(surface)), collision_threshold(threshold) {}
};

namespace detail {

inline void check_index(const VortexState& st, std::size_t k) {
  if (k >= st.size()) throw DomainError("vortex index out of range");
}

inline cplx c1_with(const VortexModel& m, const VortexState& st, std::size_t k, const EtaForm& eta) {
  using std::numbers::pi;
  const SurfacePoint& zk = st.positions[k];
  const double gk = st.strengths[k];
  cplx c1 = robin_data(m.surface, zk).h1;
  for (std::size_t j = 0; j < st.size(); ++j) {
    if (j == k) continue;
    c1 += 4.0 * pi * st.strengths[j] / gk * green(m.surface, zk, st.positions[j]).grad_z;
  }
  if (m.basis.genus > 0) c1 += 4.0 * pi / gk * eta.dUstar_dz;
  return c1;
}

inline EtaForm current_eta(const VortexModel& m, const VortexState& st) {
  if (m.basis.genus == 0) return {};
  return eta_form(m.basis, circulation_state(m.surface, m.basis, st));
}

inline cplx velocity_from_c1(const VortexModel& m, const VortexState& st, std::size_t k, cplx c1) {
  using std::numbers::pi;
  const SurfacePoint& zk = st.positions[k];
  const double lam = lambda(m.surface, zk);
  return st.strengths[k] / (cplx(0.0, 2.0 * pi) * lam * lam) *
         (std::conj(c1) + dzbar_log_lambda(m.surface, zk));
}

}  // namespace detail

/// c1(z_k) in the chart of vortex k, using the current A, B.
inline cplx c1_coefficient(const VortexModel& m, const VortexState& st, std::size_t k) {
  detail::check_index(st, k);
  check_separation(m.surface, st, m.collision_threshold);
  return detail::c1_with(m, st, k, detail::current_eta(m, st));
}

/// c0(z_k): constant term of (2 pi / Gamma_k) psi + log|z - z_k| at z_k. Diagnostic only.
inline double c0_coefficient(const VortexModel& m, const VortexState& st, std::size_t k) {
  using std::numbers::pi;
  detail::check_index(st, k);
  check_separation(m.surface, st, m.collision_threshold);
  const SurfacePoint& zk = st.positions[k];
  const double gk = st.strengths[k];
  double c0 = robin_data(m.surface, zk).h0;
  for (std::size_t j = 0; j < st.size(); ++j) {
    if (j == k) continue;
    c0 += 2.0 * pi * st.strengths[j] / gk * green(m.surface, zk, st.positions[j]).value;
  }
  if (m.basis.genus > 0) {
    const CirculationState circ = circulation_state(m.surface, m.basis, st);
    c0 += 2.0 * pi / gk * eta_conjugate_potential(m.basis, circ, lifted_coord(m.surface, st, k));
  }
  return c0;
}

/// dz_k/dt from the connection form of the velocity law, in the chart of vortex k.
inline cplx velocity_thm(const VortexModel& m, const VortexState& st, std::size_t k) {
  return detail::velocity_from_c1(m, st, k, c1_coefficient(m, st, k));
}

/// All velocities at once (A, B assembled a single time).
inline std::vector<cplx> velocities_thm(const VortexModel& m, const VortexState& st) {
  check_separation(m.surface, st, m.collision_threshold);
  const EtaForm eta = detail::current_eta(m, st);
  std::vector<cplx> v(st.size());
  for (std::size_t k = 0; k < st.size(); ++k) v[k] = detail::velocity_from_c1(m, st, k, detail::c1_with(m, st, k, eta));
  return v;
}

/// R(z) = (h0 + log lambda)/(2 pi): invariant Robin function.
inline double robin_function(const Surface& s, const SurfacePoint& z) {
  return (robin_data(s, z).h0 + std::log(lambda(s, z))) / (2.0 * std::numbers::pi);
}

inline double hamiltonian(const VortexModel& m, const VortexState& st) {
  check_separation(m.surface, st, m.collision_threshold);
  double two_h = 0.0;
  for (std::size_t k = 0; k < st.size(); ++k) {
    const double gk = st.strengths[k];
    two_h += gk * gk * robin_function(m.surface, st.positions[k]);
    for (std::size_t j = k + 1; j < st.size(); ++j)
      two_h += 2.0 * gk * st.strengths[j] * green(m.surface, st.positions[k], st.positions[j]).value;
  }
  if (m.basis.genus > 0) two_h += eta_energy(m.basis, circulation_state(m.surface, m.basis, st));
  return 0.5 * two_h;
}

inline constexpr double kHamiltonStep = 1e-5;

/// dz_k/dt = -2i/(Gamma_k lambda^2) dH/dzbar_k, with dH/dzbar_k from central
/// differences (one Richardson level) of the Hamiltonian in the chart of vortex k.
inline cplx velocity_ham(const VortexModel& m, const VortexState& st, std::size_t k, double step = kHamiltonStep) {
  detail::check_index(st, k);
  check_separation(m.surface, st, m.collision_threshold);
  VortexState work = st;
  const cplx z0 = st.positions[k].coord;
  auto h_at = [&](cplx z) {
    work.positions[k].coord = z;
    return hamiltonian(m, work);
  };
  const auto d = oracle::wirtinger(h_at, z0, step);
  const double lam = lambda(m.surface, st.positions[k]);
  return cplx(0.0, -2.0) / (st.strengths[k] * lam * lam) * d.dzbar;
}

// ---------------------------------------------------------------------------
// Kelvin monitor

struct CirculationReadout {
  std::vector<double> a;
  std::vector<double> b;
};

namespace detail {

/// Midpoint of the widest gap of the values (mod 1) on the unit circle.
inline double widest_gap_midpoint(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double best_gap = -1.0, mid = 0.5;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double lo = v[i];
    const double hi = i + 1 < v.size() ? v[i + 1] : v[0] + 1.0;
    if (hi - lo > best_gap) {
      best_gap = hi - lo;
      mid = 0.5 * (lo + hi);
    }
  }
  return mid - std::floor(mid);
}

}  // namespace detail

/// Recover the fixed circulations a_k, b_k from the flow itself: integrate the
/// velocity 1-form nu = -*dG^omega + eta around alpha/beta cycles placed in the
/// widest vortex-free gaps, then remove the vorticity that has crossed each cycle.
inline CirculationReadout reconstruct_circulations(const VortexModel& m, const VortexState& st, int n_points = 512) {
  CirculationReadout out;
  if (m.basis.genus == 0) return out;
  const Surface& s = m.surface;
  const cplx tau = s.tau();
  const CirculationState circ = circulation_state(s, m.basis, st);
  const HarmonicForm eta = eta_form(m.basis, circ).eta;

  std::vector<double> xs, ys;
  for (std::size_t j = 0; j < st.size(); ++j) {
    auto [xp, yp] = lattice_coords(tau, reduce_to_domain(tau, st.positions[j].coord).first);
    xs.push_back(xp);
    ys.push_back(yp);
  }
  const double y0 = detail::widest_gap_midpoint(ys);
  const double x0 = detail::widest_gap_midpoint(xs);

  auto nu = [&](cplx z, cplx v) {
    double gx = 0.0, gy = 0.0;
    for (std::size_t j = 0; j < st.size(); ++j) {
      const cplx g = green(s, SurfacePoint{0, z}, st.positions[j]).grad_z;
      gx += st.strengths[j] * 2.0 * g.real();
      gy += st.strengths[j] * -2.0 * g.imag();
    }
    const double star_dg = gx * v.imag() - gy * v.real();
    return -star_dg + eta(v);
  };
  const double around_alpha = oracle::line_integral(nu, y0 * tau, cplx(1.0, 0.0), n_points, true);
  const double around_beta = oracle::line_integral(nu, cplx(x0, 0.0), tau, n_points, true);

  double flux_alpha = 0.0, flux_beta = 0.0;
  for (std::size_t j = 0; j < st.size(); ++j) {
    auto [xl, yl] = lattice_coords(tau, lifted_coord(s, st, j));
    const double cut_alpha = ys[j] - y0 - std::floor(ys[j] - y0);
    const double cut_beta = -(xs[j] - x0 - std::floor(xs[j] - x0));
    flux_alpha += st.strengths[j] * (yl - cut_alpha);
    flux_beta += st.strengths[j] * (-xl - cut_beta);
  }
  out.a = {around_alpha - flux_alpha};
  out.b = {around_beta - flux_beta};
  return out;
}

// ---------------------------------------------------------------------------
// Time integration

enum class Method { RK4, RK45 };

struct IntegratorOptions {
  Method method = Method::RK4;
  double dt = 1e-3;
  long steps = 1000;
  long record_every = 1;
  double handover_radius = 1.0;
  // adaptive method only
  double rtol = 1e-10;
  double atol = 1e-12;
  int max_consecutive_rejections = 50;
  // Kelvin readout at each record (torus); 0 disables it
  int kelvin_points = 512;

  friend bool operator==(const IntegratorOptions&, const IntegratorOptions&) = default;
};

inline std::string to_string(Method m) { return m == Method::RK4 ? "rk4" : "rk45"; }

struct TrajectoryRecord {
  double time = 0.0;
  std::vector<SurfacePoint> positions;
  std::vector<LatticeShift> windings;
  double hamiltonian = 0.0;
  std::vector<double> circ_a;
  std::vector<double> circ_b;
  double min_separation = 0.0;
  long step_rejections = 0;
};

namespace detail {

inline VortexState with_coords(const VortexState& base, const std::vector<cplx>& y) {
  VortexState s = base;
  for (std::size_t j = 0; j < y.size(); ++j) s.positions[j].coord = y[j];
  return s;
}

inline std::vector<cplx> coords(const VortexState& s) {
  std::vector<cplx> y(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) y[j] = s.positions[j].coord;
  return y;
}

inline std::vector<cplx> axpy(const std::vector<cplx>& y, double h,
                              std::initializer_list<std::pair<double, const std::vector<cplx>*>> terms) {
  std::vector<cplx> out = y;
  for (const auto& [c, k] : terms)
    if (c != 0.0)
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += h * c * (*k)[j];
  return out;
}

inline VortexState rk4_step(const VortexModel& m, const VortexState& base, double h) {
  const auto y = coords(base);
  auto f = [&](const std::vector<cplx>& yy) { return velocities_thm(m, with_coords(base, yy)); };
  const auto k1 = f(y);
  const auto k2 = f(axpy(y, h, {{0.5, &k1}}));
  const auto k3 = f(axpy(y, h, {{0.5, &k2}}));
  const auto k4 = f(axpy(y, h, {{1.0, &k3}}));
  return with_coords(base, axpy(y, h, {{1.0 / 6, &k1}, {1.0 / 3, &k2}, {1.0 / 3, &k3}, {1.0 / 6, &k4}}));
}

/// Dormand-Prince 5(4) step; returns the 5th-order solution and the error norm.
inline std::pair<VortexState, double> dopri_step(const VortexModel& m, const VortexState& base, double h,
                                                 const IntegratorOptions& opt) {
  const auto y = coords(base);
  auto f = [&](const std::vector<cplx>& yy) { return velocities_thm(m, with_coords(base, yy)); };
  const auto k1 = f(y);
  const auto k2 = f(axpy(y, h, {{1.0 / 5, &k1}}));
  const auto k3 = f(axpy(y, h, {{3.0 / 40, &k1}, {9.0 / 40, &k2}}));
  const auto k4 = f(axpy(y, h, {{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}));
  const auto k5 = f(axpy(y, h, {{19372.0 / 6561, &k1}, {-25360.0 / 2187, &k2}, {64448.0 / 6561, &k3}, {-212.0 / 729, &k4}}));
  const auto k6 = f(axpy(y, h, {{9017.0 / 3168, &k1}, {-355.0 / 33, &k2}, {46732.0 / 5247, &k3}, {49.0 / 176, &k4}, {-5103.0 / 18656, &k5}}));
  const auto y5 = axpy(y, h, {{35.0 / 384, &k1}, {500.0 / 1113, &k3}, {125.0 / 192, &k4}, {-2187.0 / 6784, &k5}, {11.0 / 84, &k6}});
  const auto k7 = f(y5);
  const auto y4 = axpy(y, h, {{5179.0 / 57600, &k1}, {7571.0 / 16695, &k3}, {393.0 / 640, &k4}, {-92097.0 / 339200, &k5}, {187.0 / 2100, &k6}, {1.0 / 40, &k7}});
  double err = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double sc = opt.atol + opt.rtol * std::max(std::abs(y[j]), std::abs(y5[j]));
    err = std::max(err, std::abs(y5[j] - y4[j]) / sc);
  }
  return {with_coords(base, y5), err};
}

}  // namespace detail

inline TrajectoryRecord make_record(const VortexModel& m, const VortexState& st, double t,
                                    const IntegratorOptions& opt, long rejections) {
  TrajectoryRecord r;
  r.time = t;
  r.positions = st.positions;
  r.windings = st.windings;
  r.hamiltonian = hamiltonian(m, st);
  if (m.basis.genus > 0 && opt.kelvin_points > 0) {
    const auto c = reconstruct_circulations(m, st, opt.kelvin_points);
    r.circ_a = c.a;
    r.circ_b = c.b;
  } else if (m.basis.genus > 0) {
    r.circ_a = st.base_a;
    r.circ_b = st.base_b;
  }
  r.min_separation = min_separation(m.surface, st);
  r.step_rejections = rejections;
  return r;
}

/// Advance the state under the connection-form velocity law, handing each
/// record to `sink` as it is produced. Charts are frozen within a step and the
/// state is canonicalised after it. Throws CollisionError (after emitting the
/// records so far) when two vortices come closer than the model threshold.
template <class Sink>
VortexState integrate_streaming(const VortexModel& m, VortexState st, const IntegratorOptions& opt, Sink&& sink) {
  if (!(opt.dt > 0.0)) throw DomainError("integrate: dt must be positive");
  if (opt.steps < 0 || opt.record_every < 1) throw DomainError("integrate: steps >= 0 and record_every >= 1 required");
  validate_state(m.surface, st, m.collision_threshold);
  st = canonicalized(m.surface, std::move(st), opt.handover_radius);
  long rejections = 0;
  sink(make_record(m, st, 0.0, opt, rejections));
  if (opt.method == Method::RK4) {
    for (long n = 1; n <= opt.steps; ++n) {
      st = canonicalized(m.surface, detail::rk4_step(m, st, opt.dt), opt.handover_radius);
      check_separation(m.surface, st, m.collision_threshold);
      if (n % opt.record_every == 0 || n == opt.steps) sink(make_record(m, st, n * opt.dt, opt, rejections));
    }
    return st;
  }
  // Adaptive: hit every output time dt * record_every exactly.
  const double out_dt = opt.dt * static_cast<double>(opt.record_every);
  const long n_out = (opt.steps + opt.record_every - 1) / opt.record_every;
  double t = 0.0, h = opt.dt;
  for (long out = 1; out <= n_out; ++out) {
    const double t_out = std::min(opt.dt * static_cast<double>(opt.steps), out * out_dt);
    int consecutive = 0;
    while (t_out - t > 1e-14 * std::max(1.0, t_out)) {
      const double used = std::min(h, t_out - t);
      // a stage that runs through a near-collision is treated as a failed step
      VortexState trial;
      double err = std::numeric_limits<double>::infinity();
      try {
        std::tie(trial, err) = detail::dopri_step(m, st, used, opt);
      } catch (const CollisionError&) {
      }
      if (err <= 1.0) {
        st = canonicalized(m.surface, std::move(trial), opt.handover_radius);
        check_separation(m.surface, st, m.collision_threshold);
        t = (t_out - t - used <= 1e-14 * std::max(1.0, t_out)) ? t_out : t + used;
        consecutive = 0;
        const double grow = err > 0.0 ? std::min(5.0, 0.9 * std::pow(err, -0.2)) : 5.0;
        if (used >= h * (1.0 - 1e-12)) h *= grow;
      } else {
        ++rejections;
        if (++consecutive > opt.max_consecutive_rejections)
          throw StepRejectionOverflow("integrate: too many consecutive step rejections");
        h = std::max(0.2, 0.9 * std::pow(err, -0.25)) * used;
      }
    }
    sink(make_record(m, st, t_out, opt, rejections));
  }
  return st;
}

inline std::vector<TrajectoryRecord> integrate(const VortexModel& m, const VortexState& st, const IntegratorOptions& opt) {
  std::vector<TrajectoryRecord> out;
  integrate_streaming(m, st, opt, [&](TrajectoryRecord r) { out.push_back(std::move(r)); });
  return out;
}

}  // namespace vortex
