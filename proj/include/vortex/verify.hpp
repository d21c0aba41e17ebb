#pragma once

// Cross-validation battery: each check measures a residual against an
// independent evaluation (finite differences, contour integrals, quadrature,
// the Hamiltonian route to the velocity) and compares it with a tolerance.

#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "vortex/connection.hpp"
#include "vortex/dynamics.hpp"
#include "vortex/green.hpp"
#include "vortex/harmonic.hpp"
#include "vortex/oracles.hpp"
#include "vortex/sampling.hpp"
#include "vortex/scenario.hpp"

namespace vortex {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;  // pass when residual >= tolerance instead of <=
  bool pass = false;
};

inline CheckResult make_check(std::string name, double residual, double tol, bool lower_bound = false) {
  CheckResult c{std::move(name), residual, tol, lower_bound, false};
  c.pass = std::isfinite(residual) && (lower_bound ? residual >= tol : residual <= tol);
  return c;
}

enum class Suite { Quick, Full };

struct VerifyOptions {
  Suite suite = Suite::Quick;
  std::uint64_t seed = 20240611;
  std::optional<double> tolerance;  // overrides every tolerance when set
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
};

inline void print_report(const VerifyReport& r, std::FILE* out = stdout) {
  std::fprintf(out, "%-44s %13s %13s  %s\n", "check", "residual", "tolerance", "result");
  for (const auto& c : r.checks)
    std::fprintf(out, "%-44s %13.4e %s%12.4e  %s\n", c.name.c_str(), c.residual, c.lower_bound ? ">" : "<", c.tolerance,
                 c.pass ? "PASS" : "FAIL");
  std::size_t passed = 0;
  for (const auto& c : r.checks) passed += c.pass;
  std::fprintf(out, "%zu/%zu checks passed\n", passed, r.checks.size());
}

namespace checks {

/// Max relative disagreement between the two velocity routes over `count` random states.
inline double thm_vs_ham(const Surface& s, std::size_t n, int count, Rng& rng, bool circulations = true) {
  const VortexModel m(s);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const VortexState st = random_state(s, n, rng, 0.1, circulations);
    const auto vt = velocities_thm(m, st);
    double vmax = 0.0, diff = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      vmax = std::max(vmax, std::abs(vt[k]));
      diff = std::max(diff, std::abs(vt[k] - velocity_ham(m, st, k)));
    }
    worst = std::max(worst, diff / std::max(vmax, 1e-12));
  }
  return worst;
}

/// |conj(h1(a)) + d/dzbar log lambda(a)| on the sphere: the self-induced velocity.
inline double sphere_self_term(int count, Rng& rng) {
  const Surface s = Surface::sphere();
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const SurfacePoint a = random_point(s, rng);
    worst = std::max(worst, std::abs(std::conj(robin_data(s, a).h1) + dzbar_log_lambda(s, a)));
  }
  return worst;
}

inline double green_symmetry(const Surface& s, int count, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const SurfacePoint a = random_point(s, rng), b = random_point(s, rng);
    if (geodesic_distance(s, a, b) < 1e-3) continue;
    worst = std::max(worst, std::abs(green(s, a, b).value - green(s, b, a).value));
  }
  return worst;
}

inline double sphere_normalization(const SurfacePoint& a) {
  const Surface s = Surface::sphere();
  auto f = [&](const SurfacePoint& z) {
    if (geodesic_distance(s, z, a) < 1e-14) return 0.0;
    return green(s, z, a).value;
  };
  return std::abs(oracle::sphere_quadrature(f, 1e-9, {a}));
}

inline double torus_normalization(cplx tau, cplx a) {
  const Surface s = Surface::flat_torus(tau);
  auto f = [&](cplx z) {
    const cplx d = reduce_centered(tau, z - a);
    if (std::abs(d) < 1e-14) return 0.0;
    return green(s, SurfacePoint{0, z}, SurfacePoint{0, a}).value;
  };
  return std::abs(oracle::torus_quadrature(f, tau, a));
}

/// h0 and h1 against the limit of the regular part 2 pi G + log|z - a| as z -> a.
inline double robin_regular_part(const Surface& s, int count, Rng& rng) {
  using std::numbers::pi;
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const SurfacePoint a = random_point(s, rng);
    const RobinData r = robin_data(s, a);
    auto reg = [&](cplx z) { return green_regular_part(s, SurfacePoint{a.chart, z}, a); };
    // the 8-point circle mean cancels every angular mode below the 8th
    const double eps = 1e-3;
    double h0 = 0.0;
    for (int k = 0; k < 8; ++k) h0 += reg(a.coord + std::polar(eps, k * pi / 4)) / 8.0;
    h0 -= r.h11 * eps * eps;
    // Re(h1 d) along d = t and d = i t
    const double re = oracle::richardson_derivative([&](double t) { return reg(a.coord + t); }, 0.0, 2e-3);
    const double im = -oracle::richardson_derivative([&](double t) { return reg(a.coord + cplx(0.0, t)); }, 0.0, 2e-3);
    worst = std::max({worst, std::abs(h0 - r.h0), std::abs(cplx(re, im) - r.h1)});
  }
  return worst;
}

/// Transformation laws of h0, h1, h11 and dh1/da - 2 h2 under w = 1/z.
inline double robin_transformation(int count, Rng& rng) {
  const Surface s = Surface::sphere();
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const double r = std::exp(uniform(rng, std::log(0.5), std::log(2.0)));
    const SurfacePoint a{0, std::polar(r, uniform(rng, 0.0, 2.0 * std::numbers::pi))};
    const Transition t = transition(s, a, 1);
    const TransitionJet& j = t.jet;
    const RobinData h = robin_data(s, a), ht = robin_data(s, t.point);
    const double e0 = std::abs(ht.h0 - (h.h0 + std::log(std::abs(j.phi1))));
    const cplx e1 = ht.h1 * j.phi1 - (h.h1 + 0.5 * bracket(j, 1));
    const double e11 = std::abs(ht.h11 * std::norm(j.phi1) - h.h11);
    auto proj = [&](const SurfacePoint& p) {
      const auto d = oracle::wirtinger([&](cplx z) { return robin_data(s, SurfacePoint{p.chart, z}).h1; }, p.coord, 1e-4);
      return d.dz - 2.0 * robin_data(s, p).h2;
    };
    const cplx e2 = proj(t.point) * j.phi1 * j.phi1 - (proj(a) + bracket(j, 2) / 6.0);
    worst = std::max({worst, e0, std::abs(e1), e11, std::abs(e2)});
  }
  return worst;
}

inline TransitionJet random_jet(Rng& rng) {
  auto c = [&] { return cplx(uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5)); };
  TransitionJet j{c(), c(), c()};
  if (std::abs(j.phi1) < 0.3) j.phi1 += 1.0;
  return j;
}

inline double bracket_chain_rules(int count, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const TransitionJet f = random_jet(rng), g = random_jet(rng);
    const TransitionJet fg = compose(f, g);
    for (int k = 0; k <= 2; ++k) worst = std::max(worst, chain_check(f, g, fg, k) / (1.0 + std::abs(bracket(fg, k))));
  }
  return worst;
}

/// Schwarzian of a Moebius map (az+b)/(cz+d), jet taken at a random point.
inline double mobius_schwarzian(int count, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    auto c = [&] { return cplx(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)); };
    const cplx a = c(), b = c(), cc = c(), d = c(), z = c();
    const cplx det = a * d - b * cc;
    if (std::abs(det) < 0.2 || std::abs(cc * z + d) < 0.2) continue;
    const cplx den = cc * z + d;
    const TransitionJet j{det / (den * den), -2.0 * cc * det / (den * den * den), 6.0 * cc * cc * det / (den * den * den * den)};
    worst = std::max(worst, std::abs(bracket(j, 2)) / (1.0 + std::norm(cc / den)));
  }
  return worst;
}

/// Period relations by numerical contour integration along alpha = [0,1] and beta = [0,tau].
inline double period_relations(cplx tau) {
  const Surface s = Surface::flat_torus(tau);
  const PeriodBasis b = build_basis(s);
  auto on = [&](const HarmonicForm& f, cplx span) {
    return oracle::line_integral([&](cplx, cplx v) { return f(v); }, cplx(0.3, 0.2), span, 64, false);
  };
  const double e = std::max({std::abs(on(-1.0 * b.dU_beta[0], 1.0) - 1.0), std::abs(on(-1.0 * b.dU_beta[0], tau)),
                             std::abs(on(b.dU_alpha[0], 1.0)), std::abs(on(b.dU_alpha[0], tau) - 1.0)});
  return e;
}

inline double period_matrix_asymmetry(cplx tau) {
  const PeriodBasis b = build_basis(Surface::flat_torus(tau));
  return (b.period_matrix - b.period_matrix.transpose()).cwiseAbs().maxCoeff();
}

inline double period_matrix_min_eigenvalue(cplx tau) {
  const PeriodBasis b = build_basis(Surface::flat_torus(tau));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.period_matrix);
  return es.eigenvalues().minCoeff();
}

/// (1/2pi) oint *dV(., w; a, b) along alpha and beta against U(a) - U(b), the
/// potentials continued along a path that avoids the cycle.
inline double conjugate_periods(cplx tau, int count, Rng& rng) {
  using std::numbers::pi;
  const Surface s = Surface::flat_torus(tau);
  const PeriodBasis basis = build_basis(s);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const SurfacePoint a = random_point(s, rng), b = random_point(s, rng);
    if (geodesic_distance(s, a, b) < 0.1) { --i; continue; }
    auto [xa, ya] = lattice_coords(tau, a.coord);
    auto [xb, yb] = lattice_coords(tau, b.coord);
    const double y0 = detail::widest_gap_midpoint({ya, yb});
    const double x0 = detail::widest_gap_midpoint({xa, xb});
    // star dV(z)(v) with dV = 2 pi d(G(., a) - G(., b)); the w-terms are constant in z.
    auto star_dv = [&](cplx z, cplx v) {
      const cplx g = green(s, SurfacePoint{0, z}, a).grad_z - green(s, SurfacePoint{0, z}, b).grad_z;
      const double gx = 2.0 * g.real(), gy = -2.0 * g.imag();
      return 2.0 * pi * (gx * v.imag() - gy * v.real());
    };
    const double lhs_a = oracle::line_integral(star_dv, y0 * tau, 1.0, 512, true) / (2.0 * pi);
    const double lhs_b = oracle::line_integral(star_dv, cplx(x0, 0.0), tau, 512, true) / (2.0 * pi);
    // endpoints lifted into the strip cut open along the cycle; the form is exact there
    auto lift_y = [&](cplx z, double yp) { return yp < y0 ? z + tau : z; };
    auto lift_x = [&](cplx z, double xp) { return xp < x0 ? z + 1.0 : z; };
    const cplx pa = lift_y(a.coord, ya), pb = lift_y(b.coord, yb);
    const cplx qa = lift_x(a.coord, xa), qb = lift_x(b.coord, xb);
    const HarmonicForm dua = basis.dU_alpha[0], dub = basis.dU_beta[0];
    const double rhs_a = oracle::line_integral([&](cplx, cplx v) { return dua(v); }, pb, pa - pb, 20, false);
    const double rhs_b = oracle::line_integral([&](cplx, cplx v) { return dub(v); }, qb, qa - qb, 20, false);
    worst = std::max({worst, std::abs(lhs_a - rhs_a), std::abs(lhs_b - rhs_b)});
  }
  return worst;
}

inline double kelvin_readout(cplx tau, int count, Rng& rng) {
  const Surface s = Surface::flat_torus(tau);
  const VortexModel m(s);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    VortexState st = random_state(s, 4, rng);
    for (auto& wd : st.windings) wd = {static_cast<long>(uniform(rng, -3, 3)), static_cast<long>(uniform(rng, -3, 3))};
    const auto c = reconstruct_circulations(m, st);
    worst = std::max({worst, std::abs(c.a[0] - st.base_a[0]), std::abs(c.b[0] - st.base_b[0])});
  }
  return worst;
}

/// Velocity in chart 0 vs chart 1: lambda~^2 v~ conj(phi') = lambda^2 v.
inline double chart_covariance(int count, Rng& rng) {
  const Surface s = Surface::sphere();
  const VortexModel m(s);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    VortexState st = random_state(s, 3, rng);
    const std::size_t k = 0;
    SurfacePoint p0 = st.positions[k];
    if (p0.chart != 0) p0 = transition(s, p0, 0).point;
    if (std::abs(p0.coord) < 0.2 || std::abs(p0.coord) > 5.0) { --i; continue; }
    st.positions[k] = p0;
    const cplx v0 = velocity_thm(m, st, k);
    const Transition t = transition(s, p0, 1);
    VortexState st1 = st;
    st1.positions[k] = t.point;
    const cplx v1 = velocity_thm(m, st1, k);
    const double l0 = lambda(s, p0), l1 = lambda(s, t.point);
    const cplx lhs = l1 * l1 * v1 * std::conj(t.jet.phi1), rhs = l0 * l0 * v0;
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-12));
  }
  return worst;
}

/// velocity(-Gamma, -a, -b) + velocity(Gamma, a, b).
inline double strength_reversal(const Surface& s, int count, Rng& rng) {
  const VortexModel m(s);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const VortexState st = random_state(s, 4, rng);
    VortexState neg = st;
    for (double& g : neg.strengths) g = -g;
    for (double& a : neg.base_a) a = -a;
    for (double& b : neg.base_b) b = -b;
    const auto v = velocities_thm(m, st), vn = velocities_thm(m, neg);
    for (std::size_t k = 0; k < v.size(); ++k) worst = std::max(worst, std::abs(v[k] + vn[k]) / std::max(std::abs(v[k]), 1e-12));
  }
  return worst;
}

/// Relative disagreement of the spectral Poisson solution with green() for a
/// Gaussian-mollified delta, outside 6 sigma of the pole.
inline double spectral_oracle(cplx tau, int n) {
  const Surface s = Surface::flat_torus(tau);
  const double sigma = 3.0 * std::max(1.0, std::abs(tau)) / n;  // 3 cells along the coarser lattice direction
  const cplx a = 0.5 + 0.5 * tau;
  oracle::TorusGrid src = oracle::gaussian_delta(tau, n, a, sigma);
  oracle::remove_mean(src);
  const oracle::TorusGrid sol = oracle::torus_poisson_oracle(src);
  // away from the pole the mollified potential is exp(sigma^2 Laplace / 2) G = G + sigma^2 / (2 area)
  const double offset = sigma * sigma / (2.0 * s.area());
  double diff = 0.0, gmax = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const cplx z = sol.point(i, j);
      const cplx d = reduce_centered(tau, z - a);
      if (std::abs(d) < 6.0 * sigma) continue;
      const double g = green(s, SurfacePoint{0, z}, SurfacePoint{0, a}).value;
      diff = std::max(diff, std::abs(sol.at(i, j) - offset - g));
      gmax = std::max(gmax, std::abs(g));
    }
  return diff / gmax;
}

}  // namespace checks

/// The randomized cross-validation battery.
inline VerifyReport verify_suite(const VerifyOptions& opt) {
  Rng rng(opt.seed);
  const bool full = opt.suite == Suite::Full;
  const int n_states = full ? 50 : 10;
  const int n_points = full ? 200 : 50;
  auto tol = [&](double t) { return opt.tolerance.value_or(t); };
  const Surface sphere = Surface::sphere();
  const cplx tau_skew(0.5, 1.0);
  const Surface torus = Surface::flat_torus(tau_skew);
  VerifyReport r;
  auto add = [&](std::string name, double residual, double t, bool lower = false) {
    r.checks.push_back(make_check(std::move(name), residual, tol(t), lower));
  };

  add("green symmetry, sphere", checks::green_symmetry(sphere, n_points, rng), 1e-12);
  add("green symmetry, torus tau=1/2+i", checks::green_symmetry(torus, n_points, rng), 1e-12);
  add("green zero mean, sphere", checks::sphere_normalization(random_point(sphere, rng)), 1e-6);
  add("green zero mean, torus tau=1/2+i", checks::torus_normalization(tau_skew, random_point(torus, rng).coord), 1e-6);
  add("robin h0/h1 vs regular part, sphere", checks::robin_regular_part(sphere, full ? 20 : 5, rng), 1e-6);
  add("robin h0/h1 vs regular part, torus", checks::robin_regular_part(torus, full ? 20 : 5, rng), 1e-6);
  add("robin transformation laws, w=1/z", checks::robin_transformation(full ? 100 : 20, rng), 1e-8);
  add("bracket chain rules k=0,1,2", checks::bracket_chain_rules(full ? 200 : 50, rng), 1e-10);
  add("moebius schwarzian vanishes", checks::mobius_schwarzian(full ? 200 : 50, rng), 1e-10);
  for (cplx tau : {cplx(0, 1), tau_skew, cplx(0, 2)}) {
    char label[64];
    std::snprintf(label, sizeof label, "tau=%g%+gi", tau.real(), tau.imag());
    add(std::string("period relations, ") + label, checks::period_relations(tau), 1e-10);
    add(std::string("period matrix asymmetry, ") + label, checks::period_matrix_asymmetry(tau), 1e-12);
    add(std::string("period matrix min eigenvalue, ") + label, checks::period_matrix_min_eigenvalue(tau), 1e-12, true);
  }
  add("conjugate periods of V, torus", checks::conjugate_periods(tau_skew, full ? 20 : 5, rng), 1e-6);
  add("self-induced velocity, sphere", checks::sphere_self_term(n_points, rng), 1e-10);
  add("thm vs ham velocity, sphere n=2", checks::thm_vs_ham(sphere, 2, n_states, rng), 1e-6);
  add("thm vs ham velocity, sphere n=4", checks::thm_vs_ham(sphere, 4, n_states, rng), 1e-6);
  add("thm vs ham velocity, torus n=2", checks::thm_vs_ham(torus, 2, n_states, rng), 1e-6);
  add("thm vs ham velocity, torus n=4", checks::thm_vs_ham(torus, 4, n_states, rng), 1e-6);
  add("velocity chart covariance, sphere", checks::chart_covariance(n_states, rng), 1e-9);
  add("strength reversal, torus", checks::strength_reversal(torus, n_states, rng), 1e-12);
  add("kelvin readout, torus", checks::kelvin_readout(tau_skew, n_states, rng), 1e-8);
  if (full) add("spectral poisson oracle, tau=i, 256^2", checks::spectral_oracle(cplx(0, 1), 256), 1e-6);
  return r;
}

/// Checks for one scenario: per-vortex velocity residuals and, on the torus,
/// the Kelvin readout at the initial state.
inline VerifyReport verify_scenario(const ScenarioConfig& c, const VerifyOptions& opt) {
  VerifyReport r;
  const VortexModel m(c.surface, c.collision_threshold);
  const VortexState st = canonicalized(c.surface, c.state, c.integrator.handover_radius);
  const auto vt = velocities_thm(m, st);
  // relative to the fastest vortex, floored by the speed a unit-distance
  // neighbour induces, so equilibria (all velocities zero) are still testable
  double vmax = 0.0;
  for (const auto& v : vt) vmax = std::max(vmax, std::abs(v));
  for (double g : st.strengths) vmax = std::max(vmax, std::abs(g) / (4.0 * std::numbers::pi));
  const double vtol = opt.tolerance.value_or(c.tolerances.velocity_residual);
  for (std::size_t k = 0; k < st.size(); ++k)
    r.checks.push_back(make_check(c.name + ": velocity residual, vortex " + std::to_string(k + 1),
                                  std::abs(vt[k] - velocity_ham(m, st, k)) / vmax, vtol));
  if (c.surface.is_torus()) {
    const auto rec = reconstruct_circulations(m, st, c.integrator.kelvin_points > 0 ? c.integrator.kelvin_points : 512);
    const double e = std::max(std::abs(rec.a[0] - st.base_a[0]), std::abs(rec.b[0] - st.base_b[0]));
    r.checks.push_back(make_check(c.name + ": kelvin readout", e, opt.tolerance.value_or(c.tolerances.kelvin_drift)));
  }
  return r;
}

}  // namespace vortex
