#pragma once

// Canonical harmonic differentials of the flat torus and the circulation
// bookkeeping of the harmonic part eta of the flow.
//
// With tau = t1 + i t2, alpha = [0, 1] and beta = [0, tau]:
//   dU_alpha = dy / t2                (U_alpha = y',   U*_alpha = -x / t2)
//   dU_beta  = -dx + (t1/t2) dy       (U_beta  = -x',  U*_beta  = -y - (t1/t2) x)
// where z = x' + y' tau. The sphere has genus 0 and an empty basis.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "vortex/errors.hpp"
#include "vortex/state.hpp"
#include "vortex/surface.hpp"

namespace vortex {

/// Real constant-coefficient 1-form cx dx + cy dy on the torus chart.
struct HarmonicForm {
  double cx = 0.0;
  double cy = 0.0;

  /// Value on the tangent vector v = vx + i vy.
  double operator()(cplx v) const noexcept { return cx * v.real() + cy * v.imag(); }
  /// Hodge star: *dx = dy, *dy = -dx.
  HarmonicForm star() const noexcept { return {-cy, cx}; }
  /// Holomorphic component: the form is 2 Re(dz_coefficient() dz).
  cplx dz_coefficient() const noexcept { return 0.5 * cplx(cx, -cy); }

  friend HarmonicForm operator+(HarmonicForm a, HarmonicForm b) { return {a.cx + b.cx, a.cy + b.cy}; }
  friend HarmonicForm operator*(double s, HarmonicForm a) { return {s * a.cx, s * a.cy}; }
  friend bool operator==(const HarmonicForm&, const HarmonicForm&) = default;
};

/// Coefficient of dx ^ dy in a ^ b.
inline double wedge(const HarmonicForm& a, const HarmonicForm& b) { return a.cx * b.cy - a.cy * b.cx; }

struct PeriodBasis {
  int genus = 0;
  cplx tau{0.0, 1.0};
  std::vector<HarmonicForm> dU_alpha;
  std::vector<HarmonicForm> dU_beta;
  /// 2g x 2g matrix acting on (A_1..A_g, B_1..B_g).
  Eigen::MatrixXd period_matrix;
};

enum class CycleKind { Alpha, Beta };

inline PeriodBasis build_basis(const Surface& s) {
  PeriodBasis b;
  b.genus = s.genus();
  if (b.genus == 0) {
    b.period_matrix = Eigen::MatrixXd(0, 0);
    return b;
  }
  if (b.genus != 1) throw DomainError("build_basis: unsupported genus");
  const cplx tau = s.tau();
  const double t1 = tau.real(), t2 = tau.imag();
  b.tau = tau;
  b.dU_alpha = {HarmonicForm{0.0, 1.0 / t2}};
  b.dU_beta = {HarmonicForm{-1.0, t1 / t2}};
  // Line integrals of constant forms along alpha (vector 1) and beta (vector tau).
  const auto on_alpha = [](const HarmonicForm& f) { return f(cplx(1.0, 0.0)); };
  const auto on_beta = [tau](const HarmonicForm& f) { return f(tau); };
  const HarmonicForm sa = b.dU_alpha[0].star(), sb = b.dU_beta[0].star();
  b.period_matrix.resize(2, 2);
  b.period_matrix << -on_beta(sb), on_beta(sa), on_alpha(sb), -on_alpha(sa);
  return b;
}

struct UValue {
  double value = 0.0;        // branch value of U
  cplx grad{0.0, 0.0};       // dU/dz
  double conj_value = 0.0;   // harmonic conjugate U*, d(U*) = *dU
  cplx conj_grad{0.0, 0.0};  // dU*/dz
};

/// Multivalued potential U_alpha or U_beta of cycle `index` at the lifted coordinate z.
inline UValue multivalued_U(const PeriodBasis& b, int index, CycleKind kind, cplx z) {
  if (b.genus == 0) throw DomainError("multivalued_U: genus 0 has no harmonic potentials");
  if (index < 0 || index >= b.genus) throw DomainError("multivalued_U: cycle index out of range");
  const double t1 = b.tau.real(), t2 = b.tau.imag();
  const double x = z.real(), y = z.imag(), s = t1 / t2;
  UValue u;
  if (kind == CycleKind::Alpha) {
    u.value = y / t2;
    u.grad = b.dU_alpha[index].dz_coefficient();
    u.conj_value = -x / t2;
    u.conj_grad = b.dU_alpha[index].star().dz_coefficient();
  } else {
    u.value = -x + s * y;
    u.grad = b.dU_beta[index].dz_coefficient();
    u.conj_value = -y - s * x;
    u.conj_grad = b.dU_beta[index].star().dz_coefficient();
  }
  return u;
}

struct CirculationState {
  std::vector<double> base_a;
  std::vector<double> base_b;
  std::vector<double> A;
  std::vector<double> B;
};

/// A_k = a_k + sum_j Gamma_j U_alpha_k(z_j), B_k = b_k + sum_j Gamma_j U_beta_k(z_j),
/// using the lifted positions.
inline CirculationState circulation_state(const Surface& s, const PeriodBasis& b, const VortexState& st) {
  check_strength_sum(st.strengths);
  CirculationState c;
  c.base_a = st.base_a;
  c.base_b = st.base_b;
  if (b.genus == 0) return c;
  if (st.base_a.size() != static_cast<std::size_t>(b.genus) || st.base_b.size() != static_cast<std::size_t>(b.genus))
    throw DomainError("circulation_state: base circulations must match the genus");
  c.A = st.base_a;
  c.B = st.base_b;
  for (int k = 0; k < b.genus; ++k) {
    for (std::size_t j = 0; j < st.size(); ++j) {
      const cplx z = lifted_coord(s, st, j);
      c.A[k] += st.strengths[j] * multivalued_U(b, k, CycleKind::Alpha, z).value;
      c.B[k] += st.strengths[j] * multivalued_U(b, k, CycleKind::Beta, z).value;
    }
  }
  return c;
}

struct EtaForm {
  HarmonicForm eta;                   // -sum A_j dU_beta_j + sum B_j dU_alpha_j
  cplx dUstar_dz{0.0, 0.0};           // dU*/dz, constant on the flat torus
};

inline EtaForm eta_form(const PeriodBasis& b, const CirculationState& c) {
  EtaForm e;
  for (int j = 0; j < b.genus; ++j) {
    e.eta = e.eta + (-c.A[j]) * b.dU_beta[j] + c.B[j] * b.dU_alpha[j];
    e.dUstar_dz += -c.A[j] * b.dU_beta[j].star().dz_coefficient() + c.B[j] * b.dU_alpha[j].star().dz_coefficient();
  }
  return e;
}

/// U*(z) = sum_j (-A_j U*_beta_j + B_j U*_alpha_j) at the lifted coordinate z.
inline double eta_conjugate_potential(const PeriodBasis& b, const CirculationState& c, cplx z) {
  double v = 0.0;
  for (int j = 0; j < b.genus; ++j)
    v += -c.A[j] * multivalued_U(b, j, CycleKind::Beta, z).conj_value +
         c.B[j] * multivalued_U(b, j, CycleKind::Alpha, z).conj_value;
  return v;
}

inline Eigen::VectorXd circulation_vector(const CirculationState& c) {
  const auto g = static_cast<Eigen::Index>(c.A.size());
  Eigen::VectorXd v(2 * g);
  for (Eigen::Index k = 0; k < g; ++k) {
    v(k) = c.A[k];
    v(g + k) = c.B[k];
  }
  return v;
}

/// Energy int eta ^ *eta as the quadratic form (A, B) P (A, B)^T.
inline double eta_energy(const PeriodBasis& b, const CirculationState& c) {
  if (b.genus == 0) return 0.0;
  const Eigen::VectorXd v = circulation_vector(c);
  return v.dot(b.period_matrix * v);
}

}  // namespace vortex
