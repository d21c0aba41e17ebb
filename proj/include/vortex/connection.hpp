#pragma once

// Coordinate-change operators {z~, z}_k (k = 0, 1, 2), the gluing laws of
// 0-connections, affine connections and projective connections, and the
// covariant operators built from them.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "vortex/errors.hpp"

namespace vortex {

using cplx = std::complex<double>;

/// Derivatives phi', phi'', phi''' of a holomorphic change of coordinate at a point.
struct TransitionJet {
  cplx phi1{1.0, 0.0};
  cplx phi2{0.0, 0.0};
  cplx phi3{0.0, 0.0};

  static TransitionJet identity() { return {}; }
};

inline void check_jet(const TransitionJet& jet) {
  if (jet.phi1 == cplx(0.0, 0.0)) throw DomainError("transition jet: phi' must be nonzero");
}

/// Jet of the inverse map, at the image point.
inline TransitionJet inverse(const TransitionJet& j) {
  check_jet(j);
  const cplx p1 = j.phi1, p2 = j.phi2, p3 = j.phi3;
  return {1.0 / p1, -p2 / (p1 * p1 * p1),
          -p3 / (p1 * p1 * p1 * p1) + 3.0 * p2 * p2 / (p1 * p1 * p1 * p1 * p1)};
}

/// Jet of outer(inner(w)), given the jet of `inner` at w and of `outer` at inner(w).
inline TransitionJet compose(const TransitionJet& outer, const TransitionJet& inner) {
  const cplx g1 = inner.phi1, g2 = inner.phi2, g3 = inner.phi3;
  const cplx f1 = outer.phi1, f2 = outer.phi2, f3 = outer.phi3;
  return {f1 * g1, f2 * g1 * g1 + f1 * g2, f3 * g1 * g1 * g1 + 3.0 * f2 * g1 * g2 + f1 * g3};
}

/// {z~, z}_k: log phi' (principal branch), phi''/phi', or the Schwarzian derivative.
inline cplx bracket(const TransitionJet& jet, int k) {
  check_jet(jet);
  switch (k) {
    case 0:
      return std::log(jet.phi1);
    case 1:
      return jet.phi2 / jet.phi1;
    case 2: {
      const cplx r = jet.phi2 / jet.phi1;
      return jet.phi3 / jet.phi1 - 1.5 * r * r;
    }
    default:
      throw DomainError("bracket: order must be 0, 1 or 2");
  }
}

/// Coefficient of a 0-, affine (1-) or projective (2-) connection at a point.
struct ConnectionValue {
  int order = 1;
  cplx value{0.0, 0.0};
};

/// Order-0 values are defined modulo 2 pi i; compare through the exponential.
inline bool connection_equal(const ConnectionValue& a, const ConnectionValue& b, double tol) {
  if (a.order != b.order) return false;
  if (a.order == 0) return std::abs(std::exp(a.value) - std::exp(b.value)) <= tol * std::abs(std::exp(a.value));
  return std::abs(a.value - b.value) <= tol;
}

/// Re-express a connection coefficient in the new chart z~ = phi(z).
inline ConnectionValue transform_connection(const ConnectionValue& c, const TransitionJet& jet) {
  const cplx b = bracket(jet, c.order);
  switch (c.order) {
    case 0:
      return {0, c.value - b};
    case 1:
      return {1, (c.value - b) / jet.phi1};
    default:
      return {2, (c.value - b) / (jet.phi1 * jet.phi1)};
  }
}

/// Residual of the chain rule {z,w}_k (dw)^k = {z,u}_k (du)^k + {u,w}_k (dw)^k, in the w chart.
/// `outer` is the jet of z(u), `inner` the jet of u(w), `composite` the jet of z(w).
inline double chain_check(const TransitionJet& outer, const TransitionJet& inner,
                          const TransitionJet& composite, int k) {
  const cplx lhs = bracket(composite, k);
  const cplx rhs = bracket(outer, k) * std::pow(inner.phi1, k) + bracket(inner, k);
  if (k == 0) {
    // defined modulo 2 pi i
    const double two_pi = 2.0 * std::numbers::pi;
    double im = std::remainder((lhs - rhs).imag(), two_pi);
    return std::abs(cplx((lhs - rhs).real(), im));
  }
  return std::abs(lhs - rhs);
}

/// q = dr/dz - r^2/2, the projective connection induced by an affine one.
inline ConnectionValue curvature(const ConnectionValue& r, cplx dr_dz) {
  if (r.order != 1) throw DomainError("curvature: needs an affine (order 1) connection");
  return {2, dr_dz - 0.5 * r.value * r.value};
}

/// nabla_k phi = dphi/dz - k r phi, taking k-differentials to (k+1)-differentials.
inline cplx covariant_derivative(cplx phi, cplx dphi_dz, double k, const ConnectionValue& r) {
  if (r.order != 1) throw DomainError("covariant_derivative: needs an affine connection");
  return dphi_dz - k * r.value * phi;
}

/// Lambda_2 phi = d^2 phi/dz^2 + q phi / 2, from (-1/2)- to (3/2)-differentials.
inline cplx lambda2_operator(cplx phi, cplx d2phi, const ConnectionValue& q) {
  if (q.order != 2) throw DomainError("lambda2_operator: needs a projective connection");
  return d2phi + 0.5 * q.value * phi;
}

}  // namespace vortex
