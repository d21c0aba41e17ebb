#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vortex/connection.hpp"
#include "vortex/oracles.hpp"
#include "vortex/sampling.hpp"
#include "vortex/surface.hpp"

using namespace vortex;
using std::numbers::pi;

namespace {

cplx rand_c(Rng& rng, double s = 1.5) { return {uniform(rng, -s, s), uniform(rng, -s, s)}; }

TransitionJet rand_jet(Rng& rng) {
  TransitionJet j{rand_c(rng), rand_c(rng), rand_c(rng)};
  if (std::abs(j.phi1) < 0.3) j.phi1 += 1.0;
  return j;
}

// Jet of a polynomial map a1 w + a2 w^2 + a3 w^3 at w.
TransitionJet poly_jet(cplx a1, cplx a2, cplx a3, cplx w) {
  return {a1 + 2.0 * a2 * w + 3.0 * a3 * w * w, 2.0 * a2 + 6.0 * a3 * w, 6.0 * a3};
}

// Jet of a Moebius map at z.
TransitionJet mobius_jet(cplx a, cplx b, cplx c, cplx d, cplx z) {
  const cplx den = c * z + d, det = a * d - b * c;
  return {det / (den * den), -2.0 * c * det / (den * den * den), 6.0 * c * c * det / (den * den * den * den)};
}

}  // namespace

TEST(Bracket, Identity) {
  for (int k = 0; k <= 2; ++k) EXPECT_EQ(bracket(TransitionJet::identity(), k), cplx(0.0, 0.0));
}

TEST(Bracket, AffineMap) {
  const TransitionJet j{{2.0, -1.0}, 0.0, 0.0};
  EXPECT_EQ(bracket(j, 1), cplx(0.0, 0.0));
  EXPECT_EQ(bracket(j, 2), cplx(0.0, 0.0));
  EXPECT_LT(std::abs(bracket(j, 0) - std::log(cplx(2.0, -1.0))), 1e-15);
}

TEST(Bracket, InversionAtOneHasNoSchwarzian) {
  const TransitionJet j{-1.0, 2.0, -6.0};
  EXPECT_EQ(bracket(j, 2), cplx(0.0, 0.0));
  EXPECT_EQ(bracket(j, 1), cplx(-2.0, 0.0));
}

TEST(Bracket, Errors) {
  EXPECT_THROW(bracket(TransitionJet{0.0, 1.0, 0.0}, 1), DomainError);
  EXPECT_THROW(bracket(TransitionJet::identity(), 3), DomainError);
}

TEST(Bracket, MobiusSchwarzianVanishes) {
  Rng rng(1);
  int tested = 0;
  while (tested < 500) {
    const cplx a = rand_c(rng, 2), b = rand_c(rng, 2), c = rand_c(rng, 2), d = rand_c(rng, 2), z = rand_c(rng, 2);
    if (std::abs(a * d - b * c) < 0.2 || std::abs(c * z + d) < 0.3) continue;
    const TransitionJet j = mobius_jet(a, b, c, d, z);
    const double scale = std::norm(j.phi2 / j.phi1) + 1.0;
    EXPECT_LT(std::abs(bracket(j, 2)) / scale, 1e-12);
    ++tested;
  }
}

TEST(Bracket, Antisymmetry) {
  // {z,w}_k (dw)^k = -{w,z}_k (dz)^k
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const TransitionJet j = rand_jet(rng), inv = inverse(j);
    for (int k = 1; k <= 2; ++k) {
      const cplx lhs = bracket(j, k);
      const cplx rhs = -bracket(inv, k) * std::pow(j.phi1, k);
      EXPECT_LT(std::abs(lhs - rhs) / (1.0 + std::abs(lhs)), 1e-10);
    }
    const cplx d0 = bracket(j, 0) + bracket(inv, 0);
    EXPECT_LT(std::abs(std::exp(d0) - 1.0), 1e-12);
  }
}

TEST(Inverse, ComposesToIdentity) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const TransitionJet j = rand_jet(rng);
    const TransitionJet id = compose(inverse(j), j);
    EXPECT_LT(std::abs(id.phi1 - 1.0), 1e-12);
    EXPECT_LT(std::abs(id.phi2), 1e-11);
    EXPECT_LT(std::abs(id.phi3), 1e-10);
  }
}

TEST(ChainCheck, IdentityComposition) {
  const TransitionJet id = TransitionJet::identity();
  for (int k = 0; k <= 2; ++k) EXPECT_EQ(chain_check(id, id, id, k), 0.0);
}

TEST(ChainCheck, MobiusComposition) {
  Rng rng(4);
  int tested = 0;
  while (tested < 100) {
    const cplx a = rand_c(rng), b = rand_c(rng), c = rand_c(rng), d = rand_c(rng);
    const cplx e = rand_c(rng), f = rand_c(rng), g = rand_c(rng), h = rand_c(rng), w = rand_c(rng);
    // inner u = (e w + f)/(g w + h), outer z = (a u + b)/(c u + d)
    if (std::abs(e * h - f * g) < 0.3 || std::abs(a * d - b * c) < 0.3 || std::abs(g * w + h) < 0.3) continue;
    const cplx u = (e * w + f) / (g * w + h);
    if (std::abs(c * u + d) < 0.3) continue;
    const TransitionJet inner = mobius_jet(e, f, g, h, w), outer = mobius_jet(a, b, c, d, u);
    // composite is the Moebius map of the matrix product
    const TransitionJet comp = mobius_jet(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, w);
    EXPECT_LT(chain_check(outer, inner, comp, 2), 1e-12 * (1.0 + std::norm(comp.phi2 / comp.phi1)));
    ++tested;
  }
}

TEST(ChainCheck, PolynomialMaps) {
  // composite jets by explicit expansion of the composed cubic polynomials
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const cplx a1 = 1.0 + rand_c(rng, 0.5), a2 = rand_c(rng, 0.5), a3 = rand_c(rng, 0.5);
    const cplx b1 = 1.0 + rand_c(rng, 0.5), b2 = rand_c(rng, 0.5), b3 = rand_c(rng, 0.5);
    const cplx w = rand_c(rng, 0.3);
    auto inner_f = [&](cplx x) { return b1 * x + b2 * x * x + b3 * x * x * x; };
    auto outer_f = [&](cplx x) { return a1 * x + a2 * x * x + a3 * x * x * x; };
    const cplx u = inner_f(w);
    const TransitionJet inner = poly_jet(b1, b2, b3, w), outer = poly_jet(a1, a2, a3, u);
    // composite derivatives from Taylor coefficients fitted by a contour integral
    auto c_k = [&](int k) {
      const cplx ck = oracle::circle_integral([&](cplx x) { return outer_f(inner_f(x)) / std::pow(x - w, k + 1); }, w, 0.1, 128);
      return ck / cplx(0.0, 2.0 * pi);
    };
    const TransitionJet comp{c_k(1), 2.0 * c_k(2), 6.0 * c_k(3)};
    if (std::abs(comp.phi1) < 0.2) continue;
    for (int k = 0; k <= 2; ++k)
      EXPECT_LT(chain_check(outer, inner, comp, k) / (1.0 + std::abs(bracket(comp, k))), 1e-10) << "k=" << k;
    // and the algebraic composition agrees with the expanded one
    const TransitionJet alg = compose(outer, inner);
    EXPECT_LT(std::abs(alg.phi3 - comp.phi3), 1e-9);
  }
}

TEST(TransformConnection, IdentityJet) {
  for (int k = 0; k <= 2; ++k) {
    const ConnectionValue c{k, {0.3, -0.2}};
    const ConnectionValue t = transform_connection(c, TransitionJet::identity());
    EXPECT_EQ(t.order, k);
    EXPECT_EQ(t.value, c.value);
  }
}

TEST(TransformConnection, ZeroConnectionUnderInversionAtTwo) {
  const Transition t = transition(Surface::sphere(), {0, {2.0, 0.0}}, 1);
  const ConnectionValue r = transform_connection({1, 0.0}, t.jet);
  EXPECT_LT(std::abs(r.value - (-4.0)), 1e-14);
}

TEST(TransformConnection, MetricConnectionAcrossCharts) {
  const Surface s = Surface::sphere();
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const SurfacePoint p{0, std::polar(uniform(rng, 0.3, 3.0), uniform(rng, 0.0, 2.0 * pi))};
    const Transition t = transition(s, p, 1);
    const ConnectionValue r = transform_connection({1, metric_connection(s, p)}, t.jet);
    EXPECT_LT(std::abs(r.value - metric_connection(s, t.point)), 1e-12 * (1.0 + std::abs(r.value)));
  }
}

TEST(TransformConnection, RoundTripAndCocycle) {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const TransitionJet a = rand_jet(rng), b = rand_jet(rng);
    for (int k = 0; k <= 2; ++k) {
      const ConnectionValue c{k, rand_c(rng)};
      const ConnectionValue back = transform_connection(transform_connection(c, a), inverse(a));
      EXPECT_TRUE(connection_equal(back, c, 1e-12)) << "k=" << k;
      // b after a equals the composition
      const ConnectionValue two = transform_connection(transform_connection(c, a), b);
      const ConnectionValue one = transform_connection(c, compose(b, a));
      EXPECT_TRUE(connection_equal(two, one, 1e-10 * (1.0 + std::abs(one.value)))) << "k=" << k;
    }
  }
}

TEST(ConnectionEqual, OrderZeroModuloTwoPiI) {
  EXPECT_TRUE(connection_equal({0, {0.4, 0.1}}, {0, {0.4, 0.1 + 2.0 * pi}}, 1e-12));
  EXPECT_FALSE(connection_equal({0, {0.4, 0.1}}, {0, {0.4, 0.1 + pi}}, 1e-12));
  EXPECT_FALSE(connection_equal({1, {0.4, 0.1}}, {1, {0.4, 0.1 + 2.0 * pi}}, 1e-12));
}

TEST(Curvature, TrivialCases) {
  EXPECT_EQ(curvature({1, 0.0}, 0.0).value, cplx(0.0, 0.0));
  EXPECT_EQ(curvature({1, metric_connection(Surface::flat_torus({0, 1}), {0, {0.2, 0.2}})}, 0.0).value, cplx(0.0, 0.0));
  EXPECT_THROW(curvature({2, 0.0}, 0.0), DomainError);
}

TEST(Curvature, SphereAgainstFiniteDifference) {
  // r = -2 zbar/(1+|z|^2); its holomorphic derivative holding zbar fixed is 2 zbar^2/(1+|z|^2)^2
  const Surface s = Surface::sphere();
  for (cplx z : {cplx(1.0, 0.0), cplx(0.3, -0.6), cplx(-0.8, 0.1)}) {
    const auto d = oracle::wirtinger([&](cplx w) { return metric_connection(s, {0, w}); }, z, 1e-4);
    const cplx analytic = 2.0 * std::conj(z) * std::conj(z) / std::pow(1.0 + std::norm(z), 2);
    EXPECT_LT(std::abs(d.dz - analytic), 1e-8);
    const ConnectionValue q = curvature({1, metric_connection(s, {0, z})}, d.dz);
    EXPECT_LT(std::abs(q.value - (analytic - 0.5 * std::pow(metric_connection(s, {0, z}), 2))), 1e-8);
  }
}

TEST(Covariant, TrivialCases) {
  const ConnectionValue r{1, {0.7, -0.3}};
  EXPECT_EQ(covariant_derivative({1.0, 2.0}, {0.5, 0.5}, 0.0, r), cplx(0.5, 0.5));
  EXPECT_EQ(covariant_derivative(0.0, {0.5, 0.5}, 1.5, r), cplx(0.5, 0.5));
  EXPECT_EQ(lambda2_operator({1.0, 1.0}, {0.2, 0.0}, {2, 0.0}), cplx(0.2, 0.0));
  EXPECT_EQ(lambda2_operator(0.0, {0.2, 0.0}, {2, {3.0, 1.0}}), cplx(0.2, 0.0));
}

TEST(Covariant, TransformsAsDifferential) {
  // phi a k-differential: phi~ phi'^k = phi. Check nabla_k phi is a (k+1)-differential
  // under polynomial changes of coordinate, using an explicit holomorphic phi and r.
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const cplx a1 = 1.0 + rand_c(rng, 0.4), a2 = rand_c(rng, 0.4), a3 = rand_c(rng, 0.4);
    const cplx z0 = rand_c(rng, 0.3);
    const double k = 0.5 * static_cast<int>(uniform(rng, -4, 5));
    auto phi = [](cplx z) { return std::exp(z) + z * z; };
    auto dphi = [](cplx z) { return std::exp(z) + 2.0 * z; };
    auto r = [](cplx z) { return cplx(0.3, 0.1) + z * z * z; };
    const TransitionJet j = poly_jet(a1, a2, a3, z0);
    const cplx val = covariant_derivative(phi(z0), dphi(z0), k, {1, r(z0)});
    // same quantities in the new chart at zt = map(z0)
    const cplx phi_t = phi(z0) / std::pow(j.phi1, k);
    // d/dzt phi~ = (dphi/dz phi'^-k - k phi phi'' phi'^{-k-1}) / phi'
    const cplx dphi_t = (dphi(z0) * std::pow(j.phi1, -k) - k * phi(z0) * j.phi2 * std::pow(j.phi1, -k - 1)) / j.phi1;
    const ConnectionValue r_t = transform_connection({1, r(z0)}, j);
    const cplx val_t = covariant_derivative(phi_t, dphi_t, k, r_t);
    EXPECT_LT(std::abs(val_t * std::pow(j.phi1, k + 1) - val), 1e-10 * (1.0 + std::abs(val)));
  }
}

TEST(Covariant, Lambda2FactorsThroughNabla) {
  // Lambda_2 = nabla_{1/2} nabla_{-1/2} when q = curvature(r)
  Rng rng(9);
  auto phi = [](cplx z) { return std::sin(z) + 0.3 * z; };
  auto r = [](cplx z) { return cplx(0.2, -0.4) * z * z + std::cos(z); };
  for (int i = 0; i < 100; ++i) {
    const cplx z = rand_c(rng, 0.8);
    auto inner = [&](cplx w) {
      const auto d = oracle::wirtinger(phi, w, 1e-3);
      return covariant_derivative(phi(w), d.dz, -0.5, {1, r(w)});
    };
    const cplx d_inner = oracle::wirtinger(inner, z, 1e-3).dz;
    const cplx outer = covariant_derivative(inner(z), d_inner, 0.5, {1, r(z)});
    const cplx dr = oracle::wirtinger(r, z, 1e-3).dz;
    const cplx d2phi = -std::sin(z);
    const cplx l2 = lambda2_operator(phi(z), d2phi, curvature({1, r(z)}, dr));
    EXPECT_LT(std::abs(outer - l2), 1e-7);
  }
}
