#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vortex/green.hpp"
#include "vortex/harmonic.hpp"
#include "vortex/oracles.hpp"
#include "vortex/sampling.hpp"
#include "vortex/verify.hpp"

using namespace vortex;
using std::numbers::pi;

TEST(Contour, ExactFormsIntegrateToZero) {
  auto dz = [](cplx, cplx v) { return v; };
  EXPECT_LT(std::abs(oracle::line_integral(dz, cplx(0.1, 0.2), cplx(0.0, 0.0), 64, true)), 1e-15);
  EXPECT_LT(std::abs(oracle::circle_integral([](cplx) { return cplx(1.0); }, cplx(0.3, -0.1), 0.7, 64)), 1e-14);
  const cplx res = oracle::circle_integral([](cplx z) { return 1.0 / z; }, 0.0, 0.5, 64);
  EXPECT_LT(std::abs(res - cplx(0.0, 2.0 * pi)), 1e-13);
}

TEST(Contour, HarmonicOneFormPeriods) {
  for (cplx tau : {cplx(0, 1), cplx(0.5, 1), cplx(-0.4, 2.1)}) {
    const PeriodBasis b = build_basis(Surface::flat_torus(tau));
    const HarmonicForm minus_dub{-b.dU_beta[0].cx, -b.dU_beta[0].cy};
    auto f = [&](cplx, cplx v) { return minus_dub(v); };
    EXPECT_NEAR(oracle::line_integral(f, 0.0, 1.0, 16, true), 1.0, 1e-14);
    EXPECT_NEAR(oracle::line_integral(f, 0.0, tau, 16, true), 0.0, 1e-14);
  }
}

TEST(Contour, TrapezoidDoublingConverges) {
  // conjugate period of dG along alpha away from the pole: smooth and periodic
  const Surface s = Surface::flat_torus({0.5, 1.0});
  const SurfacePoint a{0, {0.5, 0.5}};
  auto form = [&](cplx z, cplx v) {
    const cplx g = green(s, {0, z}, a).grad_z;
    return std::real(cplx(0.0, 2.0) * g * v);  // -*dG on v
  };
  const double i64 = oracle::line_integral(form, cplx(0.0, 0.0), 1.0, 64, true);
  const double i128 = oracle::line_integral(form, cplx(0.0, 0.0), 1.0, 128, true);
  EXPECT_LT(std::abs(i64 - i128), 1e-12);
}

TEST(Quadrature, GaussLegendreExactOnPolynomials) {
  EXPECT_NEAR(oracle::gauss_legendre([](double t) { return std::pow(t, 9); }, 0.0, 1.0, 1), 0.1, 1e-15);
  EXPECT_NEAR(oracle::gauss_legendre([](double t) { return std::exp(t); }, 0.0, 2.0, 4), std::exp(2.0) - 1.0, 1e-13);
}

TEST(Quadrature, SphereArea) {
  EXPECT_NEAR(oracle::sphere_quadrature([](const SurfacePoint&) { return 1.0; }), 4.0 * pi, 1e-9);
  // odd under the antipodal map
  auto height = [](const SurfacePoint& p) { return embed(p)[2]; };
  EXPECT_NEAR(oracle::sphere_quadrature(height), 0.0, 1e-9);
  auto x2 = [](const SurfacePoint& p) { return embed(p)[0] * embed(p)[0]; };
  EXPECT_NEAR(oracle::sphere_quadrature(x2), 4.0 * pi / 3.0, 1e-9);
}

TEST(Quadrature, TorusArea) {
  const cplx tau(0.3, 1.4);
  EXPECT_NEAR(oracle::torus_quadrature([](cplx) { return 1.0; }, tau), tau.imag(), 1e-13);
}

TEST(FiniteDifference, RichardsonOrder) {
  const double d = oracle::richardson_derivative([](double x) { return std::sin(x); }, 0.4, 1e-3);
  EXPECT_NEAR(d, std::cos(0.4), 1e-12);
  const auto w = oracle::wirtinger([](cplx z) { return z * z * std::conj(z); }, cplx(0.3, 0.2));
  const cplx z(0.3, 0.2);
  EXPECT_LT(std::abs(w.dz - 2.0 * z * std::conj(z)), 1e-10);
  EXPECT_LT(std::abs(w.dzbar - z * z), 1e-10);
}

TEST(Poisson, RejectsBadInput) {
  oracle::TorusGrid g{64, {0, 1}, std::vector<double>(64 * 64, 1.0)};
  EXPECT_THROW(oracle::torus_poisson_oracle(g), DomainError);
  oracle::TorusGrid small{32, {0, 1}, std::vector<double>(32 * 32, 0.0)};
  EXPECT_THROW(oracle::torus_poisson_oracle(small), DomainError);
  oracle::TorusGrid odd{96, {0, 1}, std::vector<double>(96 * 96, 0.0)};
  EXPECT_THROW(oracle::torus_poisson_oracle(odd), DomainError);
}

TEST(Poisson, ZeroSourceGivesZero) {
  oracle::TorusGrid g{64, {0.5, 1}, std::vector<double>(64 * 64, 0.0)};
  for (double v : oracle::torus_poisson_oracle(g).data) EXPECT_EQ(v, 0.0);
}

TEST(Poisson, SingleModeExact) {
  // u = cos(2 pi y') has -Laplace u = (2 pi / Im tau)^2 u
  const cplx tau(0.5, 1.2);
  const int n = 64;
  oracle::TorusGrid src{n, tau, std::vector<double>(n * n)};
  const double k2 = std::pow(2.0 * pi / tau.imag(), 2);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) src.at(i, j) = k2 * std::cos(2.0 * pi * j / n);
  const auto u = oracle::torus_poisson_oracle(src);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) EXPECT_NEAR(u.at(i, j), std::cos(2.0 * pi * j / n), 1e-13);
}

TEST(Poisson, DipoleMatchesFundamentalPotential) {
  // source delta_a - delta_b; the mollifier offsets cancel, and up to a constant
  // the potential is G(z, a) - G(z, b) = V(z, w; a, b) / (2 pi) + const
  const cplx tau(0.0, 1.0);
  const Surface s = Surface::flat_torus(tau);
  const int n = 256;
  const double sigma = 3.0 / n;
  const cplx a(0.3, 0.3), b(0.7, 0.6);
  auto src = oracle::gaussian_delta(tau, n, a, sigma);
  const auto neg = oracle::gaussian_delta(tau, n, b, sigma);
  for (std::size_t k = 0; k < src.data.size(); ++k) src.data[k] -= neg.data[k];
  oracle::remove_mean(src);
  const auto u = oracle::torus_poisson_oracle(src);
  const SurfacePoint w{0, {0.05, 0.9}};
  std::vector<double> diff;
  double umax = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const cplx z = u.point(i, j);
      if (std::abs(reduce_centered(tau, z - a)) < 6 * sigma || std::abs(reduce_centered(tau, z - b)) < 6 * sigma) continue;
      if (std::abs(reduce_centered(tau, z - w.coord)) < 1e-3) continue;
      const double v = fundamental_potential(s, {0, z}, w, {0, a}, {0, b}) / (2.0 * pi);
      diff.push_back(u.at(i, j) - v);
      umax = std::max(umax, std::abs(u.at(i, j)));
    }
  const auto [lo, hi] = std::minmax_element(diff.begin(), diff.end());
  EXPECT_LT((*hi - *lo) / umax, 1e-6);
}

TEST(Poisson, SelfConvergence) {
  const cplx tau(0.5, 1.0);
  const double r128 = checks::spectral_oracle(tau, 128);
  const double r256 = checks::spectral_oracle(tau, 256);
  EXPECT_LT(r256, 1e-6);
  EXPECT_LT(r128, 1e-5);
}
