#include <gtest/gtest.h>

#include <numbers>

#include "vortex/theta.hpp"

using namespace vortex;
using std::numbers::pi;

// Reference values from an arbitrary-precision evaluation of the theta series
// (q = exp(i pi tau)), rounded to 17 digits.
struct ThetaRef {
  cplx tau;
  cplx d1;        // theta_1'(0)
  cplx d3;        // theta_1'''(0)
  cplx at_point;  // theta_1(0.7 + 0.2i)
};

static const ThetaRef kRefs[] = {
    {{0.0, 1.0}, {0.90676765516773122, 0.0}, {-0.86589932733474982, 0.0}, {0.59749239911246945, 0.14096738808887222}},
    {{0.5, 1.0}, {0.84718353998536005, 0.3509149120811854}, {-0.8849409515981889, -0.36655454405132251},
     {0.50170385405353777, 0.35920971523158813}},
    {{0.0, 2.0}, {0.41575480301801431, 0.0}, {-0.41572000554993969, 0.0}, {0.27321258389841892, 0.064023329595495037}},
};

TEST(Theta, MatchesReferenceValues) {
  for (const auto& r : kRefs) {
    const ThetaJet at0 = theta1_jet(0.0, r.tau);
    EXPECT_LT(std::abs(at0.d1 - r.d1), 1e-14);
    EXPECT_LT(std::abs(at0.d3 - r.d3), 1e-14);
    EXPECT_LT(std::abs(theta1(cplx(0.7, 0.2), r.tau) - r.at_point), 1e-14);
  }
}

TEST(Theta, OddAndQuasiPeriodic) {
  const cplx tau(0.3, 0.9), u(0.4, -0.25);
  EXPECT_LT(std::abs(theta1(-u, tau) + theta1(u, tau)), 1e-15);
  // theta_1(u + pi) = -theta_1(u)
  EXPECT_LT(std::abs(theta1(u + pi, tau) + theta1(u, tau)), 1e-14);
  // theta_1(u + pi tau) = -q^{-1} e^{-2iu} theta_1(u)
  const cplx q = std::exp(cplx(0.0, pi) * tau);
  const cplx lhs = theta1(u + pi * tau, tau);
  const cplx rhs = -std::exp(cplx(0.0, -2.0) * u) / q * theta1(u, tau);
  EXPECT_LT(std::abs(lhs - rhs), 1e-13 * std::abs(rhs));
}

TEST(Theta, DerivativesMatchFiniteDifferences) {
  const cplx tau(0.5, 1.0), u(0.3, 0.2);
  const ThetaJet j = theta1_jet(u, tau);
  const double h = 1e-3;
  auto f = [&](cplx x) { return theta1(x, tau); };
  const cplx d1 = (f(u + h) - f(u - h)) / (2 * h);
  const cplx d2 = (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h);
  EXPECT_LT(std::abs(j.d1 - d1), 1e-6);
  EXPECT_LT(std::abs(j.d2 - d2), 1e-5);
  const cplx d3 = (theta1_jet(u + h, tau).d2 - theta1_jet(u - h, tau).d2) / (2 * h);
  EXPECT_LT(std::abs(j.d3 - d3), 1e-6);
}

TEST(Theta, TruncationIsConverged) {
  // five more terms than the working truncation change nothing at 1e-12
  for (cplx tau : {cplx(0, 1), cplx(0.5, 1), cplx(0, 2), cplx(0.2, 0.4)})
    for (cplx u : {cplx(0.3, 0.2), cplx(1.4, -0.6), cplx(-2.0, 0.9)}) {
      const ThetaJet base = theta1_jet(u, tau);
      ThetaOptions more;
      more.extra_terms = 5;
      const ThetaJet ext = theta1_jet(u, tau, more);
      EXPECT_EQ(ext.terms, base.terms + 5);
      EXPECT_LT(std::abs(ext.value - base.value), 1e-12 * std::max(1.0, std::abs(base.value)));
      EXPECT_GE(base.terms, 8);
    }
}
