#pragma once

// Independent numerical machinery used to check the closed-form and
// series-based evaluators: contour integration, finite-difference jets,
// adaptive quadrature over the sphere and torus, and a spectral Poisson solver
// on the flat torus.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fftw3.h>

#include "vortex/errors.hpp"
#include "vortex/surface.hpp"

namespace vortex::oracle {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Contour integrals

/// Periodic trapezoid rule for a 1-periodic integrand on [0, 1).
template <class F>
auto periodic_trapezoid(F&& f, int n_points) {
  using R = decltype(f(0.0));
  R sum{};
  for (int k = 0; k < n_points; ++k) sum += f(static_cast<double>(k) / n_points);
  return sum / static_cast<double>(n_points);
}

/// Composite 20-point Gauss-Legendre rule on [a, b] with `panels` panels.
template <class F>
auto gauss_legendre(F&& f, double a, double b, int panels = 8) {
  using R = decltype(f(a));
  R sum{};
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    sum += boost::math::quadrature::gauss<double, 20>::integrate([&](double t) { return f(t); }, lo, lo + h);
  }
  return sum;
}

/// Integral of a 1-form along the straight path z(t) = start + t * span, t in [0, 1].
/// `form(z, v)` evaluates the form at z on the tangent vector v. Closed paths
/// (the integrand is periodic in t) use the trapezoid rule, open paths Gauss-Legendre.
template <class Form>
auto line_integral(Form&& form, cplx start, cplx span, int n_points, bool closed) {
  auto integrand = [&](double t) { return form(start + t * span, span); };
  if (closed) return periodic_trapezoid(integrand, n_points);
  return gauss_legendre(integrand, 0.0, 1.0, std::max(1, n_points / 20));
}

/// Integral of f(z) dz around the circle |z - center| = radius.
template <class F>
cplx circle_integral(F&& f, cplx center, double radius, int n_points) {
  using std::numbers::pi;
  return periodic_trapezoid(
      [&](double t) {
        const cplx e = std::polar(1.0, 2.0 * pi * t);
        return f(center + radius * e) * cplx(0.0, 2.0 * pi) * radius * e;
      },
      n_points);
}

// ---------------------------------------------------------------------------
// Finite differences

/// Central difference with one Richardson level: (4 D(h/2) - D(h)) / 3.
template <class F>
auto richardson_derivative(F&& f, double x, double h) {
  auto d = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

template <class T>
struct Wirtinger {
  T dz;
  T dzbar;
};

/// Wirtinger derivatives d/dz = (d_x - i d_y)/2, d/dzbar = (d_x + i d_y)/2 of f at z.
template <class F>
auto wirtinger(F&& f, cplx z, double h = 1e-5) {
  auto fx = [&](double t) { return static_cast<cplx>(f(z + cplx(t, 0.0))); };
  auto fy = [&](double t) { return static_cast<cplx>(f(z + cplx(0.0, t))); };
  const cplx dx = richardson_derivative(fx, 0.0, h);
  const cplx dy = richardson_derivative(fy, 0.0, h);
  return Wirtinger<cplx>{0.5 * (dx - cplx(0.0, 1.0) * dy), 0.5 * (dx + cplx(0.0, 1.0) * dy)};
}

// ---------------------------------------------------------------------------
// Adaptive quadrature

/// Adaptive Gauss-Kronrod on [a, b] split at every interior breakpoint.
template <class F>
double adaptive_integral(F&& f, double a, double b, std::vector<double> breaks, double tol,
                         unsigned max_depth = 18) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(a, breaks[i]), hi = std::min(b, breaks[i + 1]);
    if (!(hi > lo)) continue;
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, max_depth, tol, &err);
  }
  return total;
}

/// Integral of f over the unit sphere against the area form lambda^2 dx dy,
/// split into the two chart disks |z| <= 1. `singular` lists points where f may
/// have a logarithmic singularity; they become quadrature breakpoints.
template <class F>
double sphere_quadrature(F&& f, double tol = 1e-9, const std::vector<SurfacePoint>& singular = {}) {
  using std::numbers::pi;
  double total = 0.0;
  for (int chart = 0; chart < 2; ++chart) {
    std::vector<double> r_breaks, t_breaks;
    for (const auto& p : singular) {
      auto [num, den] = homogeneous(p, chart);
      if (std::abs(den) < 1e-300) continue;
      const cplx c = num / den;
      const double r = std::abs(c);
      if (r <= 1.0 + 1e-12) {
        r_breaks.push_back(std::min(r, 1.0));
        double t = std::arg(c);
        if (t < 0) t += 2.0 * pi;
        t_breaks.push_back(t);
      }
    }
    auto radial = [&](double r) {
      auto angular = [&](double t) { return f(SurfacePoint{chart, std::polar(r, t)}); };
      const double w = 4.0 * r / ((1.0 + r * r) * (1.0 + r * r));
      if (w == 0.0) return 0.0;
      return w * adaptive_integral(angular, 0.0, 2.0 * pi, t_breaks, tol * 0.1);
    };
    total += adaptive_integral(radial, 0.0, 1.0, r_breaks, tol);
  }
  return total;
}

/// Integral of f(z) over the torus fundamental domain against dx dy. The cell is
/// anchored at `corner` so a singularity there sits at the integration endpoints.
template <class F>
double torus_quadrature(F&& f, cplx tau, cplx corner = {}, double tol = 1e-10) {
  auto row = [&](double yp) {
    auto cell = [&](double xp) { return f(corner + xp + yp * tau); };
    return adaptive_integral(cell, 0.0, 1.0, {}, tol * 0.1);
  };
  return tau.imag() * adaptive_integral(row, 0.0, 1.0, {}, tol);
}

// ---------------------------------------------------------------------------
// Spectral Poisson solver on the flat torus

/// Grid of n x n values at the lattice points (i/n) + (j/n) tau, stored row-major
/// as data[j * n + i].
struct TorusGrid {
  int n = 0;
  cplx tau{0.0, 1.0};
  std::vector<double> data;

  double& at(int i, int j) { return data[static_cast<std::size_t>(j) * n + i]; }
  double at(int i, int j) const { return data[static_cast<std::size_t>(j) * n + i]; }
  cplx point(int i, int j) const { return static_cast<double>(i) / n + (static_cast<double>(j) / n) * tau; }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Solve -Laplace(u) = source on R^2 / (Z + tau Z) by discrete Fourier inversion.
/// The source must have zero mean; the returned potential has zero mean.
inline TorusGrid torus_poisson_oracle(const TorusGrid& source) {
  using std::numbers::pi;
  const int n = source.n;
  if (!is_power_of_two(n) || n < 64) throw DomainError("torus_poisson_oracle: grid size must be a power of two >= 64");
  if (source.data.size() != static_cast<std::size_t>(n) * n) throw DomainError("torus_poisson_oracle: grid size mismatch");
  double mean = 0.0, scale = 0.0;
  for (double v : source.data) {
    mean += v;
    scale = std::max(scale, std::abs(v));
  }
  mean /= static_cast<double>(source.data.size());
  if (std::abs(mean) > 1e-10 * std::max(scale, 1.0)) throw DomainError("torus_poisson_oracle: source mean must vanish");

  const std::size_t total = static_cast<std::size_t>(n) * n;
  fftw_complex* buf = fftw_alloc_complex(total);
  fftw_plan fwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan bwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  for (std::size_t k = 0; k < total; ++k) {
    buf[k][0] = source.data[k];
    buf[k][1] = 0.0;
  }
  fftw_execute(fwd);
  const double t1 = source.tau.real(), t2 = source.tau.imag();
  for (int j = 0; j < n; ++j) {
    const double ny = j <= n / 2 ? j : j - n;
    for (int i = 0; i < n; ++i) {
      const double mx = i <= n / 2 ? i : i - n;
      const std::size_t k = static_cast<std::size_t>(j) * n + i;
      if (i == 0 && j == 0) {
        buf[k][0] = buf[k][1] = 0.0;
        continue;
      }
      const double ky = (ny - t1 * mx) / t2;
      const double symbol = 4.0 * pi * pi * (mx * mx + ky * ky) * static_cast<double>(total);
      buf[k][0] /= symbol;
      buf[k][1] /= symbol;
    }
  }
  fftw_execute(bwd);
  TorusGrid out{n, source.tau, std::vector<double>(total)};
  for (std::size_t k = 0; k < total; ++k) out.data[k] = buf[k][0];
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
  fftw_free(buf);
  return out;
}

/// Periodised Gaussian of unit mass and width sigma centred at `a`, sampled on the grid.
inline TorusGrid gaussian_delta(cplx tau, int n, cplx a, double sigma) {
  using std::numbers::pi;
  TorusGrid g{n, tau, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
  const double norm = 1.0 / (2.0 * pi * sigma * sigma);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const cplx d = reduce_centered(tau, g.point(i, j) - a);
      double v = 0.0;
      for (long m = -1; m <= 1; ++m)
        for (long k = -1; k <= 1; ++k) v += std::exp(-std::norm(d + lattice_vector(tau, {m, k})) / (2.0 * sigma * sigma));
      g.at(i, j) = norm * v;
    }
  return g;
}

/// Subtract the grid mean (the uniform compensating background).
inline void remove_mean(TorusGrid& g) {
  double mean = 0.0;
  for (double v : g.data) mean += v;
  mean /= static_cast<double>(g.data.size());
  for (double& v : g.data) v -= mean;
}

}  // namespace vortex::oracle
