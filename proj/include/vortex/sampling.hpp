#pragma once

// Random vortex configurations for the randomized checks.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "vortex/state.hpp"
#include "vortex/surface.hpp"

namespace vortex {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Uniform point on the surface, in canonical chart form.
inline SurfacePoint random_point(const Surface& s, Rng& rng) {
  if (s.is_sphere()) {
    std::normal_distribution<double> nd;
    std::array<double, 3> x{nd(rng), nd(rng), nd(rng)};
    const double r = std::hypot(x[0], x[1], x[2]);
    for (double& c : x) c /= r;
    return canonical(s, from_embedding(x));
  }
  const double xp = uniform(rng, 0.0, 1.0), yp = uniform(rng, 0.0, 1.0);
  return {0, xp + yp * s.tau()};
}

/// Signed strengths summing to zero, every |Gamma| at least 0.3.
inline std::vector<double> random_strengths(std::size_t n, Rng& rng) {
  for (;;) {
    std::vector<double> g(n);
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      g[j] = uniform(rng, 0.5, 1.5) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
      sum += g[j];
    }
    g[n - 1] = -sum;
    if (std::abs(g[n - 1]) < 0.3) continue;
    // exact cancellation: fold the rounding of the sum into the last entry
    double s2 = 0.0;
    for (double v : g) s2 += v;
    g[n - 1] -= s2;
    return g;
  }
}

/// n vortices with pairwise geodesic separation at least min_sep. On the torus
/// the base circulations are drawn from [-1, 1] when `circulations` is set.
inline VortexState random_state(const Surface& s, std::size_t n, Rng& rng, double min_sep = 0.1,
                                bool circulations = true) {
  VortexState st;
  while (st.positions.size() < n) {
    const SurfacePoint p = random_point(s, rng);
    bool ok = true;
    for (const auto& q : st.positions) ok = ok && geodesic_distance(s, p, q) >= min_sep;
    if (ok) st.positions.push_back(p);
  }
  st.strengths = random_strengths(n, rng);
  const auto g = static_cast<std::size_t>(s.genus());
  st.base_a.assign(g, 0.0);
  st.base_b.assign(g, 0.0);
  if (circulations)
    for (std::size_t k = 0; k < g; ++k) {
      st.base_a[k] = uniform(rng, -1.0, 1.0);
      st.base_b[k] = uniform(rng, -1.0, 1.0);
    }
  st.windings.assign(n, LatticeShift{});
  return st;
}

}  // namespace vortex
