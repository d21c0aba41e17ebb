#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "vortex/errors.hpp"
#include "vortex/surface.hpp"

namespace vortex {

/// Vortex positions, strengths and the fixed circulations a_k, b_k around the
/// homology basis. On the torus each position is reduced to the fundamental
/// domain and `windings` records how many lattice periods the vortex has been
/// carried through, so that multivalued potentials stay on a continuous branch.
struct VortexState {
  std::vector<SurfacePoint> positions;
  std::vector<double> strengths;
  std::vector<double> base_a;
  std::vector<double> base_b;
  std::vector<LatticeShift> windings;

  std::size_t size() const noexcept { return positions.size(); }
  friend bool operator==(const VortexState&, const VortexState&) = default;
};

inline constexpr double kStrengthSumTolerance = 1e-12;
inline constexpr double kDefaultCollisionThreshold = 1e-3;

inline void check_strength_sum(const std::vector<double>& strengths) {
  double sum = 0.0, scale = 1.0;
  for (double g : strengths) {
    sum += g;
    scale = std::max(scale, std::abs(g));
  }
  if (std::abs(sum) > kStrengthSumTolerance * scale)
    throw StrengthError("vortex strengths must sum to zero (net circulation constraint); sum = " +
                        std::to_string(sum));
}

/// Smallest pairwise geodesic separation.
inline double min_separation(const Surface& s, const VortexState& st) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < st.size(); ++i)
    for (std::size_t j = i + 1; j < st.size(); ++j)
      best = std::min(best, geodesic_distance(s, st.positions[i], st.positions[j]));
  return best;
}

inline void check_separation(const Surface& s, const VortexState& st, double threshold) {
  const double sep = min_separation(s, st);
  if (sep < threshold)
    throw CollisionError("vortex collision: separation " + std::to_string(sep) + " below threshold " +
                             std::to_string(threshold),
                         sep);
}

/// Throws unless the state satisfies every structural invariant.
inline void validate_state(const Surface& s, const VortexState& st,
                           double collision_threshold = kDefaultCollisionThreshold) {
  const std::size_t n = st.size();
  if (n < 2) throw DomainError("a vortex state needs at least two vortices");
  if (st.strengths.size() != n) throw DomainError("one strength per vortex is required");
  if (st.base_a.size() != static_cast<std::size_t>(s.genus()) ||
      st.base_b.size() != static_cast<std::size_t>(s.genus()))
    throw DomainError("base circulations must have one entry per handle (genus " +
                      std::to_string(s.genus()) + ")");
  if (!st.windings.empty() && st.windings.size() != n)
    throw DomainError("windings must be empty or one per vortex");
  for (const auto& p : st.positions) validate(s, p);
  for (double g : st.strengths) {
    if (!std::isfinite(g) || g == 0.0) throw StrengthError("vortex strengths must be finite and nonzero");
  }
  check_strength_sum(st.strengths);
  check_separation(s, st, collision_threshold);
}

inline LatticeShift winding_of(const VortexState& st, std::size_t j) {
  return st.windings.empty() ? LatticeShift{} : st.windings[j];
}

/// Position of vortex j on the continuous branch (torus: coord + m + n tau).
inline cplx lifted_coord(const Surface& s, const VortexState& st, std::size_t j) {
  if (!s.is_torus()) return st.positions[j].coord;
  return st.positions[j].coord + lattice_vector(s.tau(), winding_of(st, j));
}

/// Canonicalise every position (sphere chart handover, torus reduction with
/// winding bookkeeping).
inline VortexState canonicalized(const Surface& s, VortexState st, double handover_radius = 1.0) {
  if (s.is_torus() && st.windings.empty()) st.windings.assign(st.size(), {});
  for (std::size_t j = 0; j < st.size(); ++j) {
    if (s.is_torus()) {
      auto [red, shift] = reduce_to_domain(s.tau(), st.positions[j].coord);
      st.positions[j] = {0, red};
      st.windings[j].m += shift.m;
      st.windings[j].n += shift.n;
    } else {
      st.positions[j] = canonical(s, st.positions[j], handover_radius);
    }
  }
  return st;
}

}  // namespace vortex
