// A +-Gamma pair at z = +-rho on the sphere orbits the axis through the two
// points' midpoint circle. Prints the measured period next to the reduced one.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "vortex/vortex.hpp"

int main() {
  using namespace vortex;
  using std::numbers::pi;
  const double rho = 0.5, gamma = 1.0;
  const VortexModel model(Surface::sphere());
  VortexState st;
  st.positions = {{0, {rho, 0.0}}, {0, {-rho, 0.0}}};
  st.strengths = {gamma, -gamma};
  st.windings.assign(2, {});

  const double period = 16.0 * pi * pi * rho / (gamma * (1.0 + rho * rho));
  IntegratorOptions opt;
  opt.dt = period / 4000.0;
  opt.steps = 4000;
  opt.record_every = 500;
  for (const auto& r : integrate(model, st, opt)) {
    const auto x = embed(r.positions[0]);
    std::printf("t=%8.4f  X=(% .6f, % .6f, % .6f)  H=%.12f\n", r.time, x[0], x[1], x[2], r.hamiltonian);
  }
  std::printf("reduced period %.10f: the first vortex should be back at its start\n", period);
}
