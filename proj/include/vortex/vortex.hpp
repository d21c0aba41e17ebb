#pragma once

#include "vortex/errors.hpp"
#include "vortex/theta.hpp"
#include "vortex/surface.hpp"
#include "vortex/connection.hpp"
#include "vortex/green.hpp"
#include "vortex/state.hpp"
#include "vortex/harmonic.hpp"
#include "vortex/oracles.hpp"
#include "vortex/dynamics.hpp"
#include "vortex/sampling.hpp"
#include "vortex/scenario.hpp"
#include "vortex/verify.hpp"
