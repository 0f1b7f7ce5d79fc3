#pragma once

// Umbrella header: the eta-deformed Kepler (Taub-NUT) toolkit.

#include "taubnut/dual.hpp"
#include "taubnut/errors.hpp"
#include "taubnut/hamiltonian.hpp"
#include "taubnut/integrate.hpp"
#include "taubnut/orbits.hpp"
#include "taubnut/regimes.hpp"
#include "taubnut/sga.hpp"
#include "taubnut/trajectory.hpp"
#include "taubnut/types.hpp"
