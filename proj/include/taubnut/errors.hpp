#pragma once

#include <stdexcept>
#include <string>

namespace taubnut {

// r = 0 or r = -eta: the conformal factor or potential is singular there.
struct singular_point_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Operation needs a bound state (H < 0) but got H >= 0.
struct unbound_energy_error : std::domain_error {
  using std::domain_error::domain_error;
};

// No classical bound orbit at this (E, l): the radial discriminant is negative.
struct no_bound_orbit_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Radius outside the allowed annulus [r_minus, r_plus].
struct out_of_annulus_error : std::domain_error {
  using std::domain_error::domain_error;
};

// k - eta*H vanishes: the ladder phase and frequency blow up.
struct coupling_pole_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Iterative solver failed to reach tolerance within its iteration cap.
struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested radius is never crossed by the sampled trajectory.
struct no_crossing_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace taubnut
