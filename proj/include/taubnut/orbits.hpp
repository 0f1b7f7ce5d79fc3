#pragma once

// Spatial orbit geometry. Bound orbits are closed conics
//   r(theta) = p_orbit / (1 + eps cos(theta - theta0)),
// exactly as in the flat Kepler problem but with K = k - eta |E| replacing k
// in the parameters. theta0 is the perihelion azimuth; note the conserved
// vector from runge_lenz() points toward aphelion, so the orbital frame puts
// its negative on the first axis to make theta0 = 0 the perihelion.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "taubnut/hamiltonian.hpp"
#include "taubnut/trajectory.hpp"
#include "taubnut/types.hpp"

namespace taubnut {

struct ConicOrbit {
  double p_orbit;  // semi-latus rectum
  double eps;      // eccentricity
  double theta0;   // perihelion azimuth
};

struct OrbitSample {
  double theta;
  double r;
  double x;
  double y;
};

struct OrbitalFrame {
  Vec3 e1;  // perihelion axis (minus the conserved vector direction)
  Vec3 e2;  // in-plane, e2 = n x e1
  Vec3 n;   // orbit normal, L/|L|
};

inline double orbit_radius(double theta, const ConicOrbit& orbit) {
  double denom = 1.0 + orbit.eps * std::cos(theta - orbit.theta0);
  if (!(denom > 0.0))
    throw std::domain_error("orbit_radius: 1 + eps cos(theta - theta0) <= 0 (unbound branch)");
  return orbit.p_orbit / denom;
}

inline ConicOrbit conic_from_energy(Energy E, double theta0, const SystemParams& par) {
  OrbitGeometry g = orbit_geometry(E, par);
  if (!(g.eps < 1.0))
    throw unbound_energy_error("conic_from_energy: eps >= 1, orbit is not an ellipse");
  return {g.p_orbit, g.eps, theta0};
}

inline std::vector<OrbitSample> trace_orbit(const ConicOrbit& orbit, int n) {
  if (n < 3) throw std::invalid_argument("trace_orbit: need at least 3 samples");
  std::vector<OrbitSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double theta = 2.0 * std::numbers::pi * i / n;
    double r = orbit_radius(theta, orbit);
    out.push_back({theta, r, r * std::cos(theta), r * std::sin(theta)});
  }
  return out;
}

// tau^2 / a^3 = 4 pi^2 m (k + eta |E|)^2 / (k - eta |E|)^3: energy-dependent,
// unlike the flat Kepler constant 4 pi^2 m / k it degenerates to at eta = 0.
inline double third_law_ratio(Energy E, const SystemParams& par) {
  double ae = detail::bound_abs_energy(E, par, "third_law_ratio");
  double K = detail::orbit_coupling(E, par, "third_law_ratio");
  double kh = par.k + par.eta * ae;
  return 4.0 * std::numbers::pi * std::numbers::pi * par.m * kh * kh / (K * K * K);
}

// Ratio minus its first-order expansion (4 pi^2 m / k)(1 + 5 eta |E| / k);
// the remainder is quadratic in eta with positive leading coefficient.
inline double third_law_expansion_residual(Energy E, const SystemParams& par) {
  double ae = detail::bound_abs_energy(E, par, "third_law_expansion_residual");
  detail::orbit_coupling(E, par, "third_law_expansion_residual");
  double x = par.eta * ae / par.k;
  if (!(std::fabs(x) < 0.5))
    throw std::domain_error("third_law_expansion_residual: |eta|*|E|/k must be < 0.5");
  double flat = 4.0 * std::numbers::pi * std::numbers::pi * par.m / par.k;
  return third_law_ratio(E, par) - flat * (1.0 + 5.0 * x);
}

// Orthonormal frame of the orbital plane for a bound, noncircular 3D state.
inline OrbitalFrame orbital_frame(const PhasePoint3D& pt, const SystemParams& par) {
  Vec3 L = angular_momentum(pt);
  double Lnorm = norm(L);
  if (!(Lnorm > 0.0)) throw std::domain_error("orbital_frame: degenerate orbit, |L| = 0");
  Vec3 R = runge_lenz(pt, par);
  double Rnorm = norm(R);
  if (!(Rnorm > 1e-12 * (par.k + std::fabs(par.eta))))
    throw std::domain_error("orbital_frame: near-circular orbit, perihelion axis undefined");
  OrbitalFrame f{};
  f.n = L / Lnorm;
  f.e1 = -1.0 * (R / Rnorm);
  f.e2 = cross(f.n, f.e1);
  return f;
}

// Azimuth of a spatial point in the frame, measured from the perihelion axis.
inline double frame_azimuth(const Vec3& q, const OrbitalFrame& f) {
  return std::atan2(dot(q, f.e2), dot(q, f.e1));
}

}  // namespace taubnut
