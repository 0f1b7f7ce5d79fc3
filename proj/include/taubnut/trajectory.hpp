#pragma once

// Closed-form bound trajectories. Two equivalent time laws are provided:
//
//  * analytic: the deformed Kepler equation Omega t = psi - ecc_t sin(psi),
//    psi the eccentric anomaly with perihelion at psi = 0, where
//    ecc_t = (a/(eta+a)) eps is the time-law eccentricity;
//  * algebraic: the t(r) read off from the phase of the constants Q±, whose
//    principal-branch form is the analytic law with eps -> -eps (their
//    difference is pi - 2 arccos(u), see algebraic_analytic_correspondence).
//
// The algebraic origin (theta0 = 0) sits at aphelion, the analytic one at
// perihelion; physical passage times through a radius r are tau/2 -+ t_analytic(r).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "taubnut/errors.hpp"
#include "taubnut/sga.hpp"
#include "taubnut/types.hpp"

namespace taubnut {

inline constexpr double kArccosClampBand = 1e-12;   // slack before out-of-annulus
inline constexpr double kCircularBand = 1e-14;      // discriminant ~ 0 => circular
inline constexpr double kKeplerTol = 1e-13;         // Newton tolerance on psi
inline constexpr int kKeplerMaxIter = 64;

struct InversionPoints {
  double r_minus;
  double r_plus;
  bool circular;  // discriminant vanished within kCircularBand (relative)
};

struct OrbitGeometry {
  double a;        // semi-major axis K/(2|E|), K = k - eta |E|
  double eps;      // eccentricity of the spatial conic
  double p_orbit;  // semi-latus rectum l^2/(m K)
  double r_minus;
  double r_plus;
  double omega;    // radial frequency
  double tau;      // radial period 2 pi / omega
  double q0;       // |Q±| = sqrt(m/(2|E|)) K eps
};

struct EccentricAnomaly {
  double psi;
  std::int64_t winding;  // completed periods, floor(t / tau)
};

namespace detail {

inline double bound_abs_energy(Energy E, const SystemParams& par, const char* who) {
  par.validate();
  require_bound(E.value, par, who);
  return E.abs_value();
}

// K = k - eta |E| (the on-shell value of k - eta H).
inline double orbit_coupling(Energy E, const SystemParams& par, const char* who) {
  double K = par.k - par.eta * E.abs_value();
  if (!(K > 0.0))
    throw no_bound_orbit_error(std::string(who) + ": k - eta*|E| <= 0, no bound orbit");
  return K;
}

// Time-law eccentricity (a/(eta+a)) eps; the closed-form time laws are only
// valid where it stays below 1 (automatic for eta >= 0).
inline double time_law_eccentricity(const OrbitGeometry& g, const SystemParams& par,
                                    const char* who) {
  if (!(par.eta + g.a > 0.0))
    throw std::domain_error(std::string(who) + ": closed-form time law needs eta + a > 0");
  double ecc_t = g.a / (par.eta + g.a) * g.eps;
  if (!(ecc_t < 1.0))
    throw std::domain_error(std::string(who) +
                            ": time-law eccentricity (a/(eta+a))*eps >= 1, outside validity");
  return ecc_t;
}

// u = (1 - r/a)/eps with the documented clamp policy near the turning points.
inline double annulus_coordinate(double r, const OrbitGeometry& g, const char* who) {
  if (g.eps == 0.0)
    throw std::domain_error(std::string(who) + ": circular orbit, t(r) is degenerate");
  double u = (1.0 - r / g.a) / g.eps;
  if (std::fabs(u) > 1.0 + kArccosClampBand)
    throw out_of_annulus_error(std::string(who) + ": r outside [r_minus, r_plus]");
  return std::clamp(u, -1.0, 1.0);
}

}  // namespace detail

inline double frequency(Energy E, const SystemParams& par) {
  double ae = detail::bound_abs_energy(E, par, "frequency");
  return std::sqrt(2.0 / par.m) * 2.0 * ae * std::sqrt(ae) / (par.k + par.eta * ae);
}

inline InversionPoints inversion_points(Energy E, const SystemParams& par) {
  double ae = detail::bound_abs_energy(E, par, "inversion_points");
  double K = detail::orbit_coupling(E, par, "inversion_points");
  double a = K / (2.0 * ae);
  double rr = par.l * par.l / (2.0 * par.m * ae);  // r_minus * r_plus
  double disc = a * a - rr;
  if (disc < -kCircularBand * a * a)
    throw no_bound_orbit_error("inversion_points: discriminant < 0, no bound orbit at this l");
  if (disc <= kCircularBand * a * a) return {a, a, true};
  double r_plus = a + std::sqrt(disc);
  return {rr / r_plus, r_plus, false};
}

inline OrbitGeometry orbit_geometry(Energy E, const SystemParams& par) {
  double ae = detail::bound_abs_energy(E, par, "orbit_geometry");
  double K = detail::orbit_coupling(E, par, "orbit_geometry");
  InversionPoints inv = inversion_points(E, par);
  OrbitGeometry g{};
  g.a = K / (2.0 * ae);
  double eps2 = 1.0 - 2.0 * ae * par.l * par.l / (par.m * K * K);
  g.eps = inv.circular ? 0.0 : std::sqrt(std::max(0.0, eps2));
  g.p_orbit = par.l * par.l / (par.m * K);
  g.r_minus = inv.r_minus;
  g.r_plus = inv.r_plus;
  g.omega = frequency(E, par);
  g.tau = 2.0 * std::numbers::pi / g.omega;
  g.q0 = std::sqrt(par.m / (2.0 * ae)) * K * g.eps;
  return g;
}

// Principal-branch algebraic time law:
//   Omega t = arccos(-u) - (a/(eta+a)) eps sqrt(1-u^2) - theta0,  u = (1 - r/a)/eps.
// This is the "mirrored eccentricity" form; the physical passage times through
// r from the aphelion origin are t + 2 (a/(eta+a)) eps sqrt(1-u^2)/Omega and its
// period reflection (see passage_times_from_aphelion).
inline double time_of_radius_algebraic(double r, Energy E, double theta0,
                                       const SystemParams& par) {
  OrbitGeometry g = orbit_geometry(E, par);
  double ecc_t = detail::time_law_eccentricity(g, par, "time_of_radius_algebraic");
  double u = detail::annulus_coordinate(r, g, "time_of_radius_algebraic");
  return (std::acos(-u) - ecc_t * std::sqrt(1.0 - u * u) - theta0) / g.omega;
}

// Deformed Kepler equation, perihelion origin: t(psi) = (psi - ecc_t sin psi)/Omega.
inline double kepler_time(double psi, Energy E, const SystemParams& par) {
  OrbitGeometry g = orbit_geometry(E, par);
  double ecc_t = detail::time_law_eccentricity(g, par, "kepler_time");
  return (psi - ecc_t * std::sin(psi)) / g.omega;
}

namespace detail {

// Solve psi - e sin psi = M for M in [0, 2 pi], e in [0, 1): safeguarded
// Newton with a bisection bracket, monotone since 1 - e cos psi > 0.
inline double solve_kepler_core(double M, double e) {
  double lo = 0.0, hi = 2.0 * std::numbers::pi;
  double psi = M + e * std::sin(M);
  psi = std::clamp(psi, lo, hi);
  for (int it = 0; it < kKeplerMaxIter; ++it) {
    double g = psi - e * std::sin(psi) - M;
    if (g > 0.0)
      hi = psi;
    else
      lo = psi;
    double step = -g / (1.0 - e * std::cos(psi));
    double next = psi + step;
    if (!(next > lo) || !(next < hi)) {
      next = 0.5 * (lo + hi);  // Newton left the bracket
      step = next - psi;
    }
    psi = next;
    if (std::fabs(step) <= kKeplerTol) return psi;
  }
  throw convergence_error("solve_kepler: Newton/bisection did not reach 1e-13 in 64 iterations");
}

}  // namespace detail

inline EccentricAnomaly solve_kepler(double t, Energy E, const SystemParams& par) {
  OrbitGeometry g = orbit_geometry(E, par);
  double ecc_t = detail::time_law_eccentricity(g, par, "solve_kepler");
  double M = g.omega * t;
  double w = std::floor(M / (2.0 * std::numbers::pi));
  double Mf = M - 2.0 * std::numbers::pi * w;
  double psi = detail::solve_kepler_core(Mf, ecc_t);
  return {psi + 2.0 * std::numbers::pi * w, static_cast<std::int64_t>(w)};
}

// psi in [0, pi] with cos psi = (1 - r/a)/eps (outbound branch).
inline double eccentric_anomaly_of_radius(double r, Energy E, const SystemParams& par) {
  OrbitGeometry g = orbit_geometry(E, par);
  detail::time_law_eccentricity(g, par, "eccentric_anomaly_of_radius");
  return std::acos(detail::annulus_coordinate(r, g, "eccentric_anomaly_of_radius"));
}

// Anomaly for the orbit with constants (|E|, theta0) in the algebraic origin
// convention: theta0 = 0 puts aphelion at t = 0 (total phase Omega t + theta0 - pi).
inline EccentricAnomaly eccentric_anomaly_of_time(double t, Energy E, double theta0,
                                                  const SystemParams& par) {
  OrbitGeometry g = orbit_geometry(E, par);
  double ecc_t = detail::time_law_eccentricity(g, par, "eccentric_anomaly_of_time");
  double M = g.omega * t + theta0 - std::numbers::pi;
  double w = std::floor(M / (2.0 * std::numbers::pi));
  double Mf = M - 2.0 * std::numbers::pi * w;
  double psi = detail::solve_kepler_core(Mf, ecc_t);
  return {psi + 2.0 * std::numbers::pi * w, static_cast<std::int64_t>(w)};
}

// State at time t: r = a(1 - eps cos psi), r p = q0 sin psi.
inline RadialState radial_state_of_time(double t, Energy E, double theta0,
                                        const SystemParams& par) {
  OrbitGeometry g = orbit_geometry(E, par);
  double psi = eccentric_anomaly_of_time(t, E, theta0, par).psi;
  double r = g.a * (1.0 - g.eps * std::cos(psi));
  return {r, g.q0 * std::sin(psi) / r};
}

// Omega (t_algebraic - t_analytic) - (pi - 2 arccos(u)); identically zero, the
// two closed forms differ only by the arccos branch (eps -> -eps mirroring).
inline double algebraic_analytic_correspondence(double r, Energy E, const SystemParams& par) {
  OrbitGeometry g = orbit_geometry(E, par);
  double u = detail::annulus_coordinate(r, g, "algebraic_analytic_correspondence");
  double t_alg = time_of_radius_algebraic(r, E, 0.0, par);
  double t_ana = kepler_time(eccentric_anomaly_of_radius(r, E, par), E, par);
  return g.omega * (t_alg - t_ana) - (std::numbers::pi - 2.0 * std::acos(u));
}

struct PassagePair {
  double inbound;   // first crossing of r after aphelion (t = 0 at aphelion)
  double outbound;  // second crossing, tau/2 + t_analytic(r)
};

// Physical crossing times of radius r for the aphelion-origin trajectory;
// all crossings are these two plus integer multiples of tau.
inline PassagePair passage_times_from_aphelion(double r, Energy E, const SystemParams& par) {
  OrbitGeometry g = orbit_geometry(E, par);
  double t_ana = kepler_time(eccentric_anomaly_of_radius(r, E, par), E, par);
  return {0.5 * g.tau - t_ana, 0.5 * g.tau + t_ana};
}

}  // namespace taubnut
