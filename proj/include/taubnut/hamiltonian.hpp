#pragma once

// Eta-deformed Kepler Hamiltonian: a conformal factor r/(r+eta) multiplying
// the flat radial Kepler Hamiltonian, plus the 3D form it reduces from.
// The *_t templates accept dual scalars so derivatives come from the same
// expressions the double path evaluates.

#include <array>
#include <string>

#include "taubnut/dual.hpp"
#include "taubnut/errors.hpp"
#include "taubnut/types.hpp"

namespace taubnut {

template <class S>
constexpr S conformal_factor_t(const S& r, double eta) {
  return r / (r + eta);
}

template <class S>
constexpr S radial_hamiltonian_t(const S& r, const S& p, const SystemParams& par) {
  return conformal_factor_t(r, par.eta) *
         (p * p / (2.0 * par.m) + par.l * par.l / (2.0 * par.m * r * r) - par.k / r);
}

// V_eff(r) = l^2 / (2 m r (r+eta)) - k/(r+eta); H = K(r) p^2/(2m) + V_eff.
template <class S>
constexpr S effective_potential_t(const S& r, const SystemParams& par) {
  return par.l * par.l / (2.0 * par.m * r * (r + par.eta)) - par.k / (r + par.eta);
}

template <class S>
S hamiltonian_3d_t(const std::array<S, 3>& q, const std::array<S, 3>& p,
                   const SystemParams& par) {
  S r = sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
  S p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
  return r * p2 / (2.0 * par.m * (par.eta + r)) - par.k / (par.eta + r);
}

inline void require_regular_radius(double r, const SystemParams& par, const char* who) {
  if (!(r > 0.0)) throw singular_point_error(std::string(who) + ": requires r > 0");
  if (r + par.eta == 0.0)
    throw singular_point_error(std::string(who) + ": r = -eta is a pole of the metric factor");
}

inline double conformal_factor(double r, const SystemParams& par) {
  par.validate();
  require_regular_radius(r, par, "conformal_factor");
  return conformal_factor_t(r, par.eta);
}

inline double eval_radial_hamiltonian(const RadialState& s, const SystemParams& par) {
  par.validate();
  require_regular_radius(s.r, par, "eval_radial_hamiltonian");
  return radial_hamiltonian_t(s.r, s.p, par);
}

inline double effective_potential(double r, const SystemParams& par) {
  par.validate();
  require_regular_radius(r, par, "effective_potential");
  return effective_potential_t(r, par);
}

inline double eval_hamiltonian_3d(const PhasePoint3D& pt, const SystemParams& par) {
  par.validate();
  double r = norm(pt.q);
  require_regular_radius(r, par, "eval_hamiltonian_3d");
  return hamiltonian_3d_t<double>({pt.q.x, pt.q.y, pt.q.z}, {pt.p.x, pt.p.y, pt.p.z}, par);
}

inline Vec3 angular_momentum(const PhasePoint3D& pt) { return cross(pt.q, pt.p); }

// Deformed Runge-Lenz vector; conserved along the 3D flow. Note it points
// toward aphelion for bound orbits (perihelion axis is its negative).
inline Vec3 runge_lenz(const PhasePoint3D& pt, const SystemParams& par) {
  double H = eval_hamiltonian_3d(pt, par);
  const Vec3& q = pt.q;
  const Vec3& p = pt.p;
  Vec3 lxp = cross(cross(q, p), p);  // L x p = -p x L
  return (1.0 / par.m) * lxp + (par.eta * H + par.k) / norm(q) * q;
}

// |R|^2 - [(2 l^2 / m) H + (eta H + k)^2]; identically zero, even off shell.
inline double runge_lenz_norm2_residual(const PhasePoint3D& pt, const SystemParams& par) {
  double H = eval_hamiltonian_3d(pt, par);
  Vec3 R = runge_lenz(pt, par);
  double L2 = dot(angular_momentum(pt), angular_momentum(pt));
  double target = (2.0 * L2 / par.m) * H + (par.eta * H + par.k) * (par.eta * H + par.k);
  return dot(R, R) - target;
}

}  // namespace taubnut
