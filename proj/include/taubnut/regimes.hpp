#pragma once

// Classification of the eta < 0 dynamics. With lambda = l^2/(2mk) and
// alpha = |eta|/lambda the effective potential factors as
//   V_eff(r) = -(k/r) (r - lambda) / (r - alpha lambda),
// singular at r = |eta| = alpha lambda. For alpha < 1 the line splits into an
// outer Kepler-like region (minimum at r_plus_crit) and an inner region that
// confines under the time-reversed Hamiltonian -H (maximum of V_eff at
// r_minus_crit). For alpha > 1 there are no stationary points, only an
// inflection inside (0, |eta|). At alpha = 1 exactly, V_eff = -k/r on the
// whole line and the two regions merge.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "taubnut/hamiltonian.hpp"
#include "taubnut/types.hpp"

namespace taubnut {

inline constexpr double kAlphaOneBand = 1e-12;  // |alpha - 1| below this is the marginal case

enum class RegimeCase { alpha_lt_1, alpha_eq_1, alpha_gt_1 };
enum class RadialRegion { outer, inner, whole_line };

struct RegimeReport {
  double alpha = 0.0;
  double lambda = 0.0;
  RegimeCase regime_case = RegimeCase::alpha_lt_1;
  RadialRegion region = RadialRegion::outer;
  bool bounded = false;
  bool time_reversed = false;  // true when the statement refers to the flow of -H
  std::vector<double> critical_radii;     // stationary points of V_eff, inner then outer
  std::vector<double> critical_energies;  // V_eff at those radii
  std::optional<double> inflection;       // inflection radius, only for alpha > 1
};

inline std::pair<double, double> alpha_ratio(const SystemParams& par) {
  par.validate();
  if (!(par.eta < 0.0)) throw std::domain_error("alpha_ratio: requires eta < 0");
  if (!(par.l > 0.0)) throw std::domain_error("alpha_ratio: requires l > 0");
  double lambda = par.l * par.l / (2.0 * par.m * par.k);
  return {lambda, -par.eta / lambda};
}

namespace detail {

inline RegimeCase regime_case_of(double alpha) {
  if (std::fabs(alpha - 1.0) <= kAlphaOneBand) return RegimeCase::alpha_eq_1;
  return alpha < 1.0 ? RegimeCase::alpha_lt_1 : RegimeCase::alpha_gt_1;
}

}  // namespace detail

// Stationary points of V_eff, lambda(1 -+ sqrt(1-alpha)): first inner, then outer.
inline std::pair<double, double> critical_points(const SystemParams& par) {
  auto [lambda, alpha] = alpha_ratio(par);
  if (detail::regime_case_of(alpha) != RegimeCase::alpha_lt_1)
    throw std::domain_error("critical_points: no real stationary points for alpha >= 1");
  double root = std::sqrt(1.0 - alpha);
  return {lambda * (1.0 - root), lambda * (1.0 + root)};
}

// V_eff at the outer minimum: -k / (lambda (1 + sqrt(1-alpha))^2). Closed
// outer orbits exist exactly for E between this value and 0.
inline double critical_energy_outer(const SystemParams& par) {
  auto [lambda, alpha] = alpha_ratio(par);
  if (detail::regime_case_of(alpha) != RegimeCase::alpha_lt_1)
    throw std::domain_error("critical_energy_outer: no stationary points for alpha >= 1");
  double one_plus = 1.0 + std::sqrt(1.0 - alpha);
  return -par.k / (lambda * one_plus * one_plus);
}

// Confining potential of the time-reversed inner system, -V_eff(r) on (0, |eta|).
inline double time_reversed_potential(double r, const SystemParams& par) {
  par.validate();
  if (!(par.eta < 0.0)) throw std::domain_error("time_reversed_potential: requires eta < 0");
  if (!(r > 0.0) || !(r < -par.eta))
    throw std::domain_error("time_reversed_potential: r must lie in (0, |eta|)");
  return -effective_potential_t(r, par);
}

// Inflection radius lambda (1 - (alpha-1)^{1/3} + (alpha-1)^{2/3}) for alpha > 1.
inline double inflection_point(const SystemParams& par) {
  auto [lambda, alpha] = alpha_ratio(par);
  if (detail::regime_case_of(alpha) != RegimeCase::alpha_gt_1)
    throw std::domain_error("inflection_point: requires alpha > 1");
  double c = std::cbrt(alpha - 1.0);
  return lambda * (1.0 - c + c * c);
}

// Region and boundedness for a state started at r0 with energy E. In the inner
// region E is read as the time-reversed energy (the flow of -H), matching how
// inner-region motion is integrated.
inline RegimeReport classify(Energy E, double r0, const SystemParams& par) {
  auto [lambda, alpha] = alpha_ratio(par);
  if (!(r0 > 0.0)) throw std::domain_error("classify: requires r0 > 0");
  RegimeReport rep{};
  rep.alpha = alpha;
  rep.lambda = lambda;
  rep.regime_case = detail::regime_case_of(alpha);

  if (rep.regime_case == RegimeCase::alpha_eq_1) {
    // V_eff = -k/r identically: no closed orbits, the split line disappears.
    rep.region = RadialRegion::whole_line;
    rep.bounded = false;
    return rep;
  }

  double wall = -par.eta;
  if (r0 == wall)
    throw std::domain_error("classify: r0 = |eta| sits on the singular boundary");
  rep.region = r0 < wall ? RadialRegion::inner : RadialRegion::outer;
  rep.time_reversed = (rep.region == RadialRegion::inner);

  if (rep.regime_case == RegimeCase::alpha_gt_1) {
    rep.inflection = inflection_point(par);
    rep.bounded = false;  // no stationary points on either side, nothing confines
    return rep;
  }

  auto [rc_in, rc_out] = critical_points(par);
  rep.critical_radii = {rc_in, rc_out};
  rep.critical_energies = {effective_potential(rc_in, par), effective_potential(rc_out, par)};
  if (rep.region == RadialRegion::outer) {
    rep.bounded = (rep.critical_energies[1] < E.value) && (E.value < 0.0);
  } else {
    // Confining well of -H: closed orbits for any energy above its minimum.
    rep.bounded = E.value > -rep.critical_energies[0];
  }
  return rep;
}

}  // namespace taubnut
