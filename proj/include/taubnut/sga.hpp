#pragma once

// Spectrum-generating algebra of the deformed radial problem.
//
// On the level set H = const < 0 the complex ladder functions A± satisfy
//   {H, A±} = ∓ i alpha(H) A±,   {A+, A-} = i beta(H),
// so A± e^{∓ i alpha(H) t} are constants of motion (Q±). Their modulus and
// phase fix the orbit's size and orientation. All brackets here are computed
// by dual-number lifting, not finite differences.

#include <cmath>
#include <numbers>
#include <string>

#include "taubnut/dual.hpp"
#include "taubnut/errors.hpp"
#include "taubnut/hamiltonian.hpp"
#include "taubnut/types.hpp"

namespace taubnut {

inline constexpr double kCouplingPoleBand = 1e-9;  // reject |k - eta H| below this

struct ClosureCoefficients {
  double alpha;    // {H, A±} = ∓ i alpha A±; equals the radial frequency on shell
  double beta;     // {A+, A-} = i beta
  double gamma;    // A+ A- + gamma = -l^2
  double a0;       // third su(1,1) generator, A0 = -b
  double b;        // additive part of Re(A± e^{±i phase})
  double a_const;  // sqrt(2m), coefficient of r sqrt(-H)
};

struct LadderPair {
  cd plus;
  cd minus;
};

struct Su11Residuals {
  double a0_plus;     // |{A0, A+} + i A+|
  double a0_minus;    // |{A0, A-} - i A-|
  double plus_minus;  // |{A+, A-} - 2 i A0|
};

struct ClosureResiduals {
  double h_plus;           // |{H, A+} + i alpha(H) A+|
  double h_minus;          // |{H, A-} - i alpha(H) A-|
  double plus_minus_beta;  // |{A+, A-} - i beta(H)|
};

struct PolarConstants {
  double q0;      // |Q±|
  double theta0;  // arg Q+, normalized to (-pi, pi]
};

struct QConstants {
  cd q_plus;
  cd q_minus;
  PolarConstants polar;
};

namespace detail {

inline void require_bound(double H, const SystemParams& par, const char* who) {
  if (!(H < 0.0))
    throw unbound_energy_error(std::string(who) + ": requires a bound state (H < 0)");
  if (std::fabs(par.k - par.eta * H) <= kCouplingPoleBand)
    throw coupling_pole_error(std::string(who) + ": k - eta*H is within 1e-9 of its pole");
}

}  // namespace detail

// A0(H) = sqrt(m/2) (k + eta H) / sqrt(-H)
template <class S>
S ladder_zero_t(const S& H, const SystemParams& par) {
  return std::sqrt(par.m / 2.0) * (par.k + par.eta * H) / sqrt(-H);
}

// A± = (∓ i r p + r sqrt(2m) sqrt(-H) - A0(H)) e^{∓ i c_phase},
// c_phase = sqrt(2/m) r p sqrt(-H) / (k - eta H).
template <int Sign, class S>
cplx<S> ladder_t(const S& r, const S& p, const SystemParams& par) {
  static_assert(Sign == +1 || Sign == -1);
  S H = radial_hamiltonian_t(r, p, par);
  S root = sqrt(-H);
  S re = r * (std::sqrt(2.0 * par.m) * root) - ladder_zero_t(H, par);
  S im = (-Sign) * (r * p);
  S phase = (-Sign) * std::sqrt(2.0 / par.m) * r * p * root / (par.k - par.eta * H);
  return cplx<S>{re, im} * expi(phase);
}

namespace obs {

inline constexpr auto hamiltonian = [](const auto& r, const auto& p, const SystemParams& par) {
  return radial_hamiltonian_t(r, p, par);
};
inline constexpr auto ladder_plus = [](const auto& r, const auto& p, const SystemParams& par) {
  return ladder_t<+1>(r, p, par);
};
inline constexpr auto ladder_minus = [](const auto& r, const auto& p, const SystemParams& par) {
  return ladder_t<-1>(r, p, par);
};
inline constexpr auto ladder_zero = [](const auto& r, const auto& p, const SystemParams& par) {
  return ladder_zero_t(radial_hamiltonian_t(r, p, par), par);
};
inline constexpr auto radius = [](const auto& r, const auto&, const SystemParams&) { return r; };
inline constexpr auto momentum = [](const auto&, const auto& p, const SystemParams&) { return p; };

}  // namespace obs

namespace detail {

inline cd tangent_of(const dual& x) { return {x.d, 0.0}; }
inline cd tangent_of(const cplx<dual>& z) { return {z.re.d, z.im.d}; }

}  // namespace detail

// {F, G} = dF/dr dG/dp - dF/dp dG/dr at s. F, G are callables over a generic
// scalar (r, p, params) returning scalar or cplx.
template <class F, class G>
cd poisson_bracket(F&& f, G&& g, const RadialState& s, const SystemParams& par) {
  dual r_seed{s.r, 1.0}, r_const{s.r, 0.0};
  dual p_seed{s.p, 1.0}, p_const{s.p, 0.0};
  cd fr = detail::tangent_of(f(r_seed, p_const, par));
  cd fp = detail::tangent_of(f(r_const, p_seed, par));
  cd gr = detail::tangent_of(g(r_seed, p_const, par));
  cd gp = detail::tangent_of(g(r_const, p_seed, par));
  return fr * gp - fp * gr;
}

inline ClosureCoefficients closure_coefficients(Energy E, const SystemParams& par) {
  par.validate();
  detail::require_bound(E.value, par, "closure_coefficients");
  double H = E.value;
  double root = std::sqrt(-H);
  double kh = par.k + par.eta * H;
  ClosureCoefficients c{};
  c.a_const = std::sqrt(2.0 * par.m);
  c.a0 = std::sqrt(par.m / 2.0) * kh / root;
  c.b = -c.a0;
  c.gamma = par.m * kh * kh / (2.0 * H);
  c.alpha = -std::sqrt(2.0 / par.m) * 2.0 * H * root / (par.k - par.eta * H);
  c.beta = std::sqrt(2.0 * par.m) * kh / root;
  return c;
}

inline LadderPair ladder(const RadialState& s, const SystemParams& par) {
  double H = eval_radial_hamiltonian(s, par);
  detail::require_bound(H, par, "ladder");
  return {ladder_t<+1>(s.r, s.p, par), ladder_t<-1>(s.r, s.p, par)};
}

// |A+ A- + gamma(H) + l^2|; zero in exact arithmetic for any state, and
// equivalent to the polynomial identity r^2 p^2 - 2 m r (k + eta H) - 2 m r^2 H = -l^2.
inline double factorization_residual(const RadialState& s, const SystemParams& par) {
  double H = eval_radial_hamiltonian(s, par);
  detail::require_bound(H, par, "factorization_residual");
  LadderPair A = ladder(s, par);
  double gamma = par.m * (par.k + par.eta * H) * (par.k + par.eta * H) / (2.0 * H);
  cd res = A.plus * A.minus + cd{gamma + par.l * par.l, 0.0};
  return abs(res);
}

inline Su11Residuals verify_su11(const RadialState& s, const SystemParams& par) {
  double H = eval_radial_hamiltonian(s, par);
  detail::require_bound(H, par, "verify_su11");
  LadderPair A = ladder(s, par);
  double a0 = ladder_zero_t(H, par);
  cd i{0.0, 1.0};
  cd b_0p = poisson_bracket(obs::ladder_zero, obs::ladder_plus, s, par);
  cd b_0m = poisson_bracket(obs::ladder_zero, obs::ladder_minus, s, par);
  cd b_pm = poisson_bracket(obs::ladder_plus, obs::ladder_minus, s, par);
  return {abs(b_0p + i * A.plus), abs(b_0m - i * A.minus), abs(b_pm - cd{0.0, 2.0 * a0})};
}

inline ClosureResiduals closure_residuals(const RadialState& s, const SystemParams& par) {
  double H = eval_radial_hamiltonian(s, par);
  detail::require_bound(H, par, "closure_residuals");
  ClosureCoefficients c = closure_coefficients(Energy{H}, par);
  LadderPair A = ladder(s, par);
  cd i{0.0, 1.0};
  cd b_hp = poisson_bracket(obs::hamiltonian, obs::ladder_plus, s, par);
  cd b_hm = poisson_bracket(obs::hamiltonian, obs::ladder_minus, s, par);
  cd b_pm = poisson_bracket(obs::ladder_plus, obs::ladder_minus, s, par);
  return {abs(b_hp + c.alpha * (i * A.plus)), abs(b_hm - c.alpha * (i * A.minus)),
          abs(b_pm - cd{0.0, c.beta})};
}

// Constants of motion Q± = A± e^{∓ i alpha(H) t} for a state observed at time t.
inline QConstants q_constants(const RadialState& s, double t, const SystemParams& par) {
  double H = eval_radial_hamiltonian(s, par);
  detail::require_bound(H, par, "q_constants");
  ClosureCoefficients c = closure_coefficients(Energy{H}, par);
  LadderPair A = ladder(s, par);
  QConstants q{};
  q.q_plus = A.plus * expi(-c.alpha * t);
  q.q_minus = A.minus * expi(c.alpha * t);
  q.polar.q0 = abs(q.q_plus);
  double th = arg(q.q_plus);
  q.polar.theta0 = (th == -std::numbers::pi) ? std::numbers::pi : th;
  return q;
}

}  // namespace taubnut
