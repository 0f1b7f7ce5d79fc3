#pragma once

// Shared helpers for the test suites (framework-free so the acceptance
// binary can use them too).

#include <cmath>
#include <random>
#include <stdexcept>

#include "taubnut/taubnut.hpp"

namespace testutil {

inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

// Random phase point with H < -0.05, clear of the k - eta*H pole, and (for
// eta < 0) in the outer region.
inline taubnut::RadialState random_bound_state(std::mt19937_64& g,
                                               const taubnut::SystemParams& par) {
  double r_lo = par.eta < 0.0 ? -par.eta * 1.25 + 0.01 : 0.1;
  for (int i = 0; i < 100000; ++i) {
    taubnut::RadialState s{uniform(g, r_lo, r_lo + 1.2), uniform(g, -1.5, 1.5)};
    double H = taubnut::eval_radial_hamiltonian(s, par);
    if (H < -0.05 && std::fabs(par.k - par.eta * H) > 1e-6) return s;
  }
  throw std::runtime_error("random_bound_state: sampling failed");
}

// Golden-section minimizer, the independent oracle for stationary points.
template <class F>
double golden_min(F&& f, double lo, double hi, double tol = 1e-12) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * (1.0 + std::fabs(a))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace testutil
