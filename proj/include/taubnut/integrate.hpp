#pragma once

// Numerical oracle: adaptive Dormand-Prince 5(4) integration of Hamilton's
// equations (radial and full 3D) with dense output for event location.
// The vector fields come from dual-number gradients of the same Hamiltonian
// expressions the closed forms are checked against; no hand-derived forces.
//
// A symplectic splitting is not used: the conformal factor makes H
// non-separable. Invariant snapshots per sample substitute for symplecticity.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "taubnut/dual.hpp"
#include "taubnut/errors.hpp"
#include "taubnut/hamiltonian.hpp"
#include "taubnut/sga.hpp"
#include "taubnut/types.hpp"

namespace taubnut {

struct IntegratorConfig {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double max_step = 0.05;
  double boundary_margin = 1e-8;  // minimum allowed distance to r = 0 and r = -eta

  void validate() const {
    auto ok_tol = [](double x) { return x > 0.0 && x <= 1e-4; };
    if (!ok_tol(rel_tol) || !ok_tol(abs_tol))
      throw std::invalid_argument("IntegratorConfig: tolerances must lie in (0, 1e-4]");
    if (!(max_step > 0.0)) throw std::invalid_argument("IntegratorConfig: max_step must be > 0");
    if (!(boundary_margin > 0.0))
      throw std::invalid_argument("IntegratorConfig: boundary_margin must be > 0");
  }
};

enum class IntegrationStatus { completed, boundary_hit, step_failure };

struct RadialSample {
  double t;
  RadialState state;
  double energy;  // value of the integrated Hamiltonian (H, or -H when time-reversed)
  double q_abs;   // |Q+|; NaN when the state is not bound or the run is time-reversed
  double q_arg;   // arg Q+ in (-pi, pi]; NaN likewise
};

struct Sample3D {
  double t;
  PhasePoint3D state;
  double energy;
  Vec3 l_vec;
  Vec3 r_vec;  // deformed Runge-Lenz vector
};

struct RadialIntegration {
  std::vector<RadialSample> samples;
  std::vector<double> turning_times;  // refined times where p crosses 0
  IntegrationStatus status = IntegrationStatus::completed;
  double end_time = 0.0;
  std::optional<double> boundary_time;
  bool time_reversed = false;
};

struct Integration3D {
  std::vector<Sample3D> samples;
  IntegrationStatus status = IntegrationStatus::completed;
  double end_time = 0.0;
  std::optional<double> boundary_time;
};

namespace detail {

template <std::size_t N>
using StateN = std::array<double, N>;

inline void rhs_radial_raw(const SystemParams& par, bool reversed, const StateN<2>& y,
                           StateN<2>& dy) {
  if (!(y[0] > 0.0) || y[0] + par.eta == 0.0)
    throw singular_point_error("integrate: trajectory reached a metric singularity");
  dual dr = radial_hamiltonian_t(dual{y[0], 1.0}, dual{y[1], 0.0}, par);
  dual dp = radial_hamiltonian_t(dual{y[0], 0.0}, dual{y[1], 1.0}, par);
  double s = reversed ? -1.0 : 1.0;
  dy[0] = s * dp.d;
  dy[1] = -s * dr.d;
}

inline void rhs_3d_raw(const SystemParams& par, const StateN<6>& y, StateN<6>& dy) {
  double r = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
  if (!(r > 0.0) || r + par.eta == 0.0)
    throw singular_point_error("integrate: trajectory reached a metric singularity");
  auto grad = [&](int seed) {
    std::array<dual, 3> q{{{y[0], 0.0}, {y[1], 0.0}, {y[2], 0.0}}};
    std::array<dual, 3> p{{{y[3], 0.0}, {y[4], 0.0}, {y[5], 0.0}}};
    (seed < 3 ? q[seed] : p[seed - 3]).d = 1.0;
    return hamiltonian_3d_t(q, p, par).d;
  };
  for (int i = 0; i < 3; ++i) {
    dy[i] = grad(3 + i);       // dq_i/dt = +dH/dp_i
    dy[3 + i] = -grad(i);      // dp_i/dt = -dH/dq_i
  }
}

// Distance to the nearest metric singularity (r = 0; also r = |eta| for eta < 0).
inline double boundary_distance(double r, double eta) {
  double d = r;
  if (eta < 0.0) d = std::min(d, std::fabs(r + eta));
  return d;
}

// Dormand-Prince 5(4) with Hairer's quartic dense interpolant. One accepted
// step at a time; FSAL; step clipping so requested times are hit exactly.
template <std::size_t N, class RHS>
class Dopri5 {
 public:
  Dopri5(RHS rhs, const StateN<N>& y0, const IntegratorConfig& cfg)
      : rhs_(std::forward<RHS>(rhs)), cfg_(cfg), y_(y0) {
    rhs_(y_, k1_);
    h_ = std::min(cfg_.max_step, 1e-4);
  }

  double t() const { return t_; }
  double t_old() const { return t_old_; }
  const StateN<N>& y() const { return y_; }
  const StateN<N>& y_old() const { return y_old_; }

  // Advance by one accepted step, clipped to land exactly on t_limit when the
  // remaining span binds. Returns false when the step size underflows.
  bool advance(double t_limit) {
    double hmin = 1e-14 * std::max(1.0, std::fabs(t_));
    if (t_limit - t_ <= hmin) {
      // Remaining span is below stepping resolution: snap, constant interpolant.
      t_old_ = t_;
      h_old_ = std::max(t_limit - t_, std::numeric_limits<double>::min());
      cont0_ = y_;
      cont1_ = cont2_ = cont3_ = cont4_ = StateN<N>{};
      t_ = t_limit;
      return true;
    }
    bool rejected = false;
    for (int attempt = 0; attempt < 400; ++attempt) {
      double span = t_limit - t_;
      double h = std::min({h_, cfg_.max_step, span});
      if (!(h > hmin)) return false;
      bool clipped = (h >= span);
      double err = try_step(h);
      if (err <= 1.0) {
        prepare_dense(h);
        t_old_ = t_;
        y_old_ = y_;
        h_old_ = h;
        t_ = clipped ? t_limit : t_ + h;
        y_ = ynew_;
        k1_ = k7_;
        double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-32), -0.2), 0.2,
                                rejected ? 1.0 : 5.0);
        h_ = h * fac;
        return true;
      }
      rejected = true;
      double fac = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9) : 0.2;
      h_ = h * fac;
    }
    return false;
  }

  // Interpolate within the last accepted step [t_old, t].
  StateN<N> dense(double tq) const {
    double th = (tq - t_old_) / h_old_;
    double th1 = 1.0 - th;
    StateN<N> out;
    for (std::size_t i = 0; i < N; ++i)
      out[i] = cont0_[i] +
               th * (cont1_[i] + th1 * (cont2_[i] + th * (cont3_[i] + th1 * cont4_[i])));
    return out;
  }

 private:
  double try_step(double h) {
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                     a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    StateN<N> w;
    try {
      for (std::size_t i = 0; i < N; ++i) w[i] = y_[i] + h * a21 * k1_[i];
      rhs_(w, k2_);
      for (std::size_t i = 0; i < N; ++i) w[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
      rhs_(w, k3_);
      for (std::size_t i = 0; i < N; ++i)
        w[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
      rhs_(w, k4_);
      for (std::size_t i = 0; i < N; ++i)
        w[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
      rhs_(w, k5_);
      for (std::size_t i = 0; i < N; ++i)
        w[i] = y_[i] +
               h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
      rhs_(w, k6_);
      for (std::size_t i = 0; i < N; ++i)
        ynew_[i] = y_[i] +
                   h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
      rhs_(ynew_, k7_);
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] +
                      e7 * k7_[i]);
      double sc = cfg_.abs_tol + cfg_.rel_tol * std::max(std::fabs(y_[i]), std::fabs(ynew_[i]));
      acc += (e / sc) * (e / sc);
    }
    double err = std::sqrt(acc / N);
    return std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
  }

  void prepare_dense(double h) {
    constexpr double d1 = -12715105075.0 / 11282082432.0;
    constexpr double d3 = 87487479700.0 / 32700410799.0;
    constexpr double d4 = -10690763975.0 / 1880347072.0;
    constexpr double d5 = 701980252875.0 / 199316789632.0;
    constexpr double d6 = -1453857185.0 / 822651844.0;
    constexpr double d7 = 69997945.0 / 29380423.0;
    for (std::size_t i = 0; i < N; ++i) {
      double dy = ynew_[i] - y_[i];
      cont0_[i] = y_[i];
      cont1_[i] = dy;
      cont2_[i] = h * k1_[i] - dy;
      cont3_[i] = dy - h * k7_[i] - cont2_[i];
      cont4_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] +
                       d7 * k7_[i]);
    }
  }

  RHS rhs_;
  IntegratorConfig cfg_;
  double t_ = 0.0, t_old_ = 0.0, h_ = 0.0, h_old_ = 0.0;
  StateN<N> y_{}, y_old_{}, ynew_{};
  StateN<N> k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{};
  StateN<N> cont0_{}, cont1_{}, cont2_{}, cont3_{}, cont4_{};
};

// Fresh integration from y0 over [0, span]; used to polish event times without
// inheriting interpolation error.
template <class RHS>
StateN<2> reintegrate(RHS& rhs, const StateN<2>& y0, double span, const IntegratorConfig& cfg) {
  if (!(span > 0.0)) return y0;
  Dopri5<2, RHS&> st(rhs, y0, cfg);
  while (st.t() < span)
    if (!st.advance(span)) throw convergence_error("event refinement: step failure");
  return st.y();
}

// First time in [t_old, t] at which the boundary margin is breached, if any.
template <std::size_t N, class RHS, class RadiusOf>
std::optional<double> scan_boundary(const Dopri5<N, RHS>& st, double eta, double margin,
                                    RadiusOf&& r_of) {
  auto dist = [&](double tq) {
    StateN<N> yq = st.dense(tq);
    return boundary_distance(r_of(yq), eta);
  };
  double ta = st.t_old(), tb = st.t();
  double lo = ta, hi = std::numeric_limits<double>::quiet_NaN();
  for (double th : {0.25, 0.5, 0.75, 1.0}) {
    double tq = ta + th * (tb - ta);
    if (dist(tq) <= margin) {
      hi = tq;
      break;
    }
    lo = tq;
  }
  if (!std::isfinite(hi)) return std::nullopt;
  for (int i = 0; i < 100 && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++i) {
    double mid = 0.5 * (lo + hi);
    (dist(mid) > margin ? lo : hi) = mid;
  }
  return hi;
}

// Turning point inside the last accepted step: bisection on the dense
// interpolant, then Newton on exactly re-integrated states.
template <class RHS>
double refine_turning(const Dopri5<2, RHS>& st, RHS& rhs, const IntegratorConfig& cfg) {
  double ta = st.t_old(), tb = st.t();
  bool neg_at_a = st.dense(ta)[1] < 0.0;
  for (int i = 0; i < 60 && tb - ta > 1e-13 * std::max(1.0, std::fabs(tb)); ++i) {
    double tm = 0.5 * (ta + tb);
    ((st.dense(tm)[1] < 0.0) == neg_at_a ? ta : tb) = tm;
  }
  double ts = 0.5 * (ta + tb);
  double t0 = st.t_old();
  for (int i = 0; i < 3; ++i) {
    StateN<2> ys = reintegrate(rhs, st.y_old(), ts - t0, cfg);
    StateN<2> dys;
    rhs(ys, dys);
    if (dys[1] == 0.0) break;
    double step = -ys[1] / dys[1];
    ts += step;
    if (std::fabs(step) < 1e-14 * std::max(1.0, std::fabs(ts))) break;
  }
  return ts;
}

}  // namespace detail

// Canonical vector field (dr/dt, dp/dt) of the radial Hamiltonian, from dual
// derivatives of the energy expression itself.
inline std::pair<double, double> hamilton_rhs_radial(const RadialState& s,
                                                     const SystemParams& par) {
  par.validate();
  require_regular_radius(s.r, par, "hamilton_rhs_radial");
  detail::StateN<2> y{s.r, s.p}, dy;
  detail::rhs_radial_raw(par, false, y, dy);
  return {dy[0], dy[1]};
}

inline PhasePoint3D hamilton_rhs_3d(const PhasePoint3D& pt, const SystemParams& par) {
  par.validate();
  require_regular_radius(norm(pt.q), par, "hamilton_rhs_3d");
  detail::StateN<6> y{pt.q.x, pt.q.y, pt.q.z, pt.p.x, pt.p.y, pt.p.z}, dy;
  detail::rhs_3d_raw(par, y, dy);
  return {{dy[0], dy[1], dy[2]}, {dy[3], dy[4], dy[5]}};
}

// Integrate the radial flow to t_final. With sample_times empty every accepted
// step is recorded; otherwise exactly the requested times are recorded (the
// stepper clips onto them, no interpolation). time_reversed integrates the
// flow of -H, the inner-region construction for eta < 0.
inline RadialIntegration integrate_radial(const RadialState& s0, const SystemParams& par,
                                          double t_final, const IntegratorConfig& cfg = {},
                                          const std::vector<double>& sample_times = {},
                                          bool time_reversed = false) {
  par.validate();
  cfg.validate();
  if (!(t_final > 0.0)) throw std::invalid_argument("integrate_radial: t_final must be > 0");
  require_regular_radius(s0.r, par, "integrate_radial");
  for (std::size_t i = 0; i < sample_times.size(); ++i)
    if (!(sample_times[i] >= 0.0) || !(sample_times[i] <= t_final) ||
        (i > 0 && !(sample_times[i] > sample_times[i - 1])))
      throw std::invalid_argument(
          "integrate_radial: sample times must be strictly increasing within [0, t_final]");

  RadialIntegration out{};
  out.time_reversed = time_reversed;

  auto snapshot = [&](double t, const detail::StateN<2>& y) {
    RadialSample smp{};
    smp.t = t;
    smp.state = {y[0], y[1]};
    double H = radial_hamiltonian_t(y[0], y[1], par);
    smp.energy = time_reversed ? -H : H;
    smp.q_abs = std::numeric_limits<double>::quiet_NaN();
    smp.q_arg = std::numeric_limits<double>::quiet_NaN();
    if (!time_reversed && H < 0.0 && std::fabs(par.k - par.eta * H) > kCouplingPoleBand) {
      QConstants q = q_constants(smp.state, t, par);
      smp.q_abs = q.polar.q0;
      smp.q_arg = q.polar.theta0;
    }
    out.samples.push_back(smp);
  };

  detail::StateN<2> y0{s0.r, s0.p};
  if (detail::boundary_distance(y0[0], par.eta) <= cfg.boundary_margin) {
    snapshot(0.0, y0);
    out.status = IntegrationStatus::boundary_hit;
    out.boundary_time = 0.0;
    return out;
  }

  auto rhs = [&par, time_reversed](const detail::StateN<2>& y, detail::StateN<2>& dy) {
    detail::rhs_radial_raw(par, time_reversed, y, dy);
  };
  detail::Dopri5<2, decltype(rhs)> st(rhs, y0, cfg);

  const bool dense_record = sample_times.empty();
  std::size_t next = 0;
  if (dense_record) {
    snapshot(0.0, y0);
  } else if (next < sample_times.size() && sample_times[next] == 0.0) {
    snapshot(0.0, y0);
    ++next;
  }

  double p_prev = s0.p;
  while (st.t() < t_final) {
    double t_limit = t_final;
    if (!dense_record && next < sample_times.size())
      t_limit = std::min(t_limit, sample_times[next]);
    if (!st.advance(t_limit)) {
      // Step collapse right next to a metric singularity is arrival, not
      // failure: the radial speed diverges there and no margin is reachable.
      double d = detail::boundary_distance(st.y()[0], par.eta);
      if (d <= 1e3 * cfg.boundary_margin) {
        if (out.samples.empty() || st.t() > out.samples.back().t) snapshot(st.t(), st.y());
        out.status = IntegrationStatus::boundary_hit;
        out.boundary_time = st.t();
        out.end_time = st.t();
      } else {
        out.status = IntegrationStatus::step_failure;
        out.end_time = st.t();
      }
      return out;
    }

    auto hit = detail::scan_boundary(st, par.eta, cfg.boundary_margin,
                                     [](const detail::StateN<2>& y) { return y[0]; });
    if (hit) {
      detail::StateN<2> yb = st.dense(*hit);
      if (out.samples.empty() || *hit > out.samples.back().t) snapshot(*hit, yb);
      out.status = IntegrationStatus::boundary_hit;
      out.boundary_time = *hit;
      out.end_time = *hit;
      return out;
    }

    double p_now = st.y()[1];
    if (p_now == 0.0) {
      out.turning_times.push_back(st.t());
    } else if ((p_prev < 0.0 && p_now > 0.0) || (p_prev > 0.0 && p_now < 0.0)) {
      out.turning_times.push_back(detail::refine_turning(st, rhs, cfg));
    }
    p_prev = p_now;

    if (dense_record) {
      snapshot(st.t(), st.y());
    } else {
      while (next < sample_times.size() && sample_times[next] <= st.t()) {
        snapshot(sample_times[next], st.y());
        ++next;
      }
    }
  }
  out.end_time = st.t();
  return out;
}

inline Integration3D integrate_3d(const PhasePoint3D& pt0, const SystemParams& par,
                                  double t_final, const IntegratorConfig& cfg = {},
                                  const std::vector<double>& sample_times = {}) {
  par.validate();
  cfg.validate();
  if (!(t_final > 0.0)) throw std::invalid_argument("integrate_3d: t_final must be > 0");
  require_regular_radius(norm(pt0.q), par, "integrate_3d");
  for (std::size_t i = 0; i < sample_times.size(); ++i)
    if (!(sample_times[i] >= 0.0) || !(sample_times[i] <= t_final) ||
        (i > 0 && !(sample_times[i] > sample_times[i - 1])))
      throw std::invalid_argument(
          "integrate_3d: sample times must be strictly increasing within [0, t_final]");

  Integration3D out{};

  auto snapshot = [&](double t, const detail::StateN<6>& y) {
    Sample3D smp{};
    smp.t = t;
    smp.state = {{y[0], y[1], y[2]}, {y[3], y[4], y[5]}};
    smp.energy = eval_hamiltonian_3d(smp.state, par);
    smp.l_vec = angular_momentum(smp.state);
    smp.r_vec = runge_lenz(smp.state, par);
    out.samples.push_back(smp);
  };

  detail::StateN<6> y0{pt0.q.x, pt0.q.y, pt0.q.z, pt0.p.x, pt0.p.y, pt0.p.z};
  auto radius_of = [](const detail::StateN<6>& y) {
    return std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
  };
  if (detail::boundary_distance(radius_of(y0), par.eta) <= cfg.boundary_margin) {
    snapshot(0.0, y0);
    out.status = IntegrationStatus::boundary_hit;
    out.boundary_time = 0.0;
    return out;
  }

  auto rhs = [&par](const detail::StateN<6>& y, detail::StateN<6>& dy) {
    detail::rhs_3d_raw(par, y, dy);
  };
  detail::Dopri5<6, decltype(rhs)> st(rhs, y0, cfg);

  const bool dense_record = sample_times.empty();
  std::size_t next = 0;
  if (dense_record) {
    snapshot(0.0, y0);
  } else if (next < sample_times.size() && sample_times[next] == 0.0) {
    snapshot(0.0, y0);
    ++next;
  }

  while (st.t() < t_final) {
    double t_limit = t_final;
    if (!dense_record && next < sample_times.size())
      t_limit = std::min(t_limit, sample_times[next]);
    if (!st.advance(t_limit)) {
      double d = detail::boundary_distance(radius_of(st.y()), par.eta);
      if (d <= 1e3 * cfg.boundary_margin) {
        if (out.samples.empty() || st.t() > out.samples.back().t) snapshot(st.t(), st.y());
        out.status = IntegrationStatus::boundary_hit;
        out.boundary_time = st.t();
        out.end_time = st.t();
      } else {
        out.status = IntegrationStatus::step_failure;
        out.end_time = st.t();
      }
      return out;
    }
    auto hit = detail::scan_boundary(st, par.eta, cfg.boundary_margin, radius_of);
    if (hit) {
      detail::StateN<6> yb = st.dense(*hit);
      if (out.samples.empty() || *hit > out.samples.back().t) snapshot(*hit, yb);
      out.status = IntegrationStatus::boundary_hit;
      out.boundary_time = *hit;
      out.end_time = *hit;
      return out;
    }
    if (dense_record) {
      snapshot(st.t(), st.y());
    } else {
      while (next < sample_times.size() && sample_times[next] <= st.t()) {
        snapshot(sample_times[next], st.y());
        ++next;
      }
    }
  }
  out.end_time = st.t();
  return out;
}

// Ordered times at which the recorded trajectory crosses target_r, refined by
// re-integration from the bracketing sample. Pass a densely recorded run
// (empty sample_times) so brackets stay within one step.
inline std::vector<double> first_passage_times(const RadialIntegration& run, double target_r,
                                               const SystemParams& par,
                                               const IntegratorConfig& cfg = {}) {
  par.validate();
  cfg.validate();
  if (run.samples.size() < 2)
    throw std::invalid_argument("first_passage_times: need a recorded run with >= 2 samples");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const RadialSample& s : run.samples) {
    lo = std::min(lo, s.state.r);
    hi = std::max(hi, s.state.r);
  }
  if (!(target_r >= lo && target_r <= hi))
    throw no_crossing_error("first_passage_times: target radius outside the observed range");

  auto rhs = [&par, reversed = run.time_reversed](const detail::StateN<2>& y,
                                                  detail::StateN<2>& dy) {
    detail::rhs_radial_raw(par, reversed, y, dy);
  };

  std::vector<double> times;
  auto push = [&](double t) {
    if (times.empty() || t > times.back() + 1e-12) times.push_back(t);
  };
  for (std::size_t i = 0; i + 1 < run.samples.size(); ++i) {
    const RadialSample& sa = run.samples[i];
    const RadialSample& sb = run.samples[i + 1];
    double ga = sa.state.r - target_r;
    double gb = sb.state.r - target_r;
    if (ga == 0.0) push(sa.t);
    if (!(ga * gb < 0.0)) continue;
    detail::StateN<2> ya{sa.state.r, sa.state.p};
    double ta = sa.t, tb = sb.t;
    bool pos_at_a = ga > 0.0;
    double a = ta, b = tb;
    for (int it = 0; it < 90 && b - a > 1e-14 * std::max(1.0, std::fabs(b)); ++it) {
      double tm = 0.5 * (a + b);
      detail::StateN<2> ym = detail::reintegrate(rhs, ya, tm - ta, cfg);
      ((ym[0] - target_r > 0.0) == pos_at_a ? a : b) = tm;
    }
    double ts = 0.5 * (a + b);
    detail::StateN<2> ys = detail::reintegrate(rhs, ya, ts - ta, cfg);
    detail::StateN<2> dys;
    rhs(ys, dys);
    if (dys[0] != 0.0) ts -= (ys[0] - target_r) / dys[0];
    push(ts);
  }
  if (run.samples.back().state.r == target_r) push(run.samples.back().t);
  return times;
}

}  // namespace taubnut
