#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "support.hpp"
#include "taubnut/integrate.hpp"
#include "taubnut/orbits.hpp"
#include "taubnut/trajectory.hpp"

using namespace taubnut;

namespace {
const SystemParams kFig{1.0, 1.0, 0.5, 0.1};
const Energy kE{-1.0};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> ts(n);
  for (int i = 0; i < n; ++i) ts[i] = a + (b - a) * i / (n - 1);
  return ts;
}
}

TEST_CASE("radial vector field matches finite differences of H", "[integrate]") {
  std::mt19937_64 gen(103);
  for (int i = 0; i < 100; ++i) {
    double eta = testutil::uniform(gen, -0.05, 0.3);
    SystemParams par{1.2, 0.9, 0.45, eta};
    double r = testutil::uniform(gen, 0.3, 1.2);
    double p = testutil::uniform(gen, -1.5, 1.5);
    auto [dr, dp] = hamilton_rhs_radial({r, p}, par);
    double h = 1e-6;
    auto H = [&](double rr, double pp) { return eval_radial_hamiltonian({rr, pp}, par); };
    CHECK(dr == Catch::Approx((H(r, p + h) - H(r, p - h)) / (2 * h)).margin(1e-6));
    CHECK(dp == Catch::Approx(-(H(r + h, p) - H(r - h, p)) / (2 * h)).margin(1e-6));
  }

  // aphelion: radial velocity exactly zero, momentum pushed inward
  OrbitGeometry g = orbit_geometry(kE, kFig);
  auto [dr, dp] = hamilton_rhs_radial({g.r_plus, 0.0}, kFig);
  CHECK(dr == 0.0);
  CHECK(dp < 0.0);
}

TEST_CASE("3D vector field matches finite differences of H", "[integrate]") {
  SystemParams par = kFig;
  PhasePoint3D pt{{0.4, 0.2, -0.1}, {0.3, -0.6, 0.2}};
  PhasePoint3D f = hamilton_rhs_3d(pt, par);
  double h = 1e-6;
  auto H = [&](const PhasePoint3D& s) { return eval_hamiltonian_3d(s, par); };
  auto bump = [&](int idx, double d) {
    PhasePoint3D s = pt;
    double* comps[6] = {&s.q.x, &s.q.y, &s.q.z, &s.p.x, &s.p.y, &s.p.z};
    *comps[idx] += d;
    return s;
  };
  double grad[6];
  for (int i = 0; i < 6; ++i) grad[i] = (H(bump(i, h)) - H(bump(i, -h))) / (2 * h);
  CHECK(f.q.x == Catch::Approx(grad[3]).margin(1e-6));
  CHECK(f.q.y == Catch::Approx(grad[4]).margin(1e-6));
  CHECK(f.q.z == Catch::Approx(grad[5]).margin(1e-6));
  CHECK(f.p.x == Catch::Approx(-grad[0]).margin(1e-6));
  CHECK(f.p.y == Catch::Approx(-grad[1]).margin(1e-6));
  CHECK(f.p.z == Catch::Approx(-grad[2]).margin(1e-6));
}

TEST_CASE("oracle conserves energy and Q constants over three periods", "[integrate]") {
  OrbitGeometry g = orbit_geometry(kE, kFig);
  RadialIntegration run = integrate_radial({g.r_plus, 0.0}, kFig, 3.0 * g.tau);
  REQUIRE(run.status == IntegrationStatus::completed);
  REQUIRE(run.samples.size() > 10);

  double H0 = run.samples.front().energy;
  double q0 = run.samples.front().q_abs;
  double th0 = run.samples.front().q_arg;
  CHECK(H0 == Catch::Approx(-1.0).margin(1e-13));
  CHECK(q0 == Catch::Approx(g.q0).margin(1e-12));
  for (const RadialSample& s : run.samples) {
    CHECK(std::fabs(s.energy - H0) < 1e-9);
    CHECK(std::fabs(s.q_abs - q0) < 1e-8);
    CHECK(std::fabs(std::remainder(s.q_arg - th0, 2.0 * std::numbers::pi)) < 1e-8);
  }
}

TEST_CASE("measured period matches 2 pi / Omega across the eta sweep", "[integrate]") {
  for (double eta : {-0.05, 0.0, 0.05, 0.1, 0.25}) {
    SystemParams par = kFig;
    par.eta = eta;
    OrbitGeometry g = orbit_geometry(kE, par);
    RadialIntegration run = integrate_radial({g.r_plus, 0.0}, par, 3.0 * g.tau);
    REQUIRE(run.status == IntegrationStatus::completed);
    REQUIRE(run.turning_times.size() >= 4);
    for (std::size_t i = 0; i + 1 < run.turning_times.size(); ++i) {
      double period = 2.0 * (run.turning_times[i + 1] - run.turning_times[i]);
      CHECK(std::fabs(period - g.tau) < 1e-8 * g.tau);
    }
  }
}

TEST_CASE("closed-form trajectory agrees with the oracle", "[integrate]") {
  for (double eta : {0.0, 0.1, 0.25}) {
    SystemParams par = kFig;
    par.eta = eta;
    OrbitGeometry g = orbit_geometry(kE, par);
    auto ts = linspace(0.0, 2.0 * g.tau, 301);
    RadialIntegration run = integrate_radial({g.r_plus, 0.0}, par, ts.back(), {}, ts);
    REQUIRE(run.samples.size() == ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(run.samples[i].t == ts[i]);  // exact, stepper lands on sample times
      RadialState ex = radial_state_of_time(ts[i], kE, 0.0, par);
      CHECK(std::fabs(run.samples[i].state.r - ex.r) < 1e-8);
      CHECK(std::fabs(run.samples[i].state.p - ex.p) < 1e-7);
    }
  }
}

TEST_CASE("first passage times match the closed-form passage pair", "[integrate]") {
  OrbitGeometry g = orbit_geometry(kE, kFig);
  RadialIntegration run = integrate_radial({g.r_plus, 0.0}, kFig, 2.0 * g.tau);
  REQUIRE(run.status == IntegrationStatus::completed);

  std::mt19937_64 gen(107);
  for (int i = 0; i < 8; ++i) {
    double target = testutil::uniform(gen, g.r_minus + 0.01, g.r_plus - 0.01);
    PassagePair pp = passage_times_from_aphelion(target, kE, kFig);
    std::vector<double> times = first_passage_times(run, target, kFig);
    REQUIRE(times.size() == 4);
    CHECK(std::fabs(times[0] - pp.inbound) < 1e-10);
    CHECK(std::fabs(times[1] - pp.outbound) < 1e-10);
    CHECK(std::fabs(times[2] - (pp.inbound + g.tau)) < 1e-10);
    CHECK(std::fabs(times[3] - (pp.outbound + g.tau)) < 1e-10);

    // and the algebraic law, unfolded to the physical branch
    double u = (1.0 - target / g.a) / g.eps;
    double ecc_t = g.a / (kFig.eta + g.a) * g.eps;
    double t_alg = time_of_radius_algebraic(target, kE, 0.0, kFig);
    CHECK(std::fabs(times[0] - (t_alg + 2.0 * ecc_t * std::sqrt(1.0 - u * u) / g.omega)) <
          1e-10);
  }
}

TEST_CASE("passages at a touching radius collapse onto the period marks", "[integrate]") {
  OrbitGeometry g = orbit_geometry(kE, kFig);
  RadialIntegration run = integrate_radial({g.r_plus, 0.0}, kFig, 2.0 * g.tau);

  // exactly at the start radius only the initial sample registers
  std::vector<double> exact = first_passage_times(run, g.r_plus, kFig);
  REQUIRE(exact.size() >= 1);
  CHECK(exact[0] == 0.0);

  // a hair inside, crossings bracket each aphelion passage symmetrically
  std::vector<double> near = first_passage_times(run, g.r_plus - 1e-6, kFig);
  REQUIRE(near.size() == 4);
  CHECK(std::fabs(0.5 * (near[1] + near[2]) - g.tau) < 1e-8);

  CHECK_THROWS_AS(first_passage_times(run, g.r_plus + 0.1, kFig), no_crossing_error);
  CHECK_THROWS_AS(first_passage_times(run, 0.01, kFig), no_crossing_error);
}

TEST_CASE("3D run conserves L and R and reduces to the radial flow", "[integrate]") {
  OrbitGeometry g = orbit_geometry(kE, kFig);
  PhasePoint3D pt0{{g.r_plus, 0.0, 0.0}, {0.0, kFig.l / g.r_plus, 0.0}};
  auto ts = linspace(0.0, g.tau, 201);
  Integration3D run3 = integrate_3d(pt0, kFig, ts.back(), {}, ts);
  RadialIntegration runr = integrate_radial({g.r_plus, 0.0}, kFig, ts.back(), {}, ts);
  REQUIRE(run3.status == IntegrationStatus::completed);
  REQUIRE(run3.samples.size() == ts.size());

  Vec3 L0 = run3.samples.front().l_vec;
  Vec3 R0 = run3.samples.front().r_vec;
  CHECK(norm(L0) == Catch::Approx(kFig.l).margin(1e-13));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const Sample3D& s = run3.samples[i];
    CHECK(norm(s.l_vec - L0) < 1e-9);
    CHECK(norm(s.r_vec - R0) < 1e-8);
    CHECK(std::fabs(runge_lenz_norm2_residual(s.state, kFig)) < 1e-10);
    CHECK(std::fabs(norm(s.state.q) - runr.samples[i].state.r) < 1e-7);
  }

  // orbit closure after one radial period (the orbit is closed, no precession)
  Vec3 dq = run3.samples.back().state.q - pt0.q;
  CHECK(norm(dq) < 1e-6 * norm(pt0.q));

  // spatial track lies on the conic with the frame's perihelion angle
  OrbitalFrame fr = orbital_frame(pt0, kFig);
  ConicOrbit conic = conic_from_energy(kE, 0.0, kFig);
  for (const Sample3D& s : run3.samples) {
    double theta = frame_azimuth(s.state.q, fr);
    CHECK(std::fabs(norm(s.state.q) - orbit_radius(theta, conic)) < 1e-7);
  }
}

TEST_CASE("integrator converges at fifth order in the step size", "[integrate]") {
  OrbitGeometry g = orbit_geometry(kE, kFig);
  IntegratorConfig loose{1e-4, 1e-4, 0.04, 1e-8};
  auto err_at = [&](double h) {
    IntegratorConfig cfg = loose;
    cfg.max_step = h;
    std::vector<double> ts{g.tau};
    RadialIntegration run = integrate_radial({g.r_plus, 0.0}, kFig, g.tau, cfg, ts);
    RadialState ex = radial_state_of_time(g.tau, kE, 0.0, kFig);
    return std::fabs(run.samples.back().state.r - ex.r) +
           std::fabs(run.samples.back().state.p - ex.p);
  };
  double e1 = err_at(0.04);
  double e2 = err_at(0.02);
  CHECK(e2 > 1e-14);  // above the roundoff floor, the ratio is meaningful
  CHECK(e1 / e2 > 4.0);
}

TEST_CASE("tighter tolerances give a more accurate endpoint", "[integrate]") {
  OrbitGeometry g = orbit_geometry(kE, kFig);
  auto err_at = [&](double rel) {
    IntegratorConfig cfg{};
    cfg.rel_tol = rel;
    cfg.abs_tol = 1e-14;
    std::vector<double> ts{g.tau};
    RadialIntegration run = integrate_radial({g.r_plus, 0.0}, kFig, g.tau, cfg, ts);
    RadialState ex = radial_state_of_time(g.tau, kE, 0.0, kFig);
    return std::fabs(run.samples.back().state.r - ex.r) +
           std::fabs(run.samples.back().state.p - ex.p);
  };
  double loose = err_at(1e-6);
  double tight = err_at(1e-10);
  CHECK(tight < 1e-8);
  CHECK(loose / tight > 4.0);
}

TEST_CASE("wall-bound run stops at the boundary margin", "[integrate]") {
  SystemParams par{1.0, 1.0, 0.5, -0.25};
  RadialIntegration run = integrate_radial({0.5, -1.0}, par, 5.0);
  REQUIRE(run.status == IntegrationStatus::boundary_hit);
  REQUIRE(run.boundary_time.has_value());
  CHECK(*run.boundary_time > 0.0);
  CHECK(*run.boundary_time < 5.0);
  CHECK(run.end_time == *run.boundary_time);

  double wall = 0.25;
  double r_end = run.samples.back().state.r;
  CHECK(r_end - wall > 0.0);
  CHECK(r_end - wall < 1e-6);

  double H0 = run.samples.front().energy;
  for (const RadialSample& s : run.samples) CHECK(std::fabs(s.energy - H0) < 1e-9);
}

TEST_CASE("start inside the boundary margin stops immediately", "[integrate]") {
  SystemParams par{1.0, 1.0, 0.5, -0.25};
  RadialIntegration run = integrate_radial({0.25 + 5e-9, 0.0}, par, 1.0);
  CHECK(run.status == IntegrationStatus::boundary_hit);
  REQUIRE(run.boundary_time.has_value());
  CHECK(*run.boundary_time == 0.0);
  CHECK(run.samples.size() == 1);
}

TEST_CASE("time-reversed inner-region orbit stays inside the wall", "[integrate]") {
  SystemParams par{1.0, 1.0, 0.5, -0.1};
  // state on the time-reversed energy shell -H = 35 at r = 0.05
  RadialState s0{0.05, std::sqrt(10.0)};
  CHECK(eval_radial_hamiltonian(s0, par) == Catch::Approx(-35.0).margin(1e-12));

  RadialIntegration run = integrate_radial(s0, par, 2.0, {}, {}, true);
  REQUIRE(run.status == IntegrationStatus::completed);
  CHECK(run.time_reversed);
  REQUIRE(run.samples.size() > 20);
  CHECK(run.turning_times.size() >= 2);

  double E0 = run.samples.front().energy;
  CHECK(E0 == Catch::Approx(35.0).margin(1e-12));
  for (const RadialSample& s : run.samples) {
    CHECK(s.state.r > 0.0);
    CHECK(s.state.r < 0.1);
    CHECK(std::fabs(s.energy - E0) < 1e-9 * std::fabs(E0));
    CHECK(std::isnan(s.q_abs));
  }
}

TEST_CASE("sampled runs land exactly on the requested times", "[integrate]") {
  std::vector<double> ts{0.0, 0.1, 0.25, 1.0, 1.7};
  RadialIntegration run = integrate_radial({0.7283882181415011, 0.0}, kFig, 1.7, {}, ts);
  REQUIRE(run.samples.size() == ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) CHECK(run.samples[i].t == ts[i]);

  // dense mode records strictly increasing times starting at 0
  RadialIntegration dense = integrate_radial({0.7283882181415011, 0.0}, kFig, 1.7);
  CHECK(dense.samples.front().t == 0.0);
  CHECK(dense.samples.back().t == 1.7);
  for (std::size_t i = 0; i + 1 < dense.samples.size(); ++i)
    CHECK(dense.samples[i].t < dense.samples[i + 1].t);
}

TEST_CASE("integration input validation", "[integrate]") {
  CHECK_THROWS_AS(integrate_radial({0.5, 0.0}, kFig, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_radial({0.5, 0.0}, kFig, 1.0, {}, {0.5, 0.2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate_radial({0.5, 0.0}, kFig, 1.0, {}, {0.5, 2.0}),
                  std::invalid_argument);
  IntegratorConfig bad{};
  bad.rel_tol = 1e-3;  // looser than the supported band
  CHECK_THROWS_AS(integrate_radial({0.5, 0.0}, kFig, 1.0, bad), std::invalid_argument);
  CHECK_THROWS_AS(integrate_radial({-0.1, 0.0}, kFig, 1.0), singular_point_error);
}
