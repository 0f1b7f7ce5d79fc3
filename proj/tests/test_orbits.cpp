#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "taubnut/orbits.hpp"

using namespace taubnut;

namespace {
const SystemParams kFig{1.0, 1.0, 0.5, 0.1};
const Energy kE{-1.0};
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("conic parameters from the energy", "[orbits]") {
  ConicOrbit c = conic_from_energy(kE, 0.0, kFig);
  CHECK(c.eps == Catch::Approx(0.6186404847588913).margin(1e-15));
  CHECK(c.p_orbit == Catch::Approx(0.25 / 0.9).margin(1e-15));
  CHECK(orbit_radius(0.0, c) == Catch::Approx(0.1716117818584989).margin(1e-14));
  CHECK(orbit_radius(kPi, c) == Catch::Approx(0.7283882181415011).margin(1e-14));
}

TEST_CASE("conic radius agrees with the radial turning structure", "[orbits]") {
  std::mt19937_64 gen(97);
  for (double eta : {-0.05, 0.0, 0.1, 0.25}) {
    SystemParams par = kFig;
    par.eta = eta;
    OrbitGeometry g = orbit_geometry(kE, par);
    ConicOrbit c = conic_from_energy(kE, 0.0, par);
    for (int i = 0; i < 100; ++i) {
      double th = testutil::uniform(gen, 0.0, 2.0 * kPi);
      double r = orbit_radius(th, c);
      CHECK(r >= g.r_minus * (1.0 - 1e-14));
      CHECK(r <= g.r_plus * (1.0 + 1e-14));
      CHECK(r * (1.0 + c.eps * std::cos(th)) == Catch::Approx(c.p_orbit).epsilon(1e-14));
    }
  }
}

TEST_CASE("traced orbit is the closed ellipse with the aphelion focus shift", "[orbits]") {
  double theta0 = 0.6;
  ConicOrbit c = conic_from_energy(kE, theta0, kFig);
  OrbitGeometry g = orbit_geometry(kE, kFig);
  auto pts = trace_orbit(c, 720);
  REQUIRE(pts.size() == 720);

  // focal property: distances to the two foci sum to 2a everywhere
  double fx = -2.0 * g.a * c.eps * std::cos(theta0);
  double fy = -2.0 * g.a * c.eps * std::sin(theta0);
  for (const OrbitSample& s : pts) {
    double d1 = std::hypot(s.x, s.y);
    double d2 = std::hypot(s.x - fx, s.y - fy);
    CHECK(d1 + d2 == Catch::Approx(2.0 * g.a).epsilon(1e-12));
    CHECK(s.r == Catch::Approx(orbit_radius(s.theta, c)).epsilon(1e-15));
  }
  CHECK(pts.front().theta == 0.0);
  CHECK(pts.back().theta == Catch::Approx(2.0 * kPi * 719.0 / 720.0).margin(1e-14));
}

TEST_CASE("trace rejects degenerate sampling", "[orbits]") {
  ConicOrbit c = conic_from_energy(kE, 0.0, kFig);
  CHECK_THROWS_AS(trace_orbit(c, 2), std::invalid_argument);
}

TEST_CASE("unbound conic is rejected", "[orbits]") {
  CHECK_THROWS_AS(conic_from_energy(Energy{0.1}, 0.0, kFig), unbound_energy_error);
  ConicOrbit hyper{0.4, 1.3, 0.0};  // manual unbound branch
  CHECK_THROWS_AS(orbit_radius(kPi, hyper), std::domain_error);
}

TEST_CASE("third law ratio reference values", "[orbits]") {
  CHECK(third_law_ratio(kE, kFig) == Catch::Approx(65.52659163411865).margin(1e-11));
  SystemParams flat = kFig;
  flat.eta = 0.0;
  double four_pi2 = 4.0 * kPi * kPi;
  CHECK(third_law_ratio(kE, flat) == Catch::Approx(four_pi2).margin(1e-12));
  CHECK(third_law_ratio(Energy{-0.37}, flat) == Catch::Approx(four_pi2).margin(1e-12));
}

TEST_CASE("third law ratio equals tau^2 / a^3 from the geometry", "[orbits]") {
  std::mt19937_64 gen(101);
  for (int i = 0; i < 200; ++i) {
    SystemParams par = kFig;
    // ranges keep 2|E| l^2 < m (k - eta |E|)^2 so the orbit exists at l = 1/2
    par.eta = testutil::uniform(gen, -0.05, 0.3);
    Energy E{-testutil::uniform(gen, 0.3, 0.9)};
    OrbitGeometry g = orbit_geometry(E, par);
    double lhs = g.tau * g.tau / (g.a * g.a * g.a);
    CHECK(std::fabs(lhs - third_law_ratio(E, par)) < 1e-10 * lhs);
  }
}

TEST_CASE("third law expansion remainder is quadratic with the expected coefficient",
          "[orbits]") {
  // ratio = (4 pi^2 m / k)(1 + 5x + 13x^2 + ...), x = eta |E| / k
  double x = 1e-3;
  SystemParams par = kFig;
  par.eta = x;  // |E| = k = 1 makes x = eta
  double res = third_law_expansion_residual(kE, par);
  CHECK(res > 0.0);
  double expect = 4.0 * kPi * kPi * 13.0 * x * x;
  CHECK(res == Catch::Approx(expect).epsilon(3e-2));

  // Richardson: shrinking eta tenfold shrinks the remainder a hundredfold
  par.eta = x / 10.0;
  double res10 = third_law_expansion_residual(kE, par);
  double ratio = res / res10;
  CHECK(ratio > 50.0);
  CHECK(ratio < 200.0);

  SystemParams far = kFig;
  far.eta = 0.6;  // x = 0.6 >= 0.5
  CHECK_THROWS_AS(third_law_expansion_residual(kE, far), std::domain_error);
}

TEST_CASE("orbital frame is orthonormal and aims at perihelion", "[orbits]") {
  // perihelion state in a tilted plane
  OrbitGeometry g = orbit_geometry(kE, kFig);
  Vec3 n{0.0, -std::sin(0.4), std::cos(0.4)};
  Vec3 e1{1.0, 0.0, 0.0};
  Vec3 e2 = cross(n, e1);
  Vec3 q = g.r_minus * e1;
  Vec3 p = (kFig.l / g.r_minus) * e2;
  PhasePoint3D pt{q, p};

  OrbitalFrame f = orbital_frame(pt, kFig);
  CHECK(norm(f.e1) == Catch::Approx(1.0).margin(1e-14));
  CHECK(norm(f.e2) == Catch::Approx(1.0).margin(1e-14));
  CHECK(norm(f.n) == Catch::Approx(1.0).margin(1e-14));
  CHECK(std::fabs(dot(f.e1, f.e2)) < 1e-14);
  CHECK(std::fabs(dot(f.e1, f.n)) < 1e-14);
  CHECK(std::fabs(dot(f.e2, f.n)) < 1e-14);
  // e1 points at the perihelion the state sits on
  CHECK(dot(f.e1, e1) == Catch::Approx(1.0).margin(1e-12));
  CHECK(std::fabs(frame_azimuth(q, f)) < 1e-12);

  // frame degenerates for radial (l = 0) and circular states
  PhasePoint3D radial{{0.5, 0.0, 0.0}, {0.1, 0.0, 0.0}};
  CHECK_THROWS_AS(orbital_frame(radial, kFig), std::domain_error);
  SystemParams flat{1.0, 1.0, 0.5, 0.0};
  PhasePoint3D circ{{0.25, 0.0, 0.0}, {0.0, 2.0, 0.0}};  // R vanishes identically
  CHECK_THROWS_AS(orbital_frame(circ, flat), std::domain_error);
}
