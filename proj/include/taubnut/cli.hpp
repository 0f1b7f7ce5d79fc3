#pragma once

// Command-line front end. Seven subcommands emitting bit-stable CSV/JSON:
//   simulate       oracle integration of the radial flow
//   trajectory     closed-form r(t), p(t) via the deformed Kepler equation
//   orbit          conic trace in the orbital plane
//   potential      V_eff grid (and the time-reversed well where it applies)
//   brackets-check max algebra residuals over random bound states
//   third-law      deformed Kepler third law numbers
//   regime         eta < 0 classification report
//
// Exit codes: 0 success, 2 domain/validation error, 3 boundary-hit
// termination, 4 solver non-convergence, 64 usage.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "taubnut/taubnut.hpp"

namespace taubnut::cli {

struct RunConfig {
  SystemParams params{};
  double energy = -1.0;
  double theta0 = 0.0;
  IntegratorConfig integrator{};
  std::string output_path = "-";
  std::string format;  // empty = subcommand default
};

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                           const std::string& scope) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* key : allowed) ok = ok || item.key() == key;
    if (!ok)
      throw std::invalid_argument("config: unknown key '" + scope + item.key() + "'");
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  reject_unknown(j, {"params", "energy", "theta0", "integrator", "output_path", "format"}, "");
  RunConfig rc{};
  if (j.contains("params")) {
    const auto& p = j["params"];
    reject_unknown(p, {"m", "k", "l", "eta"}, "params.");
    rc.params.m = p.value("m", rc.params.m);
    rc.params.k = p.value("k", rc.params.k);
    rc.params.l = p.value("l", rc.params.l);
    rc.params.eta = p.value("eta", rc.params.eta);
  }
  rc.energy = j.value("energy", rc.energy);
  rc.theta0 = j.value("theta0", rc.theta0);
  if (j.contains("integrator")) {
    const auto& g = j["integrator"];
    reject_unknown(g, {"rel_tol", "abs_tol", "max_step", "boundary_margin"}, "integrator.");
    rc.integrator.rel_tol = g.value("rel_tol", rc.integrator.rel_tol);
    rc.integrator.abs_tol = g.value("abs_tol", rc.integrator.abs_tol);
    rc.integrator.max_step = g.value("max_step", rc.integrator.max_step);
    rc.integrator.boundary_margin = g.value("boundary_margin", rc.integrator.boundary_margin);
  }
  rc.output_path = j.value("output_path", rc.output_path);
  rc.format = j.value("format", rc.format);
  return rc;
}

inline void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::invalid_argument("cannot open output file: " + path);
  f << content;
}

inline void check_format(const std::string& requested, const char* native) {
  if (!requested.empty() && requested != native)
    throw std::invalid_argument(std::string("this subcommand emits ") + native +
                                ", got format '" + requested + "'");
}

// Uniform double in [0,1) from the top 53 bits, stable across platforms.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

struct Flags {
  std::string config_path;
  double m = 1.0, k = 1.0, l = 0.5, eta = 0.0;
  double energy = -1.0, theta0 = 0.0;
  double t_final = 0.0;
  int samples = 0;
  std::uint64_t seed = 12345;
  std::string out;
  std::string format;
  double r0 = 0.0, p0 = 0.0;
  double alpha = 0.0;
  double r_min = 0.01, r_max = 1.0;
  bool time_reversed = false;
};

inline void add_common_options(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON run configuration (unknown keys rejected)");
  sub->add_option("--m", f.m, "mass");
  sub->add_option("--k", f.k, "coupling constant");
  sub->add_option("--l", f.l, "angular momentum modulus");
  sub->add_option("--eta", f.eta, "deformation parameter");
  sub->add_option("--energy", f.energy, "orbit energy");
  sub->add_option("--theta0", f.theta0, "phase constant arg Q+");
  sub->add_option("--t-final", f.t_final, "integration / evaluation horizon");
  sub->add_option("--samples", f.samples, "number of output samples");
  sub->add_option("--seed", f.seed, "PRNG seed for randomized checks");
  sub->add_option("--out", f.out, "output path ('-' = stdout)");
  sub->add_option("--format", f.format, "output format (csv or json, per subcommand)");
}

// Config file first, then any explicitly passed inline flag wins.
inline RunConfig merge_config(CLI::App* sub, const Flags& f) {
  RunConfig rc{};
  if (!f.config_path.empty()) rc = load_config(f.config_path);
  if (sub->count("--m")) rc.params.m = f.m;
  if (sub->count("--k")) rc.params.k = f.k;
  if (sub->count("--l")) rc.params.l = f.l;
  if (sub->count("--eta")) rc.params.eta = f.eta;
  if (sub->count("--energy")) rc.energy = f.energy;
  if (sub->count("--theta0")) rc.theta0 = f.theta0;
  if (sub->count("--out")) rc.output_path = f.out;
  if (sub->count("--format")) rc.format = f.format;
  return rc;
}

inline int finish_run_status(const std::string& out_path, const std::string& content,
                             IntegrationStatus status) {
  write_output(out_path, content);
  if (status == IntegrationStatus::boundary_hit) return 3;
  if (status == IntegrationStatus::step_failure) return 4;
  return 0;
}

inline std::vector<double> linspace_times(double t_final, int n) {
  std::vector<double> ts;
  if (n > 1) {
    ts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ts.push_back(t_final * i / (n - 1));
  }
  return ts;
}

inline int cmd_simulate(CLI::App* sub, const Flags& f) {
  RunConfig rc = merge_config(sub, f);
  check_format(rc.format, "csv");
  rc.params.validate();

  RadialState s0{};
  if (sub->count("--r0")) {
    s0 = {f.r0, f.p0};
  } else {
    InversionPoints inv = inversion_points(Energy{rc.energy}, rc.params);
    s0 = {inv.r_minus, 0.0};
  }
  double H0 = eval_radial_hamiltonian(s0, rc.params);
  double t_final = f.t_final;
  if (!(t_final > 0.0)) {
    if (!(H0 < 0.0))
      throw std::invalid_argument("simulate: unbound start state needs an explicit --t-final");
    t_final = 3.0 * orbit_geometry(Energy{H0}, rc.params).tau;
  }

  RadialIntegration run =
      integrate_radial(s0, rc.params, t_final, rc.integrator,
                       linspace_times(t_final, f.samples), f.time_reversed);

  std::ostringstream os;
  os << "# simulate m=" << fmt17(rc.params.m) << " k=" << fmt17(rc.params.k)
     << " l=" << fmt17(rc.params.l) << " eta=" << fmt17(rc.params.eta)
     << " r0=" << fmt17(s0.r) << " p0=" << fmt17(s0.p) << " t_final=" << fmt17(t_final)
     << " time_reversed=" << (f.time_reversed ? 1 : 0) << "\n";
  os << "t,r,p,H,H_drift,Q_abs,Q_arg\n";
  double E0 = run.samples.front().energy;
  for (const RadialSample& s : run.samples)
    os << fmt17(s.t) << ',' << fmt17(s.state.r) << ',' << fmt17(s.state.p) << ','
       << fmt17(s.energy) << ',' << fmt17(s.energy - E0) << ',' << fmt17(s.q_abs) << ','
       << fmt17(s.q_arg) << "\n";
  return finish_run_status(rc.output_path, os.str(), run.status);
}

inline int cmd_trajectory(CLI::App* sub, const Flags& f) {
  RunConfig rc = merge_config(sub, f);
  check_format(rc.format, "csv");
  rc.params.validate();
  Energy E{rc.energy};
  OrbitGeometry g = orbit_geometry(E, rc.params);
  double t_final = f.t_final > 0.0 ? f.t_final : g.tau;
  int n = f.samples > 1 ? f.samples : 500;

  std::ostringstream os;
  os << "# trajectory m=" << fmt17(rc.params.m) << " k=" << fmt17(rc.params.k)
     << " l=" << fmt17(rc.params.l) << " eta=" << fmt17(rc.params.eta)
     << " energy=" << fmt17(rc.energy) << " theta0=" << fmt17(rc.theta0)
     << " t_final=" << fmt17(t_final) << "\n";
  os << "t,r,p,psi,energy_residual\n";
  for (int i = 0; i < n; ++i) {
    double t = t_final * i / (n - 1);
    RadialState s = radial_state_of_time(t, E, rc.theta0, rc.params);
    double psi = eccentric_anomaly_of_time(t, E, rc.theta0, rc.params).psi;
    double res = eval_radial_hamiltonian(s, rc.params) - E.value;
    os << fmt17(t) << ',' << fmt17(s.r) << ',' << fmt17(s.p) << ',' << fmt17(psi) << ','
       << fmt17(res) << "\n";
  }
  write_output(rc.output_path, os.str());
  return 0;
}

inline int cmd_orbit(CLI::App* sub, const Flags& f) {
  RunConfig rc = merge_config(sub, f);
  check_format(rc.format, "csv");
  rc.params.validate();
  int n = f.samples > 2 ? f.samples : 360;
  ConicOrbit orbit = conic_from_energy(Energy{rc.energy}, rc.theta0, rc.params);

  std::ostringstream os;
  os << "# orbit m=" << fmt17(rc.params.m) << " k=" << fmt17(rc.params.k)
     << " l=" << fmt17(rc.params.l) << " eta=" << fmt17(rc.params.eta)
     << " energy=" << fmt17(rc.energy) << " theta0=" << fmt17(rc.theta0)
     << " p_orbit=" << fmt17(orbit.p_orbit) << " eps=" << fmt17(orbit.eps) << "\n";
  os << "theta,r,x,y\n";
  for (const OrbitSample& s : trace_orbit(orbit, n))
    os << fmt17(s.theta) << ',' << fmt17(s.r) << ',' << fmt17(s.x) << ',' << fmt17(s.y)
       << "\n";
  write_output(rc.output_path, os.str());
  return 0;
}

inline int cmd_potential(CLI::App* sub, const Flags& f) {
  RunConfig rc = merge_config(sub, f);
  check_format(rc.format, "csv");
  if (sub->count("--alpha")) {
    // alpha fixes eta = -alpha l^2/(2mk) for the given l, m, k.
    if (!(f.alpha > 0.0)) throw std::invalid_argument("potential: --alpha must be > 0");
    rc.params.eta = -f.alpha * rc.params.l * rc.params.l / (2.0 * rc.params.m * rc.params.k);
  }
  rc.params.validate();
  if (!(f.r_min > 0.0) || !(f.r_max > f.r_min))
    throw std::invalid_argument("potential: need 0 < --r-min < --r-max");
  int n = f.samples > 1 ? f.samples : 500;

  std::ostringstream os;
  os << "# potential m=" << fmt17(rc.params.m) << " k=" << fmt17(rc.params.k)
     << " l=" << fmt17(rc.params.l) << " eta=" << fmt17(rc.params.eta) << "\n";
  os << "r,V_eff,V_eff_time_reversed\n";
  double wall = -rc.params.eta;  // singular radius for eta < 0
  for (int i = 0; i < n; ++i) {
    double r = f.r_min + (f.r_max - f.r_min) * i / (n - 1);
    if (rc.params.eta < 0.0 && std::fabs(r - wall) < 1e-12) continue;
    os << fmt17(r) << ',' << fmt17(effective_potential(r, rc.params)) << ',';
    if (rc.params.eta < 0.0 && r < wall) os << fmt17(time_reversed_potential(r, rc.params));
    os << "\n";
  }
  write_output(rc.output_path, os.str());
  return 0;
}

inline int cmd_brackets_check(CLI::App* sub, const Flags& f) {
  RunConfig rc = merge_config(sub, f);
  check_format(rc.format, "json");
  rc.params.validate();
  int n = f.samples > 0 ? f.samples : 100;

  std::mt19937_64 gen(f.seed);
  double r_lo = rc.params.eta < 0.0 ? -rc.params.eta * 1.25 + 0.01 : 0.1;
  double r_hi = r_lo + 1.2;
  double fact = 0.0, c_hp = 0.0, c_hm = 0.0, c_pm = 0.0;
  double s_0p = 0.0, s_0m = 0.0, s_pm = 0.0;
  int accepted = 0;
  for (int tries = 0; accepted < n && tries < 10000 * n; ++tries) {
    RadialState s{r_lo + (r_hi - r_lo) * uniform01(gen), -1.5 + 3.0 * uniform01(gen)};
    double H = eval_radial_hamiltonian(s, rc.params);
    if (!(H < -0.05) || std::fabs(rc.params.k - rc.params.eta * H) < 1e-6) continue;
    ++accepted;
    fact = std::max(fact, factorization_residual(s, rc.params));
    ClosureResiduals c = closure_residuals(s, rc.params);
    c_hp = std::max(c_hp, c.h_plus);
    c_hm = std::max(c_hm, c.h_minus);
    c_pm = std::max(c_pm, c.plus_minus_beta);
    Su11Residuals u = verify_su11(s, rc.params);
    s_0p = std::max(s_0p, u.a0_plus);
    s_0m = std::max(s_0m, u.a0_minus);
    s_pm = std::max(s_pm, u.plus_minus);
  }
  if (accepted < n)
    throw std::domain_error("brackets-check: could not sample enough bound states");

  nlohmann::json j;
  j["seed"] = f.seed;
  j["samples"] = n;
  j["params"] = {{"m", rc.params.m}, {"k", rc.params.k}, {"l", rc.params.l},
                 {"eta", rc.params.eta}};
  j["max_residuals"] = {{"factorization", fact},
                        {"closure_h_aplus", c_hp},
                        {"closure_h_aminus", c_hm},
                        {"closure_aplus_aminus", c_pm},
                        {"su11_a0_aplus", s_0p},
                        {"su11_a0_aminus", s_0m},
                        {"su11_aplus_aminus", s_pm}};
  write_output(rc.output_path, j.dump(2) + "\n");
  return 0;
}

inline int cmd_third_law(CLI::App* sub, const Flags& f) {
  RunConfig rc = merge_config(sub, f);
  check_format(rc.format, "json");
  rc.params.validate();
  Energy E{rc.energy};
  OrbitGeometry g = orbit_geometry(E, rc.params);
  nlohmann::json j;
  j["params"] = {{"m", rc.params.m}, {"k", rc.params.k}, {"l", rc.params.l},
                 {"eta", rc.params.eta}};
  j["energy"] = rc.energy;
  j["ratio"] = third_law_ratio(E, rc.params);
  j["ratio_from_geometry"] = g.tau * g.tau / (g.a * g.a * g.a);
  j["flat_ratio"] = 4.0 * std::numbers::pi * std::numbers::pi * rc.params.m / rc.params.k;
  j["expansion_residual"] = third_law_expansion_residual(E, rc.params);
  write_output(rc.output_path, j.dump(2) + "\n");
  return 0;
}

inline const char* to_string(RegimeCase c) {
  switch (c) {
    case RegimeCase::alpha_lt_1: return "alpha_lt_1";
    case RegimeCase::alpha_eq_1: return "alpha_eq_1";
    default: return "alpha_gt_1";
  }
}

inline const char* to_string(RadialRegion r) {
  switch (r) {
    case RadialRegion::outer: return "outer";
    case RadialRegion::inner: return "inner";
    default: return "whole_line";
  }
}

inline int cmd_regime(CLI::App* sub, const Flags& f) {
  RunConfig rc = merge_config(sub, f);
  check_format(rc.format, "json");
  rc.params.validate();
  if (!sub->count("--r0")) throw std::invalid_argument("regime: --r0 is required");
  RegimeReport rep = classify(Energy{rc.energy}, f.r0, rc.params);
  nlohmann::json j;
  j["params"] = {{"m", rc.params.m}, {"k", rc.params.k}, {"l", rc.params.l},
                 {"eta", rc.params.eta}};
  j["energy"] = rc.energy;
  j["r0"] = f.r0;
  j["alpha"] = rep.alpha;
  j["lambda"] = rep.lambda;
  j["case"] = to_string(rep.regime_case);
  j["region"] = to_string(rep.region);
  j["bounded"] = rep.bounded;
  j["time_reversed"] = rep.time_reversed;
  j["critical_radii"] = rep.critical_radii;
  j["critical_energies"] = rep.critical_energies;
  if (rep.inflection)
    j["inflection"] = *rep.inflection;
  else
    j["inflection"] = nullptr;
  write_output(rc.output_path, j.dump(2) + "\n");
  return 0;
}

}  // namespace detail

inline int run(int argc, const char* const* argv) {
  CLI::App app{"eta-deformed Kepler (Taub-NUT) toolkit"};
  app.require_subcommand(1);

  detail::Flags f{};
  CLI::App* simulate = app.add_subcommand("simulate", "oracle integration of the radial flow");
  detail::add_common_options(simulate, f);
  simulate->add_option("--r0", f.r0, "initial radius (default: perihelion of --energy)");
  simulate->add_option("--p0", f.p0, "initial radial momentum");
  simulate->add_flag("--time-reversed", f.time_reversed, "integrate the flow of -H");

  CLI::App* trajectory = app.add_subcommand("trajectory", "closed-form r(t), p(t)");
  detail::add_common_options(trajectory, f);

  CLI::App* orbit = app.add_subcommand("orbit", "conic orbit trace");
  detail::add_common_options(orbit, f);

  CLI::App* potential = app.add_subcommand("potential", "effective potential grid");
  detail::add_common_options(potential, f);
  potential->add_option("--alpha", f.alpha, "set eta = -alpha l^2/(2mk)");
  potential->add_option("--r-min", f.r_min, "grid start");
  potential->add_option("--r-max", f.r_max, "grid end");

  CLI::App* brackets = app.add_subcommand("brackets-check", "algebra residuals, random states");
  detail::add_common_options(brackets, f);

  CLI::App* third_law = app.add_subcommand("third-law", "deformed third-law numbers");
  detail::add_common_options(third_law, f);

  CLI::App* regime = app.add_subcommand("regime", "eta < 0 classification report");
  detail::add_common_options(regime, f);
  regime->add_option("--r0", f.r0, "initial radius defining the region");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    if (simulate->parsed()) return detail::cmd_simulate(simulate, f);
    if (trajectory->parsed()) return detail::cmd_trajectory(trajectory, f);
    if (orbit->parsed()) return detail::cmd_orbit(orbit, f);
    if (potential->parsed()) return detail::cmd_potential(potential, f);
    if (brackets->parsed()) return detail::cmd_brackets_check(brackets, f);
    if (third_law->parsed()) return detail::cmd_third_law(third_law, f);
    if (regime->parsed()) return detail::cmd_regime(regime, f);
  } catch (const convergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 64;
}

}  // namespace taubnut::cli
