#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "complexkit/geometry.hpp"
#include "complexkit/igc.hpp"
#include "complexkit/krylov.hpp"
#include "complexkit/numerics.hpp"
#include "complexkit/propagator.hpp"

namespace complexkit {

struct ScenarioSpec {
  std::string name;
  FieldConfiguration config;
  PureQubitState psi0;
  double t_i = 0.0;
  double t_f = 0.0;
  std::map<std::string, double> parameters;
};

struct ComplexityReport {
  ComplexityReport(std::string name, Trajectory trajectory)
      : scenario(std::move(name)), traj(std::move(trajectory)) {}

  std::string scenario;
  Trajectory traj;
  std::vector<double> k_series;
  std::vector<double> v_series;
  std::vector<double> kappa_series;
  double avg_k = 0.0;
  double vbar = 0.0;
  double vmax = 0.0;
  double c_igc = 0.0;
  double eta_ge = 0.0;
  double s = 0.0;
  double s0 = 0.0;
  double l_c = 0.0;
  double sup_k = 0.0;
  // Closed-form values the underlying analysis supplies for this case,
  // keyed like the report fields.
  std::map<std::string, double> analytic;
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "stationary-geodesic", "stationary-nongeodesic", "nonstationary-geodesic",
      "nonstationary-nongeodesic", "rotating-field"};
  return names;
}

// Builds one of the five case studies. Recognized parameter overrides:
// omega, nu (stationary / rotating), omega0, nu0, beta0 (parametric
// families), t_f (rotating-field window).
inline ScenarioSpec make_scenario(
    const std::string& name,
    const std::map<std::string, double>& overrides = {}) {
  auto param = [&](const std::string& key, double fallback) {
    auto it = overrides.find(key);
    return it == overrides.end() ? fallback : it->second;
  };
  const PureQubitState ket0(1.0, 0.0);
  if (name == "stationary-geodesic") {
    const double omega = param("omega", 1.0);
    ScenarioSpec spec{
        name,
        FieldConfiguration::constant(
            0.0, Eigen::Vector3d(0.0, omega / std::sqrt(6.0), 0.0)),
        ket0, 0.0, kPi * std::sqrt(6.0) / (4.0 * omega),
        {{"omega", omega}}};
    return spec;
  }
  if (name == "stationary-nongeodesic") {
    const double omega = param("omega", 1.0);
    const Eigen::Vector3d n = Eigen::Vector3d(1.0, 1.0, 1.0).normalized();
    ScenarioSpec spec{name,
                      FieldConfiguration::constant(0.0, 0.5 * omega * n),
                      ket0,
                      0.0,
                      2.0 * kPi / (3.0 * omega),
                      {{"omega", omega}}};
    return spec;
  }
  if (name == "nonstationary-geodesic") {
    const double omega0 = param("omega0", 1.0);
    const double beta0 = param("beta0", kPi / 4.0);
    ScenarioSpec spec{name,
                      FieldConfiguration::parametric(
                          ScalarTimeFunction::linear(0.0, omega0),
                          ScalarTimeFunction::constant(beta0)),
                      ket0,
                      0.0,
                      kPi / (2.0 * omega0),
                      {{"omega0", omega0}, {"beta0", beta0}}};
    return spec;
  }
  if (name == "nonstationary-nongeodesic") {
    const double omega0 = param("omega0", 1.0);
    const double nu0 = param("nu0", 1.0);
    const double beta0 = param("beta0", kPi / 4.0);
    ScenarioSpec spec{name,
                      FieldConfiguration::parametric(
                          ScalarTimeFunction::linear(0.0, omega0),
                          ScalarTimeFunction::linear(beta0, nu0)),
                      ket0,
                      0.0,
                      kPi / (2.0 * omega0),
                      {{"omega0", omega0}, {"nu0", nu0}, {"beta0", beta0}}};
    return spec;
  }
  if (name == "rotating-field") {
    const double omega = param("omega", 1.0);
    const double nu = param("nu", 1.0);
    const double t_f = param("t_f", 2.0 * kPi);
    ScenarioSpec spec{name,
                      FieldConfiguration::rotating_xy(omega, nu),
                      ket0,
                      0.0,
                      t_f,
                      {{"omega", omega}, {"nu", nu}, {"t_f", t_f}}};
    return spec;
  }
  throw std::invalid_argument("unknown scenario: " + name);
}

namespace detail {

inline void attach_analytic(const ScenarioSpec& spec, ComplexityReport& r) {
  auto p = [&](const std::string& key) { return spec.parameters.at(key); };
  if (spec.name == "stationary-geodesic") {
    r.analytic = {{"avg_k", 0.5 - 1.0 / kPi}, {"c_igc", 0.5},
                  {"eta_ge", 1.0},            {"kappa_sq", 0.0},
                  {"vbar", kPi / 8.0},        {"vmax", kPi / 4.0},
                  {"s0", kPi / 2.0},          {"s", kPi / 2.0},
                  {"l_c", kPi / 2.0 * std::sqrt(2.0)}};
  } else if (spec.name == "stationary-nongeodesic") {
    r.analytic = {{"avg_k", 1.0 / 3.0 - std::sqrt(3.0) / (4.0 * kPi)},
                  {"c_igc", 0.74},
                  {"eta_ge", 3.0 * std::sqrt(6.0) / 8.0},
                  {"kappa_sq", 2.0},
                  {"vbar", 5.11e-2},
                  {"vmax", kPi / 16.0},
                  {"s0", kPi / 2.0}};
  } else if (spec.name == "nonstationary-geodesic") {
    r.analytic = {{"avg_k", 0.5},      {"c_igc", 0.5},
                  {"eta_ge", 1.0},     {"kappa_sq", 0.0},
                  {"vbar", kPi / 4.0}, {"vmax", kPi / 2.0},
                  {"s0", kPi},         {"s", kPi},
                  {"l_c", kPi * std::sqrt(2.0)}};
  } else if (spec.name == "nonstationary-nongeodesic") {
    const double ratio = p("nu0") / p("omega0");
    r.analytic = {{"avg_k", 0.5},
                  {"c_igc", (3.0 * kPi * kPi - 4.0) / (4.0 * kPi * kPi)},
                  {"vbar", (1.0 / (4.0 * kPi) + kPi / 16.0) * ratio},
                  {"vmax", kPi / 4.0 * ratio},
                  {"s0", kPi},
                  {"kappa_sq_t0", 4.0 * ratio * ratio}};
    if (p("nu0") == p("omega0")) r.analytic["s"] = 3.33;
  } else if (spec.name == "rotating-field") {
    const double w2 = p("omega") * p("omega");
    const double amp = w2 / (w2 + p("nu") * p("nu"));
    r.analytic = {{"sup_k", amp}};
  }
}

}  // namespace detail

// Runs one case study end to end. The Krylov series is computed twice — the
// geometric Bloch form and the Lanczos spread route — and the two must agree
// to 1e-9 pointwise before the report is released.
inline ComplexityReport run_scenario(const ScenarioSpec& spec,
                                     std::size_t samples = 2049) {
  Trajectory traj =
      trajectory(spec.config, spec.psi0, spec.t_i, spec.t_f, samples);
  const BlochVector a0 = traj[0].bloch;

  ComplexityReport report{spec.name, traj};
  const std::size_t n = traj.size();
  report.k_series.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    report.k_series[i] = krylov_from_bloch(a0, traj[i].bloch);

  const KrylovBasis basis =
      lanczos(matrix_at(spec.config, spec.t_i), spec.psi0.vec());
  if (basis.dimension == 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const double via_spread =
          spread_complexity(traj[i].state.vec(), basis);
      if (std::abs(via_spread - report.k_series[i]) > 1e-9)
        throw std::logic_error(
            "run_scenario: Lanczos and geometric Krylov routes disagree");
    }
  }

  const VolumeReport volumes = volume_report(traj);
  report.v_series = volumes.v_of_t;
  report.vbar = volumes.accessed;
  report.vmax = volumes.accessible;
  report.c_igc = volumes.complexity;
  report.l_c = volumes.length_scale;

  report.kappa_series.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = traj[i].t;
    try {
      report.kappa_series[i] = curvature_coefficient(
          traj[i].bloch, field_at(spec.config, t).hvec,
          field_derivative_at(spec.config, t));
    } catch (const std::domain_error&) {
      // eigenstate-like degeneracy at this sample: curvature undefined
      report.kappa_series[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }

  report.s = path_length(traj);
  report.s0 = geodesic_distance(traj.samples().front().state,
                                traj.samples().back().state);
  report.eta_ge = geodesic_efficiency(traj);

  report.avg_k = time_averaged_krylov(
      [&](double t) {
        return krylov_from_bloch(
            a0, to_bloch(propagate_best(spec.config, spec.psi0, spec.t_i, t)));
      },
      spec.t_i, spec.t_f);

  std::size_t arg = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (report.k_series[i] > report.k_series[arg]) arg = i;
  report.sup_k = report.k_series[arg];
  if (arg > 0 && arg + 1 < n)
    report.sup_k = std::max(
        report.sup_k,
        quadratic_vertex_value(report.k_series[arg - 1], report.k_series[arg],
                               report.k_series[arg + 1]));

  detail::attach_analytic(spec, report);
  return report;
}

}  // namespace complexkit
