#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "complexkit/geometry.hpp"
#include "complexkit/numerics.hpp"
#include "complexkit/propagator.hpp"

namespace complexkit {

// Span below which an angle coordinate counts as frozen and the volume
// degenerates to an FS arc length.
inline constexpr double kDegenerateSpan = 1e-9;

struct AngleRange {
  double theta_min = 0.0;
  double theta_max = 0.0;
  double phi_min = 0.0;
  double phi_max = 0.0;
};

struct VolumeReport {
  std::vector<double> v_of_t;
  AngleRange range;
  double accessed = 0.0;      // time-averaged volume V-bar
  double accessible = 0.0;    // V_max
  double complexity = 0.0;    // C = (V_max - V-bar)/V_max
  double length_scale = 0.0;  // L_C = s sqrt(V_max / V-bar)
};

// FS volume of the anchored parametric region [theta(tA), theta(t)] x
// [phi(tA), phi(t)]. When one coordinate is frozen over the whole
// trajectory the product collapses and the volume is the FS length of the
// swept arc instead: (1/2)|d theta| along a meridian, (1/2) sin(theta)|d phi|
// along a parallel.
inline double instantaneous_volume(const Trajectory& traj, std::size_t index) {
  if (index >= traj.size())
    throw std::out_of_range("instantaneous_volume: bad index");
  const SphericalAngles& a0 = traj[0].angles;
  const SphericalAngles& at = traj[index].angles;
  if (traj.phi_span() < kDegenerateSpan)
    return 0.5 * std::abs(at.theta - a0.theta);
  if (traj.theta_span() < kDegenerateSpan)
    return 0.5 * std::sin(a0.theta) * std::abs(at.phi - a0.phi);
  return 0.25 * std::abs((std::cos(a0.theta) - std::cos(at.theta)) *
                         (at.phi - a0.phi));
}

namespace detail {

inline double accessed_on_grid(const Trajectory& traj) {
  std::vector<double> v(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    v[i] = instantaneous_volume(traj, i);
  const double dt =
      (traj.t_b() - traj.t_a()) / static_cast<double>(traj.size() - 1);
  return integrate_uniform(v, dt) / (traj.t_b() - traj.t_a());
}

// Refine the sampling 4x at a time until the time-averaged volume settles.
// Returns the final trajectory alongside the converged average.
inline std::pair<Trajectory, double> accessed_refined(const Trajectory& traj) {
  Trajectory cur = traj;
  double prev = accessed_on_grid(cur);
  while (4 * (cur.size() - 1) + 1 <= (1u << 20) + 1) {
    Trajectory next = resample(cur, 4 * (cur.size() - 1) + 1);
    const double est = accessed_on_grid(next);
    if (std::abs(est - prev) < 1e-8) return {std::move(next), est};
    prev = est;
    cur = std::move(next);
  }
  throw std::runtime_error("accessed_volume: no convergence by 2^20 nodes");
}

// Grid extremum sharpened by one quadratic fit through the neighbors;
// endpoints are kept as sampled.
inline double refined_extremum(const std::vector<double>& v, bool maximum) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (maximum ? v[i] > v[arg] : v[i] < v[arg]) arg = i;
  if (arg == 0 || arg + 1 == v.size()) return v[arg];
  const double fit = quadratic_vertex_value(v[arg - 1], v[arg], v[arg + 1]);
  return maximum ? std::max(v[arg], fit) : std::min(v[arg], fit);
}

inline AngleRange accessible_range(const Trajectory& traj) {
  std::vector<double> theta(traj.size()), phi(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    theta[i] = traj[i].angles.theta;
    phi[i] = traj[i].angles.phi;
  }
  AngleRange r;
  r.theta_min = refined_extremum(theta, false);
  r.theta_max = refined_extremum(theta, true);
  r.phi_min = refined_extremum(phi, false);
  r.phi_max = refined_extremum(phi, true);
  return r;
}

inline double accessible_from_range(const Trajectory& traj,
                                    const AngleRange& r) {
  if (traj.phi_span() < kDegenerateSpan)
    return 0.5 * (r.theta_max - r.theta_min);
  if (traj.theta_span() < kDegenerateSpan)
    return 0.5 * std::sin(0.5 * (r.theta_min + r.theta_max)) *
           (r.phi_max - r.phi_min);
  return 0.25 * (std::cos(r.theta_min) - std::cos(r.theta_max)) *
         (r.phi_max - r.phi_min);
}

}  // namespace detail

// V-bar: mean instantaneous volume over [tA, tB].
inline double accessed_volume(const Trajectory& traj) {
  if (traj.size() < 3)
    throw std::invalid_argument("accessed_volume: need >= 3 samples");
  return detail::accessed_refined(traj).second;
}

// Extremal angle rectangle actually reached during the evolution.
inline AngleRange accessible_range(const Trajectory& traj) {
  return detail::accessible_range(traj);
}

// V_max: FS volume of the accessible rectangle.
inline double accessible_volume(const Trajectory& traj) {
  return detail::accessible_from_range(traj, detail::accessible_range(traj));
}

// Everything at once, with V-bar and V_max evaluated on the same refined
// grid so that the containment bound 0 <= C <= 1 holds structurally.
inline VolumeReport volume_report(const Trajectory& traj) {
  if (traj.size() < 3)
    throw std::invalid_argument("volume_report: need >= 3 samples");
  VolumeReport report;
  report.v_of_t.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    report.v_of_t[i] = instantaneous_volume(traj, i);
  auto [fine, vbar] = detail::accessed_refined(traj);
  report.accessed = vbar;
  report.range = detail::accessible_range(fine);
  report.accessible = detail::accessible_from_range(fine, report.range);
  if (report.accessible <= 1e-14)
    throw std::domain_error("ig_complexity: no accessible region");
  report.complexity = (report.accessible - report.accessed) / report.accessible;
  if (report.accessed > 0.0)
    report.length_scale =
        path_length(fine) * std::sqrt(report.accessible / report.accessed);
  return report;
}

// C = (V_max - V-bar)/V_max in [0, 1].
inline double ig_complexity(const Trajectory& traj) {
  return volume_report(traj).complexity;
}

// L_C = s sqrt(V_max / V-bar).
inline double complexity_length_scale(const Trajectory& traj) {
  const VolumeReport report = volume_report(traj);
  if (report.accessed <= 0.0)
    throw std::domain_error("complexity_length_scale: vanishing accessed volume");
  return report.length_scale;
}

}  // namespace complexkit
