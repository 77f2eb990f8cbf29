#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "complexkit/hamiltonian.hpp"
#include "complexkit/numerics.hpp"
#include "complexkit/qstate.hpp"

namespace complexkit {

struct IntegratorOptions {
  enum class Method { midpoint_exponential, rk4_renormalized };
  int step_count = 2048;  // total steps over the integration window
  Method method = Method::midpoint_exponential;
  double tolerance = 1e-10;  // admissible norm drift of the final state
};

inline constexpr int kMaxOrderedSteps = 1 << 22;

// ---------------------------------------------------------------------------
// Closed-form propagators

// U(t) = e^{-i h0 t}[cos(ht) - i sin(ht) n.sigma] applied to psi0.
inline PureQubitState evolve_stationary(const FieldConfiguration& config,
                                        const PureQubitState& psi0, double t) {
  if (config.kind() != FieldKind::Constant)
    throw std::invalid_argument("evolve_stationary: config not Constant");
  if (!std::isfinite(t))
    throw std::invalid_argument("evolve_stationary: non-finite t");
  const auto& c = config.as<ConstantField>();
  return PureQubitState::from_vec(pauli_exponential(c.h0, c.hvec, t) *
                                  psi0.vec());
}

namespace detail {

// exp(-i int_{t0}^{t1} H) for commuting families: scalar and vector parts
// integrated componentwise by adaptive quadrature, then one exact rotation.
inline Eigen::Matrix2cd commuting_propagator(const FieldConfiguration& config,
                                             double t0, double t1) {
  auto component = [&](int i) {
    return adaptive_simpson(
        [&](double s) { return field_at(config, s).hvec(i); }, t0, t1, 1e-12);
  };
  const double phi0 = adaptive_simpson(
      [&](double s) { return field_at(config, s).h0; }, t0, t1, 1e-12);
  const Eigen::Vector3d phi(component(0), component(1), component(2));
  return pauli_exponential(phi0, phi, 1.0);
}

}  // namespace detail

inline PureQubitState evolve_commuting(const FieldConfiguration& config,
                                       const PureQubitState& psi0, double t) {
  switch (config.kind()) {
    case FieldKind::Constant:
      return evolve_stationary(config, psi0, t);
    case FieldKind::ScaledDirection:
      break;  // commuting by construction: fixed direction
    default:
      if (!commutes_by_sampling(config, 0.0, t))
        throw std::domain_error(
            "evolve_commuting: Hamiltonians at different times do not "
            "commute; use evolve_ordered");
  }
  return PureQubitState::from_vec(detail::commuting_propagator(config, 0.0, t) *
                                  psi0.vec());
}

// Exact solution of the rotating-field evolution from |0> at t = 0:
// [cos(Wt/2) + i (nu/W) sin(Wt/2)] e^{-i nu t/2}|0> - i (w/W) sin(Wt/2) e^{i nu t/2}|1>.
inline PureQubitState rotating_field_state(double omega, double nu, double t) {
  const double big_omega = std::hypot(omega, nu);
  if (big_omega == 0.0) return PureQubitState(1.0, 0.0);
  const double c = std::cos(0.5 * big_omega * t);
  const double s = std::sin(0.5 * big_omega * t);
  const complexd c0 =
      complexd(c, (nu / big_omega) * s) * std::polar(1.0, -0.5 * nu * t);
  const complexd c1 =
      complexd(0.0, -(omega / big_omega) * s) * std::polar(1.0, 0.5 * nu * t);
  return PureQubitState(c0, c1);
}

namespace detail {

// Full rotating-field propagator U(t) = e^{-i nu t sigma_z/2} e^{-i H_RF t},
// H_RF = (omega sigma_x - nu sigma_z)/2; valid for any initial state.
inline Eigen::Matrix2cd rotating_propagator(const RotatingXYField& f,
                                            double t) {
  const Eigen::Matrix2cd lab =
      pauli_exponential(0.0, Eigen::Vector3d(0.0, 0.0, 0.5 * f.nu), t);
  const Eigen::Matrix2cd rf = pauli_exponential(
      0.0, Eigen::Vector3d(0.5 * f.omega, 0.0, -0.5 * f.nu), t);
  return lab * rf;
}

// Parallel-transported parametric family member at time t.
inline Eigen::Vector2cd parametric_family_state(const ParametricField& p,
                                                double t) {
  const double a = p.alpha(t);
  const complexd phase = std::polar(1.0, -uzdin_phase(p.alpha, p.beta, t));
  return phase * Eigen::Vector2cd(std::cos(a),
                                  std::polar(std::sin(a), p.beta(t)));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Time-ordered numeric propagator

namespace detail {

inline Eigen::Vector2cd schrodinger_rhs(const FieldConfiguration& config,
                                        double t, const Eigen::Vector2cd& psi) {
  return complexd(0.0, -1.0) * (matrix_at(config, t) * psi);
}

inline Eigen::Vector2cd ordered_march(const FieldConfiguration& config,
                                      Eigen::Vector2cd psi, double t0,
                                      double t1, int steps,
                                      IntegratorOptions::Method method) {
  const double dt = (t1 - t0) / static_cast<double>(steps);
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + dt * static_cast<double>(k);
    if (method == IntegratorOptions::Method::midpoint_exponential) {
      const FieldSample f = field_at(config, t + 0.5 * dt);
      psi = pauli_exponential(f.h0, f.hvec, dt) * psi;
    } else {
      const Eigen::Vector2cd k1 = schrodinger_rhs(config, t, psi);
      const Eigen::Vector2cd k2 =
          schrodinger_rhs(config, t + 0.5 * dt, psi + 0.5 * dt * k1);
      const Eigen::Vector2cd k3 =
          schrodinger_rhs(config, t + 0.5 * dt, psi + 0.5 * dt * k2);
      const Eigen::Vector2cd k4 =
          schrodinger_rhs(config, t + dt, psi + dt * k3);
      psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      psi.normalize();
    }
  }
  return psi;
}

}  // namespace detail

// Time-ordered propagation as a product of midpoint-evaluated exponential
// steps, each an exact SU(2) rotation (or renormalized RK4 on request).
inline PureQubitState evolve_ordered(const FieldConfiguration& config,
                                     const PureQubitState& psi0, double t0,
                                     double t1,
                                     const IntegratorOptions& opts = {}) {
  if (!(t1 >= t0)) throw std::invalid_argument("evolve_ordered: t1 < t0");
  if (t1 == t0) return psi0;
  int steps = std::max(16, opts.step_count);
  double drift = 0.0;
  while (steps <= kMaxOrderedSteps) {
    const Eigen::Vector2cd psi =
        detail::ordered_march(config, psi0.vec(), t0, t1, steps, opts.method);
    drift = std::abs(psi.norm() - 1.0);
    if (drift <= opts.tolerance) return PureQubitState::from_vec(psi);
    steps *= 2;
  }
  throw std::runtime_error(
      "evolve_ordered: unitarity tolerance unreachable; residual " +
      std::to_string(drift));
}

// Best available propagator for one target time: closed form where the
// config admits one, numeric time-ordered integration otherwise.
inline PureQubitState propagate_best(const FieldConfiguration& config,
                                     const PureQubitState& psi0, double t0,
                                     double t, const IntegratorOptions& opts = {}) {
  switch (config.kind()) {
    case FieldKind::Constant:
      return evolve_stationary(config, psi0, t - t0);
    case FieldKind::ScaledDirection:
      return PureQubitState::from_vec(
          detail::commuting_propagator(config, t0, t) * psi0.vec());
    case FieldKind::RotatingXY: {
      const auto& f = config.as<RotatingXYField>();
      const Eigen::Matrix2cd u = detail::rotating_propagator(f, t) *
                                 detail::rotating_propagator(f, t0).adjoint();
      return PureQubitState::from_vec(u * psi0.vec());
    }
    case FieldKind::Parametric: {
      // The closed form follows the parallel-transported family; it applies
      // only when psi0 is that family member (up to a constant phase).
      const auto& p = config.as<ParametricField>();
      const Eigen::Vector2cd m0 = detail::parametric_family_state(p, t0);
      const complexd c = m0.dot(psi0.vec());
      if (std::abs(std::norm(c) - 1.0) < 1e-12) {
        return PureQubitState::from_vec(c *
                                        detail::parametric_family_state(p, t));
      }
      return evolve_ordered(config, psi0, t0, t, opts);
    }
    case FieldKind::Custom:
      return evolve_ordered(config, psi0, t0, t, opts);
  }
  throw std::logic_error("propagate_best: unreachable");
}

// ---------------------------------------------------------------------------
// Sampled trajectories

struct TrajectorySample {
  double t = 0.0;
  PureQubitState state{1.0, 0.0};
  BlochVector bloch = BlochVector::UnitZ();
  SphericalAngles angles;
  double delta_e = 0.0;
};

class Trajectory {
 public:
  Trajectory(FieldConfiguration config, PureQubitState origin,
             std::vector<TrajectorySample> samples, IntegratorOptions opts,
             std::optional<Eigen::Matrix2cd> basis_change = std::nullopt)
      : config_(std::move(config)),
        origin_(origin),
        samples_(std::move(samples)),
        opts_(opts),
        basis_change_(std::move(basis_change)) {
    if (samples_.size() < 1)
      throw std::invalid_argument("Trajectory: no samples");
    for (std::size_t i = 1; i < samples_.size(); ++i)
      if (!(samples_[i].t > samples_[i - 1].t))
        throw std::invalid_argument("Trajectory: times not increasing");
    theta_min_ = theta_max_ = samples_.front().angles.theta;
    phi_min_ = phi_max_ = samples_.front().angles.phi;
    for (const auto& s : samples_) {
      theta_min_ = std::min(theta_min_, s.angles.theta);
      theta_max_ = std::max(theta_max_, s.angles.theta);
      phi_min_ = std::min(phi_min_, s.angles.phi);
      phi_max_ = std::max(phi_max_, s.angles.phi);
    }
  }

  const std::vector<TrajectorySample>& samples() const { return samples_; }
  const TrajectorySample& operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const { return samples_.size(); }
  double t_a() const { return samples_.front().t; }
  double t_b() const { return samples_.back().t; }
  const FieldConfiguration& config() const { return config_; }
  // Initial state in the config's own basis, regardless of any rebasing.
  const PureQubitState& origin_state() const { return origin_; }
  const IntegratorOptions& options() const { return opts_; }
  const std::optional<Eigen::Matrix2cd>& basis_change() const {
    return basis_change_;
  }

  double theta_span() const { return theta_max_ - theta_min_; }
  double phi_span() const { return phi_max_ - phi_min_; }

 private:
  FieldConfiguration config_;
  PureQubitState origin_;
  std::vector<TrajectorySample> samples_;
  IntegratorOptions opts_;
  std::optional<Eigen::Matrix2cd> basis_change_;
  double theta_min_ = 0.0, theta_max_ = 0.0, phi_min_ = 0.0, phi_max_ = 0.0;
};

namespace detail {

// A sample pair flanking a pole passage counts as a chart crossing when both
// ends sit this close to the pole (in sin theta).
inline constexpr double kPoleCrossingSin = 1e-2;

// Angle assembly: raw angles per state, pole samples flagged, azimuth
// unwrapped over the non-pole chain, then pole azimuths rebuilt by local
// polynomial extrapolation so anchored volumes see the limiting value
// rather than the bare phi = 0 convention. A jump of ~pi across a pole
// passage is an artifact of the spherical chart (the path leaves on the
// opposite meridian) and is folded out to keep phi continuous.
inline void assign_angles(std::vector<TrajectorySample>& samples) {
  const std::size_t n = samples.size();
  std::vector<bool> pole(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i].angles = to_angles(samples[i].state);
    pole[i] = std::min(std::abs(samples[i].state.c0()),
                       std::abs(samples[i].state.c1())) < kPoleTolerance;
  }
  // Unwrap across consecutive non-pole samples. Steps are taken between raw
  // azimuths and accumulated, so a fold applied at a crossing carries
  // through the rest of the chain.
  double prev_raw = 0.0;
  double prev_unwrapped = 0.0;
  double prev_theta = 0.0;
  std::size_t prev_index = 0;
  bool have_prev = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (pole[i]) continue;
    const double raw = samples[i].angles.phi;
    if (have_prev) {
      double delta = wrap_to_pi(raw - prev_raw);
      const bool pole_between = i > prev_index + 1;
      const double dip =
          std::min(std::sin(prev_theta), std::sin(samples[i].angles.theta));
      if (std::abs(delta) > 0.5 * kPi &&
          (pole_between || dip < kPoleCrossingSin))
        delta -= std::copysign(kPi, delta);
      samples[i].angles.phi = prev_unwrapped + delta;
    }
    prev_raw = raw;
    prev_unwrapped = samples[i].angles.phi;
    prev_theta = samples[i].angles.theta;
    prev_index = i;
    have_prev = true;
  }
  if (!have_prev) return;  // trajectory pinned to a pole; keep phi = 0
  // Rebuild pole azimuths from the nearest non-pole samples (Lagrange,
  // up to cubic).
  std::vector<std::size_t> good;
  good.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!pole[i]) good.push_back(i);
  for (std::size_t i = 0; i < n; ++i) {
    if (!pole[i]) continue;
    // up to four nearest non-pole indices by |t difference|
    std::size_t picks[4];
    std::size_t count = 0;
    auto dist = [&](std::size_t j) {
      return std::abs(samples[j].t - samples[i].t);
    };
    for (std::size_t j : good) {
      if (count < 4) {
        picks[count++] = j;
        continue;
      }
      std::size_t worst = 0;
      for (std::size_t k = 1; k < 4; ++k)
        if (dist(picks[k]) > dist(picks[worst])) worst = k;
      if (dist(j) < dist(picks[worst])) picks[worst] = j;
    }
    double value = 0.0;
    for (std::size_t a = 0; a < count; ++a) {
      double weight = 1.0;
      for (std::size_t b = 0; b < count; ++b) {
        if (a == b) continue;
        weight *= (samples[i].t - samples[picks[b]].t) /
                  (samples[picks[a]].t - samples[picks[b]].t);
      }
      value += weight * samples[picks[a]].angles.phi;
    }
    samples[i].angles.phi = value;
  }
}

}  // namespace detail

// n uniformly spaced samples of the evolution, with Bloch vectors, unwrapped
// spherical angles, and the instantaneous energy uncertainty attached.
inline Trajectory trajectory(const FieldConfiguration& config,
                             const PureQubitState& psi0, double t0, double t1,
                             std::size_t n,
                             const IntegratorOptions& opts = {}) {
  if (n < 2) throw std::invalid_argument("trajectory: need n >= 2");
  if (!(t1 > t0)) throw std::invalid_argument("trajectory: t1 <= t0");
  const double dt = (t1 - t0) / static_cast<double>(n - 1);
  std::vector<TrajectorySample> samples(n);
  const bool numeric = config.kind() == FieldKind::Custom ||
                       (config.kind() == FieldKind::Parametric &&
                        std::abs(std::norm(detail::parametric_family_state(
                                               config.as<ParametricField>(), t0)
                                               .dot(psi0.vec())) -
                                 1.0) >= 1e-12);
  if (numeric) {
    const int per = std::max(
        1, static_cast<int>((std::max(16, opts.step_count) + n - 2) / (n - 1)));
    Eigen::Vector2cd psi = psi0.vec();
    samples[0].state = psi0;
    for (std::size_t i = 1; i < n; ++i) {
      const double ta = t0 + dt * static_cast<double>(i - 1);
      const double tb = (i == n - 1) ? t1 : t0 + dt * static_cast<double>(i);
      psi = detail::ordered_march(config, psi, ta, tb, per, opts.method);
      if (std::abs(psi.norm() - 1.0) > opts.tolerance)
        throw std::runtime_error("trajectory: integrator norm drift");
      samples[i].state = PureQubitState::from_vec(psi);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = (i == n - 1) ? t1 : t0 + dt * static_cast<double>(i);
      samples[i].state = propagate_best(config, psi0, t0, t, opts);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (i == n - 1) ? t1 : t0 + dt * static_cast<double>(i);
    samples[i].t = t;
    samples[i].bloch = to_bloch(samples[i].state);
    samples[i].delta_e =
        energy_uncertainty(samples[i].bloch, field_at(config, t).hvec);
  }
  detail::assign_angles(samples);
  return Trajectory(config, psi0, std::move(samples), opts);
}

// Re-expresses every sampled state in another orthonormal basis (rows of the
// unitary are the new basis bras) and rebuilds angles. Energy uncertainty is
// basis independent and carried over.
inline Trajectory rebase(const Trajectory& traj,
                         const Eigen::Matrix2cd& basis_change) {
  if ((basis_change.adjoint() * basis_change - Eigen::Matrix2cd::Identity())
          .cwiseAbs()
          .maxCoeff() > 1e-10)
    throw std::invalid_argument("rebase: basis change not unitary");
  std::vector<TrajectorySample> samples = traj.samples();
  for (auto& s : samples) {
    s.state = PureQubitState::from_vec(basis_change * s.state.vec());
    s.bloch = to_bloch(s.state);
  }
  detail::assign_angles(samples);
  Eigen::Matrix2cd total = basis_change;
  if (traj.basis_change()) total = basis_change * (*traj.basis_change());
  return Trajectory(traj.config(), traj.origin_state(), std::move(samples),
                    traj.options(), total);
}

// Same evolution on a denser uniform grid (used when volume averages need
// refinement past the original sampling).
inline Trajectory resample(const Trajectory& traj, std::size_t n) {
  Trajectory fine = trajectory(traj.config(), traj.origin_state(), traj.t_a(),
                               traj.t_b(), n, traj.options());
  if (traj.basis_change()) return rebase(fine, *traj.basis_change());
  return fine;
}

}  // namespace complexkit
