#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "complexkit/numerics.hpp"

namespace complexkit {

using complexd = std::complex<double>;

// Unit Bloch vector of a pure state; producers keep it normalized.
using BlochVector = Eigen::Vector3d;

// Amplitudes may sit within this distance of unit norm and get renormalized;
// anything further out is rejected as a genuine error.
inline constexpr double kNormRepairTolerance = 1e-9;

// Below this magnitude an amplitude counts as sitting on a Bloch pole and
// the azimuth is a convention, not data.
inline constexpr double kPoleTolerance = 1e-12;

struct SphericalAngles {
  double theta = 0.0;  // polar angle in [0, pi]
  double phi = 0.0;    // azimuth; unwrapped values live on the real line
};

// Pure qubit state c0|0> + c1|1>, kept at unit norm.
class PureQubitState {
 public:
  PureQubitState(complexd c0, complexd c1) : c0_(c0), c1_(c1) {
    if (!std::isfinite(c0_.real()) || !std::isfinite(c0_.imag()) ||
        !std::isfinite(c1_.real()) || !std::isfinite(c1_.imag()))
      throw std::invalid_argument("PureQubitState: non-finite amplitude");
    const double norm = std::sqrt(std::norm(c0_) + std::norm(c1_));
    if (std::abs(norm - 1.0) > kNormRepairTolerance)
      throw std::invalid_argument("PureQubitState: amplitudes not normalized");
    c0_ /= norm;
    c1_ /= norm;
  }

  complexd c0() const { return c0_; }
  complexd c1() const { return c1_; }

  Eigen::Vector2cd vec() const { return Eigen::Vector2cd(c0_, c1_); }
  static PureQubitState from_vec(const Eigen::Vector2cd& v) {
    return PureQubitState(v(0), v(1));
  }

 private:
  complexd c0_, c1_;
};

inline PureQubitState from_angles(double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi))
    throw std::invalid_argument("from_angles: non-finite input");
  if (theta < 0.0 || theta > kPi)
    throw std::invalid_argument("from_angles: theta outside [0, pi]");
  return PureQubitState(std::cos(0.5 * theta),
                        std::polar(std::sin(0.5 * theta), phi));
}

// theta via the two-argument arctangent, phi = arg c1 - arg c0 wrapped to
// (-pi, pi]. At a pole the azimuth degenerates and is reported as 0.
inline SphericalAngles to_angles(const PureQubitState& state) {
  const double m0 = std::abs(state.c0());
  const double m1 = std::abs(state.c1());
  SphericalAngles out;
  out.theta = 2.0 * std::atan2(m1, m0);
  if (std::min(m0, m1) < kPoleTolerance) {
    out.phi = 0.0;
  } else {
    out.phi = wrap_to_pi(std::arg(state.c1()) - std::arg(state.c0()));
  }
  return out;
}

inline BlochVector to_bloch(const PureQubitState& state) {
  const complexd cross = std::conj(state.c0()) * state.c1();
  return BlochVector(2.0 * cross.real(), 2.0 * cross.imag(),
                     std::norm(state.c0()) - std::norm(state.c1()));
}

inline complexd overlap(const PureQubitState& a, const PureQubitState& b) {
  return std::conj(a.c0()) * b.c0() + std::conj(a.c1()) * b.c1();
}

// True when the states coincide up to a global phase: 1 - |<a|b>|^2 <= tol.
inline bool phase_equivalent(const PureQubitState& a, const PureQubitState& b,
                             double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("phase_equivalent: tol <= 0");
  return 1.0 - std::norm(overlap(a, b)) <= tol;
}

}  // namespace complexkit
