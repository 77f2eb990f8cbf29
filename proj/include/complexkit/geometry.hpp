#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "complexkit/numerics.hpp"
#include "complexkit/propagator.hpp"
#include "complexkit/qstate.hpp"

namespace complexkit {

using RotationMatrix3 = Eigen::Matrix3d;

// Symmetric 2x2 metric tensor on a two-parameter state family.
struct MetricTensor2 {
  double g11 = 0.0;
  double g12 = 0.0;
  double g22 = 0.0;
};

// Fubini-Study geodesic distance s0 = 2 arccos|<A|B>| in [0, pi].
inline double geodesic_distance(const PureQubitState& a,
                                const PureQubitState& b) {
  const double f = std::clamp(std::abs(overlap(a, b)), 0.0, 1.0);
  return 2.0 * std::acos(f);
}

// Traversed FS length s = 2 int dE dt on the trajectory grid.
inline double path_length(const Trajectory& traj) {
  if (traj.size() < 2) return 0.0;
  std::vector<double> integrand(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    integrand[i] = 2.0 * traj[i].delta_e;
  const double dt = (traj.t_b() - traj.t_a()) /
                    static_cast<double>(traj.size() - 1);
  return integrate_uniform(integrand, dt);
}

inline double geodesic_efficiency(const Trajectory& traj) {
  const double s0 =
      geodesic_distance(traj.samples().front().state, traj.samples().back().state);
  const double s = path_length(traj);
  if (s < 1e-15) {
    if (s0 < 1e-12) return 1.0;
    throw std::domain_error(
        "geodesic_efficiency: zero path length with distinct endpoints");
  }
  return std::clamp(s0 / s, 0.0, 1.0);
}

// Curvature coefficient of the quantum trajectory at a point, from the Bloch
// vector a, the field h and its time derivative. The three-term form covers
// nonstationary dynamics; hdot = 0 reduces it to the stationary constant and
// a.h = a.hdot = 0 to the purely field-driven ratio.
inline double curvature_coefficient(const BlochVector& a,
                                    const Eigen::Vector3d& h,
                                    const Eigen::Vector3d& hdot) {
  const double ah = a.dot(h);
  const double d = h.squaredNorm() - ah * ah;
  if (d <= 1e-14)
    throw std::domain_error(
        "curvature_coefficient: field parallel to the state (no evolution)");
  const double term1 = 4.0 * ah * ah / d;
  const Eigen::Vector3d mixed = a.dot(hdot) * h - ah * hdot;
  const double term2 =
      (h.squaredNorm() * hdot.squaredNorm() - std::pow(h.dot(hdot), 2) -
       mixed.squaredNorm()) /
      (d * d * d);
  const double term3 = 4.0 * ah * a.dot(h.cross(hdot)) / (d * d);
  const double k2 = term1 + term2 + term3;
  return k2 < 0.0 ? 0.0 : k2;  // squared magnitude; negatives are roundoff
}

// ---------------------------------------------------------------------------
// Metric tensors on a parametrized family

// Family of raw (pre-normalization) amplitudes over two real parameters.
using StateFamily = std::function<Eigen::Vector2cd(double, double)>;

namespace detail {

struct FamilyDerivatives {
  Eigen::Vector2cd psi;
  Eigen::Vector2cd dpsi[2];
  Eigen::Matrix2cd rho;
  Eigen::Matrix2cd drho[2];
};

inline Eigen::Matrix2cd projector(const Eigen::Vector2cd& v) {
  return v * v.adjoint();
}

inline FamilyDerivatives family_derivatives(const StateFamily& family,
                                            double x, double y, double h) {
  auto eval = [&](double a, double b) {
    const Eigen::Vector2cd v = family(a, b);
    if (std::abs(v.norm() - 1.0) > 1e-8)
      throw std::invalid_argument(
          "fs_and_wy_metrics: family not normalized along the stencil");
    return v;
  };
  FamilyDerivatives out;
  out.psi = eval(x, y);
  out.rho = projector(out.psi);
  // 5-point central first derivative in each parameter.
  for (int p = 0; p < 2; ++p) {
    auto at = [&](double s) {
      return p == 0 ? eval(x + s, y) : eval(x, y + s);
    };
    const Eigen::Vector2cd f1 = at(h), f_1 = at(-h), f2 = at(2 * h),
                           f_2 = at(-2 * h);
    out.dpsi[p] = (-f2 + 8.0 * f1 - 8.0 * f_1 + f_2) / (12.0 * h);
    out.drho[p] = (-projector(f2) + 8.0 * projector(f1) - 8.0 * projector(f_1) +
                   projector(f_2)) /
                  (12.0 * h);
  }
  return out;
}

inline std::pair<MetricTensor2, MetricTensor2> metrics_at_step(
    const StateFamily& family, double x, double y, double h) {
  const FamilyDerivatives d = family_derivatives(family, x, y, h);
  auto fs = [&](int a, int b) {
    const complexd grad = d.dpsi[a].dot(d.dpsi[b]);
    const complexd berry = d.dpsi[a].dot(d.psi) * d.psi.dot(d.dpsi[b]);
    return (grad - berry).real();
  };
  // For pure states tr[(d_a rho)(d_b rho)] = 2 g_FS, so the Wigner-Yanase
  // tensor 4 g_FS is twice the projector trace.
  auto wy = [&](int a, int b) {
    return 2.0 * (d.drho[a] * d.drho[b]).trace().real();
  };
  return {MetricTensor2{fs(0, 0), fs(0, 1), fs(1, 1)},
          MetricTensor2{wy(0, 0), wy(0, 1), wy(1, 1)}};
}

}  // namespace detail

// Fubini-Study and Wigner-Yanase metric tensors of a two-parameter family at
// (x, y), by 5-point stencils at step 1e-5. A second evaluation at twice the
// step guards against stencil noise; disagreement triggers Richardson
// extrapolation of the pair.
inline std::pair<MetricTensor2, MetricTensor2> fs_and_wy_metrics(
    const StateFamily& family, double x, double y) {
  const double h = 1e-5;
  const auto fine = detail::metrics_at_step(family, x, y, h);
  const auto coarse = detail::metrics_at_step(family, x, y, 2.0 * h);
  auto combine = [](const MetricTensor2& f, const MetricTensor2& c) {
    auto pick = [](double vf, double vc) {
      if (std::abs(vf - vc) <= 1e-9) return vf;
      return (16.0 * vf - vc) / 15.0;
    };
    return MetricTensor2{pick(f.g11, c.g11), pick(f.g12, c.g12),
                         pick(f.g22, c.g22)};
  };
  return {combine(fine.first, coarse.first),
          combine(fine.second, coarse.second)};
}

// ---------------------------------------------------------------------------
// Rotations

// a = a0 + sin(angle)(n x a0) + (1 - cos(angle))(n x (n x a0)).
inline BlochVector rodrigues_rotate(const Eigen::Vector3d& n, double angle,
                                    const BlochVector& a0) {
  if (std::abs(n.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("rodrigues_rotate: axis not unit");
  const Eigen::Vector3d nxa = n.cross(a0);
  return a0 + std::sin(angle) * nxa + (1.0 - std::cos(angle)) * n.cross(nxa);
}

// SO(3) image of an SU(2) propagator: R_ij = (1/2) tr(sigma_i U sigma_j U^dag).
// The conjugation kills the global phase, so no det normalization is needed.
inline RotationMatrix3 su2_to_so3(const Eigen::Matrix2cd& u) {
  if ((u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() >
      1e-10)
    throw std::invalid_argument("su2_to_so3: input not unitary");
  Eigen::Matrix2cd sigma[3];
  sigma[0] = pauli_matrix(0.0, Eigen::Vector3d::UnitX());
  sigma[1] = pauli_matrix(0.0, Eigen::Vector3d::UnitY());
  sigma[2] = pauli_matrix(0.0, Eigen::Vector3d::UnitZ());
  RotationMatrix3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r(i, j) = 0.5 * (sigma[i] * u * sigma[j] * u.adjoint()).trace().real();
  return r;
}

}  // namespace complexkit
