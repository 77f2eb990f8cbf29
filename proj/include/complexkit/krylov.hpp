#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "complexkit/numerics.hpp"
#include "complexkit/qstate.hpp"

namespace complexkit {

inline constexpr double kLanczosBreakdown = 1e-10;

// Ordered orthonormal Krylov vectors with the Lanczos coefficients; the
// Hamiltonian is tridiagonal in this basis.
struct KrylovBasis {
  Eigen::MatrixXcd vectors;        // one unit vector per column
  std::vector<double> a_coeffs;    // diagonal a_n
  std::vector<double> b_coeffs;    // off-diagonal b_n, b_0 = 0
  int dimension = 0;               // effective Krylov dimension <= d
};

// Nonnegative, nondecreasing spread weights; the default c_n = n.
struct SpreadWeights {
  std::vector<double> c;

  explicit SpreadWeights(std::vector<double> weights) : c(std::move(weights)) {
    if (c.empty()) throw std::invalid_argument("SpreadWeights: empty");
    if (c.front() < 0.0)
      throw std::invalid_argument("SpreadWeights: negative weight");
    for (std::size_t i = 1; i < c.size(); ++i)
      if (c[i] < c[i - 1])
        throw std::invalid_argument("SpreadWeights: not nondecreasing");
  }

  static SpreadWeights linear(int n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = i;
    return SpreadWeights(std::move(w));
  }
};

// Lanczos recursion |A_{n+1}> = (H - a_n)|K_n> - b_n|K_{n-1}> with
// b_n = ||A_n|| and full reorthogonalization against all prior vectors.
// Terminates on b < 1e-10 (invariant subspace) or at dimension d.
inline KrylovBasis lanczos(const Eigen::MatrixXcd& h,
                           const Eigen::VectorXcd& psi0) {
  const Eigen::Index d = h.rows();
  if (h.cols() != d) throw std::invalid_argument("lanczos: H not square");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("lanczos: H not Hermitian");
  if (psi0.size() != d) throw std::invalid_argument("lanczos: size mismatch");
  if (std::abs(psi0.norm() - 1.0) > kNormRepairTolerance)
    throw std::invalid_argument("lanczos: psi0 not unit norm");

  KrylovBasis basis;
  basis.vectors.resize(d, d);
  basis.vectors.col(0) = psi0.normalized();
  for (Eigen::Index n = 0; n < d; ++n) {
    const Eigen::VectorXcd w = h * basis.vectors.col(n);
    basis.a_coeffs.push_back(basis.vectors.col(n).dot(w).real());
    basis.dimension = static_cast<int>(n) + 1;
    if (n + 1 == d) break;
    Eigen::VectorXcd next = w - basis.a_coeffs.back() * basis.vectors.col(n);
    if (n > 0) next -= basis.b_coeffs.back() * basis.vectors.col(n - 1);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index m = 0; m <= n; ++m)
        next -= basis.vectors.col(m).dot(next) * basis.vectors.col(m);
    const double b = next.norm();
    if (b < kLanczosBreakdown) break;
    basis.b_coeffs.push_back(b);
    basis.vectors.col(n + 1) = next / b;
  }
  basis.vectors.conservativeResize(d, basis.dimension);
  basis.a_coeffs.resize(static_cast<std::size_t>(basis.dimension));
  basis.b_coeffs.insert(basis.b_coeffs.begin(), 0.0);
  basis.b_coeffs.resize(static_cast<std::size_t>(basis.dimension));
  return basis;
}

// K = sum_n c_n |<K_n|psi>|^2. Rejects states that leak more than 1e-6 of
// their probability outside the Krylov subspace.
inline double spread_complexity(const Eigen::VectorXcd& psi_t,
                                const KrylovBasis& basis,
                                const SpreadWeights& weights) {
  if (psi_t.size() != basis.vectors.rows())
    throw std::invalid_argument("spread_complexity: size mismatch");
  if (weights.c.size() < static_cast<std::size_t>(basis.dimension))
    throw std::invalid_argument("spread_complexity: too few weights");
  double total = 0.0;
  double value = 0.0;
  for (int n = 0; n < basis.dimension; ++n) {
    const double p = std::norm(basis.vectors.col(n).dot(psi_t));
    total += p;
    value += weights.c[static_cast<std::size_t>(n)] * p;
  }
  if (1.0 - total > 1e-6)
    throw std::domain_error(
        "spread_complexity: probability leaks outside the Krylov subspace");
  return value;
}

inline double spread_complexity(const Eigen::VectorXcd& psi_t,
                                const KrylovBasis& basis) {
  return spread_complexity(psi_t, basis, SpreadWeights::linear(basis.dimension));
}

// Stationary geometric form K(t) = sin^2(ht) (1 - (n.a0)^2); h0-independent.
inline double krylov_qubit_stationary(const BlochVector& a0,
                                      const Eigen::Vector3d& n, double h,
                                      double t) {
  const double s = std::sin(h * t);
  const double proj = n.dot(a0);
  return s * s * std::max(0.0, 1.0 - proj * proj);
}

// K = (1 - a0.at)/2, the complement of the survival probability; valid for
// stationary and nonstationary dynamics alike.
inline double krylov_from_bloch(const BlochVector& a0, const BlochVector& at) {
  return std::clamp(0.5 * (1.0 - a0.dot(at)), 0.0, 1.0);
}

// Rotating-field closed form: K = w^2/(w^2+v^2) sin^2(sqrt(w^2+v^2) t/2).
inline double rotating_field_krylov(double omega, double nu, double t) {
  const double w2 = omega * omega + nu * nu;
  if (w2 == 0.0)
    throw std::invalid_argument("rotating_field_krylov: omega = nu = 0");
  const double s = std::sin(0.5 * std::sqrt(w2) * t);
  return omega * omega / w2 * s * s;
}

// <K> = (tf - ti)^{-1} int K dt, composite Simpson with node doubling from
// 1025 nodes until successive estimates agree to 1e-10.
inline double time_averaged_krylov(const std::function<double(double)>& k_of_t,
                                   double t_i, double t_f) {
  if (!(t_f > t_i))
    throw std::invalid_argument("time_averaged_krylov: t_f <= t_i");
  return simpson_to_tolerance(k_of_t, t_i, t_f, 1e-10) / (t_f - t_i);
}

// Stationary closed form via (1/T) int sin^2(ht) dt = 1/2 - sin(2hT)/(4hT).
inline double time_averaged_krylov_stationary(const BlochVector& a0,
                                              const Eigen::Vector3d& n,
                                              double h, double T) {
  if (!(T > 0.0))
    throw std::invalid_argument("time_averaged_krylov_stationary: T <= 0");
  const double proj = n.dot(a0);
  const double mean =
      h == 0.0 ? 0.0 : 0.5 - std::sin(2.0 * h * T) / (4.0 * h * T);
  return (1.0 - proj * proj) * mean;
}

}  // namespace complexkit
