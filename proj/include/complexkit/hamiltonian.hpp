#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>
#include <variant>

#include "complexkit/numerics.hpp"
#include "complexkit/qstate.hpp"

namespace complexkit {

inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kUnitDirectionTolerance = 1e-12;
inline constexpr double kDerivativeStep = 1e-6;

// Scalar function of time with optional analytic derivatives. Missing
// derivatives fall back to central differences at step 1e-6; an analytic
// derivative always wins when supplied.
struct ScalarTimeFunction {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::function<double(double)> second;

  double operator()(double t) const { return value(t); }

  double d(double t) const {
    if (deriv) return deriv(t);
    const double h = kDerivativeStep;
    return (value(t + h) - value(t - h)) / (2.0 * h);
  }

  double dd(double t) const {
    if (second) return second(t);
    if (deriv) {
      const double h = kDerivativeStep;
      return (deriv(t + h) - deriv(t - h)) / (2.0 * h);
    }
    const double h = 1e-5;  // wider step: second difference loses digits
    return (value(t + h) - 2.0 * value(t) + value(t - h)) / (h * h);
  }

  static ScalarTimeFunction constant(double c) {
    return {[c](double) { return c; }, [](double) { return 0.0; },
            [](double) { return 0.0; }};
  }
  // c0 + c1*t
  static ScalarTimeFunction linear(double c0, double c1) {
    return {[c0, c1](double t) { return c0 + c1 * t; },
            [c1](double) { return c1; }, [](double) { return 0.0; }};
  }
  // c0 + c1*t + c2*t^2
  static ScalarTimeFunction quadratic(double c0, double c1, double c2) {
    return {[c0, c1, c2](double t) { return c0 + t * (c1 + c2 * t); },
            [c1, c2](double t) { return c1 + 2.0 * c2 * t; },
            [c2](double) { return 2.0 * c2; }};
  }
  static ScalarTimeFunction of(std::function<double(double)> f,
                               std::function<double(double)> df = nullptr,
                               std::function<double(double)> ddf = nullptr) {
    return {std::move(f), std::move(df), std::move(ddf)};
  }
};

// H = h0*1 + hvec.sigma, constant in time.
struct ConstantField {
  double h0 = 0.0;
  Eigen::Vector3d hvec = Eigen::Vector3d::Zero();
};

// H(t) = h0(t)*1 + h(t) * (n0.sigma) with a fixed unit direction n0.
struct ScaledDirectionField {
  ScalarTimeFunction amplitude;
  Eigen::Vector3d direction;
  ScalarTimeFunction h0 = ScalarTimeFunction::constant(0.0);
};

// H(t) = (omega/2)[cos(nu t) sigma_x + sin(nu t) sigma_y], hbar = 1.
struct RotatingXYField {
  double omega = 0.0;
  double nu = 0.0;
};

// Traceless Hamiltonian driving the parallel-transported state family
// cos(alpha)|0> + e^{i beta} sin(alpha)|1>.
struct ParametricField {
  ScalarTimeFunction alpha;
  ScalarTimeFunction beta;
};

// User-supplied scalar and vector parts; sampled, never analyzed.
// Callables must be safe to invoke concurrently. Lambdas should declare an
// explicit Eigen::Vector3d return type: a deduced return hands the
// std::function an Eigen expression whose temporaries are already gone.
struct CustomField {
  std::function<double(double)> h0;
  std::function<Eigen::Vector3d(double)> hvec;
};

enum class FieldKind { Constant, ScaledDirection, RotatingXY, Parametric, Custom };

class FieldConfiguration {
 public:
  using Spec = std::variant<ConstantField, ScaledDirectionField,
                            RotatingXYField, ParametricField, CustomField>;

  static FieldConfiguration constant(double h0, const Eigen::Vector3d& hvec) {
    return FieldConfiguration(ConstantField{h0, hvec});
  }
  static FieldConfiguration scaled_direction(
      ScalarTimeFunction amplitude, const Eigen::Vector3d& direction,
      ScalarTimeFunction h0 = ScalarTimeFunction::constant(0.0)) {
    if (std::abs(direction.norm() - 1.0) > kUnitDirectionTolerance)
      throw std::invalid_argument("scaled_direction: direction not unit");
    return FieldConfiguration(
        ScaledDirectionField{std::move(amplitude), direction, std::move(h0)});
  }
  static FieldConfiguration rotating_xy(double omega, double nu) {
    return FieldConfiguration(RotatingXYField{omega, nu});
  }
  static FieldConfiguration parametric(ScalarTimeFunction alpha,
                                       ScalarTimeFunction beta) {
    return FieldConfiguration(ParametricField{std::move(alpha), std::move(beta)});
  }
  static FieldConfiguration custom(std::function<double(double)> h0,
                                   std::function<Eigen::Vector3d(double)> hvec) {
    return FieldConfiguration(CustomField{std::move(h0), std::move(hvec)});
  }

  FieldKind kind() const {
    return static_cast<FieldKind>(spec_.index());
  }

  template <typename T>
  const T& as() const {
    return std::get<T>(spec_);
  }

  const Spec& spec() const { return spec_; }

 private:
  explicit FieldConfiguration(Spec spec) : spec_(std::move(spec)) {}
  Spec spec_;
};

struct FieldSample {
  double h0 = 0.0;
  Eigen::Vector3d hvec = Eigen::Vector3d::Zero();
};

namespace detail {

// Magnetic field of the parametric family, decomposed on the orthonormal
// triple u = (cos b, sin b, 0), v = (-sin b, cos b, 0), z:
//   h = A u + alpha' v + B z,  A = -(beta'/4) sin 4a,  B = (beta'/2) sin^2 2a.
inline Eigen::Vector3d parametric_field(const ParametricField& p, double t) {
  const double a = p.alpha(t), b = p.beta(t);
  const double ad = p.alpha.d(t), bd = p.beta.d(t);
  const double A = -0.25 * bd * std::sin(4.0 * a);
  const double B = 0.5 * bd * std::sin(2.0 * a) * std::sin(2.0 * a);
  const Eigen::Vector3d u(std::cos(b), std::sin(b), 0.0);
  const Eigen::Vector3d v(-std::sin(b), std::cos(b), 0.0);
  return A * u + ad * v + B * Eigen::Vector3d::UnitZ();
}

inline Eigen::Vector3d parametric_field_derivative(const ParametricField& p,
                                                   double t) {
  const double a = p.alpha(t), b = p.beta(t);
  const double ad = p.alpha.d(t), bd = p.beta.d(t);
  const double add = p.alpha.dd(t), bdd = p.beta.dd(t);
  const double s4 = std::sin(4.0 * a), c4 = std::cos(4.0 * a);
  const double s2 = std::sin(2.0 * a);
  const double A = -0.25 * bd * s4;
  const double Adot = -0.25 * bdd * s4 - bd * ad * c4;
  const double Bdot = 0.5 * bdd * s2 * s2 + bd * ad * s4;
  const Eigen::Vector3d u(std::cos(b), std::sin(b), 0.0);
  const Eigen::Vector3d v(-std::sin(b), std::cos(b), 0.0);
  // du/dt = beta' v, dv/dt = -beta' u
  return (Adot - ad * bd) * u + (A * bd + add) * v +
         Bdot * Eigen::Vector3d::UnitZ();
}

}  // namespace detail

// Scalar and vector parts of H(t) = h0(t)*1 + h(t).sigma.
inline FieldSample field_at(const FieldConfiguration& config, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("field_at: non-finite t");
  FieldSample out;
  switch (config.kind()) {
    case FieldKind::Constant: {
      const auto& c = config.as<ConstantField>();
      out.h0 = c.h0;
      out.hvec = c.hvec;
      break;
    }
    case FieldKind::ScaledDirection: {
      const auto& c = config.as<ScaledDirectionField>();
      out.h0 = c.h0(t);
      out.hvec = c.amplitude(t) * c.direction;
      break;
    }
    case FieldKind::RotatingXY: {
      const auto& c = config.as<RotatingXYField>();
      out.hvec = 0.5 * c.omega *
                 Eigen::Vector3d(std::cos(c.nu * t), std::sin(c.nu * t), 0.0);
      break;
    }
    case FieldKind::Parametric:
      out.hvec = detail::parametric_field(config.as<ParametricField>(), t);
      break;
    case FieldKind::Custom: {
      const auto& c = config.as<CustomField>();
      out.h0 = c.h0 ? c.h0(t) : 0.0;
      out.hvec = c.hvec(t);
      break;
    }
  }
  if (!std::isfinite(out.h0) || !out.hvec.allFinite())
    throw std::runtime_error("field_at: non-finite field value");
  return out;
}

// d hvec / dt, analytic where the kind permits, else central differences.
inline Eigen::Vector3d field_derivative_at(const FieldConfiguration& config,
                                           double t) {
  switch (config.kind()) {
    case FieldKind::Constant:
      return Eigen::Vector3d::Zero();
    case FieldKind::ScaledDirection: {
      const auto& c = config.as<ScaledDirectionField>();
      return c.amplitude.d(t) * c.direction;
    }
    case FieldKind::RotatingXY: {
      const auto& c = config.as<RotatingXYField>();
      return 0.5 * c.omega * c.nu *
             Eigen::Vector3d(-std::sin(c.nu * t), std::cos(c.nu * t), 0.0);
    }
    case FieldKind::Parametric:
      return detail::parametric_field_derivative(
          config.as<ParametricField>(), t);
    case FieldKind::Custom: {
      const double h = kDerivativeStep;
      return (field_at(config, t + h).hvec - field_at(config, t - h).hvec) /
             (2.0 * h);
    }
  }
  return Eigen::Vector3d::Zero();
}

inline Eigen::Matrix2cd pauli_matrix(double h0, const Eigen::Vector3d& h) {
  Eigen::Matrix2cd m;
  m << complexd(h0 + h.z(), 0.0), complexd(h.x(), -h.y()),
      complexd(h.x(), h.y()), complexd(h0 - h.z(), 0.0);
  return m;
}

inline Eigen::Matrix2cd matrix_at(const FieldConfiguration& config, double t) {
  const FieldSample f = field_at(config, t);
  return pauli_matrix(f.h0, f.hvec);
}

// exp(-i s (h0*1 + h.sigma)) in closed form; exactly unitary.
inline Eigen::Matrix2cd pauli_exponential(double h0, const Eigen::Vector3d& h,
                                          double s) {
  const double hn = h.norm();
  const complexd phase = std::polar(1.0, -h0 * s);
  if (hn == 0.0) return phase * Eigen::Matrix2cd::Identity();
  const double c = std::cos(hn * s);
  const double sn = std::sin(hn * s);
  const Eigen::Vector3d n = h / hn;
  Eigen::Matrix2cd m;
  m << complexd(c, -sn * n.z()), complexd(-sn * n.y(), -sn * n.x()),
      complexd(sn * n.y(), -sn * n.x()), complexd(c, sn * n.z());
  return phase * m;
}

inline bool is_hermitian(const Eigen::Matrix2cd& m,
                         double tol = kHermiticityTolerance) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Parallel-transport phase phi(t) = int_0^t beta'(s) sin^2(alpha(s)) ds.
inline double uzdin_phase(const ScalarTimeFunction& alpha,
                          const ScalarTimeFunction& beta, double t) {
  return adaptive_simpson(
      [&](double s) {
        const double sa = std::sin(alpha(s));
        return beta.d(s) * sa * sa;
      },
      0.0, t, 1e-10);
}

// Unitary frame U(t), either exp(-i t G) with a constant Hermitian generator
// (derivative analytic) or an arbitrary callable (derivative by central
// difference at step 1e-6).
class RotatingFrame {
 public:
  static RotatingFrame exponential(const Eigen::Matrix2cd& generator) {
    if (!is_hermitian(generator))
      throw std::invalid_argument("RotatingFrame: generator not Hermitian");
    RotatingFrame f;
    f.generator_ = generator;
    return f;
  }
  static RotatingFrame custom(std::function<Eigen::Matrix2cd(double)> u) {
    RotatingFrame f;
    f.custom_ = std::move(u);
    return f;
  }

  Eigen::Matrix2cd unitary(double t) const {
    if (custom_) return custom_(t);
    const auto& g = generator_;
    const double g0 = 0.5 * (g(0, 0).real() + g(1, 1).real());
    const Eigen::Vector3d gv(g(1, 0).real(), g(1, 0).imag(),
                             0.5 * (g(0, 0).real() - g(1, 1).real()));
    return pauli_exponential(g0, gv, t);
  }

  Eigen::Matrix2cd derivative(double t) const {
    if (!custom_)
      return complexd(0.0, -1.0) * generator_ * unitary(t);
    const double h = kDerivativeStep;
    return (custom_(t + h) - custom_(t - h)) / (2.0 * h);
  }

 private:
  RotatingFrame() = default;
  Eigen::Matrix2cd generator_ = Eigen::Matrix2cd::Zero();
  std::function<Eigen::Matrix2cd(double)> custom_;
};

// H_RF(t) = U^dag H U - i U^dag dU/dt.
inline Eigen::Matrix2cd rotating_frame_transform(
    const FieldConfiguration& config, const RotatingFrame& frame, double t) {
  const Eigen::Matrix2cd u = frame.unitary(t);
  if ((u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() >
      1e-9)
    throw std::invalid_argument("rotating_frame_transform: frame not unitary");
  const Eigen::Matrix2cd raw =
      u.adjoint() * matrix_at(config, t) * u -
      complexd(0.0, 1.0) * u.adjoint() * frame.derivative(t);
  if ((raw - raw.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::runtime_error("rotating_frame_transform: result not Hermitian");
  return 0.5 * (raw + raw.adjoint().eval());
}

// Delta E = sqrt(h.h - (a.h)^2) for the state with Bloch vector a.
inline double energy_uncertainty(const BlochVector& a,
                                 const Eigen::Vector3d& hvec) {
  const double proj = a.dot(hvec);
  return std::sqrt(std::max(0.0, hvec.squaredNorm() - proj * proj));
}

// Empirical check that [H(t_i), H(t_j)] = 0 over the window, sampled at 20
// deterministic pseudo-random pairs.
inline bool commutes_by_sampling(const FieldConfiguration& config, double t0,
                                 double t1, double tol = 1e-10) {
  std::mt19937 rng(0x5eedu);
  std::uniform_real_distribution<double> dist(t0, t1);
  for (int k = 0; k < 20; ++k) {
    const Eigen::Matrix2cd a = matrix_at(config, dist(rng));
    const Eigen::Matrix2cd b = matrix_at(config, dist(rng));
    if ((a * b - b * a).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

}  // namespace complexkit
