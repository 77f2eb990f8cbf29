#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "complexkit/propagator.hpp"

using namespace complexkit;
using Catch::Matchers::WithinAbs;

namespace {
const PureQubitState ket0(1.0, 0.0);

FieldConfiguration geodesic_config(double omega) {
  return FieldConfiguration::constant(
      0.0, Eigen::Vector3d(0.0, omega / std::sqrt(6.0), 0.0));
}
}  // namespace

TEST_CASE("evolve_stationary closed form") {
  const double omega = 1.0;
  SECTION("reaches |+> at the geodesic arrival time") {
    const PureQubitState at_tf = evolve_stationary(
        geodesic_config(omega), ket0, kPi * std::sqrt(6.0) / (4.0 * omega));
    const PureQubitState plus(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
    REQUIRE(std::abs(overlap(at_tf, plus) - 1.0) < 1e-12);
  }
  SECTION("t = 0 is the identity") {
    const PureQubitState s = from_angles(0.7, -1.2);
    const PureQubitState same = evolve_stationary(geodesic_config(2.0), s, 0.0);
    REQUIRE(std::abs(overlap(s, same) - 1.0) < 1e-15);
  }
  SECTION("diagonal field reaches |+> up to phase at 2pi/3w") {
    const FieldConfiguration h = FieldConfiguration::constant(
        0.0, 0.5 * omega * Eigen::Vector3d(1, 1, 1).normalized());
    const PureQubitState at_tf =
        evolve_stationary(h, ket0, 2.0 * kPi / (3.0 * omega));
    REQUIRE(phase_equivalent(
        at_tf, PureQubitState(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)),
        1e-9));
  }
}

TEST_CASE("evolve_commuting") {
  SECTION("linearly ramped fixed-direction field traces a great circle") {
    // amplitude 2 w0^2 t integrates to w0^2 t^2
    const double omega0 = 0.9, beta0 = 0.4;
    const Eigen::Vector3d dir(-std::sin(beta0), std::cos(beta0), 0.0);
    const FieldConfiguration config = FieldConfiguration::scaled_direction(
        ScalarTimeFunction::linear(0.0, 2.0 * omega0 * omega0), dir);
    const double t = 1.1;
    const PureQubitState got = evolve_commuting(config, ket0, t);
    const PureQubitState expected = PureQubitState::from_vec(
        pauli_exponential(0.0, omega0 * omega0 * t * t * dir, 1.0) *
        ket0.vec());
    REQUIRE(std::abs(overlap(got, expected) - 1.0) < 1e-12);
  }
  SECTION("constant amplitude reduces to the stationary propagator") {
    const Eigen::Vector3d dir = Eigen::Vector3d(1, -2, 2).normalized();
    const FieldConfiguration ramp = FieldConfiguration::scaled_direction(
        ScalarTimeFunction::constant(0.8), dir);
    const FieldConfiguration fixed =
        FieldConfiguration::constant(0.0, 0.8 * dir);
    const PureQubitState s = from_angles(1.1, 0.3);
    for (double t : {0.5, 2.0}) {
      const PureQubitState a = evolve_commuting(ramp, s, t);
      const PureQubitState b = evolve_stationary(fixed, s, t);
      REQUIRE((a.vec() - b.vec()).norm() < 1e-12);
    }
  }
  SECTION("zero field is the identity") {
    const FieldConfiguration off = FieldConfiguration::scaled_direction(
        ScalarTimeFunction::constant(0.0), Eigen::Vector3d::UnitZ());
    const PureQubitState s = from_angles(0.9, 2.0);
    REQUIRE((evolve_commuting(off, s, 4.0).vec() - s.vec()).norm() < 1e-14);
  }
  SECTION("refuses noncommuting families") {
    REQUIRE_THROWS_AS(
        evolve_commuting(FieldConfiguration::rotating_xy(1.0, 1.0), ket0, 2.0),
        std::domain_error);
  }
}

TEST_CASE("rotating_field_state") {
  REQUIRE(std::abs(overlap(rotating_field_state(1.0, 1.0, 0.0), ket0) - 1.0) <
          1e-15);
  SECTION("nu = 0 flips the qubit at t = pi/omega") {
    const PureQubitState flipped = rotating_field_state(1.0, 0.0, kPi);
    REQUIRE(std::abs(flipped.c1() - complexd(0.0, -1.0)) < 1e-14);
    REQUIRE(phase_equivalent(flipped, PureQubitState(0.0, 1.0), 1e-12));
  }
  SECTION("matches a high-resolution ordered integration") {
    IntegratorOptions opts;
    opts.step_count = 1 << 16;
    const double t = kPi / std::sqrt(2.0);
    const PureQubitState numeric = evolve_ordered(
        FieldConfiguration::rotating_xy(1.0, 1.0), ket0, 0.0, t, opts);
    const PureQubitState analytic = rotating_field_state(1.0, 1.0, t);
    REQUIRE((numeric.vec() - analytic.vec()).norm() < 1e-9);
  }
}

TEST_CASE("evolve_ordered") {
  const FieldConfiguration rot = FieldConfiguration::rotating_xy(1.0, 1.0);
  SECTION("tracks the analytic rotating-field state at 2048 steps") {
    IntegratorOptions opts;
    opts.step_count = 2048;
    for (double t : {0.7, 2.2, 2.0 * kPi}) {
      const PureQubitState numeric = evolve_ordered(rot, ket0, 0.0, t, opts);
      const PureQubitState analytic = rotating_field_state(1.0, 1.0, t);
      REQUIRE(1.0 - std::norm(overlap(numeric, analytic)) < 1e-8);
    }
  }
  SECTION("constant fields reduce to the exponential") {
    const FieldConfiguration fixed =
        FieldConfiguration::constant(0.2, Eigen::Vector3d(0.4, -0.3, 0.8));
    const PureQubitState s = from_angles(2.0, -0.4);
    const PureQubitState a = evolve_ordered(fixed, s, 0.0, 3.0);
    const PureQubitState b = evolve_stationary(fixed, s, 3.0);
    REQUIRE((a.vec() - b.vec()).norm() < 1e-10);
  }
  SECTION("degenerate window and bad windows") {
    REQUIRE((evolve_ordered(rot, ket0, 1.0, 1.0).vec() - ket0.vec()).norm() ==
            0.0);
    REQUIRE_THROWS_AS(evolve_ordered(rot, ket0, 1.0, 0.5),
                      std::invalid_argument);
  }
  SECTION("second-order convergence against the analytic state") {
    const PureQubitState exact = rotating_field_state(1.0, 1.0, 2.0 * kPi);
    double err[3];
    int steps = 256;
    for (int i = 0; i < 3; ++i, steps *= 2) {
      IntegratorOptions opts;
      opts.step_count = steps;
      err[i] =
          (evolve_ordered(rot, ket0, 0.0, 2.0 * kPi, opts).vec() - exact.vec())
              .norm();
    }
    REQUIRE_THAT(err[0] / err[1], WithinAbs(4.0, 0.5));
    REQUIRE_THAT(err[1] / err[2], WithinAbs(4.0, 0.5));
  }
  SECTION("renormalized RK4 agrees with the exponential stepper") {
    IntegratorOptions rk;
    rk.method = IntegratorOptions::Method::rk4_renormalized;
    rk.step_count = 4096;
    const PureQubitState a = evolve_ordered(rot, ket0, 0.0, 3.0, rk);
    const PureQubitState b = rotating_field_state(1.0, 1.0, 3.0);
    REQUIRE(1.0 - std::norm(overlap(a, b)) < 1e-9);
  }
}

TEST_CASE("parametric closed form agrees with time-ordered integration") {
  // two independent routes: the parallel-transported family (with its
  // integrated phase) vs the assembled H(t) pushed through the integrator
  const FieldConfiguration config = FieldConfiguration::parametric(
      ScalarTimeFunction::linear(0.0, 1.0),
      ScalarTimeFunction::linear(kPi / 4.0, 1.0));
  IntegratorOptions opts;
  opts.step_count = 4096;
  for (double t : {0.3, 0.9, kPi / 2.0}) {
    const PureQubitState closed = propagate_best(config, ket0, 0.0, t);
    const PureQubitState numeric = evolve_ordered(config, ket0, 0.0, t, opts);
    REQUIRE((closed.vec() - numeric.vec()).norm() < 1e-6);
    REQUIRE(1.0 - std::norm(overlap(closed, numeric)) < 1e-10);
  }
  // a non-family initial state silently falls back to the integrator
  const PureQubitState plus(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  const PureQubitState moved = propagate_best(config, plus, 0.0, 0.7, opts);
  REQUIRE_THAT(moved.vec().norm(), WithinAbs(1.0, 1e-12));
  REQUIRE((moved.vec() - evolve_ordered(config, plus, 0.0, 0.7, opts).vec())
              .norm() < 1e-12);
}

TEST_CASE("unitarity and composition properties") {
  std::mt19937 rng(314159u);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const FieldConfiguration config = FieldConfiguration::custom(
        [](double) { return 0.0; },
        [a = u(rng), b = u(rng), c = u(rng)](double t) {
          return Eigen::Vector3d(a * std::cos(t), b * std::sin(2 * t), c);
        });
    const PureQubitState s = from_angles(1.0 + 0.5 * u(rng), u(rng));
    const PureQubitState full = evolve_ordered(config, s, 0.0, 2.0);
    REQUIRE_THAT(full.vec().norm(), WithinAbs(1.0, 1e-10));
    IntegratorOptions half;
    half.step_count = 1024;
    const PureQubitState mid = evolve_ordered(config, s, 0.0, 1.0, half);
    const PureQubitState glued = evolve_ordered(config, mid, 1.0, 2.0, half);
    REQUIRE((glued.vec() - full.vec()).norm() < 1e-8);
  }
  // stationary composition is exact
  const FieldConfiguration fixed =
      FieldConfiguration::constant(0.1, Eigen::Vector3d(1.0, 0.2, -0.4));
  const PureQubitState s = from_angles(0.8, 1.9);
  const PureQubitState ab = evolve_stationary(fixed, s, 3.7);
  const PureQubitState a = evolve_stationary(fixed, s, 1.4);
  const PureQubitState b = evolve_stationary(fixed, a, 2.3);
  REQUIRE((ab.vec() - b.vec()).norm() < 1e-12);
}

TEST_CASE("trajectory sampling") {
  SECTION("geodesic polar angle grows linearly") {
    const double omega = 1.0;
    const Trajectory traj =
        trajectory(geodesic_config(omega), ket0, 0.0,
                   kPi * std::sqrt(6.0) / 4.0, 9);
    REQUIRE(traj.size() == 9);
    for (const auto& s : traj.samples()) {
      REQUIRE_THAT(s.angles.theta,
                   WithinAbs(2.0 * omega * s.t / std::sqrt(6.0), 1e-12));
      REQUIRE_THAT(s.angles.phi, WithinAbs(0.0, 1e-12));
      REQUIRE_THAT(s.delta_e, WithinAbs(omega / std::sqrt(6.0), 1e-13));
    }
  }
  SECTION("two samples give exactly the endpoints") {
    const Trajectory traj = trajectory(geodesic_config(1.0), ket0, 0.2, 1.7, 2);
    REQUIRE(traj.size() == 2);
    REQUIRE(traj.t_a() == 0.2);
    REQUIRE(traj.t_b() == 1.7);
  }
  SECTION("parametric angles follow alpha and beta") {
    const double omega0 = 1.0, nu0 = 1.0, beta0 = kPi / 4.0;
    const FieldConfiguration config = FieldConfiguration::parametric(
        ScalarTimeFunction::linear(0.0, omega0),
        ScalarTimeFunction::linear(beta0, nu0));
    const Trajectory traj =
        trajectory(config, ket0, 0.0, kPi / (2.0 * omega0), 257);
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const double t = traj[i].t;
      REQUIRE_THAT(traj[i].angles.theta, WithinAbs(2.0 * omega0 * t, 1e-10));
      // the initial (pole) sample carries the extrapolated azimuth limit
      REQUIRE_THAT(traj[i].angles.phi, WithinAbs(beta0 + nu0 * t, 1e-9));
    }
  }
  SECTION("azimuth unwrap keeps adjacent samples within pi") {
    const FieldConfiguration config =
        FieldConfiguration::constant(0.0, Eigen::Vector3d(0.0, 0.0, 2.0));
    const Trajectory traj =
        trajectory(config, from_angles(kPi / 2.0, 0.0), 0.0, 4.0 * kPi, 513);
    for (std::size_t i = 1; i < traj.size(); ++i)
      REQUIRE(std::abs(traj[i].angles.phi - traj[i - 1].angles.phi) < kPi);
    // phi = 4 t, unwrapped well past 2 pi
    REQUIRE_THAT(traj.samples().back().angles.phi,
                 WithinAbs(16.0 * kPi, 1e-9));
  }
  SECTION("Schrodinger residual shrinks quadratically with the grid") {
    const FieldConfiguration config = FieldConfiguration::rotating_xy(1.0, 1.3);
    auto residual = [&](std::size_t n) {
      const Trajectory traj = trajectory(config, ket0, 0.0, 2.0, n);
      double worst = 0.0;
      const double dt = (traj.t_b() - traj.t_a()) / double(n - 1);
      for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const Eigen::Vector2cd dpsi =
            (traj[i + 1].state.vec() - traj[i - 1].state.vec()) / (2.0 * dt);
        const Eigen::Vector2cd rhs = complexd(0.0, -1.0) *
                                     (matrix_at(config, traj[i].t) *
                                      traj[i].state.vec());
        worst = std::max(worst, (dpsi - rhs).norm());
      }
      return worst;
    };
    const double coarse = residual(129);
    const double fine = residual(257);
    REQUIRE(coarse / fine > 3.0);
    REQUIRE(coarse / fine < 5.0);
  }
  SECTION("rebase preserves energy uncertainty and reassigns angles") {
    const Trajectory traj =
        trajectory(geodesic_config(1.0), ket0, 0.0, 1.5, 65);
    Eigen::Matrix2cd w;
    const double r = 1.0 / std::sqrt(2.0);
    w << complexd(r, 0), complexd(0, -r), complexd(r, 0), complexd(0, r);
    const Trajectory moved = rebase(traj, w);
    for (std::size_t i = 0; i < traj.size(); ++i) {
      REQUIRE(moved[i].delta_e == traj[i].delta_e);
      REQUIRE((moved[i].state.vec() - w * traj[i].state.vec()).norm() < 1e-12);
    }
    REQUIRE_THROWS_AS(rebase(traj, 2.0 * Eigen::Matrix2cd::Identity()),
                      std::invalid_argument);
  }
}
