#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "complexkit/igc.hpp"

using namespace complexkit;
using Catch::Matchers::WithinAbs;

namespace {
const PureQubitState ket0(1.0, 0.0);

Trajectory stationary_geodesic(double omega, std::size_t n = 1025) {
  return trajectory(FieldConfiguration::constant(
                        0.0, Eigen::Vector3d(0.0, omega / std::sqrt(6.0), 0.0)),
                    ket0, 0.0, kPi * std::sqrt(6.0) / (4.0 * omega), n);
}

Trajectory stationary_nongeodesic(double omega, std::size_t n = 2049) {
  return trajectory(
      FieldConfiguration::constant(
          0.0, 0.5 * omega * Eigen::Vector3d(1, 1, 1).normalized()),
      ket0, 0.0, 2.0 * kPi / (3.0 * omega), n);
}

Trajectory parametric_nongeodesic(double omega0, double nu0,
                                  std::size_t n = 2049) {
  return trajectory(
      FieldConfiguration::parametric(ScalarTimeFunction::linear(0.0, omega0),
                                     ScalarTimeFunction::linear(kPi / 4.0, nu0)),
      ket0, 0.0, kPi / (2.0 * omega0), n);
}
}  // namespace

TEST_CASE("instantaneous volume") {
  SECTION("meridian sweep grows linearly") {
    const double omega = 1.0;
    const Trajectory traj = stationary_geodesic(omega, 257);
    REQUIRE_THAT(instantaneous_volume(traj, 0), WithinAbs(0.0, 1e-14));
    for (std::size_t i = 0; i < traj.size(); i += 32)
      REQUIRE_THAT(instantaneous_volume(traj, i),
                   WithinAbs(omega * traj[i].t / std::sqrt(6.0), 1e-11));
  }
  SECTION("product form for the linear-phase family") {
    const double omega0 = 1.0, nu0 = 1.0;
    const Trajectory traj = parametric_nongeodesic(omega0, nu0, 513);
    for (std::size_t i = 0; i < traj.size(); i += 64) {
      const double t = traj[i].t;
      const double expected =
          0.25 * nu0 * (1.0 - std::cos(2.0 * omega0 * t)) * t;
      REQUIRE_THAT(instantaneous_volume(traj, i), WithinAbs(expected, 1e-9));
    }
  }
}

TEST_CASE("accessed volume matches the case studies") {
  SECTION("geodesic gives pi/8 for every omega") {
    for (double omega : {0.5, 1.0, 2.0})
      REQUIRE_THAT(accessed_volume(stationary_geodesic(omega)),
                   WithinAbs(kPi / 8.0, 1e-8));
  }
  SECTION("nongeodesic gives about 5.11e-2 for every omega") {
    for (double omega : {0.5, 1.0, 2.0})
      REQUIRE_THAT(accessed_volume(stationary_nongeodesic(omega)),
                   WithinAbs(5.11e-2, 5e-4));
  }
  SECTION("linear-phase family gives (1/(4 pi) + pi/16) nu0/omega0") {
    const double expected = 1.0 / (4.0 * kPi) + kPi / 16.0;
    REQUIRE_THAT(accessed_volume(parametric_nongeodesic(1.0, 1.0)),
                 WithinAbs(expected, 1e-8));
  }
}

TEST_CASE("accessible volume matches the case studies") {
  REQUIRE_THAT(accessible_volume(stationary_geodesic(1.0)),
               WithinAbs(kPi / 4.0, 1e-9));
  REQUIRE_THAT(accessible_volume(stationary_nongeodesic(1.0)),
               WithinAbs(kPi / 16.0, 1e-9));
  // constant-phase family explores the full meridian
  const Trajectory geo = trajectory(
      FieldConfiguration::parametric(ScalarTimeFunction::linear(0.0, 1.0),
                                     ScalarTimeFunction::constant(kPi / 4.0)),
      ket0, 0.0, kPi / 2.0, 1025);
  REQUIRE_THAT(accessible_volume(geo), WithinAbs(kPi / 2.0, 1e-9));
  for (double nu0 : {1.0, 3.0})
    REQUIRE_THAT(accessible_volume(parametric_nongeodesic(1.0, nu0)),
                 WithinAbs(kPi / 4.0 * nu0, 1e-8));
  SECTION("angle ranges cover every sample") {
    const Trajectory traj = stationary_nongeodesic(1.0, 513);
    const AngleRange r = accessible_range(traj);
    for (const auto& s : traj.samples()) {
      REQUIRE(s.angles.theta >= r.theta_min - 1e-12);
      REQUIRE(s.angles.theta <= r.theta_max + 1e-12);
      REQUIRE(s.angles.phi >= r.phi_min - 1e-12);
      REQUIRE(s.angles.phi <= r.phi_max + 1e-12);
    }
    REQUIRE_THAT(r.phi_min, WithinAbs(-kPi / 4.0, 1e-9));
    REQUIRE_THAT(r.phi_max, WithinAbs(0.0, 1e-9));
  }
}

TEST_CASE("IG complexity of the case studies") {
  REQUIRE_THAT(ig_complexity(stationary_geodesic(1.0)), WithinAbs(0.5, 1e-9));
  REQUIRE_THAT(ig_complexity(stationary_nongeodesic(1.0)),
               WithinAbs(0.74, 1e-2));
  const double expected = (3.0 * kPi * kPi - 4.0) / (4.0 * kPi * kPi);
  REQUIRE_THAT(ig_complexity(parametric_nongeodesic(1.0, 1.0)),
               WithinAbs(expected, 1e-6));
  SECTION("the ratio is invariant in nu0/omega0") {
    const double base = ig_complexity(parametric_nongeodesic(1.0, 1.0));
    REQUIRE_THAT(ig_complexity(parametric_nongeodesic(2.0, 1.0)),
                 WithinAbs(base, 1e-8));
    REQUIRE_THAT(ig_complexity(parametric_nongeodesic(1.0, 3.0)),
                 WithinAbs(base, 1e-8));
  }
  SECTION("motionless evolutions have no accessible region") {
    const Trajectory frozen = trajectory(
        FieldConfiguration::constant(0.0, Eigen::Vector3d(0, 0, 1)), ket0, 0.0,
        2.0, 65);
    REQUIRE_THROWS_AS(ig_complexity(frozen), std::domain_error);
  }
}

TEST_CASE("complexity length scale") {
  // geodesic case: s = pi/2 and Vbar/Vmax = 1/2, so L_C = (pi/2) sqrt(2)
  const Trajectory geo = stationary_geodesic(1.0);
  REQUIRE_THAT(complexity_length_scale(geo),
               WithinAbs(0.5 * kPi * std::sqrt(2.0), 1e-8));
  // identity L_C^2 Vbar/Vmax = s^2
  const VolumeReport report = volume_report(geo);
  REQUIRE_THAT(report.length_scale * report.length_scale * report.accessed /
                   report.accessible,
               WithinAbs(std::pow(kPi / 2.0, 2), 1e-8));
  // full meridian parametric case: s = pi, ratio 1/2, L_C = pi sqrt(2)
  const Trajectory pgeo = trajectory(
      FieldConfiguration::parametric(ScalarTimeFunction::linear(0.0, 1.0),
                                     ScalarTimeFunction::constant(kPi / 4.0)),
      ket0, 0.0, kPi / 2.0, 1025);
  REQUIRE_THAT(complexity_length_scale(pgeo),
               WithinAbs(kPi * std::sqrt(2.0), 1e-8));
}

TEST_CASE("containment and bounds on a mixed bag of evolutions") {
  const std::vector<Trajectory> trajectories = {
      stationary_geodesic(1.3, 257), stationary_nongeodesic(0.7, 257),
      parametric_nongeodesic(1.1, 0.9, 257),
      trajectory(FieldConfiguration::rotating_xy(1.0, 1.0), ket0, 0.0,
                 2.0 * kPi, 513)};
  for (const auto& traj : trajectories) {
    const VolumeReport report = volume_report(traj);
    REQUIRE(report.accessed <= report.accessible + 1e-12);
    REQUIRE(report.complexity >= 0.0);
    REQUIRE(report.complexity <= 1.0);
    for (double v : report.v_of_t) REQUIRE(v >= 0.0);
  }
}

TEST_CASE("volume computations are basis independent") {
  // evolution from (|0> + i|1>)/sqrt(2) under sigma_x, following the
  // worked example: Vbar = pi/8 and Vmax = pi/4 in both bases.
  const FieldConfiguration config =
      FieldConfiguration::constant(0.0, Eigen::Vector3d::UnitX());
  const double r = 1.0 / std::sqrt(2.0);
  const Trajectory comp = trajectory(config, PureQubitState(r, complexd(0, r)),
                                     0.0, kPi / 4.0, 1025);
  Eigen::Matrix2cd w;
  w << complexd(r, 0), complexd(0, -r), complexd(r, 0), complexd(0, r);
  const Trajectory eig = rebase(comp, w);
  REQUIRE_THAT(accessed_volume(comp), WithinAbs(kPi / 8.0, 1e-8));
  REQUIRE_THAT(accessed_volume(eig), WithinAbs(kPi / 8.0, 1e-8));
  REQUIRE_THAT(accessible_volume(comp), WithinAbs(kPi / 4.0, 1e-8));
  REQUIRE_THAT(accessible_volume(eig), WithinAbs(kPi / 4.0, 1e-8));
  REQUIRE_THAT(ig_complexity(comp), WithinAbs(ig_complexity(eig), 1e-8));
}
