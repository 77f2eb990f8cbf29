#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "complexkit/scenarios.hpp"
#include "complexkit/verify.hpp"

using namespace complexkit;
using Catch::Matchers::WithinAbs;

TEST_CASE("scenario construction") {
  REQUIRE_THROWS_AS(make_scenario("bogus"), std::invalid_argument);
  const ScenarioSpec geo = make_scenario("stationary-geodesic", {{"omega", 2.0}});
  REQUIRE_THAT(geo.t_f, WithinAbs(kPi * std::sqrt(6.0) / 8.0, 1e-14));
  const ScenarioSpec rot = make_scenario("rotating-field", {{"nu", 0.0}});
  REQUIRE(rot.parameters.at("nu") == 0.0);
  REQUIRE(scenario_names().size() == 5);
}

TEST_CASE("stationary geodesic report") {
  const ComplexityReport r = run_scenario(make_scenario("stationary-geodesic"));
  REQUIRE_THAT(r.avg_k, WithinAbs(0.5 - 1.0 / kPi, 1e-9));
  REQUIRE_THAT(r.c_igc, WithinAbs(0.5, 1e-9));
  REQUIRE_THAT(r.eta_ge, WithinAbs(1.0, 1e-10));
  REQUIRE_THAT(r.kappa_series.front(), WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(r.s, WithinAbs(kPi / 2.0, 1e-10));
  REQUIRE_THAT(r.s0, WithinAbs(kPi / 2.0, 1e-10));
  REQUIRE_THAT(r.l_c, WithinAbs(0.5 * kPi * std::sqrt(2.0), 1e-8));
  REQUIRE(r.k_series.size() == r.traj.size());
  REQUIRE(r.v_series.size() == r.traj.size());
  REQUIRE(r.kappa_series.size() == r.traj.size());
  for (double v : {r.avg_k, r.c_igc, r.eta_ge, r.s, r.s0, r.l_c, r.sup_k})
    REQUIRE(std::isfinite(v));
  REQUIRE(r.analytic.count("avg_k") == 1);
}

TEST_CASE("stationary nongeodesic report") {
  const ComplexityReport r =
      run_scenario(make_scenario("stationary-nongeodesic"));
  REQUIRE_THAT(r.avg_k,
               WithinAbs(1.0 / 3.0 - std::sqrt(3.0) / (4.0 * kPi), 1e-9));
  REQUIRE_THAT(r.vbar, WithinAbs(5.11e-2, 5e-4));
  REQUIRE_THAT(r.vmax, WithinAbs(kPi / 16.0, 1e-9));
  REQUIRE_THAT(r.c_igc, WithinAbs(0.74, 1e-2));
  REQUIRE_THAT(r.eta_ge, WithinAbs(3.0 * std::sqrt(6.0) / 8.0, 1e-9));
  REQUIRE_THAT(r.kappa_series.front(), WithinAbs(2.0, 1e-10));
}

TEST_CASE("nonstationary reports") {
  const ComplexityReport geo = run_scenario(make_scenario("nonstationary-geodesic"));
  REQUIRE_THAT(geo.avg_k, WithinAbs(0.5, 1e-10));
  REQUIRE_THAT(geo.c_igc, WithinAbs(0.5, 1e-9));
  REQUIRE_THAT(geo.eta_ge, WithinAbs(1.0, 1e-10));
  REQUIRE_THAT(geo.s, WithinAbs(kPi, 1e-10));
  REQUIRE_THAT(geo.l_c, WithinAbs(kPi * std::sqrt(2.0), 1e-8));

  const ComplexityReport non =
      run_scenario(make_scenario("nonstationary-nongeodesic"));
  REQUIRE_THAT(non.avg_k, WithinAbs(0.5, 1e-10));
  REQUIRE_THAT(non.c_igc,
               WithinAbs((3.0 * kPi * kPi - 4.0) / (4.0 * kPi * kPi), 1e-6));
  REQUIRE_THAT(non.s, WithinAbs(3.33, 0.01));
  REQUIRE(non.eta_ge < 1.0);

  SECTION("phase blindness: identical K series, different C") {
    REQUIRE(geo.k_series.size() == non.k_series.size());
    for (std::size_t i = 0; i < geo.k_series.size(); ++i)
      REQUIRE_THAT(geo.k_series[i], WithinAbs(non.k_series[i], 1e-10));
    REQUIRE(std::abs(non.c_igc - geo.c_igc) > 0.1);
  }
}

TEST_CASE("rotating-field report") {
  const ComplexityReport r = run_scenario(make_scenario("rotating-field"));
  REQUIRE_THAT(r.sup_k, WithinAbs(0.5, 1e-8));
  for (double k : r.k_series) {
    REQUIRE(k >= -1e-15);
    REQUIRE(k <= 0.5 + 1e-12);
  }
  SECTION("undriven limit reaches full complexity at t = pi/omega") {
    const ComplexityReport pure =
        run_scenario(make_scenario("rotating-field", {{"nu", 0.0}}));
    REQUIRE_THAT(pure.sup_k, WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("the stationary pair is a fair comparison") {
  const ComplexityReport geo = run_scenario(make_scenario("stationary-geodesic"), 257);
  const ComplexityReport non =
      run_scenario(make_scenario("stationary-nongeodesic"), 257);
  // identical initial energy uncertainty omega/sqrt(6)
  REQUIRE_THAT(geo.traj[0].delta_e, WithinAbs(1.0 / std::sqrt(6.0), 1e-12));
  REQUIRE_THAT(non.traj[0].delta_e, WithinAbs(1.0 / std::sqrt(6.0), 1e-12));
  // orderings reported in the comparative analysis
  REQUIRE(non.avg_k > geo.avg_k);
  REQUIRE(non.c_igc > geo.c_igc);
  const double tf_geo = kPi * std::sqrt(6.0) / 4.0;
  const double tf_non = 2.0 * kPi / 3.0;
  REQUIRE(tf_geo < tf_non);
}

TEST_CASE("verification table") {
  SECTION("default profile passes everything") {
    const auto rows = verify_all();
    REQUIRE(rows.size() >= 30);
    for (const auto& r : rows) {
      INFO(r.id << " computed=" << r.computed << " expected=" << r.expected
                << " tol=" << r.tolerance);
      CHECK(r.pass);
    }
  }
  SECTION("strict profile fails honestly on paper-precision rows") {
    const auto rows = verify_all(tolerance_profile("strict"));
    bool any_fail = false;
    for (const auto& r : rows)
      if (!r.pass) any_fail = true;
    REQUIRE(any_fail);
    // the rows limited by the paper's own 3-digit values must be among them
    for (const auto& r : rows) {
      if (r.id == "4.s") REQUIRE_FALSE(r.pass);
    }
  }
  SECTION("per-row tolerance overrides") {
    // the paper reports V-bar to three digits; nothing can match it to 1e-9
    const auto rows = verify_all({{"2.vbar", 1e-9}});
    for (const auto& r : rows)
      if (r.id == "2.vbar") REQUIRE_FALSE(r.pass);
  }
}
