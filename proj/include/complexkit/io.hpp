#pragma once

#include <cmath>
#include <cstdio>
#include <cstring>
#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "complexkit/scenarios.hpp"
#include "complexkit/verify.hpp"

namespace complexkit {

// %.17g keeps every double bit-exact across a round trip.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline const char* kSeriesHeader =
    "t,re_c0,im_c0,re_c1,im_c1,ax,ay,az,theta,phi,deltaE,k_t,v_t,kappa_sq";

inline nlohmann::json summary_json(const ComplexityReport& report) {
  nlohmann::json j;
  j["scenario"] = report.scenario;
  j["samples"] = report.traj.size();
  j["t_a"] = report.traj.t_a();
  j["t_b"] = report.traj.t_b();
  j["avg_k"] = report.avg_k;
  j["sup_k"] = report.sup_k;
  j["vbar"] = report.vbar;
  j["vmax"] = report.vmax;
  j["c_igc"] = report.c_igc;
  j["eta_ge"] = report.eta_ge;
  j["s"] = report.s;
  j["s0"] = report.s0;
  j["l_c"] = report.l_c;
  j["kappa_sq_t0"] = report.kappa_series.empty() ? 0.0
                                                 : report.kappa_series.front();
  if (!report.analytic.empty()) j["analytic"] = report.analytic;
  return j;
}

namespace detail {

inline std::vector<double> series_row(const ComplexityReport& report,
                                      std::size_t i) {
  const TrajectorySample& s = report.traj[i];
  return {s.t,
          s.state.c0().real(),
          s.state.c0().imag(),
          s.state.c1().real(),
          s.state.c1().imag(),
          s.bloch.x(),
          s.bloch.y(),
          s.bloch.z(),
          s.angles.theta,
          s.angles.phi,
          s.delta_e,
          report.k_series[i],
          report.v_series[i],
          report.kappa_series[i]};
}

}  // namespace detail

// CSV series plus a trailing one-line JSON summary (prefixed with '#' so the
// block survives naive CSV readers).
inline void write_series_csv(std::ostream& out, const ComplexityReport& report,
                             const std::string& stamp = {}) {
  if (!stamp.empty()) out << "# generated " << stamp << "\n";
  out << kSeriesHeader << "\n";
  for (std::size_t i = 0; i < report.traj.size(); ++i) {
    const std::vector<double> row = detail::series_row(report, i);
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << format_double(row[c]);
    out << "\n";
  }
  out << "# summary " << summary_json(report).dump() << "\n";
}

inline void write_series_json(std::ostream& out,
                              const ComplexityReport& report,
                              const std::string& stamp = {}) {
  nlohmann::json j;
  std::vector<std::string> columns;
  for (const char* p = kSeriesHeader;;) {
    const char* comma = std::strchr(p, ',');
    if (!comma) {
      columns.emplace_back(p);
      break;
    }
    columns.emplace_back(p, comma);
    p = comma + 1;
  }
  j["columns"] = columns;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < report.traj.size(); ++i)
    rows.push_back(detail::series_row(report, i));
  j["rows"] = rows;
  j["summary"] = summary_json(report);
  if (!stamp.empty()) j["generated"] = stamp;
  out << j.dump(1) << "\n";
}

inline void write_verification_text(std::ostream& out,
                                    const std::vector<VerificationRow>& rows) {
  int failed = 0;
  for (const auto& r : rows) {
    out << (r.pass ? "PASS" : "FAIL") << "  " << r.id << "  computed="
        << format_double(r.computed);
    switch (r.kind) {
      case VerificationRow::Kind::Equals:
        out << " expected=" << format_double(r.expected)
            << " tol=" << format_double(r.tolerance)
            << " residual=" << format_double(std::abs(r.computed - r.expected));
        break;
      case VerificationRow::Kind::AtMost:
        out << " bound<=" << format_double(r.expected);
        break;
      case VerificationRow::Kind::AtLeast:
        out << " bound>=" << format_double(r.expected);
        break;
    }
    out << "  (" << r.label << ")\n";
    if (!r.pass) ++failed;
  }
  out << rows.size() - failed << "/" << rows.size() << " criteria passed\n";
}

inline nlohmann::json verification_json(
    const std::vector<VerificationRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["id"] = r.id;
    j["label"] = r.label;
    j["kind"] = r.kind == VerificationRow::Kind::Equals
                    ? "equals"
                    : (r.kind == VerificationRow::Kind::AtMost ? "at_most"
                                                               : "at_least");
    j["computed"] = r.computed;
    j["expected"] = r.expected;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    arr.push_back(j);
  }
  return arr;
}

struct SweepPoint {
  double value = 0.0;
  double avg_k = 0.0;
  double c_igc = 0.0;
  double eta_ge = 0.0;
  double s = 0.0;
  double l_c = 0.0;
  double kappa_sq_t0 = 0.0;
  double sup_k = 0.0;
};

inline const char* kSweepHeader =
    "param_value,avg_k,c_igc,eta_ge,s,l_c,kappa_sq_t0,sup_k";

inline void write_sweep_csv(std::ostream& out,
                            const std::vector<SweepPoint>& points,
                            const std::string& stamp = {}) {
  if (!stamp.empty()) out << "# generated " << stamp << "\n";
  out << kSweepHeader << "\n";
  for (const auto& p : points) {
    out << format_double(p.value) << "," << format_double(p.avg_k) << ","
        << format_double(p.c_igc) << "," << format_double(p.eta_ge) << ","
        << format_double(p.s) << "," << format_double(p.l_c) << ","
        << format_double(p.kappa_sq_t0) << "," << format_double(p.sup_k)
        << "\n";
  }
}

}  // namespace complexkit
