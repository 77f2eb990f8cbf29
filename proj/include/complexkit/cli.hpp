#pragma once

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "complexkit/config_io.hpp"
#include "complexkit/io.hpp"
#include "complexkit/scenarios.hpp"
#include "complexkit/verify.hpp"

namespace complexkit {

// Exit codes: 0 ok, 1 verification failure, 2 usage, 3 I/O, 4 numerics.
enum ExitCode {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitNumerical = 4
};

namespace detail {

inline std::string utc_stamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// Writes through a sink: --out path or the provided stream.
template <typename Fn>
int with_sink(const std::string& path, std::ostream& fallback,
              std::ostream& err, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return kExitOk;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    err << "error: cannot open output file: " << path << "\n";
    return kExitIo;
  }
  fn(file);
  if (!file.good()) {
    err << "error: write failed: " << path << "\n";
    return kExitIo;
  }
  return kExitOk;
}

struct OverrideFlags {
  double omega = std::nan("");
  double nu = std::nan("");
  double omega0 = std::nan("");
  double nu0 = std::nan("");
  double beta0 = std::nan("");
  double t_f = std::nan("");

  void attach(CLI::App* cmd) {
    cmd->add_option("--omega", omega, "stationary / rotating field frequency");
    cmd->add_option("--nu", nu, "rotating field drive frequency");
    cmd->add_option("--omega0", omega0, "parametric polar rate");
    cmd->add_option("--nu0", nu0, "parametric azimuth rate");
    cmd->add_option("--beta0", beta0, "parametric azimuth offset");
    cmd->add_option("--tf", t_f, "final time override");
  }

  std::map<std::string, double> as_map() const {
    std::map<std::string, double> m;
    auto put = [&](const char* key, double v) {
      if (!std::isnan(v)) m[key] = v;
    };
    put("omega", omega);
    put("nu", nu);
    put("omega0", omega0);
    put("nu0", nu0);
    put("beta0", beta0);
    put("t_f", t_f);
    return m;
  }
};

// run_scenario for an ad-hoc configuration; κ² samples that sit on a
// degenerate point come back as NaN instead of aborting the trace.
inline ComplexityReport trace_report(const FieldConfiguration& config,
                                     const PureQubitState& psi0, double t0,
                                     double t1, std::size_t samples) {
  ScenarioSpec spec{"trace", config, psi0, t0, t1, {}};
  return run_scenario(spec, samples);
}

inline SweepPoint sweep_point(const std::string& scenario,
                              std::map<std::string, double> overrides,
                              const std::string& param, double value,
                              std::size_t samples) {
  overrides[param] = value;
  const ComplexityReport r =
      run_scenario(make_scenario(scenario, overrides), samples);
  return SweepPoint{value,  r.avg_k, r.c_igc,
                    r.eta_ge, r.s,     r.l_c,
                    r.kappa_series.empty() ? 0.0 : r.kappa_series.front(),
                    r.sup_k};
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Krylov and information-geometric complexity of qubit evolutions"};
  app.require_subcommand(1);

  // --- scenario -----------------------------------------------------------
  auto* scenario_cmd =
      app.add_subcommand("scenario", "run a named case study");
  std::string scenario_name;
  scenario_cmd->add_option("name", scenario_name, "scenario name")->required();
  std::size_t samples = 2049;
  std::string out_path, format = "csv";
  bool stamp = false;
  detail::OverrideFlags overrides;
  scenario_cmd->add_option("--samples", samples, "sample count (>= 2)");
  scenario_cmd->add_option("--out", out_path, "output file (default stdout)");
  scenario_cmd->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  scenario_cmd->add_flag("--stamp", stamp, "embed a generation timestamp");
  overrides.attach(scenario_cmd);

  // --- trace ---------------------------------------------------------------
  auto* trace_cmd =
      app.add_subcommand("trace", "evolve a custom field configuration");
  std::string config_path;
  double theta0 = 0.0, phi0 = 0.0, t0 = 0.0, t1 = 1.0;
  std::size_t trace_samples = 2049;
  std::string trace_out, trace_format = "csv";
  bool trace_stamp = false;
  trace_cmd->add_option("--config", config_path, "field configuration JSON")
      ->required();
  trace_cmd->add_option("--theta0", theta0, "initial polar angle");
  trace_cmd->add_option("--phi0", phi0, "initial azimuth");
  trace_cmd->add_option("--t0", t0, "start time");
  trace_cmd->add_option("--t1", t1, "end time");
  trace_cmd->add_option("--samples", trace_samples, "sample count");
  trace_cmd->add_option("--out", trace_out, "output file (default stdout)");
  trace_cmd->add_option("--format", trace_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  trace_cmd->add_flag("--stamp", trace_stamp, "embed a generation timestamp");

  // --- sweep ---------------------------------------------------------------
  auto* sweep_cmd =
      app.add_subcommand("sweep", "scan one parameter of a scenario");
  std::string sweep_param, sweep_range, sweep_scenario, sweep_out;
  std::size_t sweep_samples = 1025;
  int jobs = 0;
  bool sweep_stamp = false;
  detail::OverrideFlags sweep_overrides;
  sweep_cmd->add_option("--param", sweep_param, "parameter name")->required();
  sweep_cmd->add_option("--range", sweep_range, "a:b:step grid")->required();
  sweep_cmd->add_option("--scenario", sweep_scenario, "base scenario")
      ->required();
  sweep_cmd->add_option("--samples", sweep_samples, "samples per point");
  sweep_cmd->add_option("--out", sweep_out, "output file (default stdout)");
  sweep_cmd->add_option("--jobs", jobs,
                        "parallel evaluations (default COMPLEXKIT_JOBS or 1)");
  sweep_cmd->add_flag("--stamp", sweep_stamp, "embed a generation timestamp");
  sweep_overrides.attach(sweep_cmd);

  // --- verify ---------------------------------------------------------------
  auto* verify_cmd =
      app.add_subcommand("verify", "run the golden-value verification table");
  std::string profile = "default";
  bool verify_json = false;
  std::size_t verify_samples = 2049;
  verify_cmd->add_option("--tolerance-profile", profile, "default or strict")
      ->check(CLI::IsMember({"default", "strict"}));
  verify_cmd->add_flag("--json", verify_json, "machine-readable results");
  verify_cmd->add_option("--samples", verify_samples, "samples per scenario");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*scenario_cmd) {
      std::optional<ScenarioSpec> spec;
      try {
        spec.emplace(make_scenario(scenario_name, overrides.as_map()));
      } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\nknown scenarios:";
        for (const auto& n : scenario_names()) err << " " << n;
        err << "\n";
        return kExitUsage;
      }
      if (samples < 2) {
        err << "usage error: --samples must be >= 2\n";
        return kExitUsage;
      }
      const ComplexityReport report = run_scenario(*spec, samples);
      const std::string when = stamp ? detail::utc_stamp() : "";
      return detail::with_sink(out_path, out, err, [&](std::ostream& sink) {
        format == "csv" ? write_series_csv(sink, report, when)
                        : write_series_json(sink, report, when);
      });
    }

    if (*trace_cmd) {
      std::ifstream file(config_path);
      if (!file) {
        err << "error: cannot read config file: " << config_path << "\n";
        return kExitIo;
      }
      std::stringstream buffer;
      buffer << file.rdbuf();
      std::optional<FieldConfiguration> parsed;
      try {
        parsed.emplace(field_configuration_from_text(buffer.str()));
      } catch (const ConfigParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
      }
      const FieldConfiguration& config = *parsed;
      const PureQubitState psi0 = from_angles(theta0, phi0);
      const std::string when = trace_stamp ? detail::utc_stamp() : "";
      if (t1 < t0) {
        err << "usage error: --t1 before --t0\n";
        return kExitUsage;
      }
      if (t1 == t0) {
        // Degenerate window: one sample, zero complexity by construction.
        std::vector<TrajectorySample> one(1);
        one[0].t = t0;
        one[0].state = psi0;
        one[0].bloch = to_bloch(psi0);
        one[0].angles = to_angles(psi0);
        one[0].delta_e = energy_uncertainty(one[0].bloch,
                                            field_at(config, t0).hvec);
        ComplexityReport report{
            "trace", Trajectory(config, psi0, std::move(one), {})};
        report.k_series = {0.0};
        report.v_series = {0.0};
        report.kappa_series = {0.0};
        report.eta_ge = 1.0;
        return detail::with_sink(trace_out, out, err, [&](std::ostream& sink) {
          trace_format == "csv" ? write_series_csv(sink, report, when)
                                : write_series_json(sink, report, when);
        });
      }
      const ComplexityReport report =
          detail::trace_report(config, psi0, t0, t1, trace_samples);
      return detail::with_sink(trace_out, out, err, [&](std::ostream& sink) {
        trace_format == "csv" ? write_series_csv(sink, report, when)
                              : write_series_json(sink, report, when);
      });
    }

    if (*sweep_cmd) {
      double lo = 0.0, hi = 0.0, step = 0.0;
      char sep1 = 0, sep2 = 0;
      std::istringstream range(sweep_range);
      range >> lo >> sep1 >> hi >> sep2 >> step;
      if (!range || sep1 != ':' || sep2 != ':' || step <= 0.0) {
        err << "usage error: --range expects a:b:step with step > 0\n";
        return kExitUsage;
      }
      std::vector<double> grid;
      for (double v = lo; v <= hi + 1e-12 * std::max(1.0, std::abs(hi));
           v += step)
        grid.push_back(v);
      if (grid.empty()) {
        err << "usage error: empty sweep range\n";
        return kExitUsage;
      }
      const std::map<std::string, double> base = sweep_overrides.as_map();
      try {  // validate scenario and parameter name up front
        ScenarioSpec probe = make_scenario(sweep_scenario, base);
        if (!probe.parameters.count(sweep_param)) {
          err << "usage error: scenario '" << sweep_scenario
              << "' has no parameter '" << sweep_param << "'\n";
          return kExitUsage;
        }
      } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
      }
      int parallel = jobs;
      if (parallel <= 0) {
        if (const char* env = std::getenv("COMPLEXKIT_JOBS"))
          parallel = std::atoi(env);
        if (parallel <= 0) parallel = 1;
      }
      parallel = std::min<int>(parallel, static_cast<int>(grid.size()));
      std::vector<SweepPoint> points(grid.size());
      std::atomic<std::size_t> cursor{0};
      std::vector<std::string> failures(grid.size());
      auto worker = [&]() {
        for (;;) {
          const std::size_t i = cursor.fetch_add(1);
          if (i >= grid.size()) return;
          try {
            points[i] = detail::sweep_point(sweep_scenario, base, sweep_param,
                                            grid[i], sweep_samples);
          } catch (const std::exception& e) {
            failures[i] = e.what();
          }
        }
      };
      if (parallel <= 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < parallel; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
      }
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!failures[i].empty()) {
          err << "error: sweep point " << format_double(grid[i])
              << " failed: " << failures[i] << "\n";
          return kExitNumerical;
        }
      }
      const std::string when = sweep_stamp ? detail::utc_stamp() : "";
      return detail::with_sink(sweep_out, out, err, [&](std::ostream& sink) {
        write_sweep_csv(sink, points, when);
      });
    }

    if (*verify_cmd) {
      const std::vector<VerificationRow> rows =
          verify_all(tolerance_profile(profile), verify_samples);
      if (verify_json) {
        out << verification_json(rows).dump(1) << "\n";
      } else {
        write_verification_text(out, rows);
      }
      for (const auto& r : rows)
        if (!r.pass) return kExitVerifyFailed;
      return kExitOk;
    }
  } catch (const std::runtime_error& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace complexkit
