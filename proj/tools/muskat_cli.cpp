// muskat: run scenarios, print the lemma report, inspect snapshots.
//
//   muskat run --scenario BACKWARD_SEED --n 512 --out runs/seed
//   muskat run --config runs/forward.yaml --input runs/seed/backward/terminal.csv
//   muskat verify-lemma --R 18
//   muskat inspect runs/seed/backward/terminal.csv
//
// Exit codes: 0 ok, 1 usage or configuration error, 2 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "muskat/diagnostics.hpp"
#include "muskat/error.hpp"
#include "muskat/lemma.hpp"
#include "muskat/scenario.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kNumerical = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace muskat;

  CLI::App app{"Periodic Muskat interface simulator"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one scenario and write its outputs");
  std::string config_path, scenario, out, input;
  std::optional<std::size_t> n;
  std::optional<double> dt, eps, density_jump, t_final;
  run->add_option("--config", config_path, "YAML run configuration")->check(CLI::ExistingFile);
  run->add_option("--scenario", scenario,
                  "BACKWARD_SEED | FORWARD_RERUN | CONJ_TURNOVER | LEMMA_VERIFY | DELTA_TILT");
  run->add_option("--out", out, "Output directory");
  run->add_option("--n", n, "Grid size");
  run->add_option("--dt", dt, "Time step");
  run->add_option("--eps", eps, "Smoothing threshold");
  run->add_option("--density-jump", density_jump, "rho^- - rho^+");
  run->add_option("--t-final", t_final, "Final time");
  run->add_option("--input", input, "Input snapshot for FORWARD_RERUN");

  auto* verify = app.add_subcommand("verify-lemma", "Print the building-block integral report");
  double R = 18.0, quad_tol = 1e-10;
  verify->add_option("--R", R, "Splice distance (> 9)");
  verify->add_option("--quad-tol", quad_tol, "Relative quadrature tolerance");

  auto* inspect = app.add_subcommand("inspect", "Print the turning report of a snapshot");
  std::string snapshot;
  double slope_tol = 1e-10;
  inspect->add_option("snapshot", snapshot, "Snapshot CSV")->required()->check(CLI::ExistingFile);
  inspect->add_option("--slope-tol", slope_tol, "Width of the CRITICAL band");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  if (*run) {
    RunConfig cfg;
    try {
      if (!config_path.empty()) cfg = load_config(config_path);
      if (!scenario.empty()) cfg.scenario = parse_scenario(scenario);
      if (!out.empty()) cfg.out = out;
      if (n) cfg.n = *n;
      if (dt) cfg.step.dt = *dt;
      if (eps) cfg.eps = *eps;
      if (density_jump) cfg.density_jump = *density_jump;
      if (t_final) cfg.t_final = *t_final;
      if (!input.empty()) cfg.input = input;
      cfg.validate();
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kUsage;
    }
    const RunManifest m = run_scenario(cfg);
    std::cout << to_string(cfg.scenario) << ": " << to_string(m.status);
    if (!m.timeline.empty()) std::cout << "  timeline " << m.timeline;
    std::cout << "  (" << m.wall_seconds << " s, " << (cfg.out / "manifest.json").string() << ")\n";
    if (m.status != RunStatus::Ok) {
      std::cerr << m.message << "\n";
      return kNumerical;
    }
    return 0;
  }

  if (*verify) {
    try {
      std::cout << lemma::verification_report(R, quad_tol) << "\n";
    } catch (const InvalidArgument& e) {
      std::cerr << e.what() << "\n";
      return kUsage;
    } catch (const Error& e) {
      std::cerr << e.what() << "\n";
      return kNumerical;
    }
    return 0;
  }

  if (*inspect) {
    try {
      const auto snap = import_snapshot(snapshot);
      TurningOptions opts;
      opts.slope_tol = slope_tol;
      const auto r = turning_report(snap.curve, opts);
      if (snap.time) std::printf("t          %.17g\n", *snap.time);
      std::printf("n          %zu\n", snap.curve.size());
      std::printf("regime     %s\n", to_string(r.regime).c_str());
      std::printf("min dz1    %.6e at alpha = %.6e\n", r.min_slope, r.argmin);
      for (const auto& p : r.tangent_points) {
        std::printf("tangent    alpha = %+.6e  z = (%+.6e, %+.6e)\n", p.alpha, p.z1, p.z2);
      }
      for (const auto& p : r.slope_minima) {
        std::printf("slope min  alpha = %+.6e  z = (%+.6e, %+.6e)  dz1 = %.3e\n", p.alpha, p.z1,
                    p.z2, p.slope);
      }
    } catch (const Error& e) {
      std::cerr << e.what() << "\n";
      return kUsage;
    }
    return 0;
  }
  return kUsage;
}
