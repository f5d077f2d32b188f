#include "stepwalk/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "stepwalk/config.hpp"
#include "stepwalk/ensemble.hpp"
#include "stepwalk/errors.hpp"
#include "stepwalk/martingale.hpp"
#include "stepwalk/report.hpp"
#include "stepwalk/verify.hpp"
#include "stepwalk/walk.hpp"

namespace stepwalk {
namespace {

// Flags shared by the commands that take an experiment configuration.
struct ConfigFlags {
  std::string config_path;
  std::optional<double> p;
  std::optional<double> alpha;
  std::optional<std::string> dist;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> ensemble;
  std::optional<std::uint64_t> seed;
  std::optional<double> theta;
  std::optional<double> r;
  std::optional<std::uint64_t> long_horizon;
  std::optional<std::string> clt_case;
  std::optional<double> ks_level;
  std::optional<double> ks_threshold;
  std::optional<double> var_tol;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON experiment config");
    cmd->add_option("--p", p, "probability of keeping the sign of a repeated step");
    cmd->add_option("--alpha", alpha, "probability of repeating a past step");
    cmd->add_option("--dist", dist, "innovation law, e.g. rademacher:0.7");
    cmd->add_option("--n", n, "horizon");
    cmd->add_option("--ensemble", ensemble, "number of trajectories");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--theta", theta, "memory cutoff fraction (gradual-clt)");
    cmd->add_option("--r", r, "exponent of the rate check, in (1, 2)");
    cmd->add_option("--long-horizon", long_horizon, "coupling horizon for superdiffusive cases");
    cmd->add_option("--case", clt_case, "expected CLT case: i, ii or iii");
    cmd->add_option("--ks-level", ks_level, "KS test level");
    cmd->add_option("--ks-threshold", ks_threshold, "explicit KS threshold");
    cmd->add_option("--var-tol", var_tol, "variance tolerance");
  }

  // Config file first, flags override.
  ExperimentConfig build(std::optional<ExperimentKind> kind) const {
    nlohmann::json j = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid JSON in '" + config_path + "': " + e.what());
      }
      if (!j.is_object()) throw ConfigError("config must be a JSON object");
    }
    if (p) j["p"] = *p;
    if (alpha) j["alpha"] = *alpha;
    if (dist) j["dist"] = *dist;
    if (n) j["n"] = *n;
    if (ensemble) j["ensemble"] = *ensemble;
    if (seed) j["seed"] = *seed;
    if (theta) j["theta"] = *theta;
    if (r) j["r"] = *r;
    if (long_horizon) j["long_horizon"] = *long_horizon;
    if (clt_case) j["case"] = *clt_case;
    if (ks_level) j["tolerances"]["ks_level"] = *ks_level;
    if (ks_threshold) j["tolerances"]["ks_threshold"] = *ks_threshold;
    if (var_tol) j["tolerances"]["var_tol"] = *var_tol;
    if (!kind && !j.contains("kind")) j["kind"] = "slln";
    return config_from_json(j, kind);
  }
};

// Writes to the file at path, or to out when path is empty.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw ConfigError("cannot write '" + path + "'");
  fn(file);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Step-reinforced random walk simulator and limit-theorem checks", "stepwalk"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker count (default: STEPWALK_THREADS or all cores)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "one trajectory to CSV at geometric checkpoints");
  double sim_p = 0.5;
  double sim_alpha = 0.0;
  std::string sim_dist = "rademacher:0.5";
  std::uint64_t sim_n = 1000;
  std::uint64_t sim_seed = 0;
  double sim_ratio = 1.2;
  std::string sim_out;
  simulate->add_option("--p", sim_p, "probability of keeping the sign of a repeated step");
  simulate->add_option("--alpha", sim_alpha, "probability of repeating a past step");
  simulate->add_option("--dist", sim_dist, "innovation law, e.g. rademacher:0.7");
  simulate->add_option("--n", sim_n, "horizon")->required();
  simulate->add_option("--seed", sim_seed, "seed");
  simulate->add_option("--ratio", sim_ratio, "geometric checkpoint ratio");
  simulate->add_option("--out", sim_out, "output CSV (default stdout)");

  // ensemble
  auto* ensemble = app.add_subcommand("ensemble", "per-trajectory results of an ensemble to CSV");
  ConfigFlags ens_flags;
  ens_flags.attach(ensemble);
  std::string ens_out;
  ensemble->add_option("--out", ens_out, "output CSV (default stdout)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run a verification experiment");
  std::string kind_text;
  verify_cmd->add_option("kind", kind_text,
                         "slln | mz-rate | l2-lln | clt | gradual-clt | lemma-even | weights-diag")
      ->required();
  ConfigFlags ver_flags;
  ver_flags.attach(verify_cmd);
  std::string ver_out;
  verify_cmd->add_option("--out", ver_out, "report JSON (default stdout)");

  // weights
  auto* weights_cmd = app.add_subcommand("weights", "martingale weights a_n, A_n, v_n to CSV");
  double w_a = 0.0;
  std::uint64_t w_n = 100;
  std::string w_out;
  weights_cmd->add_option("--a", w_a, "memory index a in [-1, 1)")->required();
  weights_cmd->add_option("--n", w_n, "last index");
  weights_cmd->add_option("--out", w_out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*simulate) {
      WalkParams params{sim_p, sim_alpha, StepDistribution::parse(sim_dist)};
      try {
        params.validate();
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
      const auto grid = geometric_checkpoints(sim_n, 1.0, sim_ratio);
      const Trajectory traj = simulate_trajectory(params, sim_n, grid, sim_seed);
      emit(sim_out, out, [&](std::ostream& os) { write_trajectory_csv(os, traj); });
      return 0;
    }
    if (*ensemble) {
      const ExperimentConfig config = ens_flags.build(std::nullopt);
      const auto rows = run_ensemble(config, threads);
      emit(ens_out, out, [&](std::ostream& os) { write_ensemble_csv(os, rows); });
      return 0;
    }
    if (*verify_cmd) {
      const ExperimentConfig config = ver_flags.build(parse_kind(kind_text));
      const VerificationReport report = verify(config, threads);
      emit(ver_out, out, [&](std::ostream& os) { os << report_text(report); });
      for (const auto& c : report.checks) {
        err << (c.pass ? "PASS " : "FAIL ") << c.name << " stat=" << format_double(c.statistic)
            << " target=" << format_double(c.target) << " tol=" << format_double(c.tolerance) << '\n';
      }
      return report.pass() ? 0 : 1;
    }
    if (*weights_cmd) {
      const MartingaleWeights w = weights(w_a, w_n);
      emit(w_out, out, [&](std::ostream& os) { write_weights_csv(os, w); });
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace stepwalk
