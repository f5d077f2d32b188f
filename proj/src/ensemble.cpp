#include "stepwalk/ensemble.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ostream>

#include "stepwalk/errors.hpp"
#include "stepwalk/martingale.hpp"

namespace stepwalk {
namespace {

std::string sig17(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

}  // namespace

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("STEPWALK_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    throw ConfigError("STEPWALK_THREADS must be a positive integer");
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::vector<Trajectory> run_trajectories(const ExperimentConfig& config,
                                         std::span<const std::uint64_t> checkpoints,
                                         unsigned workers) {
  config.params.validate();
  const auto grid = normalize_checkpoints(config.n, checkpoints);
  return parallel_map<Trajectory>(config.ensemble, workers, [&](std::uint64_t i) {
    return simulate_trajectory(config.params, config.n, grid, stream_seed(config.seed, i));
  });
}

double regime_score(const DerivedConstants& constants, std::uint64_t n, double t_n) {
  if (constants.regime == Regime::Degenerate) return 0.0;
  const double nd = static_cast<double>(n);
  const double dev = t_n / nd - *constants.drift;
  const double sigma = std::sqrt(*constants.sigma2);
  switch (constants.regime) {
    case Regime::Diffusive:
      return sigma > 0.0 ? std::sqrt(nd) * dev * std::sqrt(1.0 - 2.0 * constants.a) / sigma : 0.0;
    case Regime::Critical:
      return sigma > 0.0 && n >= 2 ? std::sqrt(nd / std::log(nd)) * dev / sigma : 0.0;
    case Regime::Superdiffusive:
      return std::pow(nd, 1.0 - constants.a) * dev;
    case Regime::Degenerate:
      break;
  }
  return 0.0;
}

std::vector<EnsembleRow> run_ensemble(const ExperimentConfig& config, unsigned workers) {
  const DerivedConstants constants = derive_constants(config.params);
  const auto trajectories = run_trajectories(config, {}, workers);
  std::vector<EnsembleRow> rows;
  rows.reserve(trajectories.size());
  for (std::uint64_t i = 0; i < trajectories.size(); ++i) {
    const auto& last = trajectories[i].values.back();
    EnsembleRow row{i, trajectories[i].seed, last.sum, 0.0, 0.0};
    const double mean = last.sum / static_cast<double>(last.n);
    row.statistic = constants.drift ? mean - *constants.drift : mean;
    row.z_score = regime_score(constants, last.n, last.sum);
    rows.push_back(row);
  }
  return rows;
}

void write_ensemble_csv(std::ostream& out, std::span<const EnsembleRow> rows) {
  out << "trajectory_index,seed,T_n,statistic,z_score\n";
  for (const auto& r : rows) {
    out << r.index << ',' << r.seed << ',' << sig17(r.t_n) << ',' << sig17(r.statistic) << ','
        << sig17(r.z_score) << '\n';
  }
}

EnsembleSummary summarize(std::span<const EnsembleRow> rows) {
  EnsembleSummary s;
  for (const auto& r : rows) {
    s.t_n.add(r.t_n);
    s.statistic.add(r.statistic);
    s.z_score.add(r.z_score);
  }
  return s;
}

std::string EnsembleSummary::to_string() const {
  std::string out;
  auto line = [&](const char* name, const MomentAccumulator& acc) {
    out += name;
    out += " count=" + std::to_string(acc.count()) + " mean=" + sig17(acc.mean()) +
           " var=" + sig17(acc.variance()) + '\n';
  };
  line("T_n", t_n);
  line("statistic", statistic);
  line("z_score", z_score);
  return out;
}

}  // namespace stepwalk
