#include "stepwalk/verify.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <limits>

#include "stepwalk/ensemble.hpp"
#include "stepwalk/errors.hpp"
#include "stepwalk/martingale.hpp"
#include "stepwalk/stats.hpp"

namespace stepwalk {
namespace {

constexpr double kBandFloor = 1e-12;

double default_var_tol(ExperimentKind kind, const std::string& c) {
  if (c == "i") return kind == ExperimentKind::GradualClt ? 0.08 : 0.06;
  return 0.15;
}

void require_ensemble(const ExperimentConfig& config, std::uint64_t minimum) {
  if (config.ensemble < minimum) {
    throw InsufficientEnsemble("this experiment needs an ensemble of at least " +
                               std::to_string(minimum) + " (got " + std::to_string(config.ensemble) + ")");
  }
}

VerificationReport start_report(const ExperimentConfig& config) {
  config.validate();
  VerificationReport report{config, derive_constants(config.params), {}, 0.0};
  report.constants.require_drift();
  return report;
}

// ratio b / a for shrinkage checks; 0 / 0 counts as no growth.
double shrink_ratio(double before, double after) {
  if (after == 0.0) return 0.0;
  if (before == 0.0) return std::numeric_limits<double>::infinity();
  return after / before;
}

// First checkpoint of the rate checks: 10^3 when the horizon allows a decade
// above it, otherwise a tenth of the horizon.
std::uint64_t rate_start(std::uint64_t horizon) {
  if (horizon < 20) throw ConfigError("rate checks need n >= 20");
  return horizon >= 10'000 ? 1000 : horizon / 10;
}

std::vector<double> column(const std::vector<Trajectory>& trajectories, std::uint64_t n,
                           const auto& fn) {
  std::vector<double> out;
  out.reserve(trajectories.size());
  for (const auto& t : trajectories) out.push_back(fn(t.at(n)));
  return out;
}

void add_normal_checks(VerificationReport& report, const std::string& prefix, const CltSample& s,
                       double var_tol, double ks_tol) {
  const MomentAccumulator acc = accumulate(s.z);
  const double var = acc.variance();
  report.add(prefix + "_variance", var, s.var_target, var_tol, std::abs(var - s.var_target) <= var_tol);
  const auto scaled = standardize(s.z, 0.0, std::sqrt(s.var_target));
  const KsResult ks = ks_test_normal(scaled, ks_tol);
  report.add(prefix + "_ks", ks.d_statistic, 0.0, ks.threshold, ks.pass);
}

template <class Fn>
VerificationReport timed(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport report = fn();
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace

std::string regime_case(const DerivedConstants& constants) {
  switch (constants.regime) {
    case Regime::Diffusive:
      return "i";
    case Regime::Critical:
      return "ii";
    case Regime::Superdiffusive:
      return "iii";
    case Regime::Degenerate:
      break;
  }
  throw DegenerateMemory();
}

double deviation_scale(const DerivedConstants& constants, std::uint64_t n) {
  const double nd = static_cast<double>(n);
  const double a = constants.a;
  const double sigma2 = constants.require_sigma2();
  switch (constants.regime) {
    case Regime::Diffusive:
      return std::sqrt(sigma2 / ((1.0 - 2.0 * a) * nd));
    case Regime::Critical:
      return std::sqrt(sigma2 * std::log(std::max(nd, 2.0)) / nd);
    case Regime::Superdiffusive: {
      // E[L^2] <= (mu2 sum_k a_k^2 + (mu1 - drift)^2) / Gamma(a+1)^2
      const double mean_shift = constants.mu1 - *constants.drift;
      const double second = constants.mu2 * weights_square_sum(a) + mean_shift * mean_shift;
      return std::pow(nd, a - 1.0) * std::sqrt(second) / weight_scale(a);
    }
    case Regime::Degenerate:
      break;
  }
  throw DegenerateMemory();
}

double coupling_factor(double a, std::uint64_t n, std::uint64_t long_horizon) {
  return 1.0 - std::pow(static_cast<double>(n) / static_cast<double>(long_horizon), 2.0 * a - 1.0);
}

double expected_scaled_deviation(const DerivedConstants& constants, std::uint64_t n) {
  const double shift = constants.mu1 - constants.require_drift();
  if (shift == 0.0) return 0.0;
  return std::pow(static_cast<double>(n), -constants.a) * shift / weight_at(constants.a, n);
}

std::vector<std::uint64_t> decade_checkpoints(std::uint64_t from, std::uint64_t horizon) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d <= horizon; d *= 10) {
    if (d >= from) out.push_back(d);
    if (d > std::numeric_limits<std::uint64_t>::max() / 10) break;
  }
  return out;
}

double ks_limit(const ExperimentConfig& config, std::uint64_t sample_size) {
  if (config.tolerances.ks_threshold) return *config.tolerances.ks_threshold;
  return ks_threshold(sample_size, config.tolerances.ks_level.value_or(0.01));
}

VerificationReport verify_slln(const ExperimentConfig& config, unsigned workers) {
  return timed([&] {
    VerificationReport report = start_report(config);
    const auto& k = report.constants;
    const double drift = *k.drift;
    const auto decades = decade_checkpoints(10, config.n);
    const auto trajectories = run_trajectories(config, decades, workers);
    auto abs_dev = [&](const CheckpointValue& v) {
      return std::abs(v.sum / static_cast<double>(v.n) - drift);
    };

    const double med = median(column(trajectories, config.n, abs_dev));
    const double band = std::max(3.0 * deviation_scale(k, config.n), kBandFloor);
    report.add("slln_median_abs_deviation", med, 0.0, band, med <= band);

    double worst = 0.0;
    for (std::size_t i = 1; i < decades.size(); ++i) {
      const double before = median(column(trajectories, decades[i - 1], abs_dev));
      const double after = median(column(trajectories, decades[i], abs_dev));
      worst = std::max(worst, shrink_ratio(before, after));
    }
    report.add("qualitative_slln_median_monotone", worst, 1.0, 0.0, worst <= 1.0);
    return report;
  });
}

VerificationReport verify_mz_rate(const ExperimentConfig& config, unsigned workers) {
  return timed([&] {
    VerificationReport report = start_report(config);
    const auto& k = report.constants;
    const double drift = *k.drift;
    const std::uint64_t n0 = rate_start(config.n);
    const std::array<std::uint64_t, 1> grid{n0};
    const auto trajectories = run_trajectories(config, grid, workers);
    auto scaled = [&](const CheckpointValue& v) {
      const double n = static_cast<double>(v.n);
      double f = std::pow(n, 1.0 - 1.0 / config.r) * std::abs(v.sum / n - drift);
      if (k.regime == Regime::Critical) f /= std::sqrt(std::log(n));
      if (k.regime == Regime::Superdiffusive) f *= std::pow(n, 0.5 - k.a);
      return f;
    };
    const double ratio = shrink_ratio(median(column(trajectories, n0, scaled)),
                                      median(column(trajectories, config.n, scaled)));
    // every case has CLT-scale size n^{1/2 - 1/r} times an O(1) variable
    const double predicted =
        std::pow(static_cast<double>(config.n) / static_cast<double>(n0), 0.5 - 1.0 / config.r);
    const double allowance = 1.5 * predicted;
    report.add("qualitative_mz_median_ratio_" + regime_case(k), ratio, predicted, allowance,
               ratio < 1.0 && ratio <= allowance);
    return report;
  });
}

VerificationReport verify_l2_lln(const ExperimentConfig& config, unsigned workers) {
  return timed([&] {
    VerificationReport report = start_report(config);
    const auto& k = report.constants;
    const double drift = *k.drift;

    if (k.regime != Regime::Superdiffusive) {
      const std::uint64_t n0 = rate_start(config.n);
      const std::array<std::uint64_t, 1> grid{n0};
      const auto trajectories = run_trajectories(config, grid, workers);
      const bool critical = k.regime == Regime::Critical;
      // gamma = 1/2 in the log corrections
      auto rate = [&](double n) {
        return critical ? std::sqrt(n) / (std::sqrt(std::log(n)) * std::log(std::log(n)))
                        : std::sqrt(n) / std::log(n);
      };
      auto scaled = [&](const CheckpointValue& v) {
        const double n = static_cast<double>(v.n);
        return rate(n) * std::abs(v.sum / n - drift);
      };
      const double ratio = shrink_ratio(median(column(trajectories, n0, scaled)),
                                        median(column(trajectories, config.n, scaled)));
      const double n0d = static_cast<double>(n0);
      const double nd = static_cast<double>(config.n);
      const double predicted = critical ? std::log(std::log(n0d)) / std::log(std::log(nd))
                                        : std::log(n0d) / std::log(nd);
      report.add("qualitative_l2_median_ratio_" + regime_case(k), ratio, predicted, 1.0, ratio < 1.0);
      return report;
    }

    if (config.n < 10'000) throw ConfigError("the superdiffusive l2-lln check needs n >= 10^4");
    auto grid = decade_checkpoints(100, config.n);
    grid.push_back(config.n / 10);
    const auto trajectories = run_trajectories(config, grid, workers);
    const auto decades = decade_checkpoints(100, config.n);
    auto lambda = [&](const CheckpointValue& v) { return scaled_deviation(v, k); };

    std::vector<std::vector<double>> lambdas;
    for (auto d : decades) lambdas.push_back(column(trajectories, d, lambda));
    std::vector<double> rms;
    for (std::size_t j = 1; j < lambdas.size(); ++j) {
      double ss = 0.0;
      for (std::size_t i = 0; i < trajectories.size(); ++i) {
        const double diff = lambdas[j][i] - lambdas[j - 1][i];
        ss += diff * diff;
      }
      rms.push_back(std::sqrt(ss / static_cast<double>(trajectories.size())));
    }
    const double theory = std::pow(10.0, -(k.a - 0.5));
    const double lo = theory * (0.4 / 0.5623413251903491);
    const double hi = theory * (0.75 / 0.5623413251903491);
    for (std::size_t j = 1; j < rms.size(); ++j) {
      const double ratio = shrink_ratio(rms[j - 1], rms[j]);
      report.add("qualitative_l2_decade_rms_ratio_" + std::to_string(decades[j + 1]), ratio, theory,
                 hi - theory, ratio >= lo && ratio <= hi);
    }

    const auto last = column(trajectories, config.n, lambda);
    const double var_last = accumulate(last).variance();
    const double var_prev = accumulate(column(trajectories, config.n / 10, lambda)).variance();
    const double change = var_last > 0.0 ? std::abs(var_last - var_prev) / var_last : 0.0;
    report.add("qualitative_l2_var_lambda_stable", change, 0.0, 0.1, change < 0.1);

    const MomentAccumulator acc = accumulate(last);
    const double expected = expected_scaled_deviation(k, config.n);
    const double tol = 5.0 * acc.stderr_mean();
    report.add("l2_mean_lambda", acc.mean(), expected, tol, std::abs(acc.mean() - expected) <= tol);
    return report;
  });
}

CltSample clt_sample(const ExperimentConfig& config, unsigned workers) {
  config.validate();
  const DerivedConstants k = derive_constants(config.params);
  const std::string c = regime_case(k);
  if (config.clt_case && *config.clt_case != c) {
    throw ConfigError("case '" + *config.clt_case + "' does not match the " +
                      std::string(to_string(k.regime)) + " regime (case " + c + ")");
  }
  const double sigma = std::sqrt(k.require_sigma2());
  if (!(sigma > 0.0)) throw NonpositiveScale();

  CltSample s{c, {}, 1.0};
  if (c != "iii") {
    const auto trajectories = run_trajectories(config, {}, workers);
    for (const auto& t : trajectories) s.z.push_back(regime_score(k, t.horizon(), t.values.back().sum));
    return s;
  }

  ExperimentConfig long_run = config;
  long_run.n = config.coupling_horizon();
  long_run.long_horizon.reset();
  const std::array<std::uint64_t, 1> grid{config.n};
  const auto trajectories = run_trajectories(long_run, grid, workers);
  const double scale = std::sqrt(std::pow(static_cast<double>(config.n), 2.0 * k.a - 1.0)) *
                       std::sqrt(2.0 * k.a - 1.0) / sigma;
  for (const auto& t : trajectories) {
    const double l_hat = scaled_deviation(t.values.back(), k);
    s.z.push_back(scale * (scaled_deviation(t.at(config.n), k) - l_hat));
  }
  s.var_target = coupling_factor(k.a, config.n, long_run.n);
  return s;
}

VerificationReport verify_clt(const ExperimentConfig& config, unsigned workers) {
  return timed([&] {
    VerificationReport report = start_report(config);
    require_ensemble(config, 1000);
    const CltSample s = clt_sample(config, workers);
    const double var_tol = config.tolerances.var_tol.value_or(default_var_tol(config.kind, s.case_name));
    add_normal_checks(report, "clt_" + s.case_name, s, var_tol, ks_limit(config, s.z.size()));
    return report;
  });
}

CltSample gradual_clt_sample(const ExperimentConfig& config, unsigned workers) {
  config.validate();
  const DerivedConstants k = derive_constants(config.params);
  const std::string c = regime_case(k);
  if (config.clt_case && *config.clt_case != c) {
    throw ConfigError("case '" + *config.clt_case + "' does not match the " +
                      std::string(to_string(k.regime)) + " regime (case " + c + ")");
  }
  const GradualMemorySpec spec{config.n, config.memory_cutoff(), *config.theta};
  spec.validate();
  const double drift = *k.drift;
  const double sigma2 = k.require_sigma2();
  const double m = static_cast<double>(spec.m_n);
  const double n = static_cast<double>(spec.n);
  const double theta_n = m / n;
  const double tau_n = theta_n + k.a * (1.0 - theta_n);
  const double kappa_n = theta_n * (1.0 - theta_n);
  const std::uint64_t long_horizon = c == "iii" ? config.coupling_horizon() : 0;
  if (c == "ii" && spec.m_n < 2) throw InvalidMemoryCutoff("the critical case needs m_n >= 2");

  const auto outcomes = parallel_map<GradualOutcome>(config.ensemble, workers, [&](std::uint64_t i) {
    return simulate_gradual_coupled(config.params, spec, long_horizon, stream_seed(config.seed, i));
  });

  CltSample s{c, {}, 1.0};
  s.z.reserve(outcomes.size());
  if (c == "i") {
    const double var = tau_n * tau_n * sigma2 / (1.0 - 2.0 * k.a) + kappa_n * sigma2;
    if (!(var > 0.0)) throw NonpositiveScale();
    for (const auto& o : outcomes) s.z.push_back(std::sqrt(m) * (o.s_n / n - drift) / std::sqrt(var));
  } else if (c == "ii") {
    const double mu1 = k.mu1;
    const double one_minus_alpha = 1.0 - config.params.alpha;
    const double var =
        k.mu2 * tau_n * tau_n - 4.0 * mu1 * mu1 * tau_n * tau_n * one_minus_alpha * one_minus_alpha;
    if (!(var > 0.0)) throw NonpositiveScale();
    for (const auto& o : outcomes) {
      s.z.push_back(std::sqrt(m / std::log(m)) * (o.s_n / n - drift) / std::sqrt(var));
    }
  } else {
    const double fluct = tau_n * tau_n * sigma2 / (2.0 * k.a - 1.0);
    const double var = fluct + kappa_n * sigma2;
    if (!(var > 0.0)) throw NonpositiveScale();
    const double root = std::sqrt(std::pow(m, 2.0 * k.a - 1.0));
    const double big_n = static_cast<double>(long_horizon);
    for (const auto& o : outcomes) {
      const double l_hat = std::pow(big_n, 1.0 - k.a) * (o.t_long / big_n - drift);
      const double centered = std::pow(m, 1.0 - k.a) * (o.s_n / n - drift) - tau_n * l_hat;
      s.z.push_back(root * centered / std::sqrt(var));
    }
    s.var_target = (fluct * coupling_factor(k.a, spec.m_n, long_horizon) + kappa_n * sigma2) / var;
  }
  return s;
}

VerificationReport verify_gradual_clt(const ExperimentConfig& config, unsigned workers) {
  return timed([&] {
    VerificationReport report = start_report(config);
    require_ensemble(config, 1000);
    const CltSample s = gradual_clt_sample(config, workers);
    const double var_tol = config.tolerances.var_tol.value_or(default_var_tol(config.kind, s.case_name));
    add_normal_checks(report, "gradual_clt_" + s.case_name, s, var_tol, ks_limit(config, s.z.size()));
    return report;
  });
}

VerificationReport verify_lemma_even(const ExperimentConfig& config, unsigned workers) {
  return timed([&] {
    config.validate();
    VerificationReport report{config, derive_constants(config.params), {}, 0.0};
    require_ensemble(config, 1000);
    std::vector<std::uint64_t> ks;
    for (std::uint64_t kk : {1, 10, 100, 1000}) {
      if (kk <= config.n) ks.push_back(kk);
    }
    const std::uint64_t last = ks.back();

    const auto steps = parallel_map<std::array<double, 4>>(config.ensemble, workers, [&](std::uint64_t i) {
      RandomStream rng(stream_seed(config.seed, i));
      WalkState state = WalkState::start(config.params.dist, rng);
      std::array<double, 4> out{};
      std::size_t next = 0;
      double x = state.running_sum();
      for (std::uint64_t step = 1;; ++step) {
        if (next < ks.size() && step == ks[next]) out[next++] = x;
        if (step == last) break;
        x = advance(state, config.params, rng);
      }
      return out;
    });

    const Moments mom = moments(config.params.dist);
    const double abs_target = abs_moment(config.params.dist);
    for (std::size_t j = 0; j < ks.size(); ++j) {
      std::vector<double> sq;
      std::vector<double> ab;
      sq.reserve(steps.size());
      ab.reserve(steps.size());
      for (const auto& s : steps) {
        sq.push_back(s[j] * s[j]);
        ab.push_back(std::abs(s[j]));
      }
      const auto r_sq = even_moment_check(ks[j], sq, mom.mu2);
      report.add("lemma_even_square_k" + std::to_string(ks[j]), r_sq.mean, r_sq.target,
                 5.0 * r_sq.stderr_mean, r_sq.pass);
      const auto r_abs = even_moment_check(ks[j], ab, abs_target);
      report.add("lemma_even_abs_k" + std::to_string(ks[j]), r_abs.mean, r_abs.target,
                 5.0 * r_abs.stderr_mean, r_abs.pass);
    }
    return report;
  });
}

VerificationReport verify_weights_diag(const ExperimentConfig& config, unsigned) {
  return timed([&] {
    VerificationReport report = start_report(config);
    const double a = report.constants.a;
    const std::uint64_t n = std::max<std::uint64_t>(config.n, 2);
    const double nd = static_cast<double>(n);
    const double c = weight_scale(a);

    double worst = 0.0;
    double product = 1.0;
    for (std::uint64_t m = 1; m <= std::min<std::uint64_t>(n, 10'000); ++m) {
      if (m >= 2 && !(a == -1.0 && m == 2)) product /= 1.0 + a / static_cast<double>(m - 1);
      worst = std::max(worst, std::abs(product / weight_at(a, m) - 1.0));
    }
    report.add("weights_product_vs_gamma", worst, 0.0, 1e-10, worst <= 1e-10);

    const MartingaleWeights w = weights(a, n);
    const double asym = std::abs(std::pow(nd, a) * w.a_n.back() / c - 1.0);
    report.add("weights_asymptotic_ratio", asym, 0.0, 1e-3, asym <= 1e-3);
    const double prefix = std::abs((1.0 - a) * w.A_n.back() / (std::pow(nd, 1.0 - a) * c) - 1.0);
    report.add("weights_prefix_sum_ratio", prefix, 0.0, 1e-2, prefix <= 1e-2);
    const double v_ratio = std::abs(w.v_n.back() / r_n(a, n) - 1.0);
    report.add("weights_v_over_r", v_ratio, 0.0, 2e-2, v_ratio <= 2e-2);
    return report;
  });
}

VerificationReport verify(const ExperimentConfig& config, unsigned workers) {
  switch (config.kind) {
    case ExperimentKind::Slln:
      return verify_slln(config, workers);
    case ExperimentKind::MzRate:
      return verify_mz_rate(config, workers);
    case ExperimentKind::L2Lln:
      return verify_l2_lln(config, workers);
    case ExperimentKind::Clt:
      return verify_clt(config, workers);
    case ExperimentKind::GradualClt:
      return verify_gradual_clt(config, workers);
    case ExperimentKind::LemmaEven:
      return verify_lemma_even(config, workers);
    case ExperimentKind::WeightsDiag:
      return verify_weights_diag(config, workers);
  }
  throw ConfigError("unknown experiment kind");
}

}  // namespace stepwalk
