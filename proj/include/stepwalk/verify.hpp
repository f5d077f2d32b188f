#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stepwalk/config.hpp"
#include "stepwalk/report.hpp"

namespace stepwalk {

// Runs the experiment named by config.kind. workers = 0 defers to resolve_workers().
VerificationReport verify(const ExperimentConfig& config, unsigned workers = 0);

VerificationReport verify_slln(const ExperimentConfig& config, unsigned workers = 0);
VerificationReport verify_mz_rate(const ExperimentConfig& config, unsigned workers = 0);
VerificationReport verify_l2_lln(const ExperimentConfig& config, unsigned workers = 0);
VerificationReport verify_clt(const ExperimentConfig& config, unsigned workers = 0);
VerificationReport verify_gradual_clt(const ExperimentConfig& config, unsigned workers = 0);
VerificationReport verify_lemma_even(const ExperimentConfig& config, unsigned workers = 0);
VerificationReport verify_weights_diag(const ExperimentConfig& config, unsigned workers = 0);

// Standardized fluctuation sample behind verify_clt / verify_gradual_clt.
// var_target is the variance Z should have at this (n, N); 1 except in the
// superdiffusive coupled case, where replacing L by Lambda(N) removes the
// part of the fluctuation that happens after N.
struct CltSample {
  std::string case_name;  // "i", "ii" or "iii"
  std::vector<double> z;
  double var_target = 1.0;
};

CltSample clt_sample(const ExperimentConfig& config, unsigned workers = 0);
CltSample gradual_clt_sample(const ExperimentConfig& config, unsigned workers = 0);

// "i", "ii", "iii" for diffusive, critical, superdiffusive; throws DegenerateMemory.
std::string regime_case(const DerivedConstants& constants);

// Typical size of |T_n/n - drift| in each regime (the SLLN band is 3x this).
double deviation_scale(const DerivedConstants& constants, std::uint64_t n);

// Var(Lambda(n) - Lambda(N)) relative to sigma^2 n^{1-2a} / (2a - 1): 1 - (n/N)^{2a-1}.
double coupling_factor(double a, std::uint64_t n, std::uint64_t long_horizon);

// E[Lambda(n)] = n^{-a} (mu1 - drift) / a_n, since E[M_n] = E[M_1].
double expected_scaled_deviation(const DerivedConstants& constants, std::uint64_t n);

// Powers of ten in [from, horizon].
std::vector<std::uint64_t> decade_checkpoints(std::uint64_t from, std::uint64_t horizon);

// tolerances.ks_threshold if set, else the KS critical value at tolerances.ks_level (0.01).
double ks_limit(const ExperimentConfig& config, std::uint64_t sample_size);

}  // namespace stepwalk
