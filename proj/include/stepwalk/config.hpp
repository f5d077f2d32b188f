#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "stepwalk/model.hpp"

namespace stepwalk {

enum class ExperimentKind { Slln, MzRate, L2Lln, Clt, GradualClt, LemmaEven, WeightsDiag };

// CLI spelling: slln, mz-rate, l2-lln, clt, gradual-clt, lemma-even, weights-diag.
std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_kind(std::string_view text);  // throws ConfigError

struct Tolerances {
  std::optional<double> ks_level;      // KS threshold = critical value at this level
  std::optional<double> ks_threshold;  // explicit threshold, wins over ks_level
  std::optional<double> var_tol;       // |Var(Z) - target|
};

struct ExperimentConfig {
  WalkParams params;
  std::uint64_t n = 1000;
  std::uint64_t ensemble = 100;
  std::uint64_t seed = 0;
  ExperimentKind kind = ExperimentKind::Slln;
  std::optional<double> theta;  // GradualClt only
  Tolerances tolerances;
  double r = 1.5;                            // MzRate exponent, in (1, 2)
  std::optional<std::uint64_t> long_horizon; // superdiffusive coupling horizon; default 100 n
  std::optional<std::string> clt_case;       // "i", "ii" or "iii"; must match the regime

  // Throws ConfigError.
  void validate() const;

  std::uint64_t coupling_horizon() const { return long_horizon.value_or(100 * n); }
  // m_n = max(1, floor(theta n)).
  std::uint64_t memory_cutoff() const;
};

// Field names: p, alpha, dist, n, ensemble, seed, kind, theta, r, long_horizon,
// case, tolerances{ks_level, ks_threshold, var_tol}. Unknown fields are errors.
// `kind` may be omitted when fallback_kind is given.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  std::optional<ExperimentKind> fallback_kind = std::nullopt);
ExperimentConfig load_config(const std::string& path,
                             std::optional<ExperimentKind> fallback_kind = std::nullopt);
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace stepwalk
