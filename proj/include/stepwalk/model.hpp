#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stepwalk/rng.hpp"

namespace stepwalk {

// Laws available for the innovations xi.
struct Rademacher {
  double s;  // P(xi = +1)
};

struct DiscreteFinite {
  std::vector<double> values;
  std::vector<double> weights;
};

struct UniformInterval {
  double lo;
  double hi;
};

struct Gaussian {
  double mean;
  double stddev;
};

/// Law of the i.i.d. innovations. Immutable once built; construction validates.
///
/// Rademacher and DiscreteFinite laws are "atomic": they expose an atom table
/// closed under negation so that a walk history can be kept as per-atom counts
/// (a reinforced step may copy a past step with its sign flipped).
class StepDistribution {
 public:
  using Law = std::variant<Rademacher, DiscreteFinite, UniformInterval, Gaussian>;

  static StepDistribution rademacher(double s);
  static StepDistribution discrete(std::vector<double> values, std::vector<double> weights);
  static StepDistribution uniform(double lo, double hi);
  static StepDistribution gaussian(double mean, double stddev);

  // Parses `rademacher:0.7`, `uniform:-1:1`, `gaussian:0:1`,
  // `discrete:v1,v2,...@w1,w2,...`. Throws ConfigError on malformed input.
  static StepDistribution parse(std::string_view text);

  const Law& law() const noexcept { return law_; }
  std::string to_string() const;

  bool is_atomic() const noexcept { return !atoms_.empty(); }

  // Sorted atom values, symmetric: atoms()[i] == -atoms()[size - 1 - i].
  std::span<const double> atoms() const noexcept { return atoms_; }

  // One draw of xi. Atomic laws consume exactly one uniform01(); uniform one
  // uniform01(); gaussian two.
  double sample(RandomStream& rng) const;

  // Atomic laws only: index into atoms() of one draw, consuming the same
  // randomness as sample(), so sample(rng) == atoms()[sample_atom(rng)] for
  // identically seeded streams.
  std::size_t sample_atom(RandomStream& rng) const;

  bool operator==(const StepDistribution& other) const noexcept;

 private:
  explicit StepDistribution(Law law);

  // Index into the law's own support for one uniform draw (atomic laws).
  std::size_t support_index(double u) const noexcept;

  Law law_;
  std::vector<double> cumulative_;        // DiscreteFinite inverse-CDF table
  std::vector<double> atoms_;             // empty for continuous laws
  std::vector<std::size_t> support_atom_; // support index -> atom index
};

struct Moments {
  double mu1;
  double mu2;
};

// Closed-form E[xi] and E[xi^2].
Moments moments(const StepDistribution& dist);

// Closed-form E[|xi|].
double abs_moment(const StepDistribution& dist);

inline double sample_step(const StepDistribution& dist, RandomStream& rng) {
  return dist.sample(rng);
}

struct WalkParams {
  double p = 0.5;      // probability of keeping the sign of a repeated step
  double alpha = 0.0;  // probability of repeating a past step
  StepDistribution dist = StepDistribution::rademacher(0.5);

  // Throws DomainError unless p and alpha lie in [0, 1].
  void validate() const;
};

enum class Regime { Diffusive, Critical, Superdiffusive, Degenerate };

std::string_view to_string(Regime regime) noexcept;

// Width of the band around a = 1/2 classified as critical.
inline constexpr double kRegimeEpsilon = 1e-12;

Regime classify_regime(double a) noexcept;

inline double memory_index(double p, double alpha) noexcept { return (2.0 * p - 1.0) * alpha; }

struct DerivedConstants {
  double a = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  Regime regime = Regime::Diffusive;
  std::optional<double> drift;   // (1 - alpha) mu1 / (1 - a); empty when degenerate
  std::optional<double> sigma2;  // mu2 - (1 - alpha)^2 mu1^2 / (1 - a)^2; empty when degenerate

  // Throw DegenerateMemory when a == 1.
  double require_drift() const;
  double require_sigma2() const;
};

DerivedConstants derive_constants(const WalkParams& params);

// Shortest round-trip decimal form of x.
std::string format_double(double x);

}  // namespace stepwalk
