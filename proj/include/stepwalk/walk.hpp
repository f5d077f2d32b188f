#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "stepwalk/model.hpp"
#include "stepwalk/rng.hpp"

namespace stepwalk {

enum class HistoryStorage {
  Auto,    // counts for atomic laws, flat otherwise
  Flat,    // one double per step
  Counts,  // per-atom counts; atomic laws only
};

/// Evolving history X_1..X_n of one walk, with running sums.
///
/// A uniform pick over the history is the same law as a categorical pick over
/// per-atom counts, so atomic innovations keep O(#atoms) memory. Both storages
/// consume the random stream identically: one uniform_index(n) per pick.
class WalkState {
 public:
  // Seeds the walk with X_1 = xi_1.
  static WalkState start(const StepDistribution& dist, RandomStream& rng,
                         HistoryStorage storage = HistoryStorage::Auto);

  // Rebuilds a state from an explicit history (n >= 1). With Counts storage
  // every value must be an atom of dist.
  static WalkState from_history(const StepDistribution& dist, std::span<const double> history,
                                HistoryStorage storage = HistoryStorage::Auto);

  std::uint64_t n() const noexcept { return n_; }
  double running_sum() const noexcept { return sum_; }
  double running_sum_sq() const noexcept { return sum_sq_; }
  HistoryStorage storage() const noexcept { return storage_; }

  // Flat storage only; empty otherwise.
  std::span<const double> history() const noexcept { return flat_; }
  // Counts storage only; aligned with atoms().
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::span<const double> atoms() const noexcept { return atoms_; }

  // Value of X_U for U uniform on {1..n}; `negate` returns -X_U.
  double pick(RandomStream& rng, bool negate) const;

  // pick() followed by append(), without the atom lookup; returns the value.
  double append_pick(RandomStream& rng, bool negate);

  // Appends a fresh innovation and returns it.
  double append_innovation(const StepDistribution& dist, RandomStream& rng);
  void append(double value);

 private:
  WalkState(const StepDistribution& dist, HistoryStorage storage);

  std::size_t atom_index(double value) const;
  void append_atom(std::size_t atom);

  HistoryStorage storage_;
  std::uint64_t n_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::vector<double> flat_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> atoms_;
};

// Which of the three moves produced a step.
enum class Move { Copy, FlipCopy, Innovate };

// Single uniform partitioned at p*alpha and alpha: [0, p a) copy,
// [p a, a) flip-copy, [a, 1) innovate.
Move draw_move(const WalkParams& params, RandomStream& rng);

// One reinforced draw from the current history without modifying it:
// X_U w.p. p alpha, -X_U w.p. (1 - p) alpha, fresh xi w.p. 1 - alpha.
double reinforced_draw(const WalkState& state, const WalkParams& params, RandomStream& rng);

// Appends X_{n+1} and returns it.
double advance(WalkState& state, const WalkParams& params, RandomStream& rng);

// E[X_{n+1} | F_n] = a T_n / n + (1 - alpha) mu1.
double conditional_mean(const WalkState& state, const WalkParams& params);

struct CheckpointValue {
  std::uint64_t n;
  double sum;     // T_n
  double sum_sq;  // sum of X_k^2, k <= n

  bool operator==(const CheckpointValue&) const = default;
};

struct Trajectory {
  WalkParams params;
  std::uint64_t seed = 0;
  std::vector<CheckpointValue> values;  // strictly increasing n, last == horizon

  std::uint64_t horizon() const noexcept { return values.empty() ? 0 : values.back().n; }
  // Value at checkpoint n; throws CheckpointOutOfRange when n was not recorded.
  const CheckpointValue& at(std::uint64_t n) const;
};

// Sorted, deduplicated checkpoints with the horizon appended.
// Throws CheckpointOutOfRange for entries outside [1, horizon].
std::vector<std::uint64_t> normalize_checkpoints(std::uint64_t horizon,
                                                 std::span<const std::uint64_t> checkpoints);

// {floor(start * ratio^k)} intersected with [1, horizon], plus the horizon.
std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t horizon, double start = 1.0,
                                                 double ratio = 1.2);

// Deterministic in (params, horizon, checkpoints, seed).
Trajectory simulate_trajectory(const WalkParams& params, std::uint64_t horizon,
                               std::span<const std::uint64_t> checkpoints, std::uint64_t seed,
                               HistoryStorage storage = HistoryStorage::Auto);

// Writes `n,T_n,sum_sq` rows with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

struct GradualMemorySpec {
  std::uint64_t n = 2;
  std::uint64_t m_n = 1;      // memory cutoff, 1 <= m_n < n
  double theta_hint = 0.5;    // nominal limit of m_n / n, reporting only

  void validate() const;  // throws InvalidMemoryCutoff
};

struct GradualOutcome {
  double s_n;    // S_n = T_{m_n} + sum of the X'_j, m_n < j <= n
  double t_mn;   // T_{m_n}
  double t_long = 0.0;             // T_N of the underlying walk continued to N
  std::uint64_t long_horizon = 0;  // N; 0 when not continued
};

// Gradually increasing memory: the first m_n steps follow the standard walk,
// then every X'_j (m_n < j <= n) reinforces from X_1..X_{m_n} only.
GradualOutcome simulate_gradual(const WalkParams& params, const GradualMemorySpec& spec,
                                std::uint64_t seed);

// As simulate_gradual, then keeps running the underlying walk X past m_n up to
// long_horizon and reports T_N (for estimating its almost-sure limit).
GradualOutcome simulate_gradual_coupled(const WalkParams& params, const GradualMemorySpec& spec,
                                        std::uint64_t long_horizon, std::uint64_t seed);

}  // namespace stepwalk
