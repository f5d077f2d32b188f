#include "stepwalk/walk.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "stepwalk/errors.hpp"

namespace stepwalk {

WalkState::WalkState(const StepDistribution& dist, HistoryStorage storage) : storage_(storage) {
  if (storage_ == HistoryStorage::Auto) {
    storage_ = dist.is_atomic() ? HistoryStorage::Counts : HistoryStorage::Flat;
  }
  if (storage_ == HistoryStorage::Counts) {
    if (!dist.is_atomic()) throw DomainError("count storage requires an atomic step law");
    atoms_.assign(dist.atoms().begin(), dist.atoms().end());
    counts_.assign(atoms_.size(), 0);
  }
}

WalkState WalkState::start(const StepDistribution& dist, RandomStream& rng, HistoryStorage storage) {
  WalkState state(dist, storage);
  state.append_innovation(dist, rng);
  return state;
}

WalkState WalkState::from_history(const StepDistribution& dist, std::span<const double> history,
                                  HistoryStorage storage) {
  if (history.empty()) throw DomainError("from_history: history must hold at least X_1");
  WalkState state(dist, storage);
  for (double x : history) state.append(x);
  return state;
}

std::size_t WalkState::atom_index(double value) const {
  const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), value);
  if (it == atoms_.end() || *it != value) {
    throw DomainError("value " + format_double(value) + " is not an atom of the step law");
  }
  return static_cast<std::size_t>(it - atoms_.begin());
}

void WalkState::append_atom(std::size_t atom) {
  const double x = atoms_[atom];
  ++counts_[atom];
  ++n_;
  sum_ += x;
  sum_sq_ += x * x;
}

void WalkState::append(double value) {
  if (storage_ == HistoryStorage::Counts) {
    append_atom(atom_index(value));
    return;
  }
  flat_.push_back(value);
  ++n_;
  sum_ += value;
  sum_sq_ += value * value;
}

double WalkState::append_innovation(const StepDistribution& dist, RandomStream& rng) {
  if (storage_ == HistoryStorage::Counts) {
    const std::size_t atom = dist.sample_atom(rng);
    append_atom(atom);
    return atoms_[atom];
  }
  const double x = dist.sample(rng);
  append(x);
  return x;
}

double WalkState::pick(RandomStream& rng, bool negate) const {
  std::uint64_t u = rng.uniform_index(n_);
  double x;
  if (storage_ == HistoryStorage::Counts) {
    std::size_t j = 0;
    while (u >= counts_[j]) {
      u -= counts_[j];
      ++j;
    }
    x = atoms_[j];
  } else {
    x = flat_[u];
  }
  return negate ? -x : x;
}

double WalkState::append_pick(RandomStream& rng, bool negate) {
  if (storage_ == HistoryStorage::Flat) {
    const double x = pick(rng, negate);
    append(x);
    return x;
  }
  std::uint64_t u = rng.uniform_index(n_);
  std::size_t j = 0;
  while (u >= counts_[j]) {
    u -= counts_[j];
    ++j;
  }
  // atoms are symmetric: the negation of atom j is atom K - 1 - j
  if (negate) j = atoms_.size() - 1 - j;
  append_atom(j);
  return atoms_[j];
}

Move draw_move(const WalkParams& params, RandomStream& rng) {
  const double u = rng.uniform01();
  if (u < params.p * params.alpha) return Move::Copy;
  if (u < params.alpha) return Move::FlipCopy;
  return Move::Innovate;
}

double reinforced_draw(const WalkState& state, const WalkParams& params, RandomStream& rng) {
  switch (draw_move(params, rng)) {
    case Move::Copy:
      return state.pick(rng, false);
    case Move::FlipCopy:
      return state.pick(rng, true);
    case Move::Innovate:
      break;
  }
  return params.dist.sample(rng);
}

double advance(WalkState& state, const WalkParams& params, RandomStream& rng) {
  const Move move = draw_move(params, rng);
  if (move == Move::Innovate) return state.append_innovation(params.dist, rng);
  return state.append_pick(rng, move == Move::FlipCopy);
}

double conditional_mean(const WalkState& state, const WalkParams& params) {
  const double a = memory_index(params.p, params.alpha);
  const double mu1 = moments(params.dist).mu1;
  return a * state.running_sum() / static_cast<double>(state.n()) + (1.0 - params.alpha) * mu1;
}

const CheckpointValue& Trajectory::at(std::uint64_t n) const {
  const auto it = std::lower_bound(values.begin(), values.end(), n,
                                   [](const CheckpointValue& v, std::uint64_t k) { return v.n < k; });
  if (it == values.end() || it->n != n) {
    throw CheckpointOutOfRange("checkpoint " + std::to_string(n) + " was not recorded");
  }
  return *it;
}

std::vector<std::uint64_t> normalize_checkpoints(std::uint64_t horizon,
                                                 std::span<const std::uint64_t> checkpoints) {
  if (horizon < 1) throw CheckpointOutOfRange("horizon must be at least 1");
  std::vector<std::uint64_t> out(checkpoints.begin(), checkpoints.end());
  for (auto n : out) {
    if (n < 1 || n > horizon) {
      throw CheckpointOutOfRange("checkpoint " + std::to_string(n) + " outside [1, " +
                                 std::to_string(horizon) + "]");
    }
  }
  out.push_back(horizon);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t horizon, double start, double ratio) {
  if (!(start >= 1.0) || !(ratio > 1.0)) {
    throw DomainError("geometric_checkpoints: need start >= 1 and ratio > 1");
  }
  std::vector<std::uint64_t> grid;
  for (int k = 0;; ++k) {
    const double v = std::floor(start * std::pow(ratio, k));
    if (v > static_cast<double>(horizon)) break;
    grid.push_back(static_cast<std::uint64_t>(v));
  }
  return normalize_checkpoints(horizon, grid);
}

namespace {

// Hot loop shared by the public entry points: advances `state` to `target` steps.
void run_to(WalkState& state, const WalkParams& params, RandomStream& rng, std::uint64_t target) {
  const double copy_cut = params.p * params.alpha;
  const double reinforce_cut = params.alpha;
  while (state.n() < target) {
    const double u = rng.uniform01();
    if (u < copy_cut) {
      state.append_pick(rng, false);
    } else if (u < reinforce_cut) {
      state.append_pick(rng, true);
    } else {
      state.append_innovation(params.dist, rng);
    }
  }
}

}  // namespace

Trajectory simulate_trajectory(const WalkParams& params, std::uint64_t horizon,
                               std::span<const std::uint64_t> checkpoints, std::uint64_t seed,
                               HistoryStorage storage) {
  params.validate();
  const auto grid = normalize_checkpoints(horizon, checkpoints);
  Trajectory traj{params, seed, {}};
  traj.values.reserve(grid.size());

  RandomStream rng(seed);
  WalkState state = WalkState::start(params.dist, rng, storage);
  for (auto n : grid) {
    run_to(state, params, rng, n);
    traj.values.push_back({n, state.running_sum(), state.running_sum_sq()});
  }
  return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  auto sig17 = [](double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, ptr);
  };
  out << "n,T_n,sum_sq\n";
  for (const auto& v : trajectory.values) {
    out << v.n << ',' << sig17(v.sum) << ',' << sig17(v.sum_sq) << '\n';
  }
}

void GradualMemorySpec::validate() const {
  if (m_n < 1 || m_n >= n) {
    throw InvalidMemoryCutoff("memory cutoff must satisfy 1 <= m_n < n (m_n = " +
                              std::to_string(m_n) + ", n = " + std::to_string(n) + ")");
  }
}

GradualOutcome simulate_gradual_coupled(const WalkParams& params, const GradualMemorySpec& spec,
                                        std::uint64_t long_horizon, std::uint64_t seed) {
  params.validate();
  spec.validate();
  RandomStream rng(seed);
  WalkState state = WalkState::start(params.dist, rng);
  run_to(state, params, rng, spec.m_n);

  GradualOutcome out{};
  out.t_mn = state.running_sum();
  double tail = 0.0;
  for (std::uint64_t j = spec.m_n + 1; j <= spec.n; ++j) tail += reinforced_draw(state, params, rng);
  out.s_n = out.t_mn + tail;

  if (long_horizon > spec.m_n) {
    run_to(state, params, rng, long_horizon);
    out.t_long = state.running_sum();
    out.long_horizon = long_horizon;
  }
  return out;
}

GradualOutcome simulate_gradual(const WalkParams& params, const GradualMemorySpec& spec,
                                std::uint64_t seed) {
  return simulate_gradual_coupled(params, spec, 0, seed);
}

}  // namespace stepwalk
