#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "stepwalk/config.hpp"
#include "stepwalk/stats.hpp"
#include "stepwalk/walk.hpp"

namespace stepwalk {

// requested > 0 wins; otherwise STEPWALK_THREADS, then hardware concurrency.
unsigned resolve_workers(unsigned requested = 0);

// Evaluates fn(i) for i in [0, count) on a worker pool and returns the results
// in index order, so the output does not depend on the worker count. If any
// call throws, the exception of the lowest failing index is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::uint64_t count, unsigned workers, Fn&& fn) {
  std::vector<T> results(count);
  workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), count));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::uint64_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::uint64_t error_index = count;
  auto work = [&] {
    for (std::uint64_t i = next++; i < count; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

// Trajectory i uses seed stream_seed(config.seed, i).
std::vector<Trajectory> run_trajectories(const ExperimentConfig& config,
                                         std::span<const std::uint64_t> checkpoints,
                                         unsigned workers = 0);

struct EnsembleRow {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  double t_n = 0.0;
  double statistic = 0.0;  // T_n / n - drift (T_n / n when degenerate)
  double z_score = 0.0;    // regime-scaled statistic; Lambda(n) when superdiffusive
};

// Diffusive: sqrt(n) (T_n/n - drift) sqrt(1 - 2a) / sigma. Critical:
// sqrt(n / ln n) (T_n/n - drift) / sigma. Superdiffusive: Lambda(n) =
// n^{1-a} (T_n/n - drift). Zero when the scale vanishes or is undefined.
double regime_score(const DerivedConstants& constants, std::uint64_t n, double t_n);

std::vector<EnsembleRow> run_ensemble(const ExperimentConfig& config, unsigned workers = 0);

// `trajectory_index,seed,T_n,statistic,z_score`
void write_ensemble_csv(std::ostream& out, std::span<const EnsembleRow> rows);

struct EnsembleSummary {
  MomentAccumulator t_n;
  MomentAccumulator statistic;
  MomentAccumulator z_score;

  // Fixed-format text with round-trip precision.
  std::string to_string() const;
};

// Accumulated in index order so the bytes do not depend on scheduling.
EnsembleSummary summarize(std::span<const EnsembleRow> rows);

}  // namespace stepwalk
