#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace stepwalk {

/// Single-pass mean/variance (Welford) with a pairwise merge.
class MomentAccumulator {
 public:
  void add(double x) noexcept;
  void merge(const MomentAccumulator& other) noexcept;

  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  double m2() const noexcept { return m2_; }
  // Unbiased sample variance; 0 for fewer than two samples.
  double variance() const noexcept;
  double stddev() const noexcept;
  // Standard error of the mean.
  double stderr_mean() const noexcept;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

MomentAccumulator accumulate(std::span<const double> values);

double normal_cdf(double x);

// sup |F_emp - cdf| over the sample. Throws EmptySample.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

// sqrt(-ln(level / 2) / 2) / sqrt(n); level 0.01 gives about 1.628 / sqrt(n).
double ks_threshold(std::uint64_t n, double level = 0.01);

struct KsResult {
  double d_statistic = 0.0;
  std::uint64_t n = 0;
  double threshold = 0.0;
  bool pass = false;
};

// KS against the standard normal.
KsResult ks_test_normal(std::span<const double> sample, double threshold);

// (v - center) / scale. Throws NonpositiveScale.
std::vector<double> standardize(std::span<const double> values, double center, double scale);

struct EvenMomentResult {
  std::uint64_t k = 0;
  double mean = 0.0;
  double target = 0.0;
  double stderr_mean = 0.0;
  bool pass = false;
};

// |mean - target| <= 5 stderr. Identical samples with zero spread pass only on an exact match.
EvenMomentResult even_moment_check(std::uint64_t k, std::span<const double> psi_values,
                                   double target);

// Median of a copy of the values. Throws EmptySample.
double median(std::span<const double> values);

}  // namespace stepwalk
