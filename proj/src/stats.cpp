#include "stepwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stepwalk/errors.hpp"

namespace stepwalk {

void MomentAccumulator::add(double x) noexcept {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void MomentAccumulator::merge(const MomentAccumulator& other) noexcept {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  count_ += other.count_;
}

double MomentAccumulator::variance() const noexcept {
  return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double MomentAccumulator::stddev() const noexcept { return std::sqrt(variance()); }

double MomentAccumulator::stderr_mean() const noexcept {
  return count_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

MomentAccumulator accumulate(std::span<const double> values) {
  MomentAccumulator acc;
  for (double v : values) acc.add(v);
  return acc;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw EmptySample();
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_threshold(std::uint64_t n, double level) {
  if (n == 0) throw EmptySample();
  if (!(level > 0.0 && level < 1.0)) throw DomainError("ks level must lie in (0, 1)");
  return std::sqrt(-std::log(level / 2.0) / 2.0) / std::sqrt(static_cast<double>(n));
}

KsResult ks_test_normal(std::span<const double> sample, double threshold) {
  KsResult r;
  r.d_statistic = ks_statistic(sample, normal_cdf);
  r.n = sample.size();
  r.threshold = threshold;
  r.pass = r.d_statistic <= threshold;
  return r;
}

std::vector<double> standardize(std::span<const double> values, double center, double scale) {
  if (!(scale > 0.0)) throw NonpositiveScale();
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back((v - center) / scale);
  return out;
}

EvenMomentResult even_moment_check(std::uint64_t k, std::span<const double> psi_values,
                                   double target) {
  if (psi_values.empty()) throw EmptySample();
  const MomentAccumulator acc = accumulate(psi_values);
  EvenMomentResult r{k, acc.mean(), target, acc.stderr_mean(), false};
  r.pass = std::abs(r.mean - target) <= 5.0 * r.stderr_mean;
  return r;
}

double median(std::span<const double> values) {
  if (values.empty()) throw EmptySample();
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

}  // namespace stepwalk
