#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "stepwalk/model.hpp"
#include "stepwalk/walk.hpp"

namespace stepwalk {

// ln Gamma(x) for x > 0, relative error below 1e-13. Throws DomainError otherwise.
double log_gamma(double x);

// ln Gamma(x) - ln Gamma(x + d) for x > 0 and x + d > 0, without the
// cancellation of subtracting two large log-gammas.
double log_gamma_ratio(double x, double d);

// Constant c(a) with n^a a_n -> c(a): Gamma(a + 1) for -1 < a < 1. At a = -1
// the weights follow the skip-the-first-factor convention (a_n = n - 1 for
// n >= 2), for which the constant is 1.
double weight_scale(double a);

// a_n = prod_{k<n} (1 + a/k)^{-1} = Gamma(n) Gamma(a+1) / Gamma(n+a), via log-gamma.
// At a = -1 the first factor vanishes; see weight_scale().
double weight_at(double a, std::uint64_t n);

// Same quantity by the running product, for cross-checking weight_at.
double weight_product(double a, std::uint64_t n);

/// Martingale normalizers a_1..a_upto with prefix sums A_n and v_n = sum a_k^2.
/// Index i of each vector holds the value for n = i + 1.
struct MartingaleWeights {
  double a = 0.0;
  std::uint64_t upto = 0;
  std::vector<double> a_n;
  std::vector<double> A_n;
  std::vector<double> v_n;
};

// Requires -1 <= a < 1 and upto >= 1; DomainError otherwise.
MartingaleWeights weights(double a, std::uint64_t upto);

// Writes `n,a_n,A_n,v_n` rows.
void write_weights_csv(std::ostream& out, const MartingaleWeights& w);

// Sum of a_k^2 over all k >= 1 (finite for 1/2 < a < 1): direct summation plus
// an asymptotic tail correction.
double weights_square_sum(double a);

// Regime scale of v_n: n^{1-2a} c(a)^2 / (1-2a) below 1/2, (pi/4) ln n at 1/2,
// sum_k a_k^2 above. Requires -1 <= a < 1 and n >= 2.
double r_n(double a, std::uint64_t n);

struct MartingaleEntry {
  std::uint64_t n;
  double sum;        // T_n
  double centered;   // T_n - n * drift
  double value;      // M_n = a_n * centered
};

struct MartingalePath {
  DerivedConstants constants;
  std::vector<MartingaleEntry> entries;
};

// M_n at every checkpoint of the trajectory. Throws DegenerateMemory at a = 1.
MartingalePath martingale_path(const Trajectory& trajectory, const DerivedConstants& constants);

// n^{1-a} (T_n / n - drift) at checkpoint value v.
double scaled_deviation(const CheckpointValue& v, const DerivedConstants& constants);

// Realization of the superdiffusive limit L, read at the final checkpoint.
// Throws WrongRegime unless the regime is superdiffusive; the horizon must be >= 1000.
double estimate_L(const Trajectory& trajectory, const DerivedConstants& constants);

// x_{steps} for x_{k+1} = s_k + (t/k) sum_{j<=k} x_j, starting at x_1.
// Requires -1 <= t < 1 and steps >= 1; DomainError otherwise.
double recursion_limit(double x1, double t, const std::function<double(std::uint64_t)>& s_seq,
                       std::uint64_t steps);

}  // namespace stepwalk
