#include "stepwalk/martingale.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "stepwalk/errors.hpp"

namespace stepwalk {
namespace {

// Lanczos approximation, g = 607/128, 15 terms (Godfrey).
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos{
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5};

constexpr double kEulerGamma = 0.57721566490153286061;

// zeta(2..15)
constexpr std::array<double, 14> kZeta{
    1.6449340668482264365, 1.2020569031595942854, 1.0823232337111381915, 1.0369277551433699263,
    1.0173430619844491397, 1.0083492773819228268, 1.0040773561979443394, 1.0020083928260822144,
    1.0009945751278180853, 1.0004941886041194646, 1.0002460865533080483, 1.0001227133475784891,
    1.0000612481350587048, 1.0000305882363070205};

constexpr double kSeriesRadius = 0.1;

double lanczos_sum(double y) {
  double s = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) s += kLanczos[i] / (y + static_cast<double>(i));
  return s;
}

// ln Gamma(y + 1), y >= 0.
double lanczos_log_gamma1(double y) {
  const double t = y + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (y + 0.5) * std::log(t) - t +
         std::log(lanczos_sum(y));
}

// ln Gamma(1 + z) = -gamma z + sum_{k>=2} (-1)^k zeta(k) z^k / k, |z| <= 0.1.
double log_gamma1_series(double z) {
  double sum = 0.0;
  double power = -z;
  for (int k = 2; k <= 22; ++k) {
    power *= -z;
    const double zeta = k <= 15 ? kZeta[k - 2]
                                : 1.0 + std::pow(2.0, -k) + std::pow(3.0, -k) + std::pow(4.0, -k);
    sum += zeta * power / k;
  }
  return -kEulerGamma * z + sum;
}

// Neumaier compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

// Hurwitz zeta(s, q) for s > 1 and large q (Euler-Maclaurin with zero head terms).
double hurwitz_zeta_large_q(double s, double q) {
  // B2/2!, B4/4!, B6/6!, B8/8!
  constexpr std::array<double, 4> kBernoulli{1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0,
                                             -1.0 / 1209600.0};
  double result = std::pow(q, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(q, -s);
  double rising = s;  // s (s+1) ... (s + 2j - 2)
  for (std::size_t j = 0; j < kBernoulli.size(); ++j) {
    const double order = static_cast<double>(2 * j + 1);
    result += kBernoulli[j] * rising * std::pow(q, -s - order);
    rising *= (s + order) * (s + order + 1.0);
  }
  return result;
}

void require_weight_domain(double a) {
  if (!(a >= -1.0 && a < 1.0)) {
    throw DomainError("memory index a = " + format_double(a) + " outside [-1, 1)");
  }
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite");
  }
  if (std::abs(x - 1.0) <= kSeriesRadius) return log_gamma1_series(x - 1.0);
  if (std::abs(x - 2.0) <= kSeriesRadius) return std::log1p(x - 2.0) + log_gamma1_series(x - 2.0);
  if (x < 1.0 - kSeriesRadius) {
    // Gamma(x) = Gamma(x + 1) / x; x + 1 may fall into the series band around 2.
    return log_gamma(x + 1.0) - std::log(x);
  }
  return lanczos_log_gamma1(x - 1.0);
}

double log_gamma_ratio(double x, double d) {
  if (!(x > 0.0) || !(x + d > 0.0)) throw DomainError("log_gamma_ratio: arguments must be positive");
  constexpr double kDirectBelow = 16.0;
  if (x < kDirectBelow || x + d < kDirectBelow) return log_gamma(x) - log_gamma(x + d);
  // Both Lanczos expansions share t = x - 1/2 + g; subtract them term by term.
  const double t = x - 0.5 + kLanczosG;
  const double t2 = t + d;
  return -(x - 0.5) * std::log1p(d / t) - d * std::log(t2) + d +
         std::log(lanczos_sum(x - 1.0) / lanczos_sum(x + d - 1.0));
}

double weight_scale(double a) {
  require_weight_domain(a);
  return a == -1.0 ? 1.0 : std::exp(log_gamma(a + 1.0));
}

double weight_at(double a, std::uint64_t n) {
  require_weight_domain(a);
  if (n < 1) throw DomainError("weight_at: n must be >= 1");
  if (n == 1) return 1.0;
  if (a == -1.0) return static_cast<double>(n - 1);
  if (a == 0.0) return 1.0;
  return std::exp(log_gamma(a + 1.0) + log_gamma_ratio(static_cast<double>(n), a));
}

double weight_product(double a, std::uint64_t n) {
  require_weight_domain(a);
  if (n < 1) throw DomainError("weight_product: n must be >= 1");
  double w = 1.0;
  // k = 1 is skipped at a = -1, matching weight_at
  for (std::uint64_t k = (a == -1.0 ? 2 : 1); k < n; ++k) w /= 1.0 + a / static_cast<double>(k);
  return w;
}

MartingaleWeights weights(double a, std::uint64_t upto) {
  require_weight_domain(a);
  if (upto < 1) throw DomainError("weights: upto must be >= 1");
  MartingaleWeights w{a, upto, {}, {}, {}};
  w.a_n.reserve(upto);
  w.A_n.reserve(upto);
  w.v_n.reserve(upto);
  CompensatedSum linear;
  CompensatedSum square;
  for (std::uint64_t n = 1; n <= upto; ++n) {
    const double an = weight_at(a, n);
    linear.add(an);
    square.add(an * an);
    w.a_n.push_back(an);
    w.A_n.push_back(linear.value());
    w.v_n.push_back(square.value());
  }
  return w;
}

void write_weights_csv(std::ostream& out, const MartingaleWeights& w) {
  out.precision(17);
  out << "n,a_n,A_n,v_n\n";
  for (std::size_t i = 0; i < w.a_n.size(); ++i) {
    out << (i + 1) << ',' << w.a_n[i] << ',' << w.A_n[i] << ',' << w.v_n[i] << '\n';
  }
}

double weights_square_sum(double a) {
  if (!(a > 0.5 && a < 1.0)) throw DomainError("weights_square_sum: requires 1/2 < a < 1");
  // a_k^2 = c^2 k^{-2a} (1 - a(a-1)/k + O(k^-2)); the tail beyond K is summed
  // through Hurwitz zeta, leaving an O(K^{-1-2a}) remainder (< 1e-12 here).
  constexpr std::uint64_t kHead = 1'000'000;
  CompensatedSum head;
  for (std::uint64_t k = 1; k <= kHead; ++k) {
    const double ak = weight_at(a, k);
    head.add(ak * ak);
  }
  const double c = weight_scale(a);
  const double q = static_cast<double>(kHead + 1);
  const double tail = c * c *
                      (hurwitz_zeta_large_q(2.0 * a, q) -
                       a * (a - 1.0) * hurwitz_zeta_large_q(2.0 * a + 1.0, q));
  return head.value() + tail;
}

double r_n(double a, std::uint64_t n) {
  require_weight_domain(a);
  if (n < 2) throw DomainError("r_n: n must be >= 2");
  switch (classify_regime(a)) {
    case Regime::Diffusive: {
      const double c = weight_scale(a);
      return std::pow(static_cast<double>(n), 1.0 - 2.0 * a) * c * c / (1.0 - 2.0 * a);
    }
    case Regime::Critical:
      return 0.25 * std::numbers::pi * std::log(static_cast<double>(n));
    case Regime::Superdiffusive:
      return weights_square_sum(a);
    case Regime::Degenerate:
      break;
  }
  throw DegenerateMemory();
}

MartingalePath martingale_path(const Trajectory& trajectory, const DerivedConstants& constants) {
  const double drift = constants.require_drift();
  MartingalePath path{constants, {}};
  path.entries.reserve(trajectory.values.size());
  for (const auto& v : trajectory.values) {
    const double centered = v.sum - static_cast<double>(v.n) * drift;
    path.entries.push_back({v.n, v.sum, centered, weight_at(constants.a, v.n) * centered});
  }
  return path;
}

double scaled_deviation(const CheckpointValue& v, const DerivedConstants& constants) {
  const double n = static_cast<double>(v.n);
  return std::pow(n, 1.0 - constants.a) * (v.sum / n - constants.require_drift());
}

double estimate_L(const Trajectory& trajectory, const DerivedConstants& constants) {
  if (constants.regime == Regime::Degenerate) throw DegenerateMemory();
  if (constants.regime != Regime::Superdiffusive) {
    throw WrongRegime("estimate_L requires the superdiffusive regime (a > 1/2), got " +
                      std::string(to_string(constants.regime)));
  }
  if (trajectory.horizon() < 1000) throw DomainError("estimate_L: horizon must be at least 1000");
  return scaled_deviation(trajectory.values.back(), constants);
}

double recursion_limit(double x1, double t, const std::function<double(std::uint64_t)>& s_seq,
                       std::uint64_t steps) {
  if (!(t >= -1.0 && t < 1.0)) throw DomainError("recursion_limit: t must lie in [-1, 1)");
  if (steps < 1) throw DomainError("recursion_limit: steps must be >= 1");
  double x = x1;
  CompensatedSum total;
  total.add(x1);
  for (std::uint64_t k = 1; k < steps; ++k) {
    x = s_seq(k) + t * total.value() / static_cast<double>(k);
    total.add(x);
  }
  return x;
}

}  // namespace stepwalk
