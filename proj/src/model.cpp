#include "stepwalk/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "stepwalk/errors.hpp"

namespace stepwalk {
namespace {

constexpr double kWeightTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_probability(double x) { return x >= 0.0 && x <= 1.0; }

double parse_number(std::string_view token, std::string_view context) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || token.empty()) {
    throw ConfigError("malformed number '" + std::string(token) + "' in distribution '" +
                      std::string(context) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

StepDistribution::StepDistribution(Law law) : law_(std::move(law)) {
  std::vector<double> support;
  if (std::holds_alternative<Rademacher>(law_)) {
    support = {1.0, -1.0};
  } else if (const auto* d = std::get_if<DiscreteFinite>(&law_)) {
    support = d->values;
    cumulative_.resize(d->weights.size());
    std::partial_sum(d->weights.begin(), d->weights.end(), cumulative_.begin());
  }
  if (support.empty()) return;

  atoms_ = support;
  for (double v : support) atoms_.push_back(-v);
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
  // -0.0 and 0.0 compare equal, so the table stays symmetric.
  support_atom_.reserve(support.size());
  for (double v : support) {
    const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), v);
    support_atom_.push_back(static_cast<std::size_t>(it - atoms_.begin()));
  }
}

StepDistribution StepDistribution::rademacher(double s) {
  if (!is_probability(s)) throw DomainError("rademacher: s must lie in [0, 1]");
  return StepDistribution(Rademacher{s});
}

StepDistribution StepDistribution::discrete(std::vector<double> values, std::vector<double> weights) {
  if (values.empty() || values.size() != weights.size()) {
    throw DomainError("discrete: values and weights must be nonempty and of equal length");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("discrete: values must be finite");
  }
  for (double w : weights) {
    if (!is_probability(w)) throw DomainError("discrete: weights must lie in [0, 1]");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw DomainError("discrete: weights must sum to 1");
  }
  return StepDistribution(DiscreteFinite{std::move(values), std::move(weights)});
}

StepDistribution StepDistribution::uniform(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("uniform: requires finite lo < hi");
  }
  return StepDistribution(UniformInterval{lo, hi});
}

StepDistribution StepDistribution::gaussian(double mean, double stddev) {
  if (!(stddev >= 0.0) || !std::isfinite(stddev) || !std::isfinite(mean)) {
    throw DomainError("gaussian: requires finite mean and stddev >= 0");
  }
  return StepDistribution(Gaussian{mean, stddev});
}

StepDistribution StepDistribution::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("distribution '" + std::string(text) + "' lacks a ':' separator");
  }
  const auto kind = text.substr(0, colon);
  const auto rest = text.substr(colon + 1);
  try {
    if (kind == "rademacher") {
      return rademacher(parse_number(rest, text));
    }
    if (kind == "uniform" || kind == "gaussian") {
      const auto parts = split(rest, ':');
      if (parts.size() != 2) {
        throw ConfigError("distribution '" + std::string(text) + "' needs two parameters");
      }
      const double x = parse_number(parts[0], text);
      const double y = parse_number(parts[1], text);
      return kind == "uniform" ? uniform(x, y) : gaussian(x, y);
    }
    if (kind == "discrete") {
      const auto at = rest.find('@');
      if (at == std::string_view::npos) {
        throw ConfigError("discrete distribution '" + std::string(text) + "' lacks '@weights'");
      }
      std::vector<double> values;
      std::vector<double> weights;
      for (auto tok : split(rest.substr(0, at), ',')) values.push_back(parse_number(tok, text));
      for (auto tok : split(rest.substr(at + 1), ',')) weights.push_back(parse_number(tok, text));
      return discrete(std::move(values), std::move(weights));
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown distribution kind '" + std::string(kind) + "'");
}

std::string StepDistribution::to_string() const {
  return std::visit(
      overloaded{
          [](const Rademacher& r) { return "rademacher:" + format_double(r.s); },
          [](const UniformInterval& u) {
            return "uniform:" + format_double(u.lo) + ":" + format_double(u.hi);
          },
          [](const Gaussian& g) {
            return "gaussian:" + format_double(g.mean) + ":" + format_double(g.stddev);
          },
          [](const DiscreteFinite& d) {
            std::string out = "discrete:";
            for (std::size_t i = 0; i < d.values.size(); ++i) {
              if (i) out += ',';
              out += format_double(d.values[i]);
            }
            out += '@';
            for (std::size_t i = 0; i < d.weights.size(); ++i) {
              if (i) out += ',';
              out += format_double(d.weights[i]);
            }
            return out;
          },
      },
      law_);
}

std::size_t StepDistribution::support_index(double u) const noexcept {
  if (const auto* r = std::get_if<Rademacher>(&law_)) {
    return u < r->s ? 0 : 1;
  }
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it != cumulative_.end()) return static_cast<std::size_t>(it - cumulative_.begin());
  // u beyond the rounded total: last atom with positive weight.
  const auto& w = std::get<DiscreteFinite>(law_).weights;
  std::size_t i = w.size() - 1;
  while (i > 0 && w[i] == 0.0) --i;
  return i;
}

double StepDistribution::sample(RandomStream& rng) const {
  return std::visit(
      overloaded{
          [&](const Rademacher&) { return support_index(rng.uniform01()) == 0 ? 1.0 : -1.0; },
          [&](const DiscreteFinite& d) { return d.values[support_index(rng.uniform01())]; },
          [&](const UniformInterval& u) { return u.lo + (u.hi - u.lo) * rng.uniform01(); },
          [&](const Gaussian& g) {
            // Box-Muller, cosine branch only: no cached second variate, so every
            // innovation consumes exactly two uniforms.
            const double u1 = 1.0 - rng.uniform01();  // (0, 1]
            const double u2 = rng.uniform01();
            const double z =
                std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
            return g.mean + g.stddev * z;
          },
      },
      law_);
}

std::size_t StepDistribution::sample_atom(RandomStream& rng) const {
  if (!is_atomic()) throw DomainError("sample_atom: continuous law has no atom table");
  return support_atom_[support_index(rng.uniform01())];
}

bool StepDistribution::operator==(const StepDistribution& other) const noexcept {
  return std::visit(
      overloaded{
          [](const Rademacher& x, const Rademacher& y) { return x.s == y.s; },
          [](const DiscreteFinite& x, const DiscreteFinite& y) {
            return x.values == y.values && x.weights == y.weights;
          },
          [](const UniformInterval& x, const UniformInterval& y) {
            return x.lo == y.lo && x.hi == y.hi;
          },
          [](const Gaussian& x, const Gaussian& y) {
            return x.mean == y.mean && x.stddev == y.stddev;
          },
          [](const auto&, const auto&) { return false; },
      },
      law_, other.law_);
}

Moments moments(const StepDistribution& dist) {
  return std::visit(
      overloaded{
          [](const Rademacher& r) { return Moments{2.0 * r.s - 1.0, 1.0}; },
          [](const DiscreteFinite& d) {
            Moments m{0.0, 0.0};
            for (std::size_t i = 0; i < d.values.size(); ++i) {
              m.mu1 += d.weights[i] * d.values[i];
              m.mu2 += d.weights[i] * d.values[i] * d.values[i];
            }
            return m;
          },
          [](const UniformInterval& u) {
            return Moments{0.5 * (u.lo + u.hi), (u.lo * u.lo + u.lo * u.hi + u.hi * u.hi) / 3.0};
          },
          [](const Gaussian& g) {
            return Moments{g.mean, g.mean * g.mean + g.stddev * g.stddev};
          },
      },
      dist.law());
}

double abs_moment(const StepDistribution& dist) {
  return std::visit(
      overloaded{
          [](const Rademacher&) { return 1.0; },
          [](const DiscreteFinite& d) {
            double m = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) m += d.weights[i] * std::abs(d.values[i]);
            return m;
          },
          [](const UniformInterval& u) {
            if (u.lo >= 0.0) return 0.5 * (u.lo + u.hi);
            if (u.hi <= 0.0) return -0.5 * (u.lo + u.hi);
            return (u.lo * u.lo + u.hi * u.hi) / (2.0 * (u.hi - u.lo));
          },
          [](const Gaussian& g) {
            if (g.stddev == 0.0) return std::abs(g.mean);
            // folded normal mean
            const double r = g.mean / g.stddev;
            return g.stddev * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * r * r) +
                   g.mean * std::erf(r / std::numbers::sqrt2);
          },
      },
      dist.law());
}

void WalkParams::validate() const {
  if (!is_probability(p)) throw DomainError("p must lie in [0, 1]");
  if (!is_probability(alpha)) throw DomainError("alpha must lie in [0, 1]");
}

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::Diffusive:
      return "diffusive";
    case Regime::Critical:
      return "critical";
    case Regime::Superdiffusive:
      return "superdiffusive";
    case Regime::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

Regime classify_regime(double a) noexcept {
  if (a == 1.0) return Regime::Degenerate;
  if (std::abs(a - 0.5) <= kRegimeEpsilon) return Regime::Critical;
  return a < 0.5 ? Regime::Diffusive : Regime::Superdiffusive;
}

double DerivedConstants::require_drift() const {
  if (!drift) throw DegenerateMemory();
  return *drift;
}

double DerivedConstants::require_sigma2() const {
  if (!sigma2) throw DegenerateMemory();
  return *sigma2;
}

DerivedConstants derive_constants(const WalkParams& params) {
  params.validate();
  const Moments m = moments(params.dist);
  DerivedConstants c;
  c.a = memory_index(params.p, params.alpha);
  c.mu1 = m.mu1;
  c.mu2 = m.mu2;
  c.regime = classify_regime(c.a);
  if (c.regime != Regime::Degenerate) {
    const double drift = (1.0 - params.alpha) * m.mu1 / (1.0 - c.a);
    c.drift = drift;
    // Clamp the rounding residue: the exact value is a conditional variance limit.
    c.sigma2 = std::max(0.0, m.mu2 - drift * drift);
  }
  return c;
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace stepwalk
