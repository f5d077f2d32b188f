#include "stepwalk/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include "stepwalk/errors.hpp"

namespace stepwalk {
namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 7> kKindNames{{
    {ExperimentKind::Slln, "slln"},
    {ExperimentKind::MzRate, "mz-rate"},
    {ExperimentKind::L2Lln, "l2-lln"},
    {ExperimentKind::Clt, "clt"},
    {ExperimentKind::GradualClt, "gradual-clt"},
    {ExperimentKind::LemmaEven, "lemma-even"},
    {ExperimentKind::WeightsDiag, "weights-diag"},
}};

template <class T>
T get_field(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

std::uint64_t get_count(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError(std::string("config field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ExperimentKind parse_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  throw ConfigError("unknown experiment kind '" + std::string(text) + "'");
}

std::uint64_t ExperimentConfig::memory_cutoff() const {
  if (!theta) throw ConfigError("gradual experiments need theta");
  const double m = std::floor(*theta * static_cast<double>(n));
  return m < 1.0 ? 1 : static_cast<std::uint64_t>(m);
}

void ExperimentConfig::validate() const {
  try {
    params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (n < 1) throw ConfigError("n must be at least 1");
  if (ensemble < 1) throw ConfigError("ensemble must be at least 1");
  const bool gradual = kind == ExperimentKind::GradualClt;
  if (gradual != theta.has_value()) {
    throw ConfigError(gradual ? "gradual-clt needs theta" : "theta is only valid for gradual-clt");
  }
  if (theta && !(*theta > 0.0 && *theta < 1.0)) throw ConfigError("theta must lie in (0, 1)");
  if (!(r > 1.0 && r < 2.0)) throw ConfigError("r must lie in (1, 2)");
  if (long_horizon && *long_horizon <= n) throw ConfigError("long_horizon must exceed n");
  if (tolerances.ks_level && !(*tolerances.ks_level > 0.0 && *tolerances.ks_level < 1.0)) {
    throw ConfigError("tolerances.ks_level must lie in (0, 1)");
  }
  if (tolerances.ks_threshold && !(*tolerances.ks_threshold > 0.0)) {
    throw ConfigError("tolerances.ks_threshold must be positive");
  }
  if (tolerances.var_tol && !(*tolerances.var_tol > 0.0)) {
    throw ConfigError("tolerances.var_tol must be positive");
  }
  if (clt_case && *clt_case != "i" && *clt_case != "ii" && *clt_case != "iii") {
    throw ConfigError("case must be one of i, ii, iii");
  }
}

ExperimentConfig config_from_json(const nlohmann::json& j, std::optional<ExperimentKind> fallback_kind) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"p",    "alpha", "dist",  "n",    "ensemble",     "seed",
                                           "kind", "theta", "r",     "case", "long_horizon", "tolerances"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config field '" + key + "'");
  }

  ExperimentConfig c;
  if (j.contains("p")) c.params.p = get_field<double>(j, "p");
  if (j.contains("alpha")) c.params.alpha = get_field<double>(j, "alpha");
  if (j.contains("dist")) c.params.dist = StepDistribution::parse(get_field<std::string>(j, "dist"));
  if (j.contains("n")) c.n = get_count(j, "n");
  if (j.contains("ensemble")) c.ensemble = get_count(j, "ensemble");
  if (j.contains("seed")) c.seed = get_count(j, "seed");
  if (j.contains("kind")) {
    c.kind = parse_kind(get_field<std::string>(j, "kind"));
    if (fallback_kind && *fallback_kind != c.kind) {
      throw ConfigError("config kind '" + std::string(to_string(c.kind)) +
                        "' does not match requested '" + std::string(to_string(*fallback_kind)) + "'");
    }
  } else if (fallback_kind) {
    c.kind = *fallback_kind;
  } else {
    throw ConfigError("config field 'kind' is required");
  }
  if (j.contains("theta")) c.theta = get_field<double>(j, "theta");
  if (j.contains("r")) c.r = get_field<double>(j, "r");
  if (j.contains("long_horizon")) c.long_horizon = get_count(j, "long_horizon");
  if (j.contains("case")) c.clt_case = get_field<std::string>(j, "case");
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances must be an object");
    for (const auto& [key, _] : t.items()) {
      if (key != "ks_level" && key != "ks_threshold" && key != "var_tol") {
        throw ConfigError("unknown tolerance '" + key + "'");
      }
    }
    if (t.contains("ks_level")) c.tolerances.ks_level = get_field<double>(t, "ks_level");
    if (t.contains("ks_threshold")) c.tolerances.ks_threshold = get_field<double>(t, "ks_threshold");
    if (t.contains("var_tol")) c.tolerances.var_tol = get_field<double>(t, "var_tol");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path, std::optional<ExperimentKind> fallback_kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
  return config_from_json(j, fallback_kind);
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j{
      {"p", c.params.p},   {"alpha", c.params.alpha},         {"dist", c.params.dist.to_string()},
      {"n", c.n},          {"ensemble", c.ensemble},          {"seed", c.seed},
      {"kind", std::string(to_string(c.kind))}, {"r", c.r},
  };
  if (c.theta) j["theta"] = *c.theta;
  if (c.long_horizon) j["long_horizon"] = *c.long_horizon;
  if (c.clt_case) j["case"] = *c.clt_case;
  nlohmann::json tol = nlohmann::json::object();
  if (c.tolerances.ks_level) tol["ks_level"] = *c.tolerances.ks_level;
  if (c.tolerances.ks_threshold) tol["ks_threshold"] = *c.tolerances.ks_threshold;
  if (c.tolerances.var_tol) tol["var_tol"] = *c.tolerances.var_tol;
  if (!tol.empty()) j["tolerances"] = tol;
  return j;
}

}  // namespace stepwalk
