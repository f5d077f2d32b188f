#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "stepwalk/config.hpp"
#include "stepwalk/model.hpp"

namespace stepwalk {

struct CheckRecord {
  std::string name;
  double statistic = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  ExperimentConfig config;
  DerivedConstants constants;
  std::vector<CheckRecord> checks;
  double seconds = 0.0;

  // True iff every check passed (and there is at least one).
  bool pass() const noexcept;
  void add(std::string name, double statistic, double target, double tolerance, bool pass);
};

// {config, constants:{a,drift,sigma2,regime}, checks:[{name,stat,target,tol,pass}], pass, seconds}
// With include_seconds = false the wall time is written as 0 so that reports
// of identical runs compare byte for byte.
nlohmann::json to_json(const VerificationReport& report, bool include_seconds = true);
std::string report_text(const VerificationReport& report, bool include_seconds = true);

}  // namespace stepwalk
