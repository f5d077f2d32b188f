#include "stepwalk/report.hpp"

#include <algorithm>

namespace stepwalk {

bool VerificationReport::pass() const noexcept {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

void VerificationReport::add(std::string name, double statistic, double target, double tolerance,
                             bool pass) {
  checks.push_back({std::move(name), statistic, target, tolerance, pass});
}

nlohmann::json to_json(const VerificationReport& report, bool include_seconds) {
  const auto& k = report.constants;
  nlohmann::json constants{
      {"a", k.a},
      {"drift", k.drift ? nlohmann::json(*k.drift) : nlohmann::json(nullptr)},
      {"sigma2", k.sigma2 ? nlohmann::json(*k.sigma2) : nlohmann::json(nullptr)},
      {"regime", std::string(to_string(k.regime))},
  };
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back(
        {{"name", c.name}, {"stat", c.statistic}, {"target", c.target}, {"tol", c.tolerance}, {"pass", c.pass}});
  }
  return {{"config", to_json(report.config)},
          {"constants", constants},
          {"checks", checks},
          {"pass", report.pass()},
          {"seconds", include_seconds ? report.seconds : 0.0}};
}

std::string report_text(const VerificationReport& report, bool include_seconds) {
  return to_json(report, include_seconds).dump(2) + "\n";
}

}  // namespace stepwalk
