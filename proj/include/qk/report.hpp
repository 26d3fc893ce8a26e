#pragma once
// Uniform result type for the verification operations.  Every check carries
// {check, status, max_residual, witness?}; a report is a named list of checks.

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace qk {

struct CheckResult {
  std::string check;
  bool pass = false;
  double max_residual = 0.0;
  nlohmann::json witness;  // optional diagnostics

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["check"] = check;
    j["status"] = pass ? "pass" : "fail";
    j["max_residual"] = max_residual;
    if (!witness.is_null()) j["witness"] = witness;
    return j;
  }
};

struct Report {
  std::string name;
  std::vector<CheckResult> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  const CheckResult* find(const std::string& check_name) const {
    for (const auto& c : checks)
      if (c.check == check_name) return &c;
    return nullptr;
  }

  void add(CheckResult c) { checks.push_back(std::move(c)); }

  void merge(const Report& other, const std::string& prefix = "") {
    for (auto c : other.checks) {
      c.check = prefix.empty() ? c.check : prefix + "/" + c.check;
      checks.push_back(std::move(c));
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["pass"] = pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) j["checks"].push_back(c.to_json());
    return j;
  }
};

}  // namespace qk
