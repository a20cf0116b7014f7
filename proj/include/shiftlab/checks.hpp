#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace shiftlab {

// One named pass/fail record with the worst deviation observed.
struct RelationCheck {
  std::string name;
  bool pass = false;
  double deviation = 0.0;
  std::string note;
};

struct RelationReport {
  std::vector<RelationCheck> checks;

  void add(std::string name, bool pass, double deviation, std::string note = "") {
    checks.push_back({std::move(name), pass, deviation, std::move(note)});
  }
  void add_deviation(std::string name, double deviation, double tol) {
    add(std::move(name), deviation <= tol, deviation);
  }
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const RelationCheck& c) { return c.pass; });
  }
  double max_deviation() const {
    double m = 0.0;
    for (const auto& c : checks) m = std::max(m, c.deviation);
    return m;
  }
  const RelationCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

}  // namespace shiftlab
