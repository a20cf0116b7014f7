#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftlab/shiftset.hpp"
#include "shiftlab/tower.hpp"

namespace shiftlab {

// Configuration of one batch run; filled by the CLI or by tests directly.
struct RunConfig {
  std::string command = "all";
  std::string blocks = "1,1";
  Index depth = 3;
  Index k = 1;
  Index m_lo = 1;
  Index m_hi = 3;
  std::string shift_set = "triangular";  // "triangular" or a comma list
  long modulus = 2;
  long truncation = 8;
  long shift_step = 2;
  std::string def_q = "0";  // definition1 word indices
  std::string def_s = "1";  // definition1 word exponents
  long k_bound = 8;
  int max_power = 3;
  double tol = 1e-12;
  Index cap = kDefaultAmbientCap;
  std::uint64_t seed = 0x5eed;
  std::string out_path;  // JSON report target, empty = stdout only
  std::string csv_path;  // commutant dimension table, optional
};

struct RunOutcome {
  nlohmann::ordered_json report;
  std::string csv;  // nonempty only for commutant runs
  bool all_pass = false;
  int exit_code = 0;  // 0 pass, 1 check failure (2/3 mapped from exceptions)
};

// "triangular" or a comma-separated explicit list.
ShiftSet parse_shift_set(const std::string& text);

// Executes the configured command.  Throws std::invalid_argument for
// malformed configs (exit 2 at the CLI) and ResourceCapError when a cap is
// exceeded (exit 3).
RunOutcome run(const RunConfig& config);

std::string version_string();

}  // namespace shiftlab
