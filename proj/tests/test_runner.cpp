#include <doctest.h>

#include "shiftlab/runner.hpp"

using namespace shiftlab;

TEST_CASE("shift set parsing") {
  CHECK(parse_shift_set("triangular").unbounded());
  ShiftSet s = parse_shift_set("1,3,6");
  CHECK(s.contains(3));
  CHECK_FALSE(s.contains(2));
  CHECK_THROWS_AS(parse_shift_set("1,2,3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_shift_set(""), std::invalid_argument);
}

TEST_CASE("generator run produces a passing report") {
  RunConfig cfg;
  cfg.command = "verify-generators";
  cfg.blocks = "1,2";
  RunOutcome out = run(cfg);
  CHECK(out.exit_code == 0);
  CHECK(out.all_pass);
  CHECK(out.report.at("version").get<std::string>() == version_string());
  CHECK(out.report.at("checks").size() > 10);
  for (const auto& c : out.report.at("checks")) {
    CHECK(c.contains("name"));
    CHECK(c.contains("pass"));
    CHECK(c.contains("deviation"));
    CHECK(c.contains("data"));
  }
}

TEST_CASE("reports are deterministic") {
  RunConfig cfg;
  cfg.command = "all";
  cfg.blocks = "1,1";
  cfg.depth = 3;
  cfg.k = 1;
  cfg.m_lo = 1;
  cfg.m_hi = 2;
  cfg.max_power = 2;
  const std::string a = run(cfg).report.dump(2);
  const std::string b = run(cfg).report.dump(2);
  CHECK(a == b);
}

TEST_CASE("commutant run emits a CSV table") {
  RunConfig cfg;
  cfg.command = "commutant";
  cfg.blocks = "2";
  cfg.k = 1;
  cfg.m_lo = 1;
  cfg.m_hi = 2;
  RunOutcome out = run(cfg);
  CHECK(out.exit_code == 0);
  CHECK(out.csv.find("m,dimension,blocks") == 0);
  CHECK(out.csv.find("1,4,{2},1,1") != std::string::npos);
}

TEST_CASE("invalid configuration is a usage error") {
  RunConfig cfg;
  cfg.command = "no-such-command";
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);

  RunConfig bad;
  bad.command = "tower";
  bad.blocks = "0,1";
  CHECK_THROWS_AS(run(bad), std::invalid_argument);

  RunConfig cap;
  cap.command = "tower";
  cap.blocks = "1,2";
  cap.depth = 6;  // 729 over the default cap
  CHECK_THROWS_AS(run(cap), ResourceCapError);

  RunConfig nullcap;
  nullcap.command = "commutant";
  nullcap.blocks = "1,2";
  nullcap.k = 1;
  nullcap.m_lo = 1;
  nullcap.m_hi = 3;  // ambient 81: 6561 unknowns, over the solve cap
  CHECK_THROWS_AS(run(nullcap), ResourceCapError);
}

TEST_CASE("composite battery trims the commutant range to the caps") {
  RunConfig cfg;
  cfg.command = "all";
  cfg.blocks = "1,2";
  cfg.depth = 2;
  cfg.k = 1;
  cfg.m_lo = 1;
  cfg.m_hi = 5;
  cfg.max_power = 1;
  RunOutcome out = run(cfg);
  CHECK(out.exit_code == 0);
  CHECK(out.csv.find("3,") == std::string::npos);  // stage 3 not attempted
}

TEST_CASE("definition1 run reports the witness") {
  RunConfig cfg;
  cfg.command = "definition1";
  cfg.modulus = 2;
  cfg.def_q = "0";
  cfg.def_s = "1";
  RunOutcome out = run(cfg);
  CHECK(out.exit_code == 0);
  const auto& data = out.report.at("checks").at(0).at("data");
  CHECK(data.at("found").get<bool>());
  CHECK(data.at("k").get<long>() == 1);
}

TEST_CASE("failing checks give exit code one") {
  // The zero-word witness search fails on a zero bicharacter; emulate by a
  // shift set with no reachable distance for the word.
  RunConfig cfg;
  cfg.command = "definition1";
  cfg.modulus = 2;
  cfg.shift_set = "7,15,24";  // no pairing within the k bound
  cfg.def_q = "0";
  cfg.def_s = "1";
  cfg.k_bound = 4;
  RunOutcome out = run(cfg);
  CHECK(out.exit_code == 1);
  CHECK_FALSE(out.all_pass);
}
