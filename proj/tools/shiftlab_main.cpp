// Batch experiment runner: builds the finite generator towers, checks their
// relations, runs commutant and entropy experiments, and solves the twisted
// group-algebra congruences.  Emits a JSON report (and optionally a CSV of
// commutant dimensions) and exits nonzero when any check fails.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "shiftlab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"shiftlab - finite-stage shift and relative-commutant workbench"};
  app.require_subcommand(1);

  shiftlab::RunConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "relation tolerance");
    sub->add_option("--cap", cfg.cap, "ambient dimension cap");
    sub->add_option("--seed", cfg.seed, "report seed");
    sub->add_option("--out", cfg.out_path, "JSON report path");
  };

  auto* gen = app.add_subcommand("verify-generators", "check the generator relations");
  gen->add_option("--blocks", cfg.blocks, "block sizes, e.g. 1,2")->required();
  add_common(gen);

  auto* tow = app.add_subcommand("tower", "build a tower and verify its relations");
  tow->add_option("--blocks", cfg.blocks)->required();
  tow->add_option("--depth", cfg.depth, "tower depth k");
  tow->add_option("--set", cfg.shift_set, "triangular or explicit list 1,3,6");
  add_common(tow);

  auto* com = app.add_subcommand("commutant", "relative commutants of the shifted copy");
  com->add_option("--blocks", cfg.blocks)->required();
  com->add_option("--k", cfg.k, "shift power");
  com->add_option("--m-range", [&cfg](const std::vector<std::string>& vals) {
    const std::string& v = vals.back();
    const auto dots = v.find("..");
    if (dots == std::string::npos) return false;
    try {
      cfg.m_lo = std::stol(v.substr(0, dots));
      cfg.m_hi = std::stol(v.substr(dots + 2));
    } catch (const std::exception&) {
      return false;
    }
    return true;
  }, "stage range LO..HI");
  com->add_option("--set", cfg.shift_set);
  com->add_option("--csv", cfg.csv_path, "CSV table of commutant dimensions");
  add_common(com);

  auto* ent = app.add_subcommand("entropy", "tracial entropies of tensor powers");
  ent->add_option("--blocks", cfg.blocks)->required();
  ent->add_option("--max-power", cfg.max_power, "largest tensor power");
  add_common(ent);

  auto* grp = app.add_subcommand("groupshift", "twisted group-algebra commutant solver");
  grp->add_option("--n", cfg.modulus, "modulus n");
  grp->add_option("--set", cfg.shift_set);
  grp->add_option("--k", cfg.k, "shift power");
  grp->add_option("--truncation", cfg.truncation, "generator truncation");
  grp->add_option("--shift-step", cfg.shift_step, "index step of the shift");
  add_common(grp);

  auto* def = app.add_subcommand("definition1", "word commutation witness search");
  def->add_option("--n", cfg.modulus);
  def->add_option("--set", cfg.shift_set);
  def->add_option("--q", cfg.def_q, "word shift indices, e.g. 0,1");
  def->add_option("--s", cfg.def_s, "word exponents, e.g. 1,1");
  def->add_option("--k-bound", cfg.k_bound, "largest shift power tried");
  add_common(def);

  auto* all = app.add_subcommand("all", "run the standard battery");
  all->add_option("--blocks", cfg.blocks);
  all->add_option("--depth", cfg.depth);
  all->add_option("--k", cfg.k);
  all->add_option("--set", cfg.shift_set);
  all->add_option("--n", cfg.modulus);
  all->add_option("--truncation", cfg.truncation);
  all->add_option("--max-power", cfg.max_power);
  all->add_option("--csv", cfg.csv_path);
  add_common(all);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    const auto start = std::chrono::steady_clock::now();
    shiftlab::RunOutcome outcome = shiftlab::run(cfg);
    const auto elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();

    for (const auto& check : outcome.report.at("checks")) {
      std::cout << (check.at("pass").get<bool>() ? "[PASS] " : "[FAIL] ")
                << check.at("name").get<std::string>()
                << "  (deviation " << check.at("deviation").get<double>() << ")\n";
    }
    std::cout << (outcome.all_pass ? "all checks passed" : "CHECK FAILURES PRESENT")
              << "\n";

    if (!cfg.out_path.empty()) {
      nlohmann::ordered_json with_timing = outcome.report;
      with_timing["timing_ms"] = elapsed_ms;
      std::ofstream out(cfg.out_path);
      if (!out) throw std::invalid_argument("cannot open --out path " + cfg.out_path);
      out << with_timing.dump(2) << "\n";
    }
    if (!cfg.csv_path.empty() && !outcome.csv.empty()) {
      std::ofstream out(cfg.csv_path);
      if (!out) throw std::invalid_argument("cannot open --csv path " + cfg.csv_path);
      out << outcome.csv;
    }
    return outcome.exit_code;
  } catch (const shiftlab::ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
