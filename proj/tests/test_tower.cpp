#include <doctest.h>

#include <cmath>

#include "shiftlab/groupshift.hpp"
#include "shiftlab/tower.hpp"

using namespace shiftlab;

TEST_CASE("triangular sets and the distance stream") {
  ShiftSet t5 = triangular_set(5);
  CHECK(t5.elements_up_to(100) == std::vector<long>{1, 3, 6, 10, 15});

  // Indicator over distances 1..16.
  const std::vector<int> expected = {1, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0};
  ShiftSet preset = ShiftSet::triangular_preset();
  for (std::size_t d = 1; d <= expected.size(); ++d) {
    CHECK(preset.contains(static_cast<long>(d)) == (expected[d - 1] == 1));
    CHECK(triangular_set(8).contains(static_cast<long>(d)) == (expected[d - 1] == 1));
  }

  CHECK(triangular_set(1).elements_up_to(10) == std::vector<long>{1});
  CHECK(preset.contains(5050));        // 100·101/2
  CHECK_FALSE(preset.contains(5051));
}

TEST_CASE("shift set validation") {
  CHECK(validate_shift_set({1, 3, 6, 10}));
  CHECK_FALSE(validate_shift_set({1, 2, 3}));
  CHECK(validate_shift_set({2, 5, 9, 14}));
  CHECK_FALSE(validate_shift_set({0, 1, 3}));
  CHECK_FALSE(validate_shift_set({3, 3}));
  CHECK(validate_shift_set({}));
  CHECK_THROWS_AS(ShiftSet::explicit_set({1, 2, 3}), std::invalid_argument);
}

TEST_CASE("tower generator shapes") {
  AlgebraSpec spec{{1, 1}};
  ShiftSet sset = ShiftSet::triangular_preset();

  Tower t1 = build_tower(spec, 1, sset);
  CHECK(max_abs_diff(t1.r(1), t1.base.r) == 0.0);

  Tower t2 = build_tower(spec, 2, sset);
  CHECK(max_abs_diff(t2.r(2), kron(t2.base.w, t2.base.r)) == 0.0);
  CHECK(max_abs_diff(t2.r(1), kron(t2.base.r, GenPerm::identity(2))) == 0.0);

  Tower t3 = build_tower(spec, 3, sset);
  // distance 2 is not in the set, distance 1 is.
  GenPerm expect3 = kron(GenPerm::identity(2), kron(t3.base.w, t3.base.r));
  CHECK(max_abs_diff(t3.r(3), expect3) == 0.0);

  CHECK_THROWS_AS(build_tower(AlgebraSpec{{1, 2}}, 6, sset), ResourceCapError);
  CHECK(build_tower(AlgebraSpec{{1, 2}}, 6, sset, 1024).ambient == 729);
}

TEST_CASE("phase pattern by distance") {
  AlgebraSpec spec{{1, 1}};
  Tower t = build_tower(spec, 3, ShiftSet::triangular_preset());
  const Complex gamma = spec.gamma();

  // distance 1: anticommute; distance 2: commute.
  CHECK(deviation_from_scaled(t.r(3) * t.r(2), t.r(2) * t.r(3), gamma) < 1e-15);
  CHECK(deviation_from_scaled(t.r(2) * t.r(1), t.r(1) * t.r(2), gamma) < 1e-15);
  CHECK(max_abs_diff(t.r(3) * t.r(1), t.r(1) * t.r(3)) < 1e-15);
}

TEST_CASE("tower relations across the battery") {
  for (auto blocks : {std::vector<Index>{1, 1}, std::vector<Index>{2},
                      std::vector<Index>{1, 2}}) {
    AlgebraSpec spec{blocks};
    const Index depth = spec.n() == 2 ? 4 : 3;
    Tower t = build_tower(spec, depth, ShiftSet::triangular_preset());
    TowerVerification v = verify_tower_relations(t);
    for (const auto& c : v.report.checks) {
      CAPTURE(spec.to_string());
      CAPTURE(c.name);
      CHECK(c.pass);
    }
    // The uncorrected displays hold exactly when s = 1 (all blocks 1x1).
    CHECK(v.uncorrected_displays_hold == spec.abelian());
  }
}

TEST_CASE("degenerate tower has trace of s equal to one") {
  Tower t = build_tower(AlgebraSpec{{1, 1}}, 2, ShiftSet::triangular_preset());
  CHECK(std::abs(normalized_trace(t.s(2)) - Complex(1, 0)) == 0.0);
}

TEST_CASE("explicit distance sets steer the phase pattern") {
  ShiftSet sset = ShiftSet::explicit_set({2, 5, 9});
  AlgebraSpec spec{{1, 1}};
  Tower t = build_tower(spec, 4, sset);
  const Complex gamma = spec.gamma();

  // distance 1 commutes here, distance 2 anticommutes.
  CHECK(max_abs_diff(t.r(2) * t.r(1), t.r(1) * t.r(2)) < 1e-15);
  CHECK(deviation_from_scaled(t.r(3) * t.r(1), t.r(1) * t.r(3), gamma) < 1e-15);
  CHECK(max_abs_diff(t.r(4) * t.r(1), t.r(1) * t.r(4)) < 1e-15);  // distance 3

  TowerVerification v = verify_tower_relations(t);
  for (const auto& c : v.report.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
}

TEST_CASE("block order is respected") {
  // Blocks (3,1): ends at positions 3 and 4, w weights the second block.
  GeneratorSet g = build_generators(AlgebraSpec{{3, 1}});
  MatrixC s = MatrixC::Zero(4, 4);
  s(2, 2) = 1;
  s(3, 3) = 1;
  CHECK(max_abs_diff(g.s.dense(), s) == 0.0);
  MatrixC w = identity(4);
  w(3, 3) = -1;
  CHECK(max_abs_diff(g.w.dense(), w) < 1e-15);
  CHECK(verify_generator_relations(g).all_pass());

  Tower t = build_tower(AlgebraSpec{{3, 1}}, 2, ShiftSet::triangular_preset());
  TowerVerification v = verify_tower_relations(t);
  for (const auto& c : v.report.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
}

TEST_CASE("tensor independence counts") {
  Tower t11 = build_tower(AlgebraSpec{{1, 1}}, 3, ShiftSet::triangular_preset());
  CHECK(tensor_independence_check(t11, 3) == 8);
  CHECK(tensor_independence_check(t11, 2) == 4);
  CHECK(tensor_independence_check(t11, 1) == 2);

  Tower t12 = build_tower(AlgebraSpec{{1, 2}}, 2, ShiftSet::triangular_preset());
  CHECK(tensor_independence_check(t12, 2) == 25);
  CHECK(tensor_independence_check(t12, 1) == 5);
}

TEST_CASE("one-shift correspondence preserves structure") {
  for (auto blocks : {std::vector<Index>{1, 1}, std::vector<Index>{1, 2}}) {
    AlgebraSpec spec{blocks};
    ShiftSet sset = ShiftSet::triangular_preset();
    Tower from = build_tower(spec, 2, sset, 1024);
    Tower to = build_tower(spec, 3, sset, 1024);
    GeneratorCorrespondence c = shift_map(from, to);
    CAPTURE(spec.to_string());
    CHECK(c.multiplicative);
    CHECK(c.phase_pattern_preserved);
    CHECK(c.max_trace_deviation < 1e-12);
    CHECK(c.words_checked > 100);
  }

  Tower a = build_tower(AlgebraSpec{{1, 1}}, 2, ShiftSet::triangular_preset());
  Tower b = build_tower(AlgebraSpec{{1, 1}}, 2, ShiftSet::triangular_preset());
  CHECK_THROWS_AS(shift_map(a, b), std::invalid_argument);
}

TEST_CASE("word image example r1 a r1 -> r2 a r2") {
  AlgebraSpec spec{{1, 2}};
  ShiftSet sset = ShiftSet::triangular_preset();
  Tower from = build_tower(spec, 1, sset);
  Tower to = build_tower(spec, 2, sset);
  const auto units_from = from.level_A_units(1);
  const auto units_to = to.level_A_units(2);
  for (std::size_t i = 0; i < units_from.size(); ++i) {
    const GenPerm w_from = from.r(1) * units_from[i] * from.r(1);
    const GenPerm w_to = to.r(2) * units_to[i] * to.r(2);
    CHECK(std::abs(normalized_trace(w_from) - normalized_trace(w_to)) < 1e-15);
  }
}

TEST_CASE("commutant experiment for the plain tensor shift") {
  // Single block: the shifted copy is an honest tensor factor and the
  // commutant is exactly the complementary factor.
  CommutantOptions opts;
  CommutantReport rep =
      commutant_experiment(AlgebraSpec{{2}}, 1, 1, 2, ShiftSet::triangular_preset(), opts);
  for (const auto& cell : rep.cells) {
    CHECK(cell.dimension == 4);
    CHECK(cell.blocks.blocks == std::vector<Index>{2});
    CHECK(cell.contains_tensor_A);
    CHECK(cell.converged);
  }
  CHECK(rep.dims_nonincreasing);
}

TEST_CASE("commutant experiment with anticommutation keeps the patched element") {
  // Hand oracle at k=1, m=1 for two 1x1 blocks: the commutant of the level-2
  // copy inside M_4 is spanned by 1, w1, r1 w2, w1 r1 w2 - a full M_2 copy.
  CommutantReport rep = commutant_experiment(AlgebraSpec{{1, 1}}, 1, 1, 2,
                                             ShiftSet::triangular_preset());
  REQUIRE(rep.cells.size() == 2);
  CHECK(rep.cells[0].dimension == 4);
  CHECK(rep.cells[0].blocks.blocks == std::vector<Index>{2});
  CHECK(rep.cells[0].contains_tensor_A);
  CHECK_FALSE(rep.cells[0].converged);
  REQUIRE(rep.cells[0].congruence_dimension.has_value());
  CHECK(*rep.cells[0].congruence_dimension == 4);
  CHECK(rep.oracle_agreement());

  // Explicit membership of the patched element r1 w2.
  Tower t = build_tower(AlgebraSpec{{1, 1}}, 2, ShiftSet::triangular_preset());
  const GenPerm patched = t.r(1) * t.w(2);
  std::vector<MatrixC> gens;
  for (auto& u : t.level_A_units_dense(2)) gens.push_back(std::move(u));
  gens.push_back(t.r(2).dense());
  Subalgebra shifted = generate_algebra(gens, t.ambient);
  Subalgebra comm = commutant(shifted);
  CHECK(comm.basis.contains(patched.dense()));
  CHECK(comm.basis.contains(t.w(1).dense()));
  CHECK_FALSE(comm.basis.contains(t.r(1).dense()));
  CHECK(validate_subalgebra(comm));

  // Dimension bounds: between (dim A)^k and (n^2)^k.
  for (const auto& cell : rep.cells) {
    CHECK(cell.dimension >= 2);
    CHECK(cell.dimension <= 4);
  }
}

TEST_CASE("congruence agreement holds at shift power two") {
  CommutantReport rep = commutant_experiment(AlgebraSpec{{1, 1}}, 2, 1, 2,
                                             ShiftSet::triangular_preset());
  for (const auto& cell : rep.cells) {
    REQUIRE(cell.congruence_dimension.has_value());
    CHECK(*cell.congruence_dimension == cell.dimension);
    CHECK(cell.dimension >= 4);   // contains the tensor square of A
    CHECK(cell.dimension <= 16);  // index bound (n^2)^k
    CHECK(cell.contains_tensor_A);
  }
}

TEST_CASE("congruence agreement holds at modulus three") {
  CommutantReport rep = commutant_experiment(AlgebraSpec{{1, 1, 1}}, 1, 1, 2,
                                             ShiftSet::triangular_preset());
  for (const auto& cell : rep.cells) {
    REQUIRE(cell.congruence_dimension.has_value());
    CHECK(*cell.congruence_dimension == cell.dimension);
    CHECK(cell.dimension == 9);  // n^{2k} at every finite stage
    CHECK(cell.contains_tensor_A);
  }
}

TEST_CASE("commutant of the shifted copy contains A_1 for mixed blocks") {
  CommutantReport rep = commutant_experiment(AlgebraSpec{{1, 2}}, 1, 2, 2,
                                             ShiftSet::triangular_preset());
  REQUIRE(rep.cells.size() == 1);
  CHECK(rep.cells[0].contains_tensor_A);  // the embedded dim-5 copy of A
  CHECK(rep.cells[0].dimension >= 5);
  CHECK(rep.cells[0].dimension <= 81);
}
