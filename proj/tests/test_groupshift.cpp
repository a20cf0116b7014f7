#include <doctest.h>

#include <cmath>
#include <random>

#include "shiftlab/algebra.hpp"
#include "shiftlab/groupshift.hpp"
#include "shiftlab/tower.hpp"

using namespace shiftlab;

namespace {

// Enumeration oracle: all of Z_n^m, keeping vectors that satisfy every
// congruence row.
std::vector<modn::Vec> enumerate_solutions(const modn::Mat& rows, long cols, long n) {
  std::vector<modn::Vec> out;
  modn::Vec v(cols, 0);
  while (true) {
    bool ok = true;
    for (const auto& row : rows) {
      long acc = 0;
      for (long i = 0; i < cols; ++i) acc = modn::normalize(acc + row[i] * v[i], n);
      if (acc != 0) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(v);
    long pos = 0;
    while (pos < cols && ++v[pos] == n) v[pos++] = 0;
    if (pos == cols) break;
  }
  return out;
}

modn::Mat window_rows(const Bicharacter& bc, long support, long lo, long hi) {
  modn::Mat rows;
  for (long t = lo; t <= hi; ++t) {
    modn::Vec row(support);
    for (long i = 1; i <= support; ++i) row[i - 1] = modn::normalize(bc.e(i, t), bc.modulus());
    rows.push_back(std::move(row));
  }
  return rows;
}

ExponentWord word_from(std::initializer_list<long> exps) {
  ExponentWord g;
  g.exp = exps;
  return g;
}

}  // namespace

TEST_CASE("mod-n kernels match enumeration") {
  std::mt19937 rng(99);
  for (long n : {2L, 3L, 4L, 6L}) {
    for (int trial = 0; trial < 8; ++trial) {
      const long cols = 3 + static_cast<long>(rng() % 3);
      const long rows = 1 + static_cast<long>(rng() % 3);
      modn::Mat a(rows, modn::Vec(cols));
      for (auto& row : a)
        for (auto& x : row) x = static_cast<long>(rng() % static_cast<unsigned long>(n));

      modn::Mat ker = modn::kernel(a, cols, n);
      const auto brute = enumerate_solutions(a, cols, n);
      CHECK(modn::subgroup_order(ker, n) == brute.size());
      for (const auto& v : brute) CHECK(modn::member(v, ker, n));
    }
  }
}

TEST_CASE("howell forms canonicalize row spans") {
  // Two generating sets of one subgroup of Z_4^3.
  modn::Mat g1 = {{2, 0, 0}, {0, 1, 2}};
  modn::Mat g2 = {{2, 1, 2}, {0, 3, 6}, {2, 0, 0}};
  CHECK(modn::howell_form(g1, 3, 4) == modn::howell_form(g2, 3, 4));

  // span{(2,2)} over Z_4 has order two; (2,0) is not a member.
  modn::Mat h = modn::howell_form({{2, 2}}, 2, 4);
  CHECK(modn::member({2, 2}, h, 4));
  CHECK_FALSE(modn::member({2, 0}, h, 4));
  CHECK(modn::subgroup_order(h, 4) == 2);

  modn::Mat inter = modn::intersect({{1, 0}, {0, 1}}, {{1, 1}}, 2, 2);
  CHECK(modn::subgroup_order(inter, 2) == 2);
  CHECK(modn::member({1, 1}, inter, 2));

  // Composite modulus: <(2,0),(0,1)> meets <(1,1)> in <> of (2,2) inside Z_4^2.
  modn::Mat inter4 = modn::intersect({{2, 0}, {0, 1}}, {{1, 1}}, 2, 4);
  CHECK(modn::subgroup_order(inter4, 4) == 2);
  CHECK(modn::member({2, 2}, inter4, 4));
  CHECK_FALSE(modn::member({1, 1}, inter4, 4));
}

TEST_CASE("paired-lane pairing values") {
  Bicharacter bc = Bicharacter::bures_yin(2, ShiftSet::triangular_preset());
  CHECK(bc.e(1, 2) == 1);
  CHECK(bc.e(2, 4) == 1);   // distance 1
  CHECK(bc.e(2, 6) == 0);   // distance 2
  CHECK(bc.e(2, 8) == 1);   // distance 3
  CHECK(bc.e(3, 1) == 0);
  CHECK(bc.e(1, 3) == 0);
  CHECK(bc.e(4, 2) == 1);   // antisymmetric mod 2
  CHECK(bc.e(2, 1) == 1);
  CHECK(bc.e(5, 5) == 0);

  Bicharacter bc3 = Bicharacter::bures_yin(3, ShiftSet::triangular_preset());
  CHECK(bc3.e(2, 1) == 2);  // -1 mod 3
}

TEST_CASE("twisted multiplication") {
  modn::Mat upper = {{0, 1}, {0, 0}};
  Bicharacter bc = Bicharacter::explicit_matrix(2, upper);

  TwistedElement u1 = TwistedElement::word(bc, word_from({1, 0}));
  TwistedElement u2 = TwistedElement::word(bc, word_from({0, 1}));

  TwistedElement ab = u1 * u2;
  REQUIRE(ab.term_count() == 1);
  CHECK(std::abs(ab.terms().begin()->second - Complex(1, 0)) < 1e-15);
  CHECK(ab.terms().begin()->first == word_from({1, 1}));

  TwistedElement ba = u2 * u1;
  REQUIRE(ba.term_count() == 1);
  CHECK(std::abs(ba.terms().begin()->second - Complex(-1, 0)) < 1e-15);

  // u^n = 1 for each generator.
  for (long n : {2L, 3L, 5L}) {
    Bicharacter bcn = Bicharacter::stream(n, ShiftSet::triangular_preset());
    TwistedElement u = TwistedElement::word(bcn, word_from({0, 1}));
    TwistedElement p = TwistedElement::one(bcn);
    for (long t = 0; t < n; ++t) p = p * u;
    REQUIRE(p.term_count() == 1);
    CHECK(p.terms().begin()->first.is_zero());
    CHECK(std::abs(p.terms().begin()->second - Complex(1, 0)) < 1e-14);
  }

  // identity word is the unit.
  TwistedElement e = TwistedElement::one(bc);
  TwistedElement x = u1 * u2 + u2.scaled(Complex(0, 2));
  CHECK((e * x).terms() == x.terms());

  Bicharacter other = Bicharacter::zero(2);
  TwistedElement y = TwistedElement::one(other);
  CHECK_THROWS_AS(x * y, std::invalid_argument);
}

TEST_CASE("trace of twisted elements") {
  Bicharacter bc = Bicharacter::bures_yin(3, ShiftSet::triangular_preset());
  CHECK(std::abs(trace(TwistedElement::one(bc)) - Complex(1, 0)) == 0.0);
  TwistedElement u = TwistedElement::word(bc, word_from({1, 2}));
  CHECK(std::abs(trace(u)) == 0.0);

  // tau(a b) = tau(b a) on random small combinations.
  std::mt19937 rng(7);
  auto random_elt = [&] {
    TwistedElement a(bc);
    for (int t = 0; t < 3; ++t) {
      ExponentWord g;
      g.exp = {static_cast<long>(rng() % 3), static_cast<long>(rng() % 3),
               static_cast<long>(rng() % 3)};
      a.add_term(g, Complex(static_cast<double>(rng() % 5) - 2.0,
                            static_cast<double>(rng() % 5) - 2.0));
    }
    return a;
  };
  for (int t = 0; t < 5; ++t) {
    TwistedElement a = random_elt(), b = random_elt();
    CHECK(std::abs(trace(a * b) - trace(b * a)) < 1e-12);
  }

  // u^g (u^g)* = 1, so the trace of that product has modulus one.
  TwistedElement prod = u * u.star();
  REQUIRE(prod.term_count() == 1);
  CHECK(std::abs(std::abs(trace(prod)) - 1.0) < 1e-14);
}

TEST_CASE("ordering phase is a cocycle and matches the commutator pairing") {
  Bicharacter bc = Bicharacter::bures_yin(4, ShiftSet::triangular_preset());
  std::mt19937 rng(21);
  auto random_word = [&] {
    ExponentWord g;
    g.exp = {static_cast<long>(rng() % 4), static_cast<long>(rng() % 4),
             static_cast<long>(rng() % 4), static_cast<long>(rng() % 4)};
    g.reduce(4);
    return g;
  };
  for (int t = 0; t < 20; ++t) {
    ExponentWord g = random_word(), h = random_word(), k = random_word();
    ExponentWord gh = g, hk = h;
    gh.exp.resize(4, 0);
    hk.exp.resize(4, 0);
    for (int i = 0; i < 4; ++i) {
      gh.exp[i] = modn::normalize(gh.exp[i] + (i < (int)h.exp.size() ? h.exp[i] : 0), 4);
      hk.exp[i] = modn::normalize(hk.exp[i] + (i < (int)k.exp.size() ? k.exp[i] : 0), 4);
    }
    gh.reduce(4);
    hk.reduce(4);
    // phi(g,h) + phi(g+h,k) = phi(h,k) + phi(g,h+k)  (associativity).
    const long lhs = modn::normalize(ordering_phase_exponent(bc, g, h) +
                                         ordering_phase_exponent(bc, gh, k),
                                     4);
    const long rhs = modn::normalize(ordering_phase_exponent(bc, h, k) +
                                         ordering_phase_exponent(bc, g, hk),
                                     4);
    CHECK(lhs == rhs);

    // Commutator pairing: phi(g,h) - phi(h,g).
    const long comm = modn::normalize(ordering_phase_exponent(bc, g, h) -
                                          ordering_phase_exponent(bc, h, g),
                                      4);
    CHECK(comm == commutation_phase_exponent(bc, g, h));
  }
}

TEST_CASE("congruence solver at a truncation") {
  Bicharacter bc = Bicharacter::bures_yin(2, ShiftSet::triangular_preset());

  // Brute-force cross-check of the truncated solver at small sizes.
  for (long m : {4L, 6L, 8L}) {
    SolverResult sols = commutant_congruence_solver(bc, 2, 1, m);
    const auto brute = enumerate_solutions(window_rows(bc, m, 3, m), m, 2);
    CHECK(sols.subgroup_order == brute.size());
    for (const auto& v : brute) CHECK(modn::member(v, sols.basis, 2));
  }

  CHECK_THROWS_AS(commutant_congruence_solver(bc, 2, 1, 2), std::invalid_argument);
}

TEST_CASE("stable solutions pick out the unshifted odd generators") {
  Bicharacter bc = Bicharacter::bures_yin(2, ShiftSet::triangular_preset());

  SolverResult k1 = stable_solutions(bc, 2, 1, 8);
  CHECK(k1.subgroup_order == 2);
  CHECK(k1.describe_basis() == "e1");

  SolverResult k1b = stable_solutions(bc, 2, 1, 10);
  CHECK(k1b.subgroup_order == 2);

  SolverResult k2 = stable_solutions(bc, 2, 2, 10);
  CHECK(k2.subgroup_order == 4);
  CHECK(k2.describe_basis() == "e1, e3");

  SolverResult k2b = stable_solutions(bc, 2, 2, 8);
  CHECK(k2b.subgroup_order == 4);

  // k = 3 diverges from the k*n count: 8 vs 6.
  SolverResult k3 = stable_solutions(bc, 2, 3, 12);
  CHECK(k3.subgroup_order == 8);

  // k = 0: everything is constrained away.
  SolverResult k0 = stable_solutions(bc, 2, 0, 8);
  CHECK(k0.subgroup_order == 1);

  // Truncated (non-stable) solutions keep the boundary-patched element.
  SolverResult sols = commutant_congruence_solver(bc, 2, 1, 8);
  CHECK(sols.subgroup_order == 4);
  CHECK(modn::member({0, 1, 1, 0, 0, 0, 1, 0}, sols.basis, 2));  // r1 w2 w4
  CHECK_FALSE(modn::member({0, 1, 1, 0, 0, 0, 1, 0}, stable_solutions(bc, 2, 1, 8).basis, 2));
}

TEST_CASE("one-step stream shift has trivial stable commutant") {
  Bicharacter bc = Bicharacter::stream(2, ShiftSet::triangular_preset());
  for (long k : {1L, 2L}) {
    SolverResult stable = stable_solutions(bc, 1, k, 12);
    CHECK(stable.subgroup_order == 1);
  }
}

TEST_CASE("explicit-matrix bicharacters are stable at their extent") {
  // Pairings vanish beyond the matrix extent, so the stability horizon is
  // the extent and the subgroup is exactly the windowed solution set.
  modn::Mat upper = {
      {0, 1, 0, 2, 0, 0},
      {0, 0, 1, 0, 0, 1},
      {0, 0, 0, 0, 2, 0},
      {0, 0, 0, 0, 1, 0},
      {0, 0, 0, 0, 0, 1},
      {0, 0, 0, 0, 0, 0},
  };
  Bicharacter bc = Bicharacter::explicit_matrix(3, upper);
  SolverResult stable = stable_solutions(bc, 1, 1, 4);
  const auto brute = enumerate_solutions(window_rows(bc, 4, 2, 6), 4, 3);
  CHECK(stable.subgroup_order == brute.size());
  for (const auto& v : brute) CHECK(modn::member(v, stable.basis, 3));
}

TEST_CASE("stable commutants at modulus three") {
  Bicharacter bc = Bicharacter::bures_yin(3, ShiftSet::triangular_preset());
  SolverResult k1 = stable_solutions(bc, 2, 1, 8);
  CHECK(k1.subgroup_order == 3);
  CHECK(k1.describe_basis() == "e1");
  SolverResult k2 = stable_solutions(bc, 2, 2, 10);
  CHECK(k2.subgroup_order == 9);
}

TEST_CASE("definition-1 witnesses") {
  Bicharacter bc = Bicharacter::stream(2, ShiftSet::triangular_preset());

  auto w1 = check_definition1(bc, {0}, {1}, 8);
  REQUIRE(w1.has_value());
  CHECK(w1->k == 1);
  CHECK(std::abs(w1->lambda - Complex(-1, 0)) < 1e-15);

  // Zero pairing: no witness at any k.
  Bicharacter zero = Bicharacter::zero(2);
  CHECK_FALSE(check_definition1(zero, {0, 2}, {1, 1}, 10).has_value());

  // Two-letter word: matrix-side oracle for the smallest witness.
  const std::vector<long> Q = {0, 1}, S = {1, 1};
  auto w2 = check_definition1(bc, Q, S, 8);
  REQUIRE(w2.has_value());
  {
    const long m = 8;
    std::vector<GenPerm> gens = matrix_realization(bc, m);
    GenPerm word = gens[Q[1]] ;
    word = gens[Q[0]] * word;  // u(Q,S) = u_1 u_2
    long found = -1;
    for (long k = 0; k <= 6 && found < 0; ++k) {
      const GenPerm lhs = gens[k] * word;          // Psi^k(u) u(Q,S)
      const GenPerm rhs = word * gens[k];
      if (max_abs_diff(lhs, rhs) > 1e-9) found = k;
    }
    CHECK(found == w2->k);
  }

  CHECK_THROWS_AS(check_definition1(bc, {2, 1}, {1, 1}, 4), std::invalid_argument);
  CHECK_THROWS_AS(check_definition1(bc, {0, 1}, {1, 2}, 4), std::invalid_argument);
}

TEST_CASE("matrix realization") {
  modn::Mat upper = {{0, 1}, {0, 0}};
  Bicharacter bc = Bicharacter::explicit_matrix(2, upper);
  std::vector<GenPerm> gens = matrix_realization(bc, 2);
  REQUIRE(gens.size() == 2);
  CHECK(gens[0].dim() == 4);

  // U1 U2 = -U2 U1.
  CHECK(deviation_from_scaled(gens[0] * gens[1], gens[1] * gens[0], Complex(-1, 0)) <
        1e-14);

  // Image of the identity word, and delta-at-identity traces.
  CHECK(std::abs(normalized_trace(gens[0])) == 0.0);
  CHECK(std::abs(normalized_trace(gens[0] * gens[0]) - Complex(1, 0)) < 1e-14);

  // The clock/shift pair generates the twisted algebra of Z_2^2: dim 4.
  Subalgebra alg = generate_algebra({gens[0].dense(), gens[1].dense()}, 4);
  CHECK(alg.dim() == 4);

  CHECK_THROWS_AS(matrix_realization(bc, 20), std::invalid_argument);

  // Commutation phases of dense images match the pairing for random words.
  Bicharacter by = Bicharacter::bures_yin(2, ShiftSet::triangular_preset());
  std::vector<GenPerm> img = matrix_realization(by, 5, 64);
  std::mt19937 rng(5);
  for (int t = 0; t < 10; ++t) {
    ExponentWord g, h;
    g.exp.resize(5);
    h.exp.resize(5);
    for (int i = 0; i < 5; ++i) {
      g.exp[i] = static_cast<long>(rng() % 2);
      h.exp[i] = static_cast<long>(rng() % 2);
    }
    auto realize = [&](const ExponentWord& wexp) {
      GenPerm acc = GenPerm::identity(img[0].dim());
      for (std::size_t i = wexp.exp.size(); i-- > 0;)
        for (long p = 0; p < wexp.exp[i]; ++p) acc = img[i] * acc;
      return acc;
    };
    const GenPerm ug = realize(g), uh = realize(h);
    const long c = commutation_phase_exponent(by, g, h);
    const Complex expect = c == 0 ? Complex(1, 0) : Complex(-1, 0);
    CHECK(deviation_from_scaled(ug * uh, uh * ug, expect) < 1e-13);
  }
}

TEST_CASE("congruence commutant agrees with the dense matrix route") {
  // Push the truncated twisted algebra through the left-regular images and
  // compare the algebra-level relative commutant with the subgroup order.
  Bicharacter bc = Bicharacter::bures_yin(2, ShiftSet::triangular_preset());
  for (long m : {4L, 5L}) {
    std::vector<GenPerm> img = matrix_realization(bc, m, 64);
    const Index N = img[0].dim();

    std::vector<MatrixC> all, shifted;
    for (long i = 0; i < m; ++i) {
      all.push_back(img[i].dense());
      if (i >= 2) shifted.push_back(img[i].dense());
    }
    Subalgebra twisted = generate_algebra(all, N);
    CHECK(twisted.dim() == N);  // dimension n^m

    Subalgebra shifted_alg = generate_algebra(shifted, N);
    Subalgebra rel = relative_commutant(shifted_alg, twisted);

    SolverResult sols = commutant_congruence_solver(bc, 2, 1, m);
    CHECK(static_cast<std::uint64_t>(rel.dim()) == sols.subgroup_order);
  }
}
