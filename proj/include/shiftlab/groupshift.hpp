#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shiftlab/modn.hpp"
#include "shiftlab/numerics.hpp"
#include "shiftlab/shiftset.hpp"

namespace shiftlab {

// Antisymmetric Z_n-valued pairing e(i,j) on 1-based generator indices;
// the commutation phase of u_i and u_j is gamma^{e(i,j)}, gamma = e^{2πi/n}.
// Rule-backed kinds evaluate at any index; the explicit kind vanishes
// beyond its matrix extent.
class Bicharacter {
 public:
  enum class Kind { Zero, BuresYin, Stream, Explicit };

  // Paired lanes: e(2i-1, 2i) = 1; e(2i, 2i+2d) = 1 iff d in sset; all other
  // forward pairings vanish.
  static Bicharacter bures_yin(long n, ShiftSet sset);
  // Single stream: e(i, i+d) = 1 iff d in sset.
  static Bicharacter stream(long n, ShiftSet sset);
  // upper(i-1, j-1) holds e(i,j) for i < j up to the extent; antisymmetry
  // completes the rest.
  static Bicharacter explicit_matrix(long n, const modn::Mat& upper);
  static Bicharacter zero(long n);

  long modulus() const { return n_; }
  Kind kind() const { return kind_; }
  const ShiftSet& sset() const { return sset_; }
  long extent() const { return extent_; }  // explicit kind only
  long e(long i, long j) const;            // antisymmetric, e(i,i) = 0
  bool operator==(const Bicharacter& o) const;

 private:
  Bicharacter(Kind k, long n) : kind_(k), n_(n) {}
  long forward(long i, long j) const;  // assumes i < j
  Kind kind_ = Kind::Zero;
  long n_ = 2;
  ShiftSet sset_;
  modn::Mat upper_;
  long extent_ = 0;
};

// Finitely supported exponent vector g in Z_n^∞ (index i carries the power
// of u_i).  Trailing zeros are trimmed so equal words compare equal.
struct ExponentWord {
  std::vector<long> exp;

  static ExponentWord basis(long i, long power = 1);  // 1-based index
  void reduce(long n);
  bool is_zero() const { return exp.empty(); }
  bool operator<(const ExponentWord& o) const { return exp < o.exp; }
  bool operator==(const ExponentWord& o) const { return exp == o.exp; }
  std::string to_string() const;
};

// Finite linear combination of normal-ordered words u^g = u_1^{g_1} u_2^{g_2} ...
class TwistedElement {
 public:
  explicit TwistedElement(Bicharacter bc) : bc_(std::move(bc)) {}
  static TwistedElement word(const Bicharacter& bc, ExponentWord g,
                             Complex coeff = Complex(1, 0));
  static TwistedElement one(const Bicharacter& bc);

  const Bicharacter& bicharacter() const { return bc_; }
  const std::map<ExponentWord, Complex>& terms() const { return terms_; }
  Index term_count() const { return static_cast<Index>(terms_.size()); }
  void add_term(ExponentWord g, Complex c);

  TwistedElement operator+(const TwistedElement& o) const;
  TwistedElement operator*(const TwistedElement& o) const;
  TwistedElement star() const;
  TwistedElement scaled(Complex c) const;

 private:
  Bicharacter bc_;
  std::map<ExponentWord, Complex> terms_;
};

// Normal-ordering phase exponent: u^g u^h = gamma^{phi} u^{g+h},
// phi = Σ_{i>j} e(i,j) g_i h_j  (mod n).
long ordering_phase_exponent(const Bicharacter& bc, const ExponentWord& g,
                             const ExponentWord& h);
// Commutator phase: u^g u^h = gamma^{c} u^h u^g,
// c = Σ_{i<j} e(i,j) (g_i h_j - g_j h_i)  (mod n).
long commutation_phase_exponent(const Bicharacter& bc, const ExponentWord& g,
                                const ExponentWord& h);

// Coefficient of the identity word; the canonical trace.
Complex trace(const TwistedElement& a);

// Solution subgroup of the shifted-commutation congruences at a truncation:
// all g in Z_n^m with Σ_i e(i,t) g_i ≡ 0 (mod n) for t in
// {shift_step·k+1, ..., constraint_hi}.
struct SolverResult {
  long modulus = 2;
  long truncation = 0;
  long constraint_lo = 0, constraint_hi = 0;
  modn::Mat basis;  // Howell form, rows generate the subgroup
  std::uint64_t subgroup_order = 1;

  Index rank() const { return static_cast<Index>(basis.size()); }
  std::string describe_basis() const;  // e.g. "e1, e3"
};

// The congruence system exactly at truncation m (constraints t ≤ m).
SolverResult commutant_congruence_solver(const Bicharacter& bc, long shift_step,
                                         long k, long m);

// Solutions supported in Z_n^m that remain solutions under every later
// constraint.  For rule-backed bicharacters the constraint horizon is chosen
// so that each support index meets an isolated future pairing (possible
// because shift-set gaps grow), which pins the stable subgroup exactly; for
// explicit matrices constraints beyond the extent vanish and the horizon is
// the extent itself.
SolverResult stable_solutions(const Bicharacter& bc, long shift_step, long k, long m);

// Smallest shift power k ≤ k_bound whose generator u_{k+1} commutes with the
// word u(Q,S) = Ψ^{i(1)}(u)^{j(1)} ··· only up to a nontrivial phase
// gamma^{lambda_exp}.  Validates 0 ≤ i(1) < i(2) < ... and 1 ≤ j(l) ≤ n-1.
struct Definition1Witness {
  long k = 0;
  long lambda_exponent = 0;  // nonzero mod n
  Complex lambda;
};
std::optional<Definition1Witness> check_definition1(const Bicharacter& bc,
                                                    const std::vector<long>& Q,
                                                    const std::vector<long>& S,
                                                    long k_bound);

// Left-regular images U_1..U_m of the generators on the group algebra of
// Z_n^m (ambient n^m), as monomial matrices.  Throws ResourceCapError-like
// std::invalid_argument when n^m exceeds the cap.
std::vector<GenPerm> matrix_realization(const Bicharacter& bc, long m,
                                        Index ambient_cap = 256);
// The image of a full twisted element.
MatrixC realize_dense(const Bicharacter& bc, const TwistedElement& a, long m);

}  // namespace shiftlab
