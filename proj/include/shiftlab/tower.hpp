#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shiftlab/algebra.hpp"
#include "shiftlab/checks.hpp"
#include "shiftlab/generators.hpp"
#include "shiftlab/shiftset.hpp"

namespace shiftlab {

// Thrown when a requested ambient dimension exceeds the configured cap.
struct ResourceCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The finite stage M_k ⊂ ⊗^k M_n(C): per level l the embedded copy A_l, the
// twisted partial isometry r_l = w^{b_1} ⊗ ... ⊗ w^{b_{l-1}} ⊗ r ⊗ 1 ⊗ ...
// with b_m = 1 iff (l-m) lies in the shift set, s_l = r_l r_l*, and the
// central unitary w_l.  All stored as monomial matrices; dense forms are
// produced on demand.
class Tower {
 public:
  AlgebraSpec spec;
  ShiftSet sset;
  Index depth = 0;
  Index ambient = 0;
  GeneratorSet base;

  const GenPerm& r(Index l) const { return r_[l - 1]; }  // levels are 1-based
  const GenPerm& s(Index l) const { return s_[l - 1]; }
  const GenPerm& w(Index l) const { return w_[l - 1]; }

  // Matrix units of A_l embedded at slot l, as monomials / dense / a basis.
  std::vector<GenPerm> level_A_units(Index l) const;
  std::vector<MatrixC> level_A_units_dense(Index l) const;
  HSBasis level_A_basis(Index l) const;

  // Dense A_l units plus r_l; the generating set of level l's M_n copy.
  std::vector<MatrixC> level_generators_dense(Index l) const;

 private:
  friend Tower build_tower(const AlgebraSpec&, Index, const ShiftSet&, Index);
  std::vector<GenPerm> r_, s_, w_;
};

inline constexpr Index kDefaultAmbientCap = 256;

// Throws ResourceCapError when n^k exceeds the cap.
Tower build_tower(const AlgebraSpec& spec, Index k, const ShiftSet& sset,
                  Index ambient_cap = kDefaultAmbientCap);

// Result of verify_tower_relations.  The corrected identities live in
// `report`; the deviations of the two uncorrected textbook displays (the
// plain s_l-averaging form and the m=0 conjugation form) are recorded
// separately, since they are expected to hold only when s = 1.
struct TowerVerification {
  RelationReport report;
  double uncorrected_averaging_deviation = 0.0;
  double uncorrected_m0_deviation = 0.0;
  bool uncorrected_displays_hold = false;
};

struct TowerVerifyOptions {
  double tol = 1e-12;
  // Dense span checks (level algebras, full-tower dimension, word span,
  // trivial center, reordering containment) run only when the ambient
  // dimension stays within this bound.
  Index dense_cap = 81;
  bool with_center_check = true;
};

TowerVerification verify_tower_relations(const Tower& t, const TowerVerifyOptions& opts = {});

// dim span{x_1 x_2 ... x_k : x_l in basis(A_l)}; equals (dim A)^k when the
// level copies are tensor-independent.
Index tensor_independence_check(const Tower& t, Index k);

// Verification record for the one-shift correspondence A_l -> A_{l+1},
// r_l -> r_{l+1} between a depth-k and a depth-(k+1) tower: traces of all
// words over the generator alphabet (up to the length bound) must agree
// with the traces of their images.
struct GeneratorCorrespondence {
  Index words_checked = 0;
  double max_trace_deviation = 0.0;
  bool multiplicative = false;
  bool phase_pattern_preserved = false;
  bool pass() const { return multiplicative && phase_pattern_preserved; }
};

GeneratorCorrespondence shift_map(const Tower& from, const Tower& to,
                                  int word_length = 4, double tol = 1e-12);

// One row of the commutant experiment.
struct CommutantCell {
  Index m = 0;
  Index dimension = 0;
  BlockStructure blocks;
  bool contains_tensor_A = false;
  bool converged = false;  // dim and blocks match ⊗^k A
  std::optional<Index> congruence_dimension;  // exact group-shift cross-check
};

struct CommutantReport {
  AlgebraSpec spec;
  Index k = 0;
  std::vector<CommutantCell> cells;
  BlockStructure tensor_A_blocks;
  bool dims_nonincreasing = false;

  bool oracle_agreement() const {
    for (const auto& c : cells)
      if (c.congruence_dimension && *c.congruence_dimension != c.dimension) return false;
    return true;
  }
};

struct CommutantOptions {
  Index ambient_cap = kDefaultAmbientCap;
  // The commutant solve works on ambient^2 unknowns; stages beyond this are
  // rejected rather than attempted.
  Index nullspace_cap = 4096;
  double tol = kRankTol;
  bool congruence_cross_check = true;  // effective for abelian specs only
};

// Largest m with n^{k+m} within both caps, or 0 when even m = 1 exceeds them.
Index max_feasible_stage(const AlgebraSpec& spec, Index k, const CommutantOptions& opts);

// For each m in [m_lo, m_hi]: the relative commutant of the shifted copy
// Phi^k(M_m) = <A_{k+1..k+m}, r_{k+1..k+m}> inside M_{k+m}, its dimension and
// block structure, containment of ⊗^k A, and (for abelian specs) agreement
// with the exact congruence solver at the matching truncation.
CommutantReport commutant_experiment(const AlgebraSpec& spec, Index k, Index m_lo,
                                     Index m_hi, const ShiftSet& sset,
                                     const CommutantOptions& opts = {});

}  // namespace shiftlab
