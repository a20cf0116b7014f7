#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "shiftlab/numerics.hpp"

namespace shiftlab {

// A *-closed linear subspace of M_d(C) carried as an HS-orthonormal basis.
// Closure under products/adjoints is a property of the span, checked by
// validate_subalgebra rather than enforced per instance.
struct Subalgebra {
  HSBasis basis;
  bool unital = false;

  Index ambient() const { return basis.ambient_dim; }
  Index dim() const { return basis.size(); }
  bool contains(const MatrixC& x, double tol = kRankTol) const {
    return basis.contains(x, tol);
  }
};

// Multiset of simple-summand sizes of a finite-dimensional *-algebra.
struct BlockStructure {
  std::vector<Index> blocks;  // sorted ascending

  Index algebra_dim() const {
    Index s = 0;
    for (Index b : blocks) s += b * b;
    return s;
  }
  bool operator==(const BlockStructure& o) const { return blocks == o.blocks; }
};

Subalgebra full_matrix_algebra(Index d);
Subalgebra diagonal_algebra(Index d);
Subalgebra scalar_algebra(Index d);  // C·1
Subalgebra span_subalgebra(const std::vector<MatrixC>& mats, bool unital,
                           double tol = kRankTol);

// Tensor product along kron; the product of HS-orthonormal bases is again
// HS-orthonormal, so no re-orthonormalization happens.
Subalgebra tensor_subalgebra(const Subalgebra& a, const Subalgebra& b);
Subalgebra tensor_power_subalgebra(const Subalgebra& a, int m);

// True iff span(basis) is closed under adjoints and pairwise products (and
// contains the identity when flagged unital).  Pair products are checked
// exhaustively up to `max_pairs`, beyond that on a deterministic sample.
bool validate_subalgebra(const Subalgebra& s, double tol = kRankTol,
                         Index max_pairs = 4096);

// Smallest unital *-closed subalgebra containing gens.  Closure iterates
// products of the current basis with the (adjoint-completed) generators;
// terminates because the dimension is bounded by ambient².
Subalgebra generate_algebra(const std::vector<MatrixC>& gens, Index ambient_dim,
                            double tol = kRankTol);

// Commutant inside the full ambient algebra: the nullspace of
// x ↦ gx - xg stacked over the given spanning set, computed from the
// Hermitian normal matrix of the stacked constraints.
Subalgebra commutant_of_set(const std::vector<MatrixC>& spanning, Index ambient_dim,
                            double tol = kRankTol);
Subalgebra commutant(const Subalgebra& s, double tol = kRankTol);

// commutant(b) ∩ c.  Throws std::invalid_argument on ambient mismatch.
Subalgebra relative_commutant(const Subalgebra& b, const Subalgebra& c,
                              double tol = kRankTol);

// s ∩ s'.
Subalgebra center(const Subalgebra& s, double tol = kRankTol);

// Orthogonal projection of x onto span(b) in the HS inner product.
MatrixC conditional_expectation(const MatrixC& x, const Subalgebra& b);

// A basis that may be produced lazily.  The dense Subalgebra path covers
// ordinary sizes; the matrix-units view lets the full algebra M_d appear in
// block/entropy computations without storing d^2 dense matrices.
struct BasisView {
  Index ambient_dim = 0;
  Index count = 0;
  std::function<MatrixC(Index)> at;
  bool is_matrix_units = false;  // basis k ↦ sqrt(d)·E_{k/d, k%d}

  // References s.basis; s must outlive the view.
  static BasisView of(const Subalgebra& s);
  static BasisView full_matrix_units(Index d);
};

// Σ_k b_k x b_k*.  For any HS-orthonormal basis of a *-subalgebra s this
// lands in the center of s whenever x ∈ s.
MatrixC central_average(const BasisView& basis, const MatrixC& x);

// The minimal central projections of the algebra spanned by `basis`,
// obtained by eigenvalue-grouping a generic self-adjoint central element
// (deterministic seeded combination; grouping tolerance is absolute).
std::vector<MatrixC> minimal_central_projections(const BasisView& basis,
                                                 double group_tol = 1e-6,
                                                 std::uint64_t seed = 0x51f7ab5eed);

BlockStructure block_structure(const BasisView& basis, double tol = 1e-6,
                               std::uint64_t seed = 0x51f7ab5eed);
// Throws std::invalid_argument when s fails the subalgebra closure check.
BlockStructure block_structure(const Subalgebra& s, double tol = 1e-6,
                               std::uint64_t seed = 0x51f7ab5eed);

// Von Neumann entropy (nats) of the density operator representing the
// restriction of the ambient normalized trace to the algebra.  For block
// sizes {a_i} with central projections z_i the density eigenvalue on block i
// is τ(z_i)/a_i with multiplicity a_i.  Requires a unital algebra.
double entropy_of_trace(const BasisView& basis, double tol = 1e-6,
                        std::uint64_t seed = 0x51f7ab5eed);
double entropy_of_trace(const Subalgebra& s, double tol = 1e-6,
                        std::uint64_t seed = 0x51f7ab5eed);

}  // namespace shiftlab
