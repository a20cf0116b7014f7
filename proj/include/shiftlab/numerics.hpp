#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace shiftlab {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using Index = Eigen::Index;

// Default relative singular-value threshold for rank decisions. Spectra in
// this project are built from roots of unity and 0/1 entries, so the gap
// between "zero" and "nonzero" singular values is O(1).
inline constexpr double kRankTol = 1e-9;

MatrixC identity(Index d);

// Kronecker product, row-blocked: (a ⊗ b)(i*db+k, j*db+l) = a(i,j) b(k,l).
MatrixC kron(const MatrixC& a, const MatrixC& b);

// τ = Tr/d, the normalized trace of the ambient matrix algebra.
Complex normalized_trace(const MatrixC& a);

// Hilbert–Schmidt inner product ⟨a,b⟩ = τ(a* b) and the norm it induces.
Complex hs_inner(const MatrixC& a, const MatrixC& b);
double hs_norm(const MatrixC& a);

// Largest |entry| of a - b; the deviation measure used by all relation checks.
double max_abs_diff(const MatrixC& a, const MatrixC& b);

// An ordered list of matrices, orthonormal in the HS inner product, all of
// one ambient dimension.  The basic currency for subspaces of M_d(C).
struct HSBasis {
  Index ambient_dim = 0;
  std::vector<MatrixC> vecs;

  Index size() const { return static_cast<Index>(vecs.size()); }
  bool empty() const { return vecs.empty(); }

  // Coefficients of x against this basis and the induced projection.
  Eigen::VectorXcd coefficients(const MatrixC& x) const;
  MatrixC project(const MatrixC& x) const;
  // HS distance from x to its projection onto the span.
  double residual(const MatrixC& x) const;
  bool contains(const MatrixC& x, double tol = kRankTol) const;
};

// Orthonormal basis of span(mats).  Rank decisions use a singular-value
// threshold relative to the largest singular value.
HSBasis orthonormalize_span(const std::vector<MatrixC>& mats, double tol = kRankTol);

// Orthonormal basis of span(x) ∩ span(y), via principal angles between the
// two spans.  Throws std::invalid_argument on ambient mismatch.
HSBasis subspace_intersect(const HSBasis& x, const HSBasis& y, double tol = kRankTol);

// Incremental orthonormal accumulator (blocked Gram-Schmidt with
// re-orthogonalization).  Used for span closures where candidates arrive in
// batches; cheaper than re-running a full SVD per round.
class OrthoAccumulator {
 public:
  explicit OrthoAccumulator(Index ambient_dim, double tol = kRankTol);

  // Adds the batch, keeping only directions new to the accumulated span.
  // Returns the number of vectors added.
  Index add_batch(const std::vector<MatrixC>& mats);
  Index size() const { return count_; }
  HSBasis basis() const;

 private:
  Index ambient_ = 0;
  Index count_ = 0;
  double tol_;
  // Rows are flattened HS-normalized basis vectors.
  Eigen::MatrixXcd rows_;
};

// Monomial matrix: at most one nonzero entry per column, column j carrying
// phase(j) at row perm(j).  Zero columns have phase 0.  Every generator in
// the tower construction (diagonals, permutations, partial isometries,
// matrix units and their Kronecker products) is of this shape, so phase
// relations can be checked exactly at ambient dimensions where dense
// products would be wasteful.
struct GenPerm {
  std::vector<Index> perm;     // target row per column
  std::vector<Complex> phase;  // factor per column, 0 for a zero column

  Index dim() const { return static_cast<Index>(perm.size()); }

  static GenPerm identity(Index d);
  static GenPerm unit(Index d, Index row, Index col);  // matrix unit E_{row,col}
  static GenPerm diagonal(const std::vector<Complex>& entries);

  GenPerm operator*(const GenPerm& o) const;
  GenPerm adjoint() const;
  GenPerm scaled(Complex c) const;
  GenPerm pow(long e) const;  // e >= 0

  MatrixC dense() const;
  bool is_zero(double tol = 1e-14) const;
};

GenPerm kron(const GenPerm& a, const GenPerm& b);
double max_abs_diff(const GenPerm& a, const GenPerm& b);
// max |entry| of a - c*b; avoids materializing either side.
double deviation_from_scaled(const GenPerm& a, const GenPerm& b, Complex c);
Complex normalized_trace(const GenPerm& a);

}  // namespace shiftlab
