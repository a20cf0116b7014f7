#pragma once

#include <string>
#include <vector>

#include "shiftlab/algebra.hpp"
#include "shiftlab/checks.hpp"
#include "shiftlab/numerics.hpp"

namespace shiftlab {

// Block sizes (a_1,...,a_j) of A = ⊕ M_{a_i}(C) embedded block-diagonally in
// M_n(C), n = Σ a_i.  gamma = exp(2πi/j) drives the anticommutation phases,
// gamma_block(i) = exp(2πi/a_i) the clock/shift pair inside block i.
struct AlgebraSpec {
  std::vector<Index> blocks;

  Index n() const;
  Index j() const { return static_cast<Index>(blocks.size()); }
  Index block_offset(Index i) const;  // start row of block i (0-based)
  Complex gamma() const;
  Complex gamma_block(Index i) const;
  Index algebra_dim() const;  // Σ a_i²
  bool abelian() const;       // all blocks 1x1
  std::string to_string() const;  // e.g. "(1,2)"

  static AlgebraSpec parse(const std::string& csv);  // "1,2" -> {1,2}
};

void validate_spec(const AlgebraSpec& spec);  // throws std::invalid_argument

// The named matrices of the construction, all in M_n:
//   p[i], q[i]  clock and cycle of block i (supported on the block),
//   u           the full n-cycle,
//   v           the cycle through the block-end positions,
//   v_blocks[i] q[i] extended by the identity outside block i,
//   s           diagonal projection onto the block-end positions,
//   r = s v s   the twisted block-cycle partial isometry,
//   w           central unitary Σ gamma^{i-1} 1_{block i}.
struct GeneratorSet {
  AlgebraSpec spec;
  std::vector<GenPerm> p, q, v_blocks;
  GenPerm u, v, s, r, w;
  HSBasis basis_A;  // matrix units of all blocks, HS-normalized
  HSBasis basis_D;  // diagonal units

  MatrixC dense_r() const { return r.dense(); }
  Subalgebra algebra_A() const;
  Subalgebra algebra_D() const;
};

GeneratorSet build_generators(const AlgebraSpec& spec);

// Checks every stated relation of the construction and returns one record
// per relation with the worst deviation.  Deviations are exact entrywise
// comparisons of monomial matrices.
RelationReport verify_generator_relations(const GeneratorSet& g, double tol = 1e-12);

// dim span(A + A r A + A r^2 A + ... + A r^{j-1} A); the filtration already
// fills the algebra generated by A and r, namely all of M_n.
Index filtration_span_dimension(const GeneratorSet& g);

// generate_algebra applied to the A units together with r.
Subalgebra generate_algebra_from_generators(const GeneratorSet& g);

}  // namespace shiftlab
