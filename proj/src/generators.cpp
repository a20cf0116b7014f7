#include "shiftlab/generators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace shiftlab {

namespace {

Complex root_of_unity(Index k, Index order) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k % order) /
                       static_cast<double>(order);
  return Complex(std::cos(angle), std::sin(angle));
}

}  // namespace

Index AlgebraSpec::n() const {
  Index s = 0;
  for (Index a : blocks) s += a;
  return s;
}

Index AlgebraSpec::block_offset(Index i) const {
  Index off = 0;
  for (Index t = 0; t < i; ++t) off += blocks[t];
  return off;
}

Complex AlgebraSpec::gamma() const { return root_of_unity(1, j()); }

Complex AlgebraSpec::gamma_block(Index i) const { return root_of_unity(1, blocks[i]); }

Index AlgebraSpec::algebra_dim() const {
  Index s = 0;
  for (Index a : blocks) s += a * a;
  return s;
}

bool AlgebraSpec::abelian() const {
  for (Index a : blocks)
    if (a != 1) return false;
  return true;
}

std::string AlgebraSpec::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) os << ",";
    os << blocks[i];
  }
  os << ")";
  return os.str();
}

AlgebraSpec AlgebraSpec::parse(const std::string& csv) {
  AlgebraSpec spec;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    spec.blocks.push_back(std::stol(item));
  }
  validate_spec(spec);
  return spec;
}

void validate_spec(const AlgebraSpec& spec) {
  if (spec.blocks.empty())
    throw std::invalid_argument("AlgebraSpec: at least one block required");
  for (Index a : spec.blocks)
    if (a < 1) throw std::invalid_argument("AlgebraSpec: block sizes must be >= 1");
}

Subalgebra GeneratorSet::algebra_A() const {
  Subalgebra s;
  s.unital = true;
  s.basis = basis_A;
  return s;
}

Subalgebra GeneratorSet::algebra_D() const {
  Subalgebra s;
  s.unital = true;
  s.basis = basis_D;
  return s;
}

GeneratorSet build_generators(const AlgebraSpec& spec) {
  validate_spec(spec);
  GeneratorSet g;
  g.spec = spec;
  const Index n = spec.n();
  const Index j = spec.j();
  const double scale = std::sqrt(static_cast<double>(n));

  for (Index i = 0; i < j; ++i) {
    const Index a = spec.blocks[i];
    const Index off = spec.block_offset(i);

    // Clock within block i: diag(1, gamma_i, ..., gamma_i^{a-1}), zero outside.
    GenPerm p = GenPerm::identity(n);
    for (Index t = 0; t < n; ++t) p.phase[t] = 0;
    for (Index t = 0; t < a; ++t) p.phase[off + t] = root_of_unity(t, a);
    g.p.push_back(p);

    // Cycle (1 2 ... a) within block i: e_t -> e_{t+1 mod a}, zero outside.
    GenPerm q = GenPerm::identity(n);
    for (Index t = 0; t < n; ++t) q.phase[t] = 0;
    for (Index t = 0; t < a; ++t) {
      q.perm[off + t] = off + (t + 1) % a;
      q.phase[off + t] = 1;
    }
    g.q.push_back(q);

    // q_i extended by the identity outside block i.
    GenPerm vb = GenPerm::identity(n);
    for (Index t = 0; t < a; ++t) vb.perm[off + t] = off + (t + 1) % a;
    g.v_blocks.push_back(vb);
  }

  // u: the n-cycle e_t -> e_{t+1 mod n}.
  g.u = GenPerm::identity(n);
  for (Index t = 0; t < n; ++t) g.u.perm[t] = (t + 1) % n;

  // Block-end positions a_1, a_1+a_2, ..., n (0-based: offsets of the last
  // row of each block).
  std::vector<Index> ends(j);
  for (Index i = 0; i < j; ++i) ends[i] = spec.block_offset(i) + spec.blocks[i] - 1;

  // v: the cycle through the block ends.
  g.v = GenPerm::identity(n);
  for (Index i = 0; i < j; ++i) g.v.perm[ends[i]] = ends[(i + 1) % j];

  // s: diagonal projection with support exactly the block ends.
  g.s = GenPerm::identity(n);
  for (Index t = 0; t < n; ++t) g.s.phase[t] = 0;
  for (Index e : ends) g.s.phase[e] = 1;

  g.r = g.s * g.v * g.s;

  // w = Σ gamma^{i-1} 1_{block i}.
  g.w = GenPerm::identity(n);
  for (Index i = 0; i < j; ++i)
    for (Index t = 0; t < spec.blocks[i]; ++t)
      g.w.phase[spec.block_offset(i) + t] = root_of_unity(i, j);

  // HS-orthonormal bases: matrix units of each block, and the diagonal.
  g.basis_A.ambient_dim = n;
  for (Index i = 0; i < j; ++i) {
    const Index a = spec.blocks[i];
    const Index off = spec.block_offset(i);
    for (Index x = 0; x < a; ++x)
      for (Index y = 0; y < a; ++y) {
        MatrixC e = MatrixC::Zero(n, n);
        e(off + x, off + y) = scale;
        g.basis_A.vecs.push_back(std::move(e));
      }
  }
  g.basis_D.ambient_dim = n;
  for (Index t = 0; t < n; ++t) {
    MatrixC e = MatrixC::Zero(n, n);
    e(t, t) = scale;
    g.basis_D.vecs.push_back(std::move(e));
  }
  return g;
}

RelationReport verify_generator_relations(const GeneratorSet& g, double tol) {
  RelationReport rep;
  const AlgebraSpec& spec = g.spec;
  const Index n = spec.n();
  const Index j = spec.j();
  const GenPerm one = GenPerm::identity(n);

  rep.add_deviation("u^n = 1", max_abs_diff(g.u.pow(n), one), tol);
  rep.add_deviation("v^j = 1", max_abs_diff(g.v.pow(j), one), tol);
  rep.add_deviation("w^j = 1", max_abs_diff(g.w.pow(j), one), tol);
  rep.add_deviation("u unitary", max_abs_diff(g.u * g.u.adjoint(), one), tol);
  rep.add_deviation("w unitary", max_abs_diff(g.w * g.w.adjoint(), one), tol);

  {
    double dev = 0.0;
    for (Index i = 0; i < j; ++i) {
      const Index a = spec.blocks[i];
      GenPerm block_one = GenPerm::identity(n);
      for (Index t = 0; t < n; ++t) block_one.phase[t] = 0;
      for (Index t = 0; t < a; ++t) block_one.phase[spec.block_offset(i) + t] = 1;
      dev = std::max(dev, max_abs_diff(g.p[i].pow(a), block_one));
      dev = std::max(dev, max_abs_diff(g.q[i].pow(a), block_one));
    }
    rep.add_deviation("p_i^{a_i} = q_i^{a_i} = 1_block", dev, tol);
  }
  {
    double dev = 0.0;
    for (Index i = 0; i < j; ++i)
      dev = std::max(dev, deviation_from_scaled(g.p[i] * g.q[i], g.q[i] * g.p[i],
                                                spec.gamma_block(i)));
    rep.add_deviation("p_i q_i = gamma_i q_i p_i", dev, tol);
  }
  {
    GenPerm prod = g.v;
    for (Index i = j; i-- > 0;) prod = g.v_blocks[i] * prod;
    rep.add_deviation("u = v_1 v_2 ... v_j v", max_abs_diff(g.u, prod), tol);
  }

  rep.add_deviation("r = s v s", max_abs_diff(g.r, g.s * g.v * g.s), tol);
  rep.add_deviation("r = v s", max_abs_diff(g.r, g.v * g.s), tol);
  rep.add_deviation("r = s v", max_abs_diff(g.r, g.s * g.v), tol);
  rep.add_deviation("[s, v] = 0", max_abs_diff(g.s * g.v, g.v * g.s), tol);
  rep.add_deviation("[s, r] = 0", max_abs_diff(g.s * g.r, g.r * g.s), tol);
  rep.add_deviation("r r* = s", max_abs_diff(g.r * g.r.adjoint(), g.s), tol);
  rep.add_deviation("r* r = s", max_abs_diff(g.r.adjoint() * g.r, g.s), tol);
  rep.add_deviation("r^j = s", max_abs_diff(g.r.pow(j), g.s), tol);
  if (j >= 2)
    rep.add_deviation("r* = r^{j-1}", max_abs_diff(g.r.adjoint(), g.r.pow(j - 1)), tol);

  rep.add_deviation("Ad w (r) = gamma r",
                    deviation_from_scaled(g.w * g.r * g.w.adjoint(), g.r, spec.gamma()),
                    tol);
  {
    // Ad w trivial on A, and w a unitary of order j lying in the span of A.
    double dev = 0.0;
    const MatrixC wd = g.w.dense();
    for (const auto& a : g.basis_A.vecs) dev = std::max(dev, max_abs_diff(wd * a, a * wd));
    rep.add_deviation("Ad w trivial on A", dev, tol);
    rep.add_deviation("w in span(A)", g.basis_A.residual(wd), tol);
    const double unitary_dev = max_abs_diff(g.w * g.w.adjoint(), one);
    const double order_dev = max_abs_diff(g.w.pow(j), one);
    rep.add_deviation("w central unitary in A",
                      std::max({dev, g.basis_A.residual(wd), unitary_dev, order_dev}),
                      tol);
  }
  {
    // Ad u and Ad v are automorphisms of the diagonal algebra.
    double dev_u = 0.0, dev_v = 0.0;
    for (const auto& dunit : g.basis_D.vecs) {
      dev_u = std::max(dev_u, g.basis_D.residual(g.u.dense() * dunit *
                                                 g.u.adjoint().dense()));
      dev_v = std::max(dev_v, g.basis_D.residual(g.v.dense() * dunit *
                                                 g.v.adjoint().dense()));
    }
    rep.add_deviation("Ad u maps D to D", dev_u, tol);
    rep.add_deviation("Ad v maps D to D", dev_v, tol);
  }
  {
    const Complex ts = normalized_trace(g.s);
    const double expect = static_cast<double>(j) / static_cast<double>(n);
    rep.add_deviation("tau(s) = j/n", std::abs(ts - Complex(expect, 0)), tol);
  }
  rep.add_deviation("s in D", g.basis_D.residual(g.s.dense()), tol);
  return rep;
}

Index filtration_span_dimension(const GeneratorSet& g) {
  const Index j = g.spec.j();
  std::vector<MatrixC> pieces;
  for (Index power = 0; power < j; ++power) {
    const MatrixC rp = g.r.pow(power).dense();
    for (const auto& a : g.basis_A.vecs)
      for (const auto& b : g.basis_A.vecs) pieces.push_back(a * rp * b);
  }
  return orthonormalize_span(pieces, kRankTol).size();
}

Subalgebra generate_algebra_from_generators(const GeneratorSet& g) {
  std::vector<MatrixC> gens = g.basis_A.vecs;
  gens.push_back(g.r.dense());
  return generate_algebra(gens, g.spec.n());
}

}  // namespace shiftlab
