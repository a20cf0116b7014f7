#include "shiftlab/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace shiftlab {

namespace {

// Deterministic uniform doubles in [-1,1); avoids distribution objects so
// that reports are bit-stable across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  double sym() { return 2.0 * next_unit() - 1.0; }
  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::uint64_t state_;
};

bool is_diagonal(const MatrixC& m, double tol = 1e-13) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > tol) return false;
  return true;
}

MatrixC mult_maybe_diag(const MatrixC& z, const MatrixC& b, bool z_diag) {
  if (!z_diag) return z * b;
  return z.diagonal().asDiagonal() * b;
}

}  // namespace

Subalgebra full_matrix_algebra(Index d) {
  Subalgebra s;
  s.unital = true;
  s.basis.ambient_dim = d;
  const double scale = std::sqrt(static_cast<double>(d));
  s.basis.vecs.reserve(d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      MatrixC e = MatrixC::Zero(d, d);
      e(i, j) = scale;
      s.basis.vecs.push_back(std::move(e));
    }
  return s;
}

Subalgebra diagonal_algebra(Index d) {
  Subalgebra s;
  s.unital = true;
  s.basis.ambient_dim = d;
  const double scale = std::sqrt(static_cast<double>(d));
  for (Index i = 0; i < d; ++i) {
    MatrixC e = MatrixC::Zero(d, d);
    e(i, i) = scale;
    s.basis.vecs.push_back(std::move(e));
  }
  return s;
}

Subalgebra scalar_algebra(Index d) {
  Subalgebra s;
  s.unital = true;
  s.basis.ambient_dim = d;
  s.basis.vecs.push_back(identity(d));
  return s;
}

Subalgebra span_subalgebra(const std::vector<MatrixC>& mats, bool unital, double tol) {
  Subalgebra s;
  s.unital = unital;
  s.basis = orthonormalize_span(mats, tol);
  return s;
}

Subalgebra tensor_subalgebra(const Subalgebra& a, const Subalgebra& b) {
  Subalgebra s;
  s.unital = a.unital && b.unital;
  s.basis.ambient_dim = a.ambient() * b.ambient();
  s.basis.vecs.reserve(a.dim() * b.dim());
  for (const auto& x : a.basis.vecs)
    for (const auto& y : b.basis.vecs) s.basis.vecs.push_back(kron(x, y));
  return s;
}

Subalgebra tensor_power_subalgebra(const Subalgebra& a, int m) {
  if (m < 1) throw std::invalid_argument("tensor_power_subalgebra: m >= 1 required");
  Subalgebra s = a;
  for (int i = 1; i < m; ++i) s = tensor_subalgebra(s, a);
  return s;
}

bool validate_subalgebra(const Subalgebra& s, double tol, Index max_pairs) {
  const Index n = s.dim();
  if (n == 0) return !s.unital;
  if (s.unital && !s.basis.contains(identity(s.ambient()), tol)) return false;
  for (const auto& v : s.basis.vecs)
    if (!s.basis.contains(v.adjoint(), tol)) return false;

  if (n * n <= max_pairs) {
    for (const auto& a : s.basis.vecs)
      for (const auto& b : s.basis.vecs)
        if (!s.basis.contains(a * b, tol)) return false;
    return true;
  }
  Rng rng(0xc105edull);
  for (Index t = 0; t < max_pairs; ++t) {
    const auto& a = s.basis.vecs[rng.next() % n];
    const auto& b = s.basis.vecs[rng.next() % n];
    if (!s.basis.contains(a * b, tol)) return false;
  }
  return true;
}

Subalgebra generate_algebra(const std::vector<MatrixC>& gens, Index ambient_dim,
                            double tol) {
  std::vector<MatrixC> alphabet;
  alphabet.reserve(2 * gens.size());
  for (const auto& g : gens) {
    if (g.rows() != ambient_dim || g.cols() != ambient_dim)
      throw std::invalid_argument("generate_algebra: generator ambient mismatch");
    alphabet.push_back(g);
    alphabet.push_back(g.adjoint());
  }

  OrthoAccumulator acc(ambient_dim, tol);
  std::vector<MatrixC> frontier;
  frontier.push_back(identity(ambient_dim));
  for (const auto& g : alphabet) frontier.push_back(g);
  acc.add_batch(frontier);

  // Frontier closure: only words extended from newly found directions need
  // multiplying again; the span of all words is reached regardless.
  while (!frontier.empty()) {
    const Index before = acc.size();
    std::vector<MatrixC> next;
    next.reserve(frontier.size() * alphabet.size());
    for (const auto& f : frontier)
      for (const auto& g : alphabet) next.push_back(f * g);
    acc.add_batch(next);
    if (acc.size() == before) break;
    HSBasis after = acc.basis();
    frontier.assign(after.vecs.begin() + before, after.vecs.end());
    if (acc.size() >= ambient_dim * ambient_dim) break;
  }

  Subalgebra out;
  out.unital = true;
  out.basis = acc.basis();
  return out;
}

Subalgebra commutant_of_set(const std::vector<MatrixC>& spanning, Index ambient_dim,
                            double tol) {
  const Index d = ambient_dim;
  const Index dd = d * d;
  MatrixC normal = MatrixC::Zero(dd, dd);
  for (const auto& g : spanning) {
    if (g.rows() != d || g.cols() != d)
      throw std::invalid_argument("commutant: ambient mismatch");
    // L = I ⊗ g - gᵀ ⊗ I on column-major vec(x);  accumulate L†L.
    const MatrixC gt = g.transpose();
    const MatrixC gc = g.conjugate();
    normal += kron(identity(d), g.adjoint() * g);
    normal -= kron(gt, g.adjoint());
    normal -= kron(gc, g);
    normal += kron(gc * gt, identity(d));
  }

  Eigen::SelfAdjointEigenSolver<MatrixC> eig((normal + normal.adjoint()) / 2.0);
  const auto& vals = eig.eigenvalues();
  const double lmax = vals.size() ? std::max(vals.maxCoeff(), 0.0) : 0.0;
  const double cut = std::max(tol * lmax, 1e-12);

  Subalgebra out;
  out.unital = true;
  out.basis.ambient_dim = d;
  const double scale = std::sqrt(static_cast<double>(d));
  for (Index k = 0; k < vals.size(); ++k) {
    if (vals(k) > cut) break;  // ascending order
    Eigen::VectorXcd v = eig.eigenvectors().col(k);
    MatrixC m(d, d);
    for (Index j = 0; j < d; ++j) m.col(j) = v.segment(j * d, d);
    out.basis.vecs.push_back(scale * m);
  }
  return out;
}

Subalgebra commutant(const Subalgebra& s, double tol) {
  return commutant_of_set(s.basis.vecs, s.ambient(), tol);
}

Subalgebra relative_commutant(const Subalgebra& b, const Subalgebra& c, double tol) {
  if (b.ambient() != c.ambient())
    throw std::invalid_argument("relative_commutant: ambient mismatch");
  Subalgebra comm = commutant(b, tol);
  Subalgebra out;
  out.basis = subspace_intersect(comm.basis, c.basis, tol);
  out.unital = out.basis.contains(identity(b.ambient()), tol);
  return out;
}

Subalgebra center(const Subalgebra& s, double tol) {
  return relative_commutant(s, s, tol);
}

MatrixC conditional_expectation(const MatrixC& x, const Subalgebra& b) {
  if (x.rows() != b.ambient())
    throw std::invalid_argument("conditional_expectation: ambient mismatch");
  return b.basis.project(x);
}

BasisView BasisView::of(const Subalgebra& s) {
  BasisView v;
  v.ambient_dim = s.ambient();
  v.count = s.dim();
  const auto* vecs = &s.basis.vecs;
  v.at = [vecs](Index k) { return (*vecs)[k]; };
  return v;
}

BasisView BasisView::full_matrix_units(Index d) {
  BasisView v;
  v.ambient_dim = d;
  v.count = d * d;
  v.is_matrix_units = true;
  const double scale = std::sqrt(static_cast<double>(d));
  v.at = [d, scale](Index k) {
    MatrixC e = MatrixC::Zero(d, d);
    e(k / d, k % d) = scale;
    return e;
  };
  return v;
}

MatrixC central_average(const BasisView& basis, const MatrixC& x) {
  const Index d = basis.ambient_dim;
  if (basis.is_matrix_units) {
    // Σ_ij d·E_ij x E_ji = d·Tr(x)·I.
    return static_cast<double>(d) * x.trace() * identity(d);
  }
  MatrixC acc = MatrixC::Zero(d, d);
  for (Index k = 0; k < basis.count; ++k) {
    const MatrixC b = basis.at(k);
    acc += b * x * b.adjoint();
  }
  return acc;
}

namespace {

// Operator trace of multiplication-by-z on the spanned algebra; for a
// central projection z this is dim(z s), an integer.
double rank_of_central_projection(const BasisView& basis, const MatrixC& z) {
  if (basis.is_matrix_units)
    return static_cast<double>(basis.ambient_dim) * z.trace().real();
  const bool zd = is_diagonal(z);
  double acc = 0.0;
  for (Index k = 0; k < basis.count; ++k) {
    const MatrixC b = basis.at(k);
    acc += hs_inner(b, mult_maybe_diag(z, b, zd)).real();
  }
  return acc;
}

// Full random combination: every block of the algebra receives generic
// weight, so the central average is a generic central element.
MatrixC random_hermitian_member(const BasisView& basis, Rng& rng) {
  const Index d = basis.ambient_dim;
  MatrixC x = MatrixC::Zero(d, d);
  for (Index k = 0; k < basis.count; ++k) {
    const Complex c(rng.sym(), rng.sym());
    x += c * basis.at(k);
  }
  return (x + MatrixC(x.adjoint())) / 2.0;
}

struct CentralData {
  std::vector<MatrixC> projections;
  std::vector<Index> block_sizes;  // a_i per projection
};

CentralData central_decomposition(const BasisView& basis, double group_tol,
                                  std::uint64_t seed) {
  if (basis.count == 0)
    throw std::invalid_argument("central decomposition of an empty algebra");
  const Index d = basis.ambient_dim;

  for (int attempt = 0; attempt < 5; ++attempt) {
    Rng rng(seed + 0x9e37ull * static_cast<std::uint64_t>(attempt));

    // Span the center by averaging random algebra members; stop once three
    // consecutive samples add no new direction.
    OrthoAccumulator acc(d, kRankTol);
    int stale = 0;
    while (stale < 3 && acc.size() < d) {
      std::vector<MatrixC> batch;
      batch.push_back(central_average(basis, random_hermitian_member(basis, rng)));
      if (acc.add_batch(batch) == 0)
        ++stale;
      else
        stale = 0;
    }
    HSBasis zbasis = acc.basis();
    if (zbasis.empty()) continue;

    // Generic self-adjoint central element; eigenvalue groups give the
    // candidate minimal central projections.
    MatrixC xc = MatrixC::Zero(d, d);
    for (const auto& z : zbasis.vecs) {
      xc += rng.sym() * (z + MatrixC(z.adjoint()));
      xc += rng.sym() * (Complex(0, 1) * (z - MatrixC(z.adjoint())));
    }
    xc = (xc + MatrixC(xc.adjoint())) / 2.0;

    Eigen::SelfAdjointEigenSolver<MatrixC> eig(xc);
    const auto& vals = eig.eigenvalues();
    std::vector<std::pair<Index, Index>> groups;  // [begin, end)
    Index begin = 0;
    for (Index i = 1; i <= vals.size(); ++i) {
      if (i == vals.size() || vals(i) - vals(i - 1) > group_tol) {
        groups.emplace_back(begin, i);
        begin = i;
      }
    }

    CentralData out;
    bool ok = true;
    double total_dim = 0.0;
    MatrixC sum = MatrixC::Zero(d, d);
    for (auto [b, e] : groups) {
      MatrixC z = MatrixC::Zero(d, d);
      for (Index i = b; i < e; ++i) {
        const auto v = eig.eigenvectors().col(i);
        z += v * v.adjoint();
      }
      // Keep only spectral chunks that belong to the algebra's center; for a
      // non-unital algebra the kernel of the central element contributes an
      // ambient chunk outside the algebra.
      if (zbasis.residual(z) > 1e-7 * std::max(1.0, hs_norm(z))) {
        if (max_abs_diff(z * xc, MatrixC(MatrixC::Zero(d, d))) < 1e-9) continue;
        ok = false;
        break;
      }
      const double m = rank_of_central_projection(basis, z);
      const double a = std::sqrt(std::max(m, 0.0));
      if (std::abs(m - std::round(m)) > 1e-6 || std::abs(a - std::round(a)) > 1e-6 ||
          std::round(m) <= 0) {
        ok = false;
        break;
      }
      total_dim += std::round(m);
      sum += z;
      out.projections.push_back(std::move(z));
      out.block_sizes.push_back(static_cast<Index>(std::llround(a)));
    }
    if (!ok || out.projections.empty()) continue;
    if (std::abs(total_dim - static_cast<double>(basis.count)) > 1e-6) continue;
    // One minimal projection per central dimension; a collision of the
    // generic element's eigenvalues across blocks would merge groups.
    if (out.projections.size() != static_cast<std::size_t>(zbasis.size())) continue;
    // Σ z_i must act as the unit of the algebra.
    bool unit_ok = true;
    Rng probe_rng(seed ^ 0xfeedull);
    const Index checks = std::min<Index>(basis.count, 6);
    for (Index t = 0; t < checks; ++t) {
      const MatrixC b = basis.at(static_cast<Index>(probe_rng.next() % basis.count));
      if (max_abs_diff(sum * b, b) > 1e-8 || max_abs_diff(b * sum, b) > 1e-8) {
        unit_ok = false;
        break;
      }
    }
    if (!unit_ok) continue;
    return out;
  }
  throw std::runtime_error("central decomposition did not stabilize");
}

}  // namespace

std::vector<MatrixC> minimal_central_projections(const BasisView& basis,
                                                 double group_tol, std::uint64_t seed) {
  return central_decomposition(basis, group_tol, seed).projections;
}

BlockStructure block_structure(const BasisView& basis, double tol, std::uint64_t seed) {
  CentralData data = central_decomposition(basis, tol, seed);
  BlockStructure out;
  out.blocks = data.block_sizes;
  std::sort(out.blocks.begin(), out.blocks.end());
  return out;
}

BlockStructure block_structure(const Subalgebra& s, double tol, std::uint64_t seed) {
  if (!validate_subalgebra(s, 1e-7))
    throw std::invalid_argument("block_structure: input is not a *-subalgebra");
  return block_structure(BasisView::of(s), tol, seed);
}

double entropy_of_trace(const BasisView& basis, double tol, std::uint64_t seed) {
  const Index d = basis.ambient_dim;
  CentralData data = central_decomposition(basis, tol, seed);
  MatrixC unit = MatrixC::Zero(d, d);
  for (const auto& z : data.projections) unit += z;
  if (max_abs_diff(unit, identity(d)) > 1e-8)
    throw std::invalid_argument("entropy_of_trace: algebra is not unital");

  double h = 0.0;
  for (std::size_t i = 0; i < data.projections.size(); ++i) {
    const double a = static_cast<double>(data.block_sizes[i]);
    const double c = normalized_trace(data.projections[i]).real() / a;
    if (c > 1e-14) h -= a * c * std::log(c);
  }
  return h;
}

double entropy_of_trace(const Subalgebra& s, double tol, std::uint64_t seed) {
  if (!s.unital || !s.basis.contains(identity(s.ambient()), 1e-9))
    throw std::invalid_argument("entropy_of_trace: algebra is not unital");
  return entropy_of_trace(BasisView::of(s), tol, seed);
}

}  // namespace shiftlab
