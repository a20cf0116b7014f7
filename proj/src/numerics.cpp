#include "shiftlab/numerics.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace shiftlab {

namespace {

// Flatten to a row vector, scaled so the euclidean norm equals the HS norm.
Eigen::RowVectorXcd flatten(const MatrixC& m) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(m.rows()));
  Eigen::RowVectorXcd row(m.size());
  Index pos = 0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) row(pos++) = scale * m(i, j);
  return row;
}

MatrixC unflatten(const Eigen::RowVectorXcd& row, Index d) {
  const double scale = std::sqrt(static_cast<double>(d));
  MatrixC m(d, d);
  Index pos = 0;
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = scale * row(pos++);
  return m;
}

}  // namespace

MatrixC identity(Index d) { return MatrixC::Identity(d, d); }

MatrixC kron(const MatrixC& a, const MatrixC& b) {
  const Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  MatrixC out(ra * rb, ca * cb);
  for (Index i = 0; i < ra; ++i)
    for (Index j = 0; j < ca; ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

Complex normalized_trace(const MatrixC& a) {
  return a.trace() / static_cast<double>(a.rows());
}

Complex hs_inner(const MatrixC& a, const MatrixC& b) {
  return (a.conjugate().cwiseProduct(b)).sum() / static_cast<double>(a.rows());
}

double hs_norm(const MatrixC& a) {
  return a.norm() / std::sqrt(static_cast<double>(a.rows()));
}

double max_abs_diff(const MatrixC& a, const MatrixC& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

Eigen::VectorXcd HSBasis::coefficients(const MatrixC& x) const {
  Eigen::VectorXcd c(size());
  for (Index i = 0; i < size(); ++i) c(i) = hs_inner(vecs[i], x);
  return c;
}

MatrixC HSBasis::project(const MatrixC& x) const {
  MatrixC p = MatrixC::Zero(ambient_dim, ambient_dim);
  for (const auto& v : vecs) p += hs_inner(v, x) * v;
  return p;
}

double HSBasis::residual(const MatrixC& x) const { return hs_norm(x - project(x)); }

bool HSBasis::contains(const MatrixC& x, double tol) const {
  const double nx = hs_norm(x);
  if (nx < tol) return true;
  return residual(x) <= tol * nx;
}

HSBasis orthonormalize_span(const std::vector<MatrixC>& mats, double tol) {
  HSBasis out;
  if (mats.empty()) return out;
  const Index d = mats.front().rows();
  for (const auto& m : mats)
    if (m.rows() != d || m.cols() != d)
      throw std::invalid_argument("orthonormalize_span: mixed ambient dimensions");
  out.ambient_dim = d;

  Eigen::MatrixXcd stack(static_cast<Index>(mats.size()), d * d);
  for (Index i = 0; i < stack.rows(); ++i) stack.row(i) = flatten(mats[i]);

  Eigen::VectorXd sv;
  Eigen::MatrixXcd v;
  if (stack.rows() * stack.cols() > 128 * 128) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(stack, Eigen::ComputeThinV);
    sv = svd.singularValues();
    v = svd.matrixV();
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stack, Eigen::ComputeThinV);
    sv = svd.singularValues();
    v = svd.matrixV();
  }
  if (sv.size() == 0 || sv(0) <= 0) return out;
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol * sv(0)) ++rank;
  for (Index i = 0; i < rank; ++i)
    out.vecs.push_back(unflatten(v.col(i).transpose(), d));
  return out;
}

HSBasis subspace_intersect(const HSBasis& x, const HSBasis& y, double tol) {
  if (x.ambient_dim != y.ambient_dim && !x.empty() && !y.empty())
    throw std::invalid_argument("subspace_intersect: ambient mismatch");
  HSBasis out;
  out.ambient_dim = x.ambient_dim;
  if (x.empty() || y.empty()) return out;

  Eigen::MatrixXcd gram(x.size(), y.size());
  for (Index i = 0; i < x.size(); ++i)
    for (Index j = 0; j < y.size(); ++j) gram(i, j) = hs_inner(x.vecs[i], y.vecs[j]);

  Eigen::MatrixXcd u_mat;
  Eigen::VectorXd sv;
  if (gram.rows() * gram.cols() > 128 * 128) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(gram, Eigen::ComputeThinU);
    sv = svd.singularValues();
    u_mat = svd.matrixU();
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gram, Eigen::ComputeThinU);
    sv = svd.singularValues();
    u_mat = svd.matrixU();
  }
  // Principal cosines equal to 1 mark common directions.  Cosines of
  // genuinely distinct subspaces sit at a finite angle here, so the cut
  // needs only to separate 1-eps from them.
  const double cut = 1.0 - std::max(tol, 1e-12) * 10.0;
  for (Index k = 0; k < sv.size(); ++k) {
    if (sv(k) < cut) break;
    MatrixC v = MatrixC::Zero(x.ambient_dim, x.ambient_dim);
    for (Index i = 0; i < x.size(); ++i) v += u_mat(i, k) * x.vecs[i];
    out.vecs.push_back(v / hs_norm(v));
  }
  return out;
}

OrthoAccumulator::OrthoAccumulator(Index ambient_dim, double tol)
    : ambient_(ambient_dim), tol_(tol), rows_(0, ambient_dim * ambient_dim) {}

Index OrthoAccumulator::add_batch(const std::vector<MatrixC>& mats) {
  if (mats.empty()) return 0;
  Eigen::MatrixXcd cand(static_cast<Index>(mats.size()), ambient_ * ambient_);
  Eigen::VectorXd orig_norm(cand.rows());
  for (Index i = 0; i < cand.rows(); ++i) {
    if (mats[i].rows() != ambient_ || mats[i].cols() != ambient_)
      throw std::invalid_argument("OrthoAccumulator: ambient mismatch");
    cand.row(i) = flatten(mats[i]);
    orig_norm(i) = cand.row(i).norm();
  }

  const Index before = count_;
  // Two projection passes against the accumulated rows, then the survivors
  // are orthonormalized among themselves.
  for (int pass = 0; pass < 2; ++pass) {
    if (count_ > 0) cand -= (cand * rows_.adjoint()) * rows_;
  }
  for (Index i = 0; i < cand.rows(); ++i) {
    const double ref = std::max(orig_norm(i), 1.0);
    if (cand.row(i).norm() <= tol_ * ref) continue;
    Eigen::RowVectorXcd v = cand.row(i);
    if (count_ > 0) v -= (v * rows_.adjoint()) * rows_;
    // Re-project against survivors added within this batch as well.
    const double n = v.norm();
    if (n <= tol_ * ref) continue;
    v /= n;
    rows_.conservativeResize(count_ + 1, Eigen::NoChange);
    rows_.row(count_) = v;
    ++count_;
    if (i + 1 < cand.rows()) {
      auto rest = cand.bottomRows(cand.rows() - i - 1);
      rest -= (rest * v.adjoint()) * v;
    }
  }
  return count_ - before;
}

HSBasis OrthoAccumulator::basis() const {
  HSBasis out;
  out.ambient_dim = ambient_;
  out.vecs.reserve(count_);
  for (Index i = 0; i < count_; ++i) out.vecs.push_back(unflatten(rows_.row(i), ambient_));
  return out;
}

GenPerm GenPerm::identity(Index d) {
  GenPerm g;
  g.perm.resize(d);
  g.phase.assign(d, Complex(1, 0));
  for (Index j = 0; j < d; ++j) g.perm[j] = j;
  return g;
}

GenPerm GenPerm::unit(Index d, Index row, Index col) {
  GenPerm g;
  g.perm.assign(d, 0);
  g.phase.assign(d, Complex(0, 0));
  g.perm[col] = row;
  g.phase[col] = Complex(1, 0);
  return g;
}

GenPerm GenPerm::diagonal(const std::vector<Complex>& entries) {
  GenPerm g;
  const Index d = static_cast<Index>(entries.size());
  g.perm.resize(d);
  g.phase = entries;
  for (Index j = 0; j < d; ++j) g.perm[j] = j;
  return g;
}

GenPerm GenPerm::operator*(const GenPerm& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("GenPerm: dimension mismatch");
  GenPerm out;
  const Index d = dim();
  out.perm.resize(d);
  out.phase.resize(d);
  for (Index j = 0; j < d; ++j) {
    const Index mid = o.perm[j];
    out.perm[j] = perm[mid];
    out.phase[j] = phase[mid] * o.phase[j];
  }
  return out;
}

GenPerm GenPerm::adjoint() const {
  GenPerm out;
  const Index d = dim();
  out.perm.assign(d, 0);
  out.phase.assign(d, Complex(0, 0));
  for (Index j = 0; j < d; ++j) {
    if (std::abs(phase[j]) == 0.0) continue;
    out.perm[perm[j]] = j;
    out.phase[perm[j]] = std::conj(phase[j]);
  }
  return out;
}

GenPerm GenPerm::scaled(Complex c) const {
  GenPerm out = *this;
  for (auto& p : out.phase) p *= c;
  return out;
}

GenPerm GenPerm::pow(long e) const {
  GenPerm out = GenPerm::identity(dim());
  for (long i = 0; i < e; ++i) out = *this * out;
  return out;
}

MatrixC GenPerm::dense() const {
  MatrixC m = MatrixC::Zero(dim(), dim());
  for (Index j = 0; j < dim(); ++j)
    if (std::abs(phase[j]) != 0.0) m(perm[j], j) = phase[j];
  return m;
}

bool GenPerm::is_zero(double tol) const {
  for (const auto& p : phase)
    if (std::abs(p) > tol) return false;
  return true;
}

GenPerm kron(const GenPerm& a, const GenPerm& b) {
  GenPerm out;
  const Index da = a.dim(), db = b.dim();
  out.perm.resize(da * db);
  out.phase.resize(da * db);
  for (Index ja = 0; ja < da; ++ja)
    for (Index jb = 0; jb < db; ++jb) {
      out.perm[ja * db + jb] = a.perm[ja] * db + b.perm[jb];
      out.phase[ja * db + jb] = a.phase[ja] * b.phase[jb];
    }
  return out;
}

double max_abs_diff(const GenPerm& a, const GenPerm& b) {
  return deviation_from_scaled(a, b, Complex(1, 0));
}

double deviation_from_scaled(const GenPerm& a, const GenPerm& b, Complex c) {
  if (a.dim() != b.dim()) throw std::invalid_argument("GenPerm: dimension mismatch");
  double dev = 0.0;
  for (Index j = 0; j < a.dim(); ++j) {
    const Complex pa = a.phase[j];
    const Complex pb = c * b.phase[j];
    if (std::abs(pa) == 0.0 && std::abs(pb) == 0.0) continue;
    if (std::abs(pa) != 0.0 && std::abs(pb) != 0.0 && a.perm[j] == b.perm[j]) {
      dev = std::max(dev, std::abs(pa - pb));
    } else {
      dev = std::max(dev, std::max(std::abs(pa), std::abs(pb)));
    }
  }
  return dev;
}

Complex normalized_trace(const GenPerm& a) {
  Complex t(0, 0);
  for (Index j = 0; j < a.dim(); ++j)
    if (a.perm[j] == j) t += a.phase[j];
  return t / static_cast<double>(a.dim());
}

}  // namespace shiftlab
