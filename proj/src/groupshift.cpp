#include "shiftlab/groupshift.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace shiftlab {

namespace {

Complex phase(long exponent, long n) {
  const double angle =
      2.0 * std::numbers::pi * static_cast<double>(((exponent % n) + n) % n) /
      static_cast<double>(n);
  return Complex(std::cos(angle), std::sin(angle));
}

void check_modulus(long n) {
  if (n < 2) throw std::invalid_argument("Bicharacter: modulus must be >= 2");
}

}  // namespace

Bicharacter Bicharacter::bures_yin(long n, ShiftSet sset) {
  check_modulus(n);
  Bicharacter bc(Kind::BuresYin, n);
  bc.sset_ = std::move(sset);
  return bc;
}

Bicharacter Bicharacter::stream(long n, ShiftSet sset) {
  check_modulus(n);
  Bicharacter bc(Kind::Stream, n);
  bc.sset_ = std::move(sset);
  return bc;
}

Bicharacter Bicharacter::explicit_matrix(long n, const modn::Mat& upper) {
  check_modulus(n);
  Bicharacter bc(Kind::Explicit, n);
  bc.upper_ = upper;
  bc.extent_ = static_cast<long>(upper.size());
  for (auto& row : bc.upper_)
    for (auto& x : row) x = modn::normalize(x, n);
  return bc;
}

Bicharacter Bicharacter::zero(long n) {
  check_modulus(n);
  return Bicharacter(Kind::Zero, n);
}

long Bicharacter::forward(long i, long j) const {
  switch (kind_) {
    case Kind::Zero:
      return 0;
    case Kind::Stream:
      return sset_.contains(j - i) ? 1 : 0;
    case Kind::BuresYin:
      if (i % 2 == 1) return j == i + 1 ? 1 : 0;
      // even i pairs only with even j at an sset distance
      if (j % 2 != 0) return 0;
      return sset_.contains((j - i) / 2) ? 1 : 0;
    case Kind::Explicit: {
      if (i > extent_ || j > extent_) return 0;
      const auto& row = upper_[i - 1];
      if (j - 1 >= static_cast<long>(row.size())) return 0;
      return modn::normalize(row[j - 1], n_);
    }
  }
  return 0;
}

long Bicharacter::e(long i, long j) const {
  if (i < 1 || j < 1) throw std::invalid_argument("Bicharacter: indices are 1-based");
  if (i == j) return 0;
  if (i < j) return forward(i, j);
  return modn::normalize(-forward(j, i), n_);
}

bool Bicharacter::operator==(const Bicharacter& o) const {
  return kind_ == o.kind_ && n_ == o.n_ && sset_ == o.sset_ && upper_ == o.upper_;
}

ExponentWord ExponentWord::basis(long i, long power) {
  if (i < 1) throw std::invalid_argument("ExponentWord: indices are 1-based");
  ExponentWord g;
  g.exp.assign(i, 0);
  g.exp[i - 1] = power;
  return g;
}

void ExponentWord::reduce(long n) {
  for (auto& x : exp) x = modn::normalize(x, n);
  while (!exp.empty() && exp.back() == 0) exp.pop_back();
}

std::string ExponentWord::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < exp.size(); ++i) {
    if (i) os << ",";
    os << exp[i];
  }
  os << "]";
  return os.str();
}

TwistedElement TwistedElement::word(const Bicharacter& bc, ExponentWord g, Complex coeff) {
  TwistedElement a(bc);
  g.reduce(bc.modulus());
  a.add_term(std::move(g), coeff);
  return a;
}

TwistedElement TwistedElement::one(const Bicharacter& bc) {
  return word(bc, ExponentWord{});
}

void TwistedElement::add_term(ExponentWord g, Complex c) {
  g.reduce(bc_.modulus());
  auto it = terms_.find(g);
  if (it == terms_.end()) {
    if (std::abs(c) > 1e-15) terms_.emplace(std::move(g), c);
    return;
  }
  it->second += c;
  if (std::abs(it->second) <= 1e-15) terms_.erase(it);
}

TwistedElement TwistedElement::operator+(const TwistedElement& o) const {
  if (!(bc_ == o.bc_)) throw std::invalid_argument("TwistedElement: bicharacter mismatch");
  TwistedElement out = *this;
  for (const auto& [g, c] : o.terms_) out.add_term(g, c);
  return out;
}

TwistedElement TwistedElement::operator*(const TwistedElement& o) const {
  if (!(bc_ == o.bc_)) throw std::invalid_argument("TwistedElement: bicharacter mismatch");
  const long n = bc_.modulus();
  TwistedElement out(bc_);
  for (const auto& [g, cg] : terms_)
    for (const auto& [h, ch] : o.terms_) {
      const long ph = ordering_phase_exponent(bc_, g, h);
      ExponentWord sum;
      sum.exp.resize(std::max(g.exp.size(), h.exp.size()), 0);
      for (std::size_t t = 0; t < sum.exp.size(); ++t) {
        long v = 0;
        if (t < g.exp.size()) v += g.exp[t];
        if (t < h.exp.size()) v += h.exp[t];
        sum.exp[t] = v;
      }
      out.add_term(std::move(sum), cg * ch * phase(ph, n));
    }
  return out;
}

TwistedElement TwistedElement::star() const {
  const long n = bc_.modulus();
  TwistedElement out(bc_);
  for (const auto& [g, c] : terms_) {
    ExponentWord ginv;
    ginv.exp.resize(g.exp.size());
    for (std::size_t t = 0; t < g.exp.size(); ++t)
      ginv.exp[t] = modn::normalize(-g.exp[t], n);
    // (u^g)* = (u^g)^{-1} = gamma^{-phi(g, -g)} u^{-g}.
    const long ph = ordering_phase_exponent(bc_, g, ginv);
    out.add_term(std::move(ginv), std::conj(c) * phase(-ph, n));
  }
  return out;
}

TwistedElement TwistedElement::scaled(Complex c) const {
  TwistedElement out(bc_);
  for (const auto& [g, cg] : terms_) out.add_term(g, cg * c);
  return out;
}

long ordering_phase_exponent(const Bicharacter& bc, const ExponentWord& g,
                             const ExponentWord& h) {
  const long n = bc.modulus();
  long acc = 0;
  for (std::size_t i = 0; i < g.exp.size(); ++i) {
    if (g.exp[i] == 0) continue;
    for (std::size_t j = 0; j < h.exp.size() && j < i; ++j) {
      if (h.exp[j] == 0) continue;
      acc = modn::normalize(
          acc + bc.e(static_cast<long>(i + 1), static_cast<long>(j + 1)) * g.exp[i] *
                    h.exp[j],
          n);
    }
  }
  return acc;
}

long commutation_phase_exponent(const Bicharacter& bc, const ExponentWord& g,
                                const ExponentWord& h) {
  const long n = bc.modulus();
  const std::size_t len = std::max(g.exp.size(), h.exp.size());
  long acc = 0;
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = i + 1; j < len; ++j) {
      const long gi = i < g.exp.size() ? g.exp[i] : 0;
      const long gj = j < g.exp.size() ? g.exp[j] : 0;
      const long hi = i < h.exp.size() ? h.exp[i] : 0;
      const long hj = j < h.exp.size() ? h.exp[j] : 0;
      acc = modn::normalize(
          acc + bc.e(static_cast<long>(i + 1), static_cast<long>(j + 1)) *
                    (gi * hj - gj * hi),
          n);
    }
  return acc;
}

Complex trace(const TwistedElement& a) {
  auto it = a.terms().find(ExponentWord{});
  return it == a.terms().end() ? Complex(0, 0) : it->second;
}

namespace {

modn::Mat constraint_rows(const Bicharacter& bc, long support, long t_lo, long t_hi) {
  modn::Mat rows;
  for (long t = t_lo; t <= t_hi; ++t) {
    modn::Vec row(support);
    bool nonzero = false;
    for (long i = 1; i <= support; ++i) {
      row[i - 1] = modn::normalize(bc.e(i, t), bc.modulus());
      if (row[i - 1] != 0) nonzero = true;
    }
    if (nonzero) rows.push_back(std::move(row));
  }
  return rows;
}

SolverResult solve_window(const Bicharacter& bc, long shift_step, long k, long m,
                          long t_hi) {
  if (shift_step < 1 || k < 0) throw std::invalid_argument("solver: bad shift data");
  const long t_lo = shift_step * k + 1;
  SolverResult res;
  res.modulus = bc.modulus();
  res.truncation = m;
  res.constraint_lo = t_lo;
  res.constraint_hi = t_hi;
  res.basis = modn::kernel(constraint_rows(bc, m, t_lo, t_hi), m, bc.modulus());
  res.subgroup_order = modn::subgroup_order(res.basis, bc.modulus());
  return res;
}

// Smallest shift-set element whose gaps to both neighbours exceed `width`;
// exists for the unbounded preset because gaps grow without bound.
long isolated_element(const ShiftSet& sset, long width) {
  long bound = std::max<long>(16, 4 * width);
  for (int rounds = 0; rounds < 40; ++rounds) {
    const auto elems = sset.elements_up_to(bound);
    for (std::size_t i = 1; i + 1 < elems.size(); ++i) {
      if (elems[i] - elems[i - 1] > width && elems[i + 1] - elems[i] > width)
        return elems[i];
    }
    bound *= 2;
  }
  throw std::runtime_error("shift set has no isolated element below search bound");
}

}  // namespace

std::string SolverResult::describe_basis() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& row : basis) {
    if (!first) os << ", ";
    first = false;
    bool started = false;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] == 0) continue;
      if (started) os << "+";
      if (row[i] != 1) os << row[i] << "*";
      os << "e" << (i + 1);
      started = true;
    }
    if (!started) os << "0";
  }
  if (first) os << "0";
  return os.str();
}

SolverResult commutant_congruence_solver(const Bicharacter& bc, long shift_step, long k,
                                         long m) {
  if (m <= shift_step * k)
    throw std::invalid_argument("solver: truncation must exceed shift_step*k");
  return solve_window(bc, shift_step, k, m, m);
}

SolverResult stable_solutions(const Bicharacter& bc, long shift_step, long k, long m) {
  if (m <= shift_step * k)
    throw std::invalid_argument("solver: truncation must exceed shift_step*k");
  long horizon = m;
  switch (bc.kind()) {
    case Bicharacter::Kind::Zero:
      horizon = m;
      break;
    case Bicharacter::Kind::Explicit:
      horizon = std::max(m, bc.extent());
      break;
    case Bicharacter::Kind::BuresYin: {
      const long width = (m + 1) / 2;
      if (bc.sset().unbounded()) {
        horizon = 2 * (width + isolated_element(bc.sset(), width)) + 2;
      } else {
        horizon = m + 2 * bc.sset().max_element() + 2;
      }
      break;
    }
    case Bicharacter::Kind::Stream: {
      if (bc.sset().unbounded()) {
        horizon = m + isolated_element(bc.sset(), m) + 1;
      } else {
        horizon = m + bc.sset().max_element() + 1;
      }
      break;
    }
  }
  SolverResult res = solve_window(bc, shift_step, k, m, std::max(horizon, m));
  res.truncation = m;
  return res;
}

std::optional<Definition1Witness> check_definition1(const Bicharacter& bc,
                                                    const std::vector<long>& Q,
                                                    const std::vector<long>& S,
                                                    long k_bound) {
  const long n = bc.modulus();
  if (Q.size() != S.size() || Q.empty())
    throw std::invalid_argument("check_definition1: Q and S must be equal-length, nonempty");
  for (std::size_t l = 0; l < Q.size(); ++l) {
    if (Q[l] < 0 || (l > 0 && Q[l] <= Q[l - 1]))
      throw std::invalid_argument("check_definition1: indices must satisfy 0 <= i(1) < i(2) < ...");
    if (S[l] < 1 || S[l] > n - 1)
      throw std::invalid_argument("check_definition1: exponents must lie in 1..n-1");
  }
  for (long k = 0; k <= k_bound; ++k) {
    long acc = 0;
    for (std::size_t l = 0; l < Q.size(); ++l)
      acc = modn::normalize(acc + bc.e(k + 1, Q[l] + 1) * S[l], n);
    if (acc != 0) return Definition1Witness{k, acc, phase(acc, n)};
  }
  return std::nullopt;
}

std::vector<GenPerm> matrix_realization(const Bicharacter& bc, long m, Index ambient_cap) {
  const long n = bc.modulus();
  if (m < 1) throw std::invalid_argument("matrix_realization: truncation must be >= 1");
  std::vector<Index> strides(m + 1);
  strides[0] = 1;
  for (long t = 1; t <= m; ++t) {
    strides[t] = strides[t - 1] * n;
    if (strides[t] > ambient_cap)
      throw std::invalid_argument("matrix_realization: ambient n^m exceeds cap");
  }
  const Index N = strides[m];

  // Basis words indexed mixed-radix, index 1 least significant.
  auto digit = [&strides, n](Index h, long pos) {
    return static_cast<long>(h / strides[pos]) % n;
  };
  std::vector<GenPerm> out;
  for (long i = 1; i <= m; ++i) {
    GenPerm U;
    U.perm.resize(N);
    U.phase.resize(N);
    const Index stride = strides[i - 1];
    for (Index h = 0; h < N; ++h) {
      // u_i u^h: normal-ordering phase Σ_{j<i} e(i,j) h_j.
      long ph = 0;
      for (long j = 1; j < i; ++j)
        ph = modn::normalize(ph + bc.e(i, j) * digit(h, j - 1), n);
      const long hi = digit(h, i - 1);
      const Index target = h + static_cast<Index>((hi + 1) % n - hi) * stride;
      U.perm[h] = target;
      U.phase[h] = phase(ph, n);
    }
    out.push_back(std::move(U));
  }
  return out;
}

MatrixC realize_dense(const Bicharacter& bc, const TwistedElement& a, long m) {
  std::vector<GenPerm> gens = matrix_realization(bc, m);
  const Index N = gens[0].dim();
  MatrixC acc = MatrixC::Zero(N, N);
  for (const auto& [g, c] : a.terms()) {
    if (static_cast<long>(g.exp.size()) > m)
      throw std::invalid_argument("realize_dense: word exceeds truncation");
    GenPerm word = GenPerm::identity(N);
    for (std::size_t i = g.exp.size(); i-- > 0;) {
      for (long t = 0; t < g.exp[i]; ++t) word = gens[i] * word;
    }
    acc += c * word.dense();
  }
  return acc;
}

}  // namespace shiftlab
