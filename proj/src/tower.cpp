#include "shiftlab/tower.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shiftlab/groupshift.hpp"

namespace shiftlab {

// ---------------------------------------------------------------------------
// ShiftSet

ShiftSet ShiftSet::triangular_preset() {
  ShiftSet s;
  s.kind_ = Kind::Triangular;
  return s;
}

ShiftSet ShiftSet::explicit_set(std::vector<long> elems) {
  if (!validate_shift_set(elems))
    throw std::invalid_argument(
        "ShiftSet: elements must be positive, strictly increasing, with strictly "
        "increasing gaps");
  ShiftSet s;
  s.kind_ = Kind::Explicit;
  s.elems_ = std::move(elems);
  return s;
}

bool ShiftSet::contains(long d) const {
  if (d < 1) return false;
  if (kind_ == Kind::Triangular) {
    // d = l(l+1)/2 iff 8d+1 is an odd perfect square.
    const long long disc = 8ll * d + 1;
    const long long root = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(disc))));
    for (long long r = std::max(0ll, root - 2); r <= root + 2; ++r)
      if (r * r == disc) return true;
    return false;
  }
  return std::binary_search(elems_.begin(), elems_.end(), d);
}

std::vector<long> ShiftSet::elements_up_to(long bound) const {
  std::vector<long> out;
  if (kind_ == Kind::Triangular) {
    for (long l = 1;; ++l) {
      const long t = l * (l + 1) / 2;
      if (t > bound) break;
      out.push_back(t);
    }
    return out;
  }
  for (long e : elems_) {
    if (e > bound) break;
    out.push_back(e);
  }
  return out;
}

long ShiftSet::max_element() const {
  if (kind_ == Kind::Triangular)
    throw std::logic_error("ShiftSet: the triangular preset is unbounded");
  return elems_.empty() ? 0 : elems_.back();
}

std::string ShiftSet::to_string() const {
  if (kind_ == Kind::Triangular) return "triangular";
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (i) os << ",";
    os << elems_[i];
  }
  os << "}";
  return os.str();
}

bool ShiftSet::operator==(const ShiftSet& o) const {
  return kind_ == o.kind_ && elems_ == o.elems_;
}

ShiftSet triangular_set(int count) {
  if (count < 1) throw std::invalid_argument("triangular_set: count must be >= 1");
  std::vector<long> elems;
  for (long l = 1; l <= count; ++l) elems.push_back(l * (l + 1) / 2);
  return ShiftSet::explicit_set(std::move(elems));
}

bool validate_shift_set(const std::vector<long>& elements) {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i] < 1) return false;
    if (i > 0 && elements[i] <= elements[i - 1]) return false;
  }
  for (std::size_t i = 2; i < elements.size(); ++i)
    if (elements[i] - elements[i - 1] <= elements[i - 1] - elements[i - 2]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Tower construction

namespace {

Index checked_power(Index base, Index exp, Index cap, const char* what) {
  Index v = 1;
  for (Index t = 0; t < exp; ++t) {
    v *= base;
    if (v > cap) {
      std::ostringstream os;
      os << what << ": ambient dimension " << base << "^" << exp << " exceeds cap " << cap;
      throw ResourceCapError(os.str());
    }
  }
  return v;
}

GenPerm embed_at_slot(const GenPerm& x, Index slot, Index depth, Index n) {
  GenPerm out = GenPerm::identity(1);
  for (Index l = 1; l <= depth; ++l)
    out = kron(out, l == slot ? x : GenPerm::identity(n));
  return out;
}

}  // namespace

Tower build_tower(const AlgebraSpec& spec, Index k, const ShiftSet& sset,
                  Index ambient_cap) {
  validate_spec(spec);
  if (k < 1) throw std::invalid_argument("build_tower: depth must be >= 1");
  Tower t;
  t.spec = spec;
  t.sset = sset;
  t.depth = k;
  const Index n = spec.n();
  t.ambient = checked_power(n, k, ambient_cap, "build_tower");
  t.base = build_generators(spec);

  for (Index l = 1; l <= k; ++l) {
    // r_l = w^{b_1} ⊗ ... ⊗ w^{b_{l-1}} ⊗ r ⊗ 1 ⊗ ... , b_m = [l-m in sset].
    GenPerm rl = GenPerm::identity(1);
    for (Index m = 1; m < l; ++m) {
      const bool twist = sset.contains(static_cast<long>(l - m));
      rl = kron(rl, twist ? t.base.w : GenPerm::identity(n));
    }
    rl = kron(rl, t.base.r);
    for (Index m = l + 1; m <= k; ++m) rl = kron(rl, GenPerm::identity(n));
    t.r_.push_back(rl);
    t.s_.push_back(rl * rl.adjoint());
    t.w_.push_back(embed_at_slot(t.base.w, l, k, n));
  }
  return t;
}

std::vector<GenPerm> Tower::level_A_units(Index l) const {
  const Index n = spec.n();
  std::vector<GenPerm> out;
  for (Index i = 0; i < spec.j(); ++i) {
    const Index a = spec.blocks[i];
    const Index off = spec.block_offset(i);
    for (Index x = 0; x < a; ++x)
      for (Index y = 0; y < a; ++y)
        out.push_back(embed_at_slot(GenPerm::unit(n, off + x, off + y), l, depth, n));
  }
  return out;
}

std::vector<MatrixC> Tower::level_A_units_dense(Index l) const {
  std::vector<MatrixC> out;
  for (const auto& g : level_A_units(l)) out.push_back(g.dense());
  return out;
}

HSBasis Tower::level_A_basis(Index l) const {
  HSBasis b;
  b.ambient_dim = ambient;
  const double scale = std::sqrt(static_cast<double>(ambient));
  for (const auto& g : level_A_units(l)) b.vecs.push_back(scale * g.dense());
  return b;
}

std::vector<MatrixC> Tower::level_generators_dense(Index l) const {
  std::vector<MatrixC> out = level_A_units_dense(l);
  out.push_back(r(l).dense());
  return out;
}

// ---------------------------------------------------------------------------
// Relation verification

namespace {

double commutator_dev(const GenPerm& a, const GenPerm& b) {
  return max_abs_diff(a * b, b * a);
}

// Diagonal of a GenPerm whose permutation part is the identity.
std::vector<Complex> diagonal_of(const GenPerm& g) {
  for (Index j = 0; j < g.dim(); ++j)
    if (std::abs(g.phase[j]) > 1e-14 && g.perm[j] != j)
      throw std::logic_error("diagonal_of: matrix is not diagonal");
  return g.phase;
}

}  // namespace

TowerVerification verify_tower_relations(const Tower& t, const TowerVerifyOptions& opts) {
  TowerVerification out;
  RelationReport& rep = out.report;
  const double tol = opts.tol;
  const Index k = t.depth;
  const Index n = t.spec.n();
  const Index j = t.spec.j();
  const Complex gamma = t.spec.gamma();

  std::vector<std::vector<GenPerm>> units(k);
  for (Index l = 1; l <= k; ++l) units[l - 1] = t.level_A_units(l);

  {
    double dev = 0.0;
    for (Index l = 1; l <= k; ++l)
      for (Index m = l + 1; m <= k; ++m)
        for (const auto& a : units[l - 1])
          for (const auto& b : units[m - 1]) dev = std::max(dev, commutator_dev(a, b));
    rep.add_deviation("[A_l, A_m] = 0 (l != m)", dev, tol);
  }
  {
    double dev = 0.0;
    for (Index l = 1; l <= k; ++l)
      for (Index m = 1; m <= k; ++m) {
        if (l == m) continue;
        for (const auto& a : units[m - 1]) dev = std::max(dev, commutator_dev(t.r(l), a));
      }
    rep.add_deviation("[r_l, A_m] = 0 (l != m)", dev, tol);
  }
  {
    // s_l commutes with every other level's copy of A and with all r_m
    // (including its own level, where s_l = r_l r_l*).
    double dev = 0.0;
    for (Index l = 1; l <= k; ++l)
      for (Index m = 1; m <= k; ++m) {
        if (m != l)
          for (const auto& a : units[m - 1]) dev = std::max(dev, commutator_dev(t.s(l), a));
        dev = std::max(dev, commutator_dev(t.s(l), t.r(m)));
      }
    rep.add_deviation("[s_l, A_m] = 0 (l != m), [s_l, r_m] = 0", dev, tol);
  }
  {
    // r_l r_m = gamma^{chi(l-m)} r_m r_l with chi the sset indicator.
    double dev = 0.0;
    for (Index m = 1; m <= k; ++m)
      for (Index l = m + 1; l <= k; ++l) {
        const bool anti = t.sset.contains(static_cast<long>(l - m));
        const Complex ph = anti ? gamma : Complex(1, 0);
        dev = std::max(dev, deviation_from_scaled(t.r(l) * t.r(m), t.r(m) * t.r(l), ph));
      }
    rep.add_deviation("phase pattern r_l r_m", dev, tol);
  }
  {
    double dev = 0.0;
    for (Index l = 1; l <= k; ++l) {
      dev = std::max(dev, max_abs_diff(t.r(l) * t.r(l).adjoint(), t.s(l)));
      dev = std::max(dev, max_abs_diff(t.r(l).adjoint() * t.r(l), t.s(l)));
      dev = std::max(dev, max_abs_diff(t.r(l).pow(j), t.s(l)));
    }
    rep.add_deviation("r_l r_l* = r_l* r_l = r_l^j = s_l", dev, tol);
  }
  {
    double dev = 0.0;
    const double expected = static_cast<double>(j) / static_cast<double>(n);
    for (Index l = 1; l <= k; ++l)
      dev = std::max(dev, std::abs(normalized_trace(t.s(l)) - Complex(expected, 0)));
    rep.add_deviation("tau(s_l) = j/n", dev, tol);
  }
  {
    double dev = 0.0;
    for (Index l = 1; l <= k; ++l) {
      for (const auto& a : units[l - 1]) dev = std::max(dev, commutator_dev(t.w(l), a));
      dev = std::max(dev, deviation_from_scaled(t.w(l) * t.r(l) * t.w(l).adjoint(),
                                                t.r(l), gamma));
    }
    rep.add_deviation("w_l central on A_l, Ad w_l(r_l) = gamma r_l", dev, tol);
  }
  {
    // Corrected averaging: (1/j) Σ_{m=0}^{j-1} r^m (r*)^m = (1/j)(1 + (j-1)s).
    // The uncorrected display equates the average with s itself and holds
    // only when s = 1.
    double dev = 0.0, plain_dev = 0.0;
    for (Index l = 1; l <= k; ++l) {
      std::vector<Complex> avg(t.ambient, Complex(0, 0));
      for (Index m = 0; m < j; ++m) {
        const GenPerm term = t.r(l).pow(m) * t.r(l).adjoint().pow(m);
        const auto diag = diagonal_of(term);
        for (Index i = 0; i < t.ambient; ++i) avg[i] += diag[i];
      }
      const auto sdiag = diagonal_of(t.s(l));
      for (Index i = 0; i < t.ambient; ++i) {
        const Complex lhs = avg[i] / static_cast<double>(j);
        const Complex rhs =
            (Complex(1, 0) + static_cast<double>(j - 1) * sdiag[i]) / static_cast<double>(j);
        dev = std::max(dev, std::abs(lhs - rhs));
        plain_dev = std::max(plain_dev, std::abs(lhs - sdiag[i]));
      }
    }
    rep.add_deviation("averaging identity (corrected)", dev, tol);
    out.uncorrected_averaging_deviation = plain_dev;
  }
  {
    // Conjugation: r_l^m r_{l'}^c (r_l*)^m = gamma^{cm} r_{l'}^c s_l for
    // |l-l'| in sset, m,c in 1..j-1.  At m=0 the display would need s_l = 1.
    double dev = 0.0, plain_m0 = 0.0;
    for (Index l = 1; l <= k; ++l)
      for (Index lp = 1; lp <= k; ++lp) {
        if (l == lp || !t.sset.contains(std::labs(static_cast<long>(l - lp)))) continue;
        for (Index c = 1; c < std::max<Index>(j, 2); ++c) {
          const GenPerm rc = t.r(lp).pow(c);
          plain_m0 = std::max(plain_m0, max_abs_diff(rc, rc * t.s(l)));
          for (Index m = 1; m < std::max<Index>(j, 2); ++m) {
            const GenPerm lhs = t.r(l).pow(m) * rc * t.r(l).adjoint().pow(m);
            Complex ph(1, 0);
            // gamma^{cm} when l > l' (the higher level conjugates), inverse
            // phase the other way around.
            const long expnt = static_cast<long>(c) * static_cast<long>(m);
            ph = std::pow(gamma, static_cast<double>(l > lp ? expnt : -expnt));
            dev = std::max(dev, deviation_from_scaled(lhs, rc * t.s(l), ph));
          }
        }
      }
    rep.add_deviation("conjugation identity (m >= 1)", dev, tol);
    out.uncorrected_m0_deviation = plain_m0;
  }
  out.uncorrected_displays_hold = out.uncorrected_averaging_deviation <= tol &&
                            out.uncorrected_m0_deviation <= tol;

  // Dense span checks.
  if (t.ambient <= opts.dense_cap) {
    std::vector<HSBasis> level_algebras;
    {
      double dev = 0.0;
      bool ok = true;
      for (Index l = 1; l <= k; ++l) {
        Subalgebra alg = generate_algebra(t.level_generators_dense(l), t.ambient);
        ok = ok && alg.dim() == n * n;
        dev = std::max(dev, std::abs(static_cast<double>(alg.dim() - n * n)));
        level_algebras.push_back(alg.basis);
      }
      rep.add("<A_l, r_l> = M_n per level", ok, dev);
    }
    std::vector<MatrixC> words;
    {
      // Level-ordered words: their span must be all of ⊗^k M_n, which
      // settles both the generated-algebra dimension n^{2k} and the word
      // decomposition.
      words.push_back(identity(t.ambient));
      for (Index l = 0; l < k; ++l) {
        std::vector<MatrixC> next;
        next.reserve(words.size() * level_algebras[l].vecs.size());
        for (const auto& w : words)
          for (const auto& x : level_algebras[l].vecs) next.push_back(w * x);
        words = std::move(next);
      }
      const Index dim = orthonormalize_span(words, kRankTol).size();
      const Index expect = t.ambient * t.ambient;
      rep.add("dim M_k = n^{2k}", dim == expect,
              std::abs(static_cast<double>(dim - expect)),
              "measured " + std::to_string(dim));
      rep.add("level-ordered words span M_k", dim == expect,
              std::abs(static_cast<double>(dim - expect)));
    }
    {
      // Reordering containment (A_l r_l + A_l)(A_i r_i + A_i) ⊆ reversed.
      double dev = 0.0;
      for (Index i = 1; i <= k; ++i)
        for (Index l = i + 1; l <= k; ++l) {
          std::vector<MatrixC> low, high;
          for (const auto& a : units[i - 1]) {
            low.push_back(a.dense());
            low.push_back((a * t.r(i)).dense());
          }
          for (const auto& a : units[l - 1]) {
            high.push_back(a.dense());
            high.push_back((a * t.r(l)).dense());
          }
          std::vector<MatrixC> lhs, rhs;
          for (const auto& x : high)
            for (const auto& y : low) lhs.push_back(x * y);
          for (const auto& y : low)
            for (const auto& x : high) rhs.push_back(y * x);
          HSBasis rhs_basis = orthonormalize_span(rhs, kRankTol);
          for (const auto& x : lhs) {
            const double nx = hs_norm(x);
            if (nx > 1e-14) dev = std::max(dev, rhs_basis.residual(x) / nx);
          }
        }
      rep.add_deviation("reordering containment of level words", dev, 1e-9);
    }
    if (opts.with_center_check && t.ambient <= 32) {
      // Unique trace at this stage: the algebra is a factor.
      Subalgebra full = span_subalgebra(words, true);
      Subalgebra z = center(full);
      rep.add("center of M_k is trivial", z.dim() == 1,
              std::abs(static_cast<double>(z.dim() - 1)));
    }
  }
  return out;
}

Index tensor_independence_check(const Tower& t, Index k) {
  if (k < 1 || k > t.depth)
    throw std::invalid_argument("tensor_independence_check: level out of range");
  std::vector<GenPerm> words;
  words.push_back(GenPerm::identity(t.ambient));
  for (Index l = 1; l <= k; ++l) {
    std::vector<GenPerm> next;
    const auto units = t.level_A_units(l);
    next.reserve(words.size() * units.size());
    for (const auto& w : words)
      for (const auto& x : units) next.push_back(w * x);
    words = std::move(next);
  }
  std::vector<MatrixC> dense;
  dense.reserve(words.size());
  for (const auto& w : words) dense.push_back(w.dense());
  return orthonormalize_span(dense, kRankTol).size();
}

// ---------------------------------------------------------------------------
// Shift correspondence

GeneratorCorrespondence shift_map(const Tower& from, const Tower& to, int word_length,
                                  double tol) {
  if (!(from.spec.blocks == to.spec.blocks) || !(from.sset == to.sset))
    throw std::invalid_argument("shift_map: towers disagree on spec or shift set");
  if (to.depth != from.depth + 1)
    throw std::invalid_argument("shift_map: target tower must be one level deeper");

  // Letter alphabet: all A_l units, r_l and r_l* for l <= depth(from);
  // images are the level-(l+1) counterparts.
  std::vector<GenPerm> letters, images;
  for (Index l = 1; l <= from.depth; ++l) {
    const auto u_from = from.level_A_units(l);
    const auto u_to = to.level_A_units(l + 1);
    for (std::size_t i = 0; i < u_from.size(); ++i) {
      letters.push_back(u_from[i]);
      images.push_back(u_to[i]);
    }
    letters.push_back(from.r(l));
    images.push_back(to.r(l + 1));
    letters.push_back(from.r(l).adjoint());
    images.push_back(to.r(l + 1).adjoint());
  }

  GeneratorCorrespondence res;
  const std::size_t alphabet = letters.size();
  // Trace agreement on all words up to the length bound certifies that the
  // letter map extends to a trace-preserving homomorphism of the word span:
  // Gram matrices and structure constants are trace polynomials in words.
  std::vector<std::pair<GenPerm, GenPerm>> frontier;
  frontier.emplace_back(GenPerm::identity(from.ambient), GenPerm::identity(to.ambient));
  const std::size_t word_cap = 60000;
  for (int len = 1; len <= word_length; ++len) {
    std::vector<std::pair<GenPerm, GenPerm>> next;
    if (frontier.size() * alphabet <= word_cap) {
      for (const auto& [w, wi] : frontier)
        for (std::size_t a = 0; a < alphabet; ++a)
          next.emplace_back(w * letters[a], wi * images[a]);
    } else {
      // Deterministic subsample keeping coverage of every letter.
      std::size_t stride = frontier.size() * alphabet / word_cap + 1;
      std::size_t idx = 0;
      for (const auto& [w, wi] : frontier)
        for (std::size_t a = 0; a < alphabet; ++a, ++idx)
          if (idx % stride == 0) next.emplace_back(w * letters[a], wi * images[a]);
    }
    for (const auto& [w, wi] : next) {
      const double dev = std::abs(normalized_trace(w) - normalized_trace(wi));
      res.max_trace_deviation = std::max(res.max_trace_deviation, dev);
      ++res.words_checked;
    }
    frontier = std::move(next);
  }
  res.multiplicative = res.max_trace_deviation <= tol;

  // Phase pattern: image pairs must anticommute exactly when source pairs do.
  bool pattern = true;
  const Complex gamma = from.spec.gamma();
  for (Index m = 1; m <= from.depth; ++m)
    for (Index l = m + 1; l <= from.depth; ++l) {
      const bool anti = from.sset.contains(static_cast<long>(l - m));
      const Complex ph = anti ? gamma : Complex(1, 0);
      const double src =
          deviation_from_scaled(from.r(l) * from.r(m), from.r(m) * from.r(l), ph);
      const double img = deviation_from_scaled(to.r(l + 1) * to.r(m + 1),
                                               to.r(m + 1) * to.r(l + 1), ph);
      if (src > tol || img > tol) pattern = false;
    }
  res.phase_pattern_preserved = pattern;
  return res;
}

// ---------------------------------------------------------------------------
// Commutant experiment

namespace {

BlockStructure tensor_power_blocks(const AlgebraSpec& spec, Index k) {
  std::vector<Index> blocks = {1};
  for (Index t = 0; t < k; ++t) {
    std::vector<Index> next;
    for (Index b : blocks)
      for (Index a : spec.blocks) next.push_back(b * a);
    blocks = std::move(next);
  }
  std::sort(blocks.begin(), blocks.end());
  return BlockStructure{std::move(blocks)};
}

}  // namespace

Index max_feasible_stage(const AlgebraSpec& spec, Index k, const CommutantOptions& opts) {
  Index m = 0;
  Index ambient = 1;
  for (Index t = 0; t < k; ++t) ambient *= spec.n();
  while (true) {
    const Index next = ambient * spec.n();
    if (next > opts.ambient_cap || next * next > opts.nullspace_cap) break;
    ambient = next;
    ++m;
  }
  return m;
}

CommutantReport commutant_experiment(const AlgebraSpec& spec, Index k, Index m_lo,
                                     Index m_hi, const ShiftSet& sset,
                                     const CommutantOptions& opts) {
  if (k < 1 || m_lo < 1 || m_hi < m_lo)
    throw std::invalid_argument("commutant_experiment: bad k or m range");
  {
    Index ambient = 1;
    for (Index t = 0; t < k + m_hi; ++t) ambient *= spec.n();
    if (ambient * ambient > opts.nullspace_cap) {
      std::ostringstream os;
      os << "commutant_experiment: stage m = " << m_hi << " needs " << ambient * ambient
         << " nullspace unknowns, over the cap " << opts.nullspace_cap;
      throw ResourceCapError(os.str());
    }
  }
  CommutantReport report;
  report.spec = spec;
  report.k = k;
  report.tensor_A_blocks = tensor_power_blocks(spec, k);
  const Index dimA = spec.algebra_dim();
  Index expected_dim = 1;
  for (Index t = 0; t < k; ++t) expected_dim *= dimA;

  for (Index m = m_lo; m <= m_hi; ++m) {
    Tower t = build_tower(spec, k + m, sset, opts.ambient_cap);

    std::vector<MatrixC> gens;
    for (Index l = k + 1; l <= k + m; ++l) {
      auto dense = t.level_A_units_dense(l);
      for (auto& d : dense) gens.push_back(std::move(d));
      gens.push_back(t.r(l).dense());
    }
    Subalgebra shifted = generate_algebra(gens, t.ambient, opts.tol);
    Subalgebra comm = relative_commutant(shifted, full_matrix_algebra(t.ambient), opts.tol);

    CommutantCell cell;
    cell.m = m;
    cell.dimension = comm.dim();
    cell.blocks = block_structure(BasisView::of(comm));

    // The span of A_1 ... A_k products must sit inside the commutant.
    bool contains = true;
    {
      std::vector<GenPerm> words;
      words.push_back(GenPerm::identity(t.ambient));
      for (Index l = 1; l <= k; ++l) {
        std::vector<GenPerm> next;
        for (const auto& w : words)
          for (const auto& x : t.level_A_units(l)) next.push_back(w * x);
        words = std::move(next);
      }
      for (const auto& w : words)
        if (!comm.basis.contains(w.dense(), 1e-8)) {
          contains = false;
          break;
        }
    }
    cell.contains_tensor_A = contains;
    cell.converged =
        cell.dimension == expected_dim && cell.blocks == report.tensor_A_blocks;

    if (opts.congruence_cross_check && spec.abelian()) {
      // Abelian specs are exactly the twisted-group picture: level l's pair
      // (w_l, r_l) sits at group indices (2l-1, 2l) with the paired-lane
      // bicharacter, and the shifted copy occupies indices 2k+1..2(k+m).
      Bicharacter bc = Bicharacter::bures_yin(spec.n(), sset);
      SolverResult sols =
          commutant_congruence_solver(bc, 2, k, 2 * static_cast<long>(k + m));
      cell.congruence_dimension = static_cast<Index>(sols.subgroup_order);
    }
    report.cells.push_back(std::move(cell));
  }

  report.dims_nonincreasing = true;
  for (std::size_t i = 1; i < report.cells.size(); ++i)
    if (report.cells[i].dimension > report.cells[i - 1].dimension)
      report.dims_nonincreasing = false;
  return report;
}

}  // namespace shiftlab
