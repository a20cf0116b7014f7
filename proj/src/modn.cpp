#include "shiftlab/modn.hpp"

#include <numeric>
#include <stdexcept>

namespace shiftlab::modn {

namespace {

void check_range(long long x) {
  if (x > (1ll << 62) || x < -(1ll << 62))
    throw std::overflow_error("modn: intermediate value overflow");
}

// g = gcd(a,b) = ua + vb.
long long ext_gcd(long long a, long long b, long long& u, long long& v) {
  if (b == 0) {
    u = (a >= 0) ? 1 : -1;
    v = 0;
    return a >= 0 ? a : -a;
  }
  long long u1, v1;
  const long long g = ext_gcd(b, a % b, u1, v1);
  u = v1;
  v = u1 - (a / b) * v1;
  return g;
}

long long inv_mod(long long a, long long n) {
  long long u, v;
  const long long g = ext_gcd(((a % n) + n) % n, n, u, v);
  if (g != 1) throw std::invalid_argument("modn: element not invertible");
  return ((u % n) + n) % n;
}

// Unit u of Z_n with a ≡ u · gcd(a, n) (mod n).
long unit_for(long a, long n) {
  a = normalize(a, n);
  if (a == 0) return 1;
  const long g = std::gcd(static_cast<long long>(a), static_cast<long long>(n));
  // a/g is invertible mod n/g; one of its lifts by multiples of n/g is a
  // unit mod n.
  long u = normalize(a / g, n);
  const long step = n / g;
  for (long t = 0; t < g; ++t) {
    if (std::gcd(static_cast<long long>(u), static_cast<long long>(n)) == 1)
      return normalize(u, n);
    u += step;
  }
  throw std::logic_error("modn: unit lift not found");
}

}  // namespace

long normalize(long x, long n) {
  long r = x % n;
  if (r < 0) r += n;
  return r;
}

Mat howell_form(Mat m, long cols, long n) {
  for (auto& row : m) {
    row.resize(cols, 0);
    for (auto& x : row) x = normalize(x, n);
  }

  Mat out;
  std::vector<Vec> work = std::move(m);
  for (long c = 0; c < cols; ++c) {
    // Combine all working rows with support starting at column c into one
    // pivot row carrying the gcd, via extended-euclid row operations.
    std::vector<Vec> next;
    Vec pivot;
    for (auto& row : work) {
      bool earlier_support = false;
      for (long t = 0; t < c; ++t)
        if (row[t] != 0) earlier_support = true;
      if (earlier_support)
        throw std::logic_error("howell_form: unreduced earlier column");
      if (row[c] == 0) {
        next.push_back(std::move(row));
        continue;
      }
      if (pivot.empty()) {
        pivot = std::move(row);
        continue;
      }
      long long u, v;
      const long long g = ext_gcd(pivot[c], row[c], u, v);
      const long long pc = pivot[c] / g, rc = row[c] / g;
      Vec combined(cols), reduced(cols);
      for (long t = 0; t < cols; ++t) {
        const long long a = pivot[t], b = row[t];
        check_range(u * a + v * b);
        combined[t] = normalize(static_cast<long>(((u * a + v * b) % n + n) % n), n);
        check_range(rc * a - pc * b);
        reduced[t] = normalize(static_cast<long>(((rc * a - pc * b) % n + n) % n), n);
      }
      pivot = std::move(combined);  // leading entry gcd at column c
      if (reduced[c] != 0) throw std::logic_error("howell_form: elimination failed");
      next.push_back(std::move(reduced));
    }
    if (!pivot.empty()) {
      // Normalize the pivot entry to the divisor gcd(pivot_c, n) by a unit.
      const long u = inv_mod(unit_for(pivot[c], n), n);
      for (auto& x : pivot) x = normalize(static_cast<long>((static_cast<long long>(x) * u) % n), n);
      // Howell closure: the annihilator multiple has leading zero at c but
      // may have support further right; feed it back.
      const long g = pivot[c];
      if (g != 0 && n % g == 0 && n / g > 1) {
        Vec ann(cols);
        for (long t = 0; t < cols; ++t)
          ann[t] = normalize(static_cast<long>((static_cast<long long>(pivot[t]) * (n / g)) % n), n);
        if (ann[c] != 0) throw std::logic_error("howell_form: bad annihilator");
        next.push_back(std::move(ann));
      }
      out.push_back(std::move(pivot));
    }
    // Rows in `next` have zero entries up to and including column c.
    work.clear();
    for (auto& row : next) {
      bool zero = true;
      for (long t = 0; t < cols; ++t)
        if (row[t] != 0) zero = false;
      if (!zero) work.push_back(std::move(row));
    }
  }

  // Reduce entries above each pivot modulo the pivot entry.
  for (std::size_t i = out.size(); i-- > 0;) {
    long c = 0;
    while (out[i][c] == 0) ++c;
    const long g = out[i][c];
    for (std::size_t k = 0; k < i; ++k) {
      const long q = out[k][c] / g;
      if (q == 0) continue;
      for (long t = 0; t < cols; ++t)
        out[k][t] = normalize(out[k][t] - q * out[i][t], n);
    }
  }
  return out;
}

namespace {

// Integer kernel of an r x c matrix by unimodular column reduction.
Mat integer_kernel(Mat w, long cols) {
  const long rows = static_cast<long>(w.size());
  Mat v(cols, Vec(cols, 0));
  for (long i = 0; i < cols; ++i) v[i][i] = 1;  // v holds columns as rows

  long pivot_col = 0;
  for (long row = 0; row < rows && pivot_col < cols; ++row) {
    // Clear row `row` across columns >= pivot_col by gcd steps.
    long nonzero = -1;
    for (long c = pivot_col; c < cols; ++c)
      if (w[row][c] != 0) {
        nonzero = c;
        break;
      }
    if (nonzero < 0) continue;
    for (long c = nonzero + 1; c < cols; ++c) {
      while (w[row][c] != 0) {
        const long long q = w[row][nonzero] / w[row][c];
        for (long t = row; t < rows; ++t) {
          check_range(w[t][nonzero] - q * w[t][c]);
          w[t][nonzero] -= static_cast<long>(q * w[t][c]);
        }
        for (long t = 0; t < cols; ++t) {
          check_range(v[nonzero][t] - q * v[c][t]);
          v[nonzero][t] -= static_cast<long>(q * v[c][t]);
        }
        for (long t = row; t < rows; ++t) std::swap(w[t][nonzero], w[t][c]);
        std::swap(v[nonzero], v[c]);
      }
    }
    if (nonzero != pivot_col) {
      for (long t = row; t < rows; ++t) std::swap(w[t][nonzero], w[t][pivot_col]);
      std::swap(v[nonzero], v[pivot_col]);
    }
    ++pivot_col;
  }

  Mat kernel_rows;
  for (long c = 0; c < cols; ++c) {
    bool zero = true;
    for (long r = 0; r < rows; ++r)
      if (w[r][c] != 0) zero = false;
    if (zero) kernel_rows.push_back(v[c]);
  }
  return kernel_rows;
}

}  // namespace

Mat kernel(const Mat& a, long cols, long n) {
  const long rows = static_cast<long>(a.size());
  // Unknowns [x; y] with A x + n y = 0 over Z; x mod n spans the kernel.
  Mat b(rows, Vec(cols + rows, 0));
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols && c < static_cast<long>(a[r].size()); ++c)
      b[r][c] = normalize(a[r][c], n);
    b[r][cols + r] = n;
  }
  Mat integer_solutions = integer_kernel(std::move(b), cols + rows);
  Mat projected;
  for (const auto& sol : integer_solutions) {
    Vec x(cols);
    bool nonzero = false;
    for (long c = 0; c < cols; ++c) {
      x[c] = normalize(sol[c], n);
      if (x[c] != 0) nonzero = true;
    }
    if (nonzero) projected.push_back(std::move(x));
  }
  return howell_form(std::move(projected), cols, n);
}

std::uint64_t subgroup_order(const Mat& howell, long n) {
  std::uint64_t order = 1;
  for (const auto& row : howell) {
    long c = 0;
    while (c < static_cast<long>(row.size()) && row[c] == 0) ++c;
    if (c == static_cast<long>(row.size())) continue;
    order *= static_cast<std::uint64_t>(n / row[c]);
  }
  return order;
}

bool member(const Vec& x, const Mat& howell, long n) {
  Vec rem = x;
  for (auto& e : rem) e = normalize(e, n);
  for (const auto& row : howell) {
    long c = 0;
    while (c < static_cast<long>(row.size()) && row[c] == 0) ++c;
    if (c == static_cast<long>(row.size())) continue;
    const long g = row[c];
    if (rem[c] % g != 0) return false;
    const long q = rem[c] / g;
    for (long t = 0; t < static_cast<long>(rem.size()); ++t)
      rem[t] = normalize(rem[t] - q * row[t], n);
  }
  for (long e : rem)
    if (e != 0) return false;
  return true;
}

Mat intersect(const Mat& gens1, const Mat& gens2, long cols, long n) {
  Mat d1 = kernel(gens1, cols, n);
  Mat d2 = kernel(gens2, cols, n);
  Mat stacked = d1;
  stacked.insert(stacked.end(), d2.begin(), d2.end());
  return kernel(stacked, cols, n);
}

}  // namespace shiftlab::modn
