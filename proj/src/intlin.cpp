#include "ktower/intlin.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "ktower/error.hpp"

namespace ktower {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<BigInt> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) {
    throw MalformedInput("matrix: expected " + std::to_string(rows * cols) + " entries for " +
                         std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                         std::to_string(entries_.size()));
  }
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw MalformedInput("matrix: ragged rows");
    for (long x : row) entries_.emplace_back(x);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diagonal(std::size_t rows, std::size_t cols, std::span<const BigInt> diag) {
  if (diag.size() > std::min(rows, cols)) throw MalformedInput("diagonal longer than matrix");
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<BigInt>>& rows, std::size_t cols) {
  std::vector<BigInt> entries;
  entries.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    if (row.size() != cols) throw MalformedInput("matrix: ragged rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return IntMatrix(rows.size(), cols, std::move(entries));
}

bool IntMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const BigInt& x) { return sgn(x) == 0; });
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::column_block(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw MalformedInput("column block out of range");
  IntMatrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
  return out;
}

IntMatrix IntMatrix::row_block(std::size_t first, std::size_t count) const {
  if (first + count > rows_) throw MalformedInput("row block out of range");
  IntMatrix out(count, cols_);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(first + i, j);
  return out;
}

std::vector<BigInt> IntMatrix::column(std::size_t j) const {
  std::vector<BigInt> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const BigInt& k) {
  if (sgn(k) == 0) return;
  for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += k * (*this)(src, c);
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src, const BigInt& k) {
  if (sgn(k) == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += k * (*this)(r, src);
}

void IntMatrix::negate_row(std::size_t i) {
  for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = -(*this)(i, c);
}

void IntMatrix::negate_col(std::size_t j) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, j) = -(*this)(r, j);
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) {
    throw MalformedInput("matrix product: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " times " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const BigInt& x = a(i, k);
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += x * b(k, j);
    }
  return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw MalformedInput("matrix sum: shape mismatch");
  IntMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

IntMatrix operator*(const BigInt& k, const IntMatrix& a) {
  IntMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= k;
  return c;
}

IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw MalformedInput("hconcat: row count mismatch");
  IntMatrix c(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

IntMatrix vconcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) throw MalformedInput("vconcat: column count mismatch");
  IntMatrix c(a.rows() + b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) c(a.rows() + i, j) = b(i, j);
  }
  return c;
}

std::size_t SmithDecomposition::rank() const {
  return static_cast<std::size_t>(
      std::count_if(factors.begin(), factors.end(), [](const BigInt& d) { return sgn(d) != 0; }));
}

std::vector<BigInt> SmithDecomposition::nonzero_factors() const {
  std::vector<BigInt> out;
  for (const auto& d : factors)
    if (sgn(d) != 0) out.push_back(d);
  return out;
}

namespace {

// Working state of the elimination: s is transformed in place while u, v
// and their inverses record every elementary operation.
struct SmithState {
  IntMatrix s, u, v, u_inv, v_inv;

  void swap_rows(std::size_t i, std::size_t j) {
    s.swap_rows(i, j);
    u.swap_rows(i, j);
    u_inv.swap_cols(i, j);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    s.swap_cols(i, j);
    v.swap_cols(i, j);
    v_inv.swap_rows(i, j);
  }
  // row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const BigInt& k) {
    s.add_row_multiple(dst, src, k);
    u.add_row_multiple(dst, src, k);
    u_inv.add_col_multiple(src, dst, -k);
  }
  // col[dst] += k * col[src]
  void add_col(std::size_t dst, std::size_t src, const BigInt& k) {
    s.add_col_multiple(dst, src, k);
    v.add_col_multiple(dst, src, k);
    v_inv.add_row_multiple(src, dst, -k);
  }
  void negate_row(std::size_t i) {
    s.negate_row(i);
    u.negate_row(i);
    u_inv.negate_col(i);
  }
};

bool abs_less(const BigInt& a, const BigInt& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0; }

}  // namespace

SmithDecomposition snf(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  SmithState st{a, IntMatrix::identity(m), IntMatrix::identity(n), IntMatrix::identity(m),
                IntMatrix::identity(n)};
  IntMatrix& s = st.s;
  const std::size_t diag = std::min(m, n);

  for (std::size_t t = 0; t < diag; ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    std::size_t pi = m, pj = n;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (sgn(s(i, j)) != 0 && (pi == m || abs_less(s(i, j), s(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == m) break;  // trailing block is zero
    st.swap_rows(t, pi);
    st.swap_cols(t, pj);

    for (;;) {
      bool residue = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(s(i, t)) == 0) continue;
        BigInt q = s(i, t) / s(t, t);
        st.add_row(i, t, -q);
        if (sgn(s(i, t)) != 0) residue = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(s(t, j)) == 0) continue;
        BigInt q = s(t, j) / s(t, t);
        st.add_col(j, t, -q);
        if (sgn(s(t, j)) != 0) residue = true;
      }
      if (residue) {
        // A remainder smaller than the pivot survived; promote it.
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (sgn(s(i, t)) != 0 && abs_less(s(i, t), s(bi, bj))) {
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < n; ++j)
          if (sgn(s(t, j)) != 0 && abs_less(s(t, j), s(bi, bj))) {
            bi = t;
            bj = j;
          }
        st.swap_rows(t, bi);
        st.swap_cols(t, bj);
        continue;
      }
      // Row and column are clear; the pivot must divide the trailing block.
      std::size_t bad_row = m;
      for (std::size_t i = t + 1; i < m && bad_row == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(s(i, j).get_mpz_t(), s(t, t).get_mpz_t())) {
            bad_row = i;
            break;
          }
      if (bad_row == m) break;
      st.add_row(t, bad_row, 1);
    }
    if (sgn(s(t, t)) < 0) st.negate_row(t);
  }

  SmithDecomposition out;
  out.factors.reserve(diag);
  for (std::size_t i = 0; i < diag; ++i) out.factors.push_back(s(i, i));
  out.u = std::move(st.u);
  out.s = std::move(st.s);
  out.v = std::move(st.v);
  out.u_inv = std::move(st.u_inv);
  out.v_inv = std::move(st.v_inv);
  return out;
}

namespace {

// Cofactor expansion along the first selected row; independent of any
// elimination so it can serve as an oracle.
BigInt laplace_det(const IntMatrix& a, std::span<const std::size_t> rows,
                   std::vector<std::size_t>& cols) {
  const std::size_t k = rows.size();
  if (k == 0) return 1;
  if (k == 1) return a(rows[0], cols[0]);
  BigInt total = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const BigInt& x = a(rows[0], cols[c]);
    if (sgn(x) == 0) continue;
    std::vector<std::size_t> rest;
    rest.reserve(k - 1);
    for (std::size_t d = 0; d < k; ++d)
      if (d != c) rest.push_back(cols[d]);
    BigInt minor = laplace_det(a, rows.subspan(1), rest);
    if (c % 2 == 0)
      total += x * minor;
    else
      total -= x * minor;
  }
  return total;
}

// Calls fn for every k-subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<BigInt> minor_gcd_factors(const IntMatrix& a, std::size_t limit) {
  const std::size_t kmax = std::min(a.rows(), a.cols());
  if (kmax > limit) {
    throw OracleLimitExceeded("minor oracle: min dimension " + std::to_string(kmax) +
                              " exceeds limit " + std::to_string(limit) + "; use snf");
  }
  std::vector<BigInt> out;
  BigInt prev = 1;
  for (std::size_t k = 1; k <= kmax; ++k) {
    BigInt g = 0;
    for_each_subset(a.rows(), k, [&](const std::vector<std::size_t>& rows) {
      for_each_subset(a.cols(), k, [&](const std::vector<std::size_t>& cols) {
        std::vector<std::size_t> c = cols;
        BigInt d = laplace_det(a, rows, c);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      });
    });
    if (sgn(g) == 0) break;  // every larger minor vanishes as well
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

std::optional<IntMatrix> solve_integral(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) {
    throw MalformedInput("solve_integral: a has " + std::to_string(a.rows()) + " rows, b has " +
                         std::to_string(b.rows()));
  }
  const SmithDecomposition d = snf(a);
  const IntMatrix c = d.u * b;
  const std::size_t r = d.rank();
  IntMatrix y(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < r; ++i) {
      if (!mpz_divisible_p(c(i, j).get_mpz_t(), d.factors[i].get_mpz_t())) return std::nullopt;
      mpz_divexact(y(i, j).get_mpz_t(), c(i, j).get_mpz_t(), d.factors[i].get_mpz_t());
    }
    for (std::size_t i = r; i < a.rows(); ++i)
      if (sgn(c(i, j)) != 0) return std::nullopt;
  }
  return d.v * y;
}

IntMatrix kernel_basis(const IntMatrix& a) {
  const SmithDecomposition d = snf(a);
  const std::size_t r = d.rank();
  return d.v.column_block(r, a.cols() - r);
}

BigInt determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw MalformedInput("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(m(p, k)) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

std::vector<BigInt> diagonal_invariant_factors(std::vector<BigInt> diag) {
  std::vector<BigInt> nonzero;
  std::size_t zeros = 0;
  for (auto& d : diag) {
    if (sgn(d) == 0)
      ++zeros;
    else
      nonzero.push_back(abs(d));
  }
  std::sort(nonzero.begin(), nonzero.end());
  bool chain = true;
  for (std::size_t i = 1; i < nonzero.size() && chain; ++i)
    chain = mpz_divisible_p(nonzero[i].get_mpz_t(), nonzero[i - 1].get_mpz_t()) != 0;
  if (!chain) {
    // (a, b) -> (gcd, lcm) preserves the group; after pass i, entry i divides all later ones.
    for (std::size_t i = 0; i < nonzero.size(); ++i)
      for (std::size_t j = i + 1; j < nonzero.size(); ++j) {
        if (mpz_divisible_p(nonzero[j].get_mpz_t(), nonzero[i].get_mpz_t())) continue;
        BigInt g;
        mpz_gcd(g.get_mpz_t(), nonzero[i].get_mpz_t(), nonzero[j].get_mpz_t());
        BigInt l = nonzero[i] / g * nonzero[j];
        nonzero[i] = g;
        nonzero[j] = l;
      }
  }
  nonzero.resize(nonzero.size() + zeros, BigInt(0));
  return nonzero;
}

}  // namespace ktower
