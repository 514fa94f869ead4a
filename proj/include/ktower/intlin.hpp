#pragma once

// Exact integer linear algebra over arbitrary-precision integers.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ktower {

using BigInt = mpz_class;

/// Dense row-major matrix of arbitrary-precision integers.
///
/// Zero-dimensional shapes (0 x c, r x 0) are valid and show up routinely as
/// presentations of trivial groups and maps out of / into them.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  /// Throws MalformedInput unless entries.size() == rows * cols.
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<BigInt> entries);
  /// Small literal matrices, mostly for tests: {{1, 2}, {3, 4}}.
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix diagonal(std::size_t rows, std::size_t cols, std::span<const BigInt> diag);
  static IntMatrix from_rows(const std::vector<std::vector<BigInt>>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const BigInt> entries() const { return entries_; }

  BigInt& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  bool is_zero() const;
  IntMatrix transpose() const;
  IntMatrix column_block(std::size_t first, std::size_t count) const;
  IntMatrix row_block(std::size_t first, std::size_t count) const;
  std::vector<BigInt> column(std::size_t j) const;

  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);
  /// row[dst] += k * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const BigInt& k);
  /// col[dst] += k * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const BigInt& k);
  void negate_row(std::size_t i);
  void negate_col(std::size_t j);

  std::string to_string() const;

  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> entries_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator*(const BigInt& k, const IntMatrix& a);
IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b);
IntMatrix vconcat(const IntMatrix& a, const IntMatrix& b);

/// u * a * v == s with u, v unimodular and s diagonal in Smith form.
///
/// `factors` is the full diagonal of s (length min(rows, cols)), normalized
/// nonnegative; units are kept so that u * a * v == s holds literally.
/// u_inv and v_inv are carried along for change-of-basis transport.
struct SmithDecomposition {
  IntMatrix u;
  IntMatrix s;
  IntMatrix v;
  IntMatrix u_inv;
  IntMatrix v_inv;
  std::vector<BigInt> factors;

  std::size_t rank() const;
  std::vector<BigInt> nonzero_factors() const;
};

/// Smith normal form by elimination with a smallest-nonzero pivot.
SmithDecomposition snf(const IntMatrix& a);

inline constexpr std::size_t kMinorOracleLimit = 6;

/// Invariant factors computed purely from gcds of k x k minors:
/// d_k = g_k / g_{k-1}, g_0 = 1. Only the nonzero factors are returned.
/// Throws OracleLimitExceeded when min(rows, cols) > limit.
std::vector<BigInt> minor_gcd_factors(const IntMatrix& a, std::size_t limit = kMinorOracleLimit);

/// Some integer X with a * X == b, or nullopt when none exists.
std::optional<IntMatrix> solve_integral(const IntMatrix& a, const IntMatrix& b);

/// Columns form a Z-basis of {x : a * x == 0}.
IntMatrix kernel_basis(const IntMatrix& a);

/// Fraction-free (Bareiss) determinant of a square matrix.
BigInt determinant(const IntMatrix& a);

/// Smith diagonal of diag(d_1, ..., d_k): units kept, zeros last, each nonzero
/// entry dividing the next. Specialised for diagonal input so long lists of
/// cyclic orders canonicalise in O(k^2) gcds instead of a dense elimination.
std::vector<BigInt> diagonal_invariant_factors(std::vector<BigInt> diag);

BigInt lcm(const BigInt& a, const BigInt& b);

}  // namespace ktower
