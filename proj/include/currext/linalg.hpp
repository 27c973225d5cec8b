#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "currext/errors.hpp"
#include "currext/rational.hpp"

// Dense exact linear algebra over Q and Smith normal form over Z. These are
// meant for the small systems met throughout the library (Cartan data, jet
// algebras, weight spaces of irreducible modules); large sparse ranks go
// through sparse_rank.hpp instead.

namespace currext {

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static QMatrix identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Rational> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Rational> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const Rational> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    if (values.size() != cols_) fail(ErrorKind::ComputationError, "row width mismatch");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q == 0; });
  }

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorKind::ComputationError, "matrix product shape mismatch");
    QMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (b(k, j) != 0) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend QMatrix operator-(const QMatrix& a, const QMatrix& b) {
    QMatrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
    return out;
  }

  friend QMatrix operator+(const QMatrix& a, const QMatrix& b) {
    QMatrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
    return out;
  }

  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  QMatrix transposed() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Reduced row echelon form. `pivots[r]` is the pivot column of row r.
/// Columns are visited in `column_order` when given, so callers can steer
/// which columns become pivots (and hence which ones stay free).
struct Echelon {
  QMatrix rref;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

inline Echelon row_reduce(QMatrix m, const std::vector<std::size_t>* column_order = nullptr) {
  std::vector<std::size_t> order;
  if (column_order) {
    order = *column_order;
  } else {
    order.resize(m.cols());
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c : order) {
    if (r == m.rows()) break;
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(r, j) != 0) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(r, j) != 0) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  QMatrix trimmed(r, m.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) trimmed(i, j) = m(i, j);
  return {std::move(trimmed), std::move(pivots)};
}

inline std::size_t rank(const QMatrix& m) { return row_reduce(m).rank(); }

/// Basis of {x : m x = 0}, one vector per free column.
inline std::vector<std::vector<Rational>> nullspace(const QMatrix& m) {
  Echelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : e.pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < e.rank(); ++r) v[e.pivots[r]] = -e.rref(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some x with a x = b, or nullopt when the system is inconsistent.
inline std::optional<std::vector<Rational>> solve(const QMatrix& a, std::span<const Rational> b) {
  QMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  Echelon e = row_reduce(aug);
  std::vector<Rational> x(a.cols());
  for (std::size_t r = 0; r < e.rank(); ++r) {
    if (e.pivots[r] == a.cols()) return std::nullopt;
    x[e.pivots[r]] = e.rref(r, a.cols());
  }
  return x;
}

inline std::optional<QMatrix> inverse(const QMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) return std::nullopt;
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  Echelon e = row_reduce(aug);
  if (e.rank() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.rref(i, n + j);
  return inv;
}

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// U * M * V = diag(diagonal) with U, V unimodular. Only U is kept; it is
/// what maps a lattice vector to its residues in Z^n / M Z^n.
struct SmithForm {
  std::vector<std::int64_t> diagonal;
  IntMatrix left;
};

inline SmithForm smith_normal_form(IntMatrix a) {
  const std::size_t n = a.size();
  const std::size_t m = n ? a[0].size() : 0;
  IntMatrix u(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    std::swap(u[i], u[j]);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (auto& row : a) std::swap(row[i], row[j]);
  };
  // row_i -= q * row_j
  auto row_axpy = [&](std::size_t i, std::size_t j, std::int64_t q) {
    for (std::size_t c = 0; c < m; ++c) a[i][c] -= q * a[j][c];
    for (std::size_t c = 0; c < n; ++c) u[i][c] -= q * u[j][c];
  };
  auto col_axpy = [&](std::size_t i, std::size_t j, std::int64_t q) {
    for (std::size_t r = 0; r < n; ++r) a[r][i] -= q * a[r][j];
  };

  std::vector<std::int64_t> diag;
  const std::size_t steps = std::min(n, m);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // Smallest nonzero magnitude in the trailing block becomes the pivot.
      std::size_t pr = n, pc = m;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < m; ++j)
          if (a[i][j] != 0 && (pr == n || std::llabs(a[i][j]) < std::llabs(a[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr == n) break;
      if (pr != t) swap_rows(pr, t);
      if (pc != t) swap_cols(pc, t);

      bool clean = true;
      for (std::size_t i = t + 1; i < n; ++i)
        if (a[i][t] != 0) {
          row_axpy(i, t, a[i][t] / a[t][t]);
          if (a[i][t] != 0) clean = false;
        }
      for (std::size_t j = t + 1; j < m; ++j)
        if (a[t][j] != 0) {
          col_axpy(j, t, a[t][j] / a[t][t]);
          if (a[t][j] != 0) clean = false;
        }
      if (!clean) continue;

      // Divisibility condition: fold an offending row into the pivot row.
      bool divides = true;
      for (std::size_t i = t + 1; i < n && divides; ++i)
        for (std::size_t j = t + 1; j < m; ++j)
          if (a[i][j] % a[t][t] != 0) {
            row_axpy(t, i, -1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a[t][t] < 0) {
      for (std::size_t c = 0; c < m; ++c) a[t][c] = -a[t][c];
      for (std::size_t c = 0; c < n; ++c) u[t][c] = -u[t][c];
    }
    diag.push_back(a[t][t]);
  }
  return {std::move(diag), std::move(u)};
}

}  // namespace currext
