#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "currext/errors.hpp"
#include "currext/rational.hpp"

// Exact rank of large sparse integer matrices.
//
// The default path is fraction-free elimination: a row r meeting a pivot row p
// in its leading column c becomes (p_c/g) r - (r_c/g) p with g = gcd(r_c, p_c),
// followed by division by the row content. No fractions ever appear. The
// elimination first runs on machine words with overflow detection and restarts
// on GMP integers when a word overflows.
//
// When the exact path exceeds its time budget, a modular rank over two
// independent 31-bit primes may be used instead; it is only accepted when both
// primes agree, and the result is tagged so callers can report it.

namespace currext {

using SparseQRow = std::vector<std::pair<std::uint32_t, Rational>>;
using SparseZRow = std::vector<std::pair<std::uint32_t, Integer>>;

enum class RankPath { Exact, Modular };

inline const char* to_string(RankPath p) { return p == RankPath::Exact ? "exact" : "modular"; }

struct RankOptions {
  std::chrono::milliseconds budget{std::chrono::minutes(10)};
  bool allow_modular = true;
};

struct RankResult {
  std::size_t rank = 0;
  RankPath path = RankPath::Exact;
};

/// Clears denominators row by row; scaling a row never changes the rank.
inline SparseZRow to_integer_row(const SparseQRow& row) {
  Integer l = 1;
  for (const auto& [c, q] : row) l = lcm(l, Integer(q.get_den()));
  SparseZRow out;
  out.reserve(row.size());
  for (const auto& [c, q] : row)
    if (q != 0) out.emplace_back(c, Integer(q.get_num() * (l / q.get_den())));
  return out;
}

namespace detail {

struct WordOverflow {};
struct BudgetExceeded {};

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw WordOverflow{};
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw WordOverflow{};
  return r;
}

template <class Int>
struct Arith;

template <>
struct Arith<std::int64_t> {
  static std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
  static std::int64_t combine(std::int64_t a, std::int64_t x, std::int64_t b, std::int64_t y) {
    return checked_sub(checked_mul(a, x), checked_mul(b, y));
  }
  static std::int64_t from(const Integer& z) {
    if (!z.fits_slong_p()) throw WordOverflow{};
    std::int64_t v = z.get_si();
    if (v == INT64_MIN) throw WordOverflow{};
    return v;
  }
};

template <>
struct Arith<Integer> {
  static Integer gcd(const Integer& a, const Integer& b) { return ::gcd(a, b); }
  static Integer combine(const Integer& a, const Integer& x, const Integer& b, const Integer& y) {
    return a * x - b * y;
  }
  static Integer from(const Integer& z) { return z; }
};

class Deadline {
 public:
  explicit Deadline(std::chrono::milliseconds budget)
      : end_(std::chrono::steady_clock::now() + budget) {}
  void check() const {
    if (std::chrono::steady_clock::now() > end_) throw BudgetExceeded{};
  }

 private:
  std::chrono::steady_clock::time_point end_;
};

/// Rows are visited shortest first; sparse rows pin their columns early and
/// keep fill-in low for the structured matrices built by the oracle.
inline std::vector<std::size_t> visiting_order(const std::vector<SparseZRow>& rows) {
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rows[a].size() < rows[b].size(); });
  return order;
}

template <class Int>
std::size_t fraction_free_rank(const std::vector<SparseZRow>& input, std::size_t ncols,
                               const Deadline& deadline) {
  using Row = std::vector<std::pair<std::uint32_t, Int>>;
  std::vector<std::int64_t> pivot_of(ncols, -1);
  std::vector<Row> basis;
  Row scratch;
  std::size_t visited = 0;

  for (std::size_t idx : visiting_order(input)) {
    if ((++visited & 63) == 0) deadline.check();
    Row row;
    row.reserve(input[idx].size());
    for (const auto& [c, z] : input[idx])
      if (z != 0) row.emplace_back(c, Arith<Int>::from(z));
    while (!row.empty()) {
      const std::uint32_t lead = row.front().first;
      const std::int64_t p = pivot_of[lead];
      if (p < 0) {
        Int content = 0;
        for (const auto& e : row) content = Arith<Int>::gcd(content, e.second);
        if (content < 0) content = -content;
        if (content != 1)
          for (auto& e : row) e.second /= content;
        pivot_of[lead] = static_cast<std::int64_t>(basis.size());
        basis.push_back(std::move(row));
        break;
      }
      const Row& piv = basis[static_cast<std::size_t>(p)];
      Int g = Arith<Int>::gcd(row.front().second, piv.front().second);
      Int a = piv.front().second / g;  // multiplies row
      Int b = row.front().second / g;  // multiplies pivot
      scratch.clear();
      std::size_t i = 1, j = 1;
      Int zero = 0;
      while (i < row.size() || j < piv.size()) {
        if (j == piv.size() || (i < row.size() && row[i].first < piv[j].first)) {
          scratch.emplace_back(row[i].first, Arith<Int>::combine(a, row[i].second, b, zero));
          ++i;
        } else if (i == row.size() || piv[j].first < row[i].first) {
          scratch.emplace_back(piv[j].first, Arith<Int>::combine(a, zero, b, piv[j].second));
          ++j;
        } else {
          Int v = Arith<Int>::combine(a, row[i].second, b, piv[j].second);
          if (v != 0) scratch.emplace_back(row[i].first, std::move(v));
          ++i;
          ++j;
        }
      }
      Int content = 0;
      for (const auto& e : scratch) content = Arith<Int>::gcd(content, e.second);
      if (content < 0) content = -content;
      if (content > 1)
        for (auto& e : scratch) e.second /= content;
      std::swap(row, scratch);
    }
  }
  return basis.size();
}

inline std::uint64_t reduce_mod(const Integer& z, std::uint32_t p) {
  Integer r = z % p;
  if (r < 0) r += p;
  return r.get_ui();
}

inline std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
  std::uint64_t result = 1, e = p - 2;
  a %= p;
  while (e) {
    if (e & 1) result = result * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return result;
}

inline std::size_t modular_rank(const std::vector<SparseZRow>& input, std::size_t ncols,
                                std::uint32_t prime) {
  using Row = std::vector<std::pair<std::uint32_t, std::uint64_t>>;
  const std::uint64_t p = prime;
  std::vector<std::int64_t> pivot_of(ncols, -1);
  std::vector<Row> basis;
  Row scratch;
  for (std::size_t idx : visiting_order(input)) {
    Row row;
    for (const auto& [c, z] : input[idx]) {
      std::uint64_t v = reduce_mod(z, prime);
      if (v) row.emplace_back(c, v);
    }
    while (!row.empty()) {
      const std::int64_t piv_idx = pivot_of[row.front().first];
      if (piv_idx < 0) {
        std::uint64_t inv = inverse_mod(row.front().second, p);
        for (auto& e : row) e.second = e.second * inv % p;
        pivot_of[row.front().first] = static_cast<std::int64_t>(basis.size());
        basis.push_back(std::move(row));
        break;
      }
      const Row& piv = basis[static_cast<std::size_t>(piv_idx)];
      const std::uint64_t f = row.front().second;  // pivot rows are monic
      scratch.clear();
      std::size_t i = 1, j = 1;
      while (i < row.size() || j < piv.size()) {
        if (j == piv.size() || (i < row.size() && row[i].first < piv[j].first)) {
          scratch.push_back(row[i++]);
        } else if (i == row.size() || piv[j].first < row[i].first) {
          scratch.emplace_back(piv[j].first, (p - f * piv[j].second % p) % p);
          ++j;
        } else {
          std::uint64_t v = (row[i].second + p - f * piv[j].second % p) % p;
          if (v) scratch.emplace_back(row[i].first, v);
          ++i;
          ++j;
        }
      }
      std::swap(row, scratch);
    }
  }
  return basis.size();
}

}  // namespace detail

inline constexpr std::uint32_t kRankPrimeA = 2147483647u;
inline constexpr std::uint32_t kRankPrimeB = 2147483629u;

inline RankResult sparse_rank(const std::vector<SparseZRow>& rows, std::size_t ncols,
                              const RankOptions& options = {}) {
  for (const auto& row : rows)
    for (std::size_t k = 0; k < row.size(); ++k)
      if (row[k].first >= ncols || (k && row[k - 1].first >= row[k].first))
        fail(ErrorKind::ComputationError, "sparse row columns must be sorted and in range");
  detail::Deadline deadline(options.budget);
  try {
    try {
      return {detail::fraction_free_rank<std::int64_t>(rows, ncols, deadline), RankPath::Exact};
    } catch (const detail::WordOverflow&) {
      return {detail::fraction_free_rank<Integer>(rows, ncols, deadline), RankPath::Exact};
    }
  } catch (const detail::BudgetExceeded&) {
    if (!options.allow_modular)
      fail(ErrorKind::ComputationError, "exact rank exceeded its time budget");
    std::size_t a = detail::modular_rank(rows, ncols, kRankPrimeA);
    std::size_t b = detail::modular_rank(rows, ncols, kRankPrimeB);
    if (a != b) fail(ErrorKind::ComputationError, "modular ranks disagree between primes");
    return {a, RankPath::Modular};
  }
}

inline RankResult sparse_rank(const std::vector<SparseQRow>& rows, std::size_t ncols,
                              const RankOptions& options = {}) {
  std::vector<SparseZRow> z;
  z.reserve(rows.size());
  for (const auto& r : rows) z.push_back(to_integer_row(r));
  return sparse_rank(z, ncols, options);
}

}  // namespace currext
