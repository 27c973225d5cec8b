#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "currext/comalg.hpp"
#include "currext/extcalc.hpp"
#include "currext/linalg.hpp"
#include "currext/modcat.hpp"
#include "currext/sparse_rank.hpp"

// Brute-force Ext^1 on finite truncations: (A/J) (x) g with explicit structure
// constants, explicit module matrices, and H^1 of the Chevalley-Eilenberg
// complex by exact ranks. Only type A factors are supported here.

namespace currext {

using SparseVec = std::vector<std::pair<std::uint32_t, Rational>>;

namespace detail {

class Accumulator {
 public:
  void add(std::uint32_t i, const Rational& v) {
    if (v == 0) return;
    auto [it, inserted] = m_.try_emplace(i, v);
    if (!inserted) it->second += v;
  }
  SparseVec take() {
    SparseVec out;
    out.reserve(m_.size());
    for (auto& [i, v] : m_)
      if (v != 0) out.emplace_back(i, std::move(v));
    m_.clear();
    return out;
  }
  bool empty() const { return m_.empty(); }

 private:
  std::map<std::uint32_t, Rational> m_;
};

inline SparseVec unit_vector(std::uint32_t i) { return {{i, Rational(1)}}; }

inline SparseVec scaled(const SparseVec& v, const Rational& s) {
  SparseVec out;
  if (s == 0) return out;
  for (const auto& [i, x] : v) out.emplace_back(i, x * s);
  return out;
}

}  // namespace detail

/// Row-major sparse rational matrix.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

  static SparseMatrix from_dense(const QMatrix& m) {
    SparseMatrix s(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0) s.rows_[i].emplace_back(static_cast<std::uint32_t>(j), m(i, j));
    return s;
  }

  QMatrix dense() const {
    QMatrix m(rows(), cols_);
    for (std::size_t i = 0; i < rows(); ++i)
      for (const auto& [j, v] : rows_[i]) m(i, j) = v;
    return m;
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  const SparseVec& row(std::size_t i) const { return rows_[i]; }
  void set_row(std::size_t i, SparseVec r) { rows_[i] = std::move(r); }

  bool is_zero() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const SparseVec& r) { return r.empty(); });
  }

  Rational at(std::size_t i, std::size_t j) const {
    const auto& r = rows_[i];
    auto it = std::lower_bound(r.begin(), r.end(), j, [](const auto& e, std::size_t c) { return e.first < c; });
    return it != r.end() && it->first == j ? it->second : Rational(0);
  }

  SparseMatrix transposed() const {
    SparseMatrix t(cols_, rows());
    for (std::size_t i = 0; i < rows(); ++i)
      for (const auto& [j, v] : rows_[i]) t.rows_[j].emplace_back(static_cast<std::uint32_t>(i), v);
    return t;
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix c(a.rows(), b.cols());
    detail::Accumulator acc;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (const auto& [k, v] : a.rows_[i])
        for (const auto& [j, w] : b.rows_[k]) acc.add(j, v * w);
      c.rows_[i] = acc.take();
    }
    return c;
  }

  friend SparseMatrix combine(const SparseMatrix& a, const Rational& s, const SparseMatrix& b, const Rational& t) {
    SparseMatrix c(a.rows(), a.cols());
    detail::Accumulator acc;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (s != 0)
        for (const auto& [j, v] : a.rows_[i]) acc.add(j, s * v);
      if (t != 0)
        for (const auto& [j, v] : b.rows_[i]) acc.add(j, t * v);
      c.rows_[i] = acc.take();
    }
    return c;
  }
  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, 1, b, 1); }
  friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, 1, b, -1); }
  friend SparseMatrix operator*(const Rational& s, const SparseMatrix& a) { return combine(a, s, a, 0); }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows() == b.rows() && a.cols_ == b.cols_ && a.rows_ == b.rows_;
  }

 private:
  std::size_t cols_ = 0;
  std::vector<SparseVec> rows_;
};

/// Kronecker product a (x) b.
inline SparseMatrix kronecker(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < b.rows(); ++k) {
      SparseVec r;
      for (const auto& [j, v] : a.row(i))
        for (const auto& [l, w] : b.row(k)) r.emplace_back(static_cast<std::uint32_t>(j * b.cols() + l), v * w);
      c.set_row(i * b.rows() + k, std::move(r));
    }
  return c;
}

inline SparseMatrix sparse_identity(std::size_t n) {
  SparseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set_row(i, detail::unit_vector(static_cast<std::uint32_t>(i)));
  return m;
}

using Grade = std::vector<std::int64_t>;

/// Finite-dimensional Lie algebra by structure constants [b_i, b_j] = sum_k c_ij^k b_k.
/// Optionally carries commuting elements z_1..z_r acting diagonally on the
/// basis with known integer eigenvalues (the grade of each basis vector).
class LieStructure {
 public:
  LieStructure() = default;
  LieStructure(std::size_t dim, std::vector<SparseVec> brackets, std::vector<std::string> labels)
      : dim_(dim), brackets_(std::move(brackets)), labels_(std::move(labels)) {
    if (brackets_.size() != dim_ * dim_ || labels_.size() != dim_)
      fail(ErrorKind::ComputationError, "structure constant table has the wrong size");
    verify();
  }

  std::size_t dimension() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const SparseVec& bracket(std::size_t i, std::size_t j) const { return brackets_[i * dim_ + j]; }

  SparseVec bracket(const SparseVec& u, const SparseVec& v) const {
    detail::Accumulator acc;
    for (const auto& [i, a] : u)
      for (const auto& [j, b] : v)
        for (const auto& [k, c] : bracket(i, j)) acc.add(k, a * b * c);
    return acc.take();
  }

  void set_grading(std::vector<SparseVec> cartan, std::vector<Grade> grades) {
    cartan_ = std::move(cartan);
    grades_ = std::move(grades);
  }
  const std::vector<SparseVec>& cartan() const { return cartan_; }
  const std::vector<Grade>& grades() const { return grades_; }
  bool has_grading() const { return !cartan_.empty() && grades_.size() == dim_; }

  /// Antisymmetry and the Jacobi identity on every basis triple.
  void verify() const {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (!bracket(i, i).empty()) fail(ErrorKind::ComputationError, "bracket is not alternating");
      for (std::size_t j = i + 1; j < dim_; ++j)
        if (detail::scaled(bracket(i, j), -1) != bracket(j, i))
          fail(ErrorKind::ComputationError, "bracket is not antisymmetric");
    }
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i + 1; j < dim_; ++j)
        for (std::size_t k = j + 1; k < dim_; ++k) {
          detail::Accumulator acc;
          auto add = [&](std::size_t a, std::size_t b, std::size_t c) {
            // [a, [b, c]]
            for (const auto& [m, v] : bracket(b, c))
              for (const auto& [n, w] : bracket(a, m)) acc.add(n, v * w);
          };
          add(i, j, k);
          add(j, k, i);
          add(k, i, j);
          if (!acc.take().empty()) fail(ErrorKind::ComputationError, "Jacobi identity fails");
        }
  }

 private:
  std::size_t dim_ = 0;
  std::vector<SparseVec> brackets_;
  std::vector<std::string> labels_;
  std::vector<SparseVec> cartan_;
  std::vector<Grade> grades_;
};

/// One matrix per basis element of some Lie algebra.
struct ModuleMatrices {
  std::size_t dim = 0;
  std::vector<SparseMatrix> rho;
  std::vector<Grade> grades;  // eigenvalues of the Lie algebra's grading elements; empty if unknown

  SparseMatrix action(const SparseVec& x) const {
    SparseMatrix m(dim, dim);
    for (const auto& [i, c] : x) m = combine(m, 1, rho[i], c);
    return m;
  }
};

/// rho([x, y]) = [rho(x), rho(y)] on every basis pair.
inline void verify_module(const LieStructure& lie, const ModuleMatrices& m) {
  if (m.rho.size() != lie.dimension()) fail(ErrorKind::ComputationError, "module has the wrong number of matrices");
  for (const auto& r : m.rho)
    if (r.rows() != m.dim || r.cols() != m.dim) fail(ErrorKind::ComputationError, "module matrix has wrong shape");
  for (std::size_t i = 0; i < lie.dimension(); ++i)
    for (std::size_t j = i + 1; j < lie.dimension(); ++j) {
      const bool zi = m.rho[i].is_zero(), zj = m.rho[j].is_zero();
      SparseMatrix lhs = m.action(lie.bracket(i, j));
      if (zi || zj) {
        if (!lhs.is_zero()) fail(ErrorKind::ComputationError, "module bracket compatibility fails");
        continue;
      }
      if (!(lhs == m.rho[i] * m.rho[j] - m.rho[j] * m.rho[i]))
        fail(ErrorKind::ComputationError, "module bracket compatibility fails");
    }
}

// ---------------------------------------------------------------------------
// sl_{n+1} and its irreducible modules
// ---------------------------------------------------------------------------

/// Semisimple algebra of type A_{n1} x ... with its Chevalley basis: per factor
/// E_ij (i<j), then H_k = E_kk - E_{k+1,k+1}, then E_ij (i>j).
struct ChevalleyData {
  SemisimpleType type;
  LieStructure lie;
  std::vector<std::size_t> factor;  // factor of each basis element
  std::vector<std::pair<int, int>> entry;  // (i, j) of E_ij, or (k, k) for H_k (0-based)
  std::vector<bool> is_cartan;
  std::vector<Weight> weights;  // root (or zero) of each basis element, fundamental coordinates
  std::vector<ModuleMatrices> defining;  // defining module of each factor (other factors act by 0)
};

namespace detail {

inline QMatrix elementary(std::size_t n, std::size_t i, std::size_t j) {
  QMatrix m(n, n);
  m(i, j) = 1;
  return m;
}

}  // namespace detail

inline ChevalleyData chevalley_structure(const SemisimpleType& t) {
  for (const auto& f : t.factors())
    if (f.family != 'A')
      fail(ErrorKind::UnsupportedTypeForOracle, "the oracle only builds type A factors, got " + f.name());
  ChevalleyData g;
  g.type = t;
  RootDatum rd(t);
  std::vector<QMatrix> mats;  // defining matrix of each basis element within its factor
  std::vector<std::string> labels;
  std::size_t offset = 0;
  for (std::size_t f = 0; f < t.factors().size(); ++f) {
    const std::size_t n = static_cast<std::size_t>(t.factors()[f].rank) + 1;
    const std::string pre = t.factors().size() > 1 ? std::to_string(f) + "." : "";
    auto root_weight = [&](std::size_t i, std::size_t j) {
      // e_i - e_j in fundamental coordinates: <h_k, e_i - e_j>
      Weight w(rd.rank());
      for (std::size_t k = 0; k + 1 < n; ++k) {
        std::int64_t v = 0;
        v += (i == k) - (i == k + 1);
        v -= (j == k) - (j == k + 1);
        w[offset + k] = v;
      }
      return w;
    };
    auto push = [&](QMatrix m, std::pair<int, int> e, bool cartan, Weight w, std::string label) {
      mats.push_back(std::move(m));
      g.factor.push_back(f);
      g.entry.push_back(e);
      g.is_cartan.push_back(cartan);
      g.weights.push_back(std::move(w));
      labels.push_back(pre + label);
    };
    auto name = [&](const char* s, std::size_t i, std::size_t j) {
      return std::string(s) + std::to_string(i + 1) + (n > 9 ? "," : "") + std::to_string(j + 1);
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        push(detail::elementary(n, i, j), {int(i), int(j)}, false, root_weight(i, j), name("E", i, j));
    for (std::size_t k = 0; k + 1 < n; ++k) {
      QMatrix h(n, n);
      h(k, k) = 1;
      h(k + 1, k + 1) = -1;
      push(h, {int(k), int(k)}, true, rd.zero(), "H" + std::to_string(k + 1));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        push(detail::elementary(n, i, j), {int(i), int(j)}, false, root_weight(i, j), name("E", i, j));
    offset += n - 1;
  }

  const std::size_t dim = mats.size();
  // coordinates of a traceless matrix of factor f on the basis
  auto coords = [&](std::size_t f, const QMatrix& m) {
    detail::Accumulator acc;
    const std::size_t n = m.rows();
    for (std::size_t b = 0; b < dim; ++b) {
      if (g.factor[b] != f) continue;
      auto [i, j] = g.entry[b];
      if (!g.is_cartan[b]) {
        acc.add(static_cast<std::uint32_t>(b), m(i, j));
      } else {
        Rational partial = 0;  // coefficient of H_k is d_0 + ... + d_k
        for (int r = 0; r <= i; ++r) partial += m(r, r);
        acc.add(static_cast<std::uint32_t>(b), partial);
      }
    }
    Rational trace = 0;
    for (std::size_t r = 0; r < n; ++r) trace += m(r, r);
    if (trace != 0) fail(ErrorKind::ComputationError, "bracket left sl_n");
    return acc.take();
  };
  std::vector<SparseVec> br(dim * dim);
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b)
      if (g.factor[a] == g.factor[b]) br[a * dim + b] = coords(g.factor[a], mats[a] * mats[b] - mats[b] * mats[a]);
  g.lie = LieStructure(dim, std::move(br), std::move(labels));

  std::vector<SparseVec> cartan;
  std::vector<Grade> grades(dim);
  for (std::size_t b = 0; b < dim; ++b)
    if (g.is_cartan[b]) cartan.push_back(detail::unit_vector(static_cast<std::uint32_t>(b)));
  for (std::size_t b = 0; b < dim; ++b) grades[b] = g.weights[b].coords();
  g.lie.set_grading(std::move(cartan), std::move(grades));

  for (std::size_t f = 0; f < t.factors().size(); ++f) {
    const std::size_t n = static_cast<std::size_t>(t.factors()[f].rank) + 1;
    ModuleMatrices def;
    def.dim = n;
    for (std::size_t b = 0; b < dim; ++b)
      def.rho.push_back(g.factor[b] == f ? SparseMatrix::from_dense(mats[b]) : SparseMatrix(n, n));
    for (std::size_t i = 0; i < n; ++i) {
      Grade w(rd.rank(), 0);
      // e_i has weight eps_i
      std::size_t off = rd.factor_offset(f);
      for (std::size_t k = 0; k + 1 < n; ++k) w[off + k] = (i == k) - (i == k + 1);
      def.grades.push_back(w);
    }
    verify_module(g.lie, def);
    g.defining.push_back(std::move(def));
  }
  return g;
}

/// V(lambda) with a weight basis; basis vector 0 is the highest weight vector.
struct Irrep {
  Weight highest;
  ModuleMatrices module;  // over the semisimple algebra
  std::vector<Weight> weights;
};

namespace detail {

// Vectors of a tensor product of exterior powers of C^n, keyed by one subset
// bitmask per tensor slot.
using AmbientKey = std::vector<std::uint32_t>;
using AmbientVec = std::map<AmbientKey, Rational>;

inline void ambient_add(AmbientVec& v, const AmbientKey& k, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = v.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) v.erase(it);
  }
}

// E_ab acting on one tensor slot of every key.
inline AmbientVec apply_elementary(const AmbientVec& v, int a, int b, const Rational& coeff) {
  AmbientVec out;
  for (const auto& [key, c] : v)
    for (std::size_t s = 0; s < key.size(); ++s) {
      const std::uint32_t mask = key[s];
      if (!(mask >> b & 1u)) continue;
      if (a == b) {
        ambient_add(out, key, c * coeff);
        continue;
      }
      if (mask >> a & 1u) continue;
      const int lo = std::min(a, b), hi = std::max(a, b);
      const std::uint32_t between = mask & (((1u << hi) - 1u) & ~((1u << (lo + 1)) - 1u));
      const int sign = std::popcount(between) % 2 ? -1 : 1;
      AmbientKey k2 = key;
      k2[s] = (mask & ~(1u << b)) | (1u << a);
      ambient_add(out, k2, c * coeff * sign);
    }
  return out;
}

inline AmbientVec apply_matrix(const AmbientVec& v, const QMatrix& x) {
  AmbientVec out;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      if (x(i, j) != 0)
        for (const auto& [k, c] : apply_elementary(v, int(i), int(j), x(i, j))) ambient_add(out, k, c);
  return out;
}

// Incremental basis of one weight space with coordinates relative to the
// vectors actually added.
class WeightSpace {
 public:
  // Returns coordinates of v in the current basis, or nullopt if v is independent.
  std::optional<std::vector<Rational>> coordinates(const AmbientVec& v) const {
    AmbientVec r = v;
    std::vector<Rational> coeff(basis_count_);
    for (std::size_t i = 0; i < reduced_.size(); ++i) {
      auto it = r.find(pivots_[i]);
      if (it == r.end()) continue;
      Rational f = it->second;
      for (const auto& [k, c] : reduced_[i]) ambient_add(r, k, -f * c);
      for (std::size_t t = 0; t < basis_count_; ++t) coeff[t] += f * expr_[i][t];
    }
    if (!r.empty()) return std::nullopt;
    return coeff;
  }

  void add(const AmbientVec& v) {
    AmbientVec r = v;
    std::vector<Rational> e(basis_count_ + 1);
    e[basis_count_] = 1;
    for (auto& ex : expr_) ex.push_back(0);
    for (std::size_t i = 0; i < reduced_.size(); ++i) {
      auto it = r.find(pivots_[i]);
      if (it == r.end()) continue;
      Rational f = it->second;
      for (const auto& [k, c] : reduced_[i]) ambient_add(r, k, -f * c);
      for (std::size_t t = 0; t < basis_count_; ++t) e[t] -= f * expr_[i][t];
    }
    if (r.empty()) fail(ErrorKind::ComputationError, "dependent vector added to a weight space");
    const AmbientKey piv = r.begin()->first;
    const Rational lead = r.begin()->second;
    for (auto& [k, c] : r) c /= lead;
    for (auto& x : e) x /= lead;
    // keep reduced rows free of the new pivot
    for (std::size_t i = 0; i < reduced_.size(); ++i) {
      auto it = reduced_[i].find(piv);
      if (it == reduced_[i].end()) continue;
      Rational f = it->second;
      for (const auto& [k, c] : r) ambient_add(reduced_[i], k, -f * c);
      for (std::size_t t = 0; t <= basis_count_; ++t) expr_[i][t] -= f * e[t];
    }
    reduced_.push_back(std::move(r));
    pivots_.push_back(piv);
    expr_.push_back(std::move(e));
    ++basis_count_;
  }

  std::size_t size() const { return basis_count_; }

 private:
  std::vector<AmbientVec> reduced_;
  std::vector<AmbientKey> pivots_;
  std::vector<std::vector<Rational>> expr_;  // reduced_[i] = sum_t expr_[i][t] * (t-th added vector)
  std::size_t basis_count_ = 0;
};

// Irreducible module of one sl_n factor as the cyclic span of the highest
// weight vector inside (x)_i (wedge^i C^n)^{(x) lambda_i}.
inline Irrep factor_irrep(const ChevalleyData& g, std::size_t f, const Weight& lambda_f, std::size_t cap) {
  const std::size_t n = static_cast<std::size_t>(g.type.factors()[f].rank) + 1;
  AmbientKey hw_key;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::int64_t c = 0; c < lambda_f[i]; ++c) hw_key.push_back((1u << (i + 1)) - 1u);
  AmbientVec hw{{hw_key, Rational(1)}};

  std::vector<std::size_t> basis_elems;  // basis elements of g belonging to f
  for (std::size_t b = 0; b < g.lie.dimension(); ++b)
    if (g.factor[b] == f) basis_elems.push_back(b);
  auto defining = [&](std::size_t b) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& [j, v] : g.defining[f].rho[b].row(i)) m(i, j) = v;
    return m;
  };

  std::vector<AmbientVec> vectors{hw};
  std::vector<Weight> weights{lambda_f};
  std::map<Weight, WeightSpace> spaces;
  std::map<Weight, std::vector<std::size_t>> members;  // global indices per weight
  spaces[lambda_f].add(hw);
  members[lambda_f].push_back(0);

  std::vector<QMatrix> lowering;
  std::vector<Weight> lowering_shift;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    QMatrix m(n, n);
    m(k + 1, k) = 1;
    lowering.push_back(m);
    Weight a(n - 1);
    for (std::size_t r = 0; r + 1 < n; ++r) a[r] = (r == k ? 2 : 0) - (r + 1 == k || r == k + 1 ? 1 : 0);
    lowering_shift.push_back(a);
  }
  for (std::size_t next = 0; next < vectors.size(); ++next)
    for (std::size_t k = 0; k < lowering.size(); ++k) {
      AmbientVec u = apply_matrix(vectors[next], lowering[k]);
      if (u.empty()) continue;
      Weight w = weights[next] - lowering_shift[k];
      auto& space = spaces[w];
      if (space.coordinates(u)) continue;
      space.add(u);
      members[w].push_back(vectors.size());
      vectors.push_back(std::move(u));
      weights.push_back(w);
      if (vectors.size() > cap)
        fail(ErrorKind::DimensionCap, "irreducible module exceeds the oracle dimension cap " + std::to_string(cap));
    }

  Irrep out;
  out.highest = lambda_f;
  out.weights = weights;
  out.module.dim = vectors.size();
  for (std::size_t b = 0; b < g.lie.dimension(); ++b) {
    SparseMatrix m(vectors.size(), vectors.size());
    if (g.factor[b] == f) {
      QMatrix x = defining(b);
      std::vector<SparseVec> cols(vectors.size());
      for (std::size_t j = 0; j < vectors.size(); ++j) {
        AmbientVec u = apply_matrix(vectors[j], x);
        if (u.empty()) continue;
        // weight of the image: weights[j] + (weight of b restricted to f)
        Weight shift(n - 1);
        std::size_t off = 0;
        for (std::size_t q = 0; q < f; ++q) off += static_cast<std::size_t>(g.type.factors()[q].rank);
        for (std::size_t r = 0; r + 1 < n; ++r) shift[r] = g.weights[b][off + r];
        Weight w = weights[j] + shift;
        auto it = spaces.find(w);
        auto coords = it == spaces.end() ? std::nullopt : it->second.coordinates(u);
        if (!coords) fail(ErrorKind::ComputationError, "cyclic span is not stable under the algebra");
        const auto& idx = members[w];
        for (std::size_t t = 0; t < idx.size(); ++t)
          if ((*coords)[t] != 0) cols[j].emplace_back(static_cast<std::uint32_t>(idx[t]), (*coords)[t]);
      }
      // cols[j] lists (row, value) for column j
      std::vector<SparseVec> rows(vectors.size());
      for (std::size_t j = 0; j < vectors.size(); ++j)
        for (const auto& [i, v] : cols[j]) rows[i].emplace_back(static_cast<std::uint32_t>(j), v);
      for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, std::move(rows[i]));
    }
    out.module.rho.push_back(std::move(m));
  }
  for (const auto& w : weights) out.module.grades.push_back(w.coords());
  return out;
}

}  // namespace detail

inline Irrep irrep_matrices(const ChevalleyData& g, const Weight& lambda, std::size_t cap = 64) {
  RootDatum rd(g.type);
  rd.check_dominant(lambda);
  const std::uint64_t expected = irrep_dimension(rd, lambda);
  if (expected > cap)
    fail(ErrorKind::DimensionCap, "V" + lambda.str() + " has dimension " + std::to_string(expected) +
                                      " above the oracle cap " + std::to_string(cap));
  // outer tensor product of the factor modules
  Irrep out;
  out.highest = lambda;
  out.module.dim = 1;
  out.module.rho.assign(g.lie.dimension(), SparseMatrix(1, 1));
  out.weights = {rd.zero()};
  for (std::size_t f = 0; f < rd.factor_count(); ++f) {
    const std::size_t off = rd.factor_offset(f), r = rd.factor_rank(f);
    Weight lf(r);
    for (std::size_t i = 0; i < r; ++i) lf[i] = lambda[off + i];
    Irrep part = detail::factor_irrep(g, f, lf, cap);
    const std::size_t a = out.module.dim, b = part.module.dim;
    for (std::size_t x = 0; x < g.lie.dimension(); ++x) {
      SparseMatrix left = kronecker(out.module.rho[x], sparse_identity(b));
      SparseMatrix right = kronecker(sparse_identity(a), part.module.rho[x]);
      out.module.rho[x] = left + right;
    }
    std::vector<Weight> ws;
    for (const auto& u : out.weights)
      for (const auto& v : part.weights) {
        Weight w = u;
        for (std::size_t i = 0; i < r; ++i) w[off + i] += v[i];
        ws.push_back(w);
      }
    out.weights = std::move(ws);
    out.module.dim = a * b;
  }
  for (const auto& w : out.weights) out.module.grades.push_back(w.coords());
  if (out.module.dim != expected) fail(ErrorKind::ComputationError, "irreducible module has the wrong dimension");
  verify_module(g.lie, out.module);
  return out;
}

// ---------------------------------------------------------------------------
// Truncated current algebras and their evaluation modules
// ---------------------------------------------------------------------------

/// (A/J) (x) g with [a (x) x, b (x) y] = ab (x) [x, y]; basis index a * dim g + x.
/// Graded by e_p (x) H_k for the block units e_p of A/J.
inline LieStructure truncated_current_algebra(const JetAlgebra& jet, const ChevalleyData& g) {
  const std::size_t dj = jet.dimension(), dg = g.lie.dimension(), dim = dj * dg;
  std::vector<SparseVec> br(dim * dim);
  for (std::size_t a = 0; a < dj; ++a)
    for (std::size_t b = 0; b < dj; ++b) {
      SparseVec ab;
      for (std::size_t c = 0; c < dj; ++c)
        if (jet.product(a, b, c) != 0) ab.emplace_back(static_cast<std::uint32_t>(c), jet.product(a, b, c));
      if (ab.empty()) continue;
      for (std::size_t x = 0; x < dg; ++x)
        for (std::size_t y = 0; y < dg; ++y) {
          const SparseVec& xy = g.lie.bracket(x, y);
          if (xy.empty()) continue;
          detail::Accumulator acc;
          for (const auto& [c, u] : ab)
            for (const auto& [z, v] : xy) acc.add(static_cast<std::uint32_t>(c * dg + z), u * v);
          br[(a * dg + x) * dim + b * dg + y] = acc.take();
        }
    }
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < dj; ++a)
    for (std::size_t x = 0; x < dg; ++x) labels.push_back(jet.labels()[a] + "|" + g.lie.labels()[x]);
  LieStructure lie(dim, std::move(br), std::move(labels));

  const std::size_t rank = g.type.rank() > 0 ? static_cast<std::size_t>(g.type.rank()) : 0;
  const std::size_t np = jet.points().size();
  std::vector<SparseVec> cartan;
  std::vector<std::size_t> h_index;
  for (std::size_t x = 0; x < dg; ++x)
    if (g.is_cartan[x]) h_index.push_back(x);
  for (const auto& block : jet.blocks())
    for (std::size_t k : h_index) {
      SparseVec z;
      for (std::size_t i = 0; i < block.basis.size(); ++i) {
        const std::size_t a = block.offset + i;
        if (jet.unit()[a] != 0) z.emplace_back(static_cast<std::uint32_t>(a * dg + k), jet.unit()[a]);
      }
      cartan.push_back(std::move(z));
    }
  std::vector<Grade> grades(dim, Grade(np * rank, 0));
  for (std::size_t p = 0; p < np; ++p) {
    const auto& block = jet.blocks()[p];
    for (std::size_t i = 0; i < block.basis.size(); ++i)
      for (std::size_t x = 0; x < dg; ++x)
        for (std::size_t r = 0; r < rank; ++r) grades[(block.offset + i) * dg + x][p * rank + r] = g.weights[x][r];
  }
  if (!cartan.empty()) lie.set_grading(std::move(cartan), std::move(grades));
  return lie;
}

/// (x)_{p in supp pi} V_p(pi(p)), where a (x) x acts as sum_i a(p_i) x on slot i.
inline ModuleMatrices evaluation_module_matrices(const JetAlgebra& jet, const ChevalleyData& g,
                                                 const std::vector<const Irrep*>& per_point, bool verify_against = false,
                                                 const LieStructure* lie = nullptr) {
  const std::size_t dj = jet.dimension(), dg = g.lie.dimension();
  const std::size_t np = jet.points().size();
  const std::size_t rank = static_cast<std::size_t>(g.type.rank());
  ModuleMatrices m;
  m.dim = 1;
  std::vector<std::size_t> dims;
  for (const Irrep* v : per_point) {
    dims.push_back(v ? v->module.dim : 1);
    m.dim *= dims.back();
  }
  m.rho.assign(dj * dg, SparseMatrix(m.dim, m.dim));
  for (std::size_t p = 0; p < np; ++p) {
    if (!per_point[p] || per_point[p]->module.dim == 1) continue;
    std::size_t before = 1, after = 1;
    for (std::size_t q = 0; q < p; ++q) before *= dims[q];
    for (std::size_t q = p + 1; q < np; ++q) after *= dims[q];
    for (std::size_t a = 0; a < dj; ++a) {
      const Rational& e = jet.evaluation(p)[a];
      if (e == 0) continue;
      for (std::size_t x = 0; x < dg; ++x) {
        const SparseMatrix& r = per_point[p]->module.rho[x];
        if (r.is_zero()) continue;
        SparseMatrix slot = kronecker(kronecker(sparse_identity(before), r), sparse_identity(after));
        m.rho[a * dg + x] = combine(m.rho[a * dg + x], 1, slot, e);
      }
    }
  }
  // grade of a basis vector: its weight at every jet point
  m.grades.assign(m.dim, Grade(np * rank, 0));
  for (std::size_t idx = 0; idx < m.dim; ++idx) {
    std::size_t rest = idx;
    for (std::size_t p = np; p-- > 0;) {
      const std::size_t local = rest % dims[p];
      rest /= dims[p];
      if (!per_point[p]) continue;
      const Weight& w = per_point[p]->weights[local];
      for (std::size_t r = 0; r < rank; ++r) m.grades[idx][p * rank + r] = w[r];
    }
  }
  if (verify_against && lie) verify_module(*lie, m);
  return m;
}

inline ModuleMatrices dual_module(const ModuleMatrices& m) {
  ModuleMatrices d;
  d.dim = m.dim;
  for (const auto& r : m.rho) d.rho.push_back(Rational(-1) * r.transposed());
  for (const auto& g : m.grades) {
    Grade n = g;
    for (auto& v : n) v = -v;
    d.grades.push_back(n);
  }
  return d;
}

inline ModuleMatrices tensor_module(const ModuleMatrices& a, const ModuleMatrices& b) {
  ModuleMatrices t;
  t.dim = a.dim * b.dim;
  const SparseMatrix ia = sparse_identity(a.dim), ib = sparse_identity(b.dim);
  for (std::size_t x = 0; x < a.rho.size(); ++x) {
    const bool za = a.rho[x].is_zero(), zb = b.rho[x].is_zero();
    if (za && zb) {
      t.rho.emplace_back(t.dim, t.dim);
    } else if (za) {
      t.rho.push_back(kronecker(ia, b.rho[x]));
    } else if (zb) {
      t.rho.push_back(kronecker(a.rho[x], ib));
    } else {
      t.rho.push_back(kronecker(a.rho[x], ib) + kronecker(ia, b.rho[x]));
    }
  }
  if (!a.grades.empty() && !b.grades.empty())
    for (const auto& u : a.grades)
      for (const auto& v : b.grades) {
        Grade s = u;
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += v[i];
        t.grades.push_back(s);
      }
  return t;
}

/// Hom(V, W) with x.phi = rho_W(x) phi - phi rho_V(x); basis E_ij (i in W, j in V) at i * dim V + j.
inline ModuleMatrices hom_module(const ModuleMatrices& v, const ModuleMatrices& w) {
  ModuleMatrices h;
  h.dim = v.dim * w.dim;
  const SparseMatrix iv = sparse_identity(v.dim), iw = sparse_identity(w.dim);
  for (std::size_t x = 0; x < v.rho.size(); ++x) {
    const bool zv = v.rho[x].is_zero(), zw = w.rho[x].is_zero();
    // vec(A phi B) = (A (x) B^T) vec(phi) for row-major vec
    if (zv && zw) {
      h.rho.emplace_back(h.dim, h.dim);
    } else if (zv) {
      h.rho.push_back(kronecker(w.rho[x], iv));
    } else if (zw) {
      h.rho.push_back(Rational(-1) * kronecker(iw, v.rho[x].transposed()));
    } else {
      h.rho.push_back(kronecker(w.rho[x], iv) - kronecker(iw, v.rho[x].transposed()));
    }
  }
  if (!v.grades.empty() && !w.grades.empty())
    for (const auto& gw : w.grades)
      for (const auto& gv : v.grades) {
        Grade s = gw;
        for (std::size_t i = 0; i < s.size(); ++i) s[i] -= gv[i];
        h.grades.push_back(s);
      }
  return h;
}

// ---------------------------------------------------------------------------
// H^1
// ---------------------------------------------------------------------------

struct OracleOptions {
  std::size_t max_L = 24;
  std::size_t max_M = 64;
  RankOptions rank;
  bool use_grading = true;
  bool verify_modules = true;
};

struct H1Result {
  std::size_t dimension = 0;
  std::size_t cochains = 0;  // dim of the (weight zero part of) C^1
  std::size_t rank_d0 = 0;
  std::size_t rank_d1 = 0;
  RankPath path = RankPath::Exact;
  bool graded = false;
};

namespace detail {

// The grading elements must act diagonally with exactly the advertised eigenvalues.
inline bool grading_holds(const LieStructure& lie, const ModuleMatrices& m) {
  if (!lie.has_grading() || m.grades.size() != m.dim) return false;
  const std::size_t r = lie.cartan().size();
  for (const auto& g : lie.grades())
    if (g.size() != r) return false;
  for (const auto& g : m.grades)
    if (g.size() != r) return false;
  for (std::size_t z = 0; z < r; ++z) {
    for (std::size_t b = 0; b < lie.dimension(); ++b) {
      SparseVec lhs = lie.bracket(lie.cartan()[z], unit_vector(static_cast<std::uint32_t>(b)));
      SparseVec rhs = scaled(unit_vector(static_cast<std::uint32_t>(b)), lie.grades()[b][z]);
      if (lhs != rhs) return false;
    }
    SparseMatrix act = m.action(lie.cartan()[z]);
    for (std::size_t i = 0; i < m.dim; ++i) {
      SparseVec expect = scaled(unit_vector(static_cast<std::uint32_t>(i)), m.grades[i][z]);
      if (act.row(i) != expect) return false;
    }
  }
  return true;
}

}  // namespace detail

/// dim H^1(L, M) = dim C^1 - rank d^1 - rank d^0, with
///   (d^0 m)(x) = x.m,  (d^1 c)(x, y) = x.c(y) - y.c(x) - c([x, y]).
/// When L carries verified grading elements z (acting semisimply on L and M),
/// only the z-weight-zero subcomplex is assembled: on every other weight space
/// the Lie derivative of z is an invertible scalar that is nullhomotopic
/// (Cartan's formula), so that part of the complex is acyclic.
inline H1Result h1_dimension(const LieStructure& lie, const ModuleMatrices& m, const OracleOptions& opts = {}) {
  if (lie.dimension() > opts.max_L)
    fail(ErrorKind::DimensionCap, "Lie algebra dimension " + std::to_string(lie.dimension()) + " exceeds cap " +
                                      std::to_string(opts.max_L));
  if (m.dim > opts.max_M)
    fail(ErrorKind::DimensionCap, "module dimension " + std::to_string(m.dim) + " exceeds cap " +
                                      std::to_string(opts.max_M));
  H1Result res;
  const std::size_t dl = lie.dimension(), dm = m.dim;
  res.graded = opts.use_grading && detail::grading_holds(lie, m);

  // intern grades; ungraded means everything sits in one class
  std::map<Grade, std::uint32_t> ids;
  auto intern = [&](const Grade& g) {
    return ids.try_emplace(g, static_cast<std::uint32_t>(ids.size())).first->second;
  };
  const Grade zero = res.graded ? Grade(lie.cartan().size(), 0) : Grade{};
  std::vector<std::uint32_t> gl(dl), gm(dm);
  for (std::size_t x = 0; x < dl; ++x) gl[x] = intern(res.graded ? lie.grades()[x] : Grade{});
  for (std::size_t i = 0; i < dm; ++i) gm[i] = intern(res.graded ? m.grades[i] : Grade{});
  const std::uint32_t zero_id = intern(zero);

  std::map<std::uint32_t, std::vector<std::uint32_t>> bucket;
  std::vector<std::uint32_t> pos(dm);
  for (std::size_t i = 0; i < dm; ++i) {
    auto& b = bucket[gm[i]];
    pos[i] = static_cast<std::uint32_t>(b.size());
    b.push_back(static_cast<std::uint32_t>(i));
  }
  auto bucket_size = [&](std::uint32_t g) {
    auto it = bucket.find(g);
    return it == bucket.end() ? std::size_t{0} : it->second.size();
  };
  // C^1_0 columns: (x, m) with grade(m) = grade(x)
  std::vector<std::size_t> offset(dl + 1, 0);
  for (std::size_t x = 0; x < dl; ++x) offset[x + 1] = offset[x] + bucket_size(gl[x]);
  res.cochains = offset[dl];
  auto column = [&](std::size_t x, std::size_t i) -> std::uint32_t {
    if (gm[i] != gl[x]) fail(ErrorKind::ComputationError, "grading is inconsistent with the module action");
    return static_cast<std::uint32_t>(offset[x] + pos[i]);
  };

  std::vector<SparseMatrix> rho_t;
  rho_t.reserve(dl);
  for (const auto& r : m.rho) rho_t.push_back(r.transposed());

  std::vector<SparseQRow> d0;
  if (bucket_size(zero_id))
    for (std::uint32_t i : bucket[zero_id]) {
      detail::Accumulator acc;
      for (std::size_t x = 0; x < dl; ++x)
        for (const auto& [j, v] : rho_t[x].row(i)) acc.add(column(x, j), v);
      SparseQRow row = acc.take();
      if (!row.empty()) d0.push_back(std::move(row));
    }

  std::vector<SparseQRow> d1;
  for (std::size_t x = 0; x < dl; ++x)
    for (std::size_t y = x + 1; y < dl; ++y) {
      std::uint32_t target = 0;
      if (res.graded) {
        Grade s = lie.grades()[x];
        for (std::size_t k = 0; k < s.size(); ++k) s[k] += lie.grades()[y][k];
        auto it = ids.find(s);
        if (it == ids.end()) continue;
        target = it->second;
      }
      auto bit = bucket.find(target);
      if (bit == bucket.end()) continue;
      const SparseVec& xy = lie.bracket(x, y);
      const bool zx = m.rho[x].is_zero(), zy = m.rho[y].is_zero();
      if (zx && zy && xy.empty()) continue;
      for (std::uint32_t i : bit->second) {
        detail::Accumulator acc;
        if (!zx)
          for (const auto& [j, v] : m.rho[x].row(i)) acc.add(column(y, j), v);
        if (!zy)
          for (const auto& [j, v] : m.rho[y].row(i)) acc.add(column(x, j), -v);
        for (const auto& [z, c] : xy) acc.add(column(z, i), -c);
        SparseQRow row = acc.take();
        if (!row.empty()) d1.push_back(std::move(row));
      }
    }

  RankResult r0 = sparse_rank(d0, res.cochains, opts.rank);
  RankResult r1 = sparse_rank(d1, res.cochains, opts.rank);
  res.rank_d0 = r0.rank;
  res.rank_d1 = r1.rank;
  res.path = (r0.path == RankPath::Modular || r1.path == RankPath::Modular) ? RankPath::Modular : RankPath::Exact;
  if (res.rank_d0 + res.rank_d1 > res.cochains) fail(ErrorKind::ComputationError, "d1 d0 != 0");
  res.dimension = res.cochains - res.rank_d0 - res.rank_d1;
  return res;
}

// ---------------------------------------------------------------------------
// Explicit extensions
// ---------------------------------------------------------------------------

/// A 1-cochain with values in Hom(V, W): one dim W x dim V matrix per basis element of L.
using Cochain = std::vector<SparseMatrix>;

/// The module on V (+) W (coordinates (v, w)) with
///   x.(v, w) = (rho_V(x) v, c(x) v + rho_W(x) w).
/// W is a submodule with quotient V. Raises NotACocycle unless this is a module.
inline ModuleMatrices extension_module(const LieStructure& lie, const ModuleMatrices& v, const ModuleMatrices& w,
                                       const Cochain& c) {
  if (c.size() != lie.dimension()) fail(ErrorKind::NotACocycle, "cochain has the wrong number of values");
  ModuleMatrices e;
  e.dim = v.dim + w.dim;
  for (std::size_t x = 0; x < lie.dimension(); ++x) {
    if (c[x].rows() != w.dim || c[x].cols() != v.dim) fail(ErrorKind::NotACocycle, "cochain value has wrong shape");
    SparseMatrix m(e.dim, e.dim);
    for (std::size_t i = 0; i < v.dim; ++i) m.set_row(i, v.rho[x].row(i));
    for (std::size_t i = 0; i < w.dim; ++i) {
      SparseVec r = c[x].row(i);
      for (const auto& [j, val] : w.rho[x].row(i)) r.emplace_back(static_cast<std::uint32_t>(v.dim + j), val);
      m.set_row(v.dim + i, std::move(r));
    }
    e.rho.push_back(std::move(m));
  }
  try {
    verify_module(lie, e);
  } catch (const Error&) {
    fail(ErrorKind::NotACocycle, "the cochain is not a cocycle: the extension fails the module axioms");
  }
  return e;
}

/// Splitness read off the extension module alone: E splits iff some graph
/// {(v, s v)} is a submodule, i.e. s rho_V(x) - rho_W(x) s = c(x) is solvable.
inline bool extension_splits(const ModuleMatrices& e, std::size_t dim_quotient) {
  const std::size_t dv = dim_quotient, dw = e.dim - dim_quotient;
  const std::size_t unknowns = dw * dv;  // s(i, j) at i * dv + j
  QMatrix a(0, unknowns);
  std::vector<Rational> b;
  for (const auto& m : e.rho) {
    QMatrix dense = m.dense();
    for (std::size_t i = 0; i < dw; ++i)
      for (std::size_t j = 0; j < dv; ++j) {
        std::vector<Rational> row(unknowns);
        bool any = false;
        // (s rho_V)(i, j) = sum_l s(i, l) rho_V(l, j)
        for (std::size_t l = 0; l < dv; ++l)
          if (dense(l, j) != 0) {
            row[i * dv + l] += dense(l, j);
            any = true;
          }
        // (rho_W s)(i, j) = sum_l rho_W(i, l) s(l, j)
        for (std::size_t l = 0; l < dw; ++l)
          if (dense(dv + i, dv + l) != 0) {
            row[l * dv + j] -= dense(dv + i, dv + l);
            any = true;
          }
        const Rational& rhs = dense(dv + i, j);
        if (!any && rhs == 0) continue;
        a.append_row(row);
        b.push_back(rhs);
      }
  }
  if (a.rows() == 0) return true;
  return solve(a, b).has_value();
}

/// Cohomological test: c lies in the image of d^0 on Hom(V, W).
inline bool is_coboundary(const LieStructure& lie, const ModuleMatrices& hom, std::size_t dim_v, const Cochain& c,
                          const RankOptions& rank_opts = {}) {
  const std::size_t dl = lie.dimension(), dm = hom.dim;
  const std::size_t cols = dl * dm;
  std::vector<SparseQRow> rows;
  for (std::size_t i = 0; i < dm; ++i) {
    detail::Accumulator acc;
    for (std::size_t x = 0; x < dl; ++x)
      for (std::size_t j = 0; j < dm; ++j) {
        Rational v = hom.rho[x].at(j, i);
        if (v != 0) acc.add(static_cast<std::uint32_t>(x * dm + j), v);
      }
    rows.push_back(acc.take());
  }
  const std::size_t base = sparse_rank(rows, cols, rank_opts).rank;
  detail::Accumulator acc;
  for (std::size_t x = 0; x < dl; ++x)
    for (std::size_t i = 0; i < c[x].rows(); ++i)
      for (const auto& [j, v] : c[x].row(i)) acc.add(static_cast<std::uint32_t>(x * dm + i * dim_v + j), v);
  rows.push_back(acc.take());
  return sparse_rank(rows, cols, rank_opts).rank == base;
}

/// Basis of Hom_g(g (x) V, W); each element is one dim W x dim V matrix per basis element of g.
inline std::vector<std::vector<QMatrix>> intertwiners(const ChevalleyData& g, const ModuleMatrices& v,
                                                      const ModuleMatrices& w) {
  const std::size_t dg = g.lie.dimension(), dv = v.dim, dw = w.dim;
  const std::size_t unknowns = dg * dw * dv;  // T[x](i, j) at (x * dw + i) * dv + j
  auto var = [&](std::size_t x, std::size_t i, std::size_t j) { return (x * dw + i) * dv + j; };
  QMatrix eq(0, unknowns);
  std::vector<QMatrix> rv, rw;
  for (std::size_t y = 0; y < dg; ++y) {
    rv.push_back(v.rho[y].dense());
    rw.push_back(w.rho[y].dense());
  }
  for (std::size_t y = 0; y < dg; ++y)
    for (std::size_t x = 0; x < dg; ++x)
      for (std::size_t i = 0; i < dw; ++i)
        for (std::size_t j = 0; j < dv; ++j) {
          // T(y.(x (x) v_j)) - rho_W(y) T(x (x) v_j), component i
          std::vector<Rational> row(unknowns);
          for (const auto& [z, c] : g.lie.bracket(y, x)) row[var(z, i, j)] += c;
          for (std::size_t l = 0; l < dv; ++l)
            if (rv[y](l, j) != 0) row[var(x, i, l)] += rv[y](l, j);
          for (std::size_t k = 0; k < dw; ++k)
            if (rw[y](i, k) != 0) row[var(x, k, j)] -= rw[y](i, k);
          if (std::any_of(row.begin(), row.end(), [](const Rational& r) { return r != 0; })) eq.append_row(row);
        }
  std::vector<std::vector<QMatrix>> out;
  for (const auto& sol : nullspace(eq)) {
    std::vector<QMatrix> t(dg, QMatrix(dw, dv));
    for (std::size_t x = 0; x < dg; ++x)
      for (std::size_t i = 0; i < dw; ++i)
        for (std::size_t j = 0; j < dv; ++j) t[x](i, j) = sol[var(x, i, j)];
    out.push_back(std::move(t));
  }
  return out;
}

/// phi: A/J -> Hom(g (x) V(lambda), V(mu)) attached to one jet point m;
/// values[a][x] is phi(b_a) evaluated on x, a dim V(mu) x dim V(lambda) matrix.
struct ExtCocycle {
  std::size_t point = 0;
  std::vector<std::vector<QMatrix>> values;
};

/// Checks phi(1) = 0, phi(ab) = a_m phi(b) + b_m phi(a) and that each phi(a)
/// intertwines, then assembles the extension of V_m(lambda) by V_m(mu).
inline ModuleMatrices build_extension_module(const ExtCocycle& phi, const JetAlgebra& jet, const ChevalleyData& g,
                                             const Irrep& lambda, const Irrep& mu, const LieStructure& lie) {
  const std::size_t dj = jet.dimension(), dg = g.lie.dimension();
  const std::size_t dv = lambda.module.dim, dw = mu.module.dim;
  if (phi.point >= jet.points().size()) fail(ErrorKind::NotACocycle, "cocycle point is not a jet point");
  if (phi.values.size() != dj) fail(ErrorKind::NotACocycle, "cocycle needs one value per jet basis element");
  for (const auto& va : phi.values) {
    if (va.size() != dg) fail(ErrorKind::NotACocycle, "cocycle value needs one matrix per element of g");
    for (const auto& q : va)
      if (q.rows() != dw || q.cols() != dv) fail(ErrorKind::NotACocycle, "cocycle matrix has wrong shape");
  }
  auto lin = [&](const std::vector<Rational>& coeffs, std::size_t x) {
    QMatrix s(dw, dv);
    for (std::size_t a = 0; a < dj; ++a)
      if (coeffs[a] != 0)
        for (std::size_t i = 0; i < dw; ++i)
          for (std::size_t j = 0; j < dv; ++j) s(i, j) += coeffs[a] * phi.values[a][x](i, j);
    return s;
  };
  const auto& ev = jet.evaluation(phi.point);
  for (std::size_t x = 0; x < dg; ++x)
    if (!lin(jet.unit(), x).is_zero()) fail(ErrorKind::NotACocycle, "phi(1) must vanish");
  for (std::size_t a = 0; a < dj; ++a)
    for (std::size_t b = a; b < dj; ++b) {
      std::vector<Rational> ab(dj);
      for (std::size_t c = 0; c < dj; ++c) ab[c] = jet.product(a, b, c);
      for (std::size_t x = 0; x < dg; ++x) {
        QMatrix lhs = lin(ab, x);
        QMatrix rhs(dw, dv);
        for (std::size_t i = 0; i < dw; ++i)
          for (std::size_t j = 0; j < dv; ++j)
            rhs(i, j) = ev[a] * phi.values[b][x](i, j) + ev[b] * phi.values[a][x](i, j);
        if (!(lhs == rhs)) fail(ErrorKind::NotACocycle, "phi violates the derivation rule");
      }
    }
  // phi(a) must be a g-map g (x) V(lambda) -> V(mu)
  for (std::size_t a = 0; a < dj; ++a)
    for (std::size_t y = 0; y < dg; ++y) {
      QMatrix ry_v = lambda.module.rho[y].dense(), ry_w = mu.module.rho[y].dense();
      for (std::size_t x = 0; x < dg; ++x) {
        QMatrix lhs = phi.values[a][x] * ry_v;
        for (const auto& [z, c] : g.lie.bracket(y, x)) {
          QMatrix t = phi.values[a][z];
          for (std::size_t i = 0; i < dw; ++i)
            for (std::size_t j = 0; j < dv; ++j) lhs(i, j) += c * t(i, j);
        }
        if (!(lhs == ry_w * phi.values[a][x])) fail(ErrorKind::NotACocycle, "phi(a) is not g-equivariant");
      }
    }

  std::vector<const Irrep*> pl(jet.points().size(), nullptr), pm(jet.points().size(), nullptr);
  pl[phi.point] = &lambda;
  pm[phi.point] = &mu;
  ModuleMatrices v = evaluation_module_matrices(jet, g, pl);
  ModuleMatrices w = evaluation_module_matrices(jet, g, pm);
  Cochain c;
  for (std::size_t a = 0; a < dj; ++a)
    for (std::size_t x = 0; x < dg; ++x) c.push_back(SparseMatrix::from_dense(phi.values[a][x]));
  return extension_module(lie, v, w, c);
}

// ---------------------------------------------------------------------------
// Driver with caches
// ---------------------------------------------------------------------------

struct CrossCheck {
  std::int64_t formula = 0;
  std::size_t oracle = 0;       // H^1 at order k
  std::size_t oracle_next = 0;  // H^1 at order k + 1
  bool agree = false;
  bool truncation_insufficient = false;  // the two orders disagree
  int order = 2;
  std::size_t dim_L = 0, dim_L_next = 0, dim_M = 0;
  RankPath path = RankPath::Exact;
  bool graded = false;
  std::size_t jet_points = 0;
};

/// Caches g, irreducible modules, jets and truncated algebras for one
/// (g, A). Not safe for concurrent use; give each thread its own.
class OracleContext {
 public:
  OracleContext(ContextPtr ctx, OracleOptions opts = {})
      : ctx_(std::move(ctx)), opts_(opts), g_(chevalley_structure(ctx_->type())) {}

  const ModuleContext& context() const { return *ctx_; }
  const ChevalleyData& lie_algebra() const { return g_; }
  const OracleOptions& options() const { return opts_; }
  void set_options(const OracleOptions& o) { opts_ = o; }

  const Irrep& irrep(const Weight& lambda) {
    auto it = irreps_.find(lambda);
    if (it == irreps_.end()) it = irreps_.emplace(lambda, irrep_matrices(g_, lambda, opts_.max_M)).first;
    return it->second;
  }

  const JetAlgebra& jet(const std::vector<PointIdeal>& points, int k) {
    auto key = std::make_pair(points, k);
    auto it = jets_.find(key);
    if (it == jets_.end()) it = jets_.emplace(key, jet_quotient(ctx_->algebra(), points, k)).first;
    return it->second;
  }

  const LieStructure& current_algebra(const std::vector<PointIdeal>& points, int k) {
    auto key = std::make_pair(points, k);
    auto it = algebras_.find(key);
    if (it == algebras_.end()) {
      const JetAlgebra& j = jet(points, k);
      if (j.dimension() * g_.lie.dimension() > opts_.max_L)
        fail(ErrorKind::DimensionCap, "truncated algebra of dimension " +
                                          std::to_string(j.dimension() * g_.lie.dimension()) + " exceeds cap " +
                                          std::to_string(opts_.max_L));
      it = algebras_.emplace(key, truncated_current_algebra(j, g_)).first;
    }
    return it->second;
  }

  ModuleMatrices evaluation_module(const std::vector<PointIdeal>& points, int k, const SupportFunction& pi) {
    const JetAlgebra& j = jet(points, k);
    std::vector<const Irrep*> per(points.size(), nullptr);
    const SupportFunction npi = normalize(pi);
    for (const auto& [p, w] : npi.entries()) {
      std::size_t idx = j.point_index(p);
      if (idx == points.size())
        fail(ErrorKind::SupportNotCovered, "support point " + p.str() + " is not among the jet points");
      per[idx] = &irrep(w);
    }
    const LieStructure& lie = current_algebra(points, k);
    ModuleMatrices m = evaluation_module_matrices(j, g_, per);
    if (opts_.verify_modules) verify_module(lie, m);
    return m;
  }

  H1Result h1(const std::vector<PointIdeal>& points, int k, const SupportFunction& source,
              const SupportFunction& target) {
    ModuleMatrices v = evaluation_module(points, k, source);
    ModuleMatrices w = evaluation_module(points, k, target);
    if (v.dim * w.dim > opts_.max_M)
      fail(ErrorKind::DimensionCap, "Hom module of dimension " + std::to_string(v.dim * w.dim) + " exceeds cap " +
                                        std::to_string(opts_.max_M));
    ModuleMatrices h = hom_module(v, w);
    const LieStructure& lie = current_algebra(points, k);
    if (opts_.verify_modules) verify_module(lie, h);
    return h1_dimension(lie, h, opts_);
  }

  /// Formula against H^1 of the truncations at orders k and k + 1. The jet
  /// points are the union of both supports plus any extra points.
  CrossCheck cross_check(const SupportFunction& source, const SupportFunction& target, int k = 2,
                         const std::vector<PointIdeal>& extra_points = {}) {
    require_same_context(source, target);
    if (!(source.context()->type() == ctx_->type()) || !(source.context()->algebra() == ctx_->algebra()))
      fail(ErrorKind::ContextMismatch, "modules do not live over the oracle's (g, A)");
    std::set<PointIdeal> pts(extra_points.begin(), extra_points.end());
    const SupportFunction ns = normalize(source), nt = normalize(target);
    for (const auto& [p, w] : ns.entries()) pts.insert(p);
    for (const auto& [p, w] : nt.entries()) pts.insert(p);
    std::vector<PointIdeal> points(pts.begin(), pts.end());

    CrossCheck out;
    out.order = k;
    out.jet_points = points.size();
    out.formula = ext1_dimension(source, target).total_dimension;
    H1Result a = h1(points, k, source, target);
    H1Result b = h1(points, k + 1, source, target);
    out.oracle = a.dimension;
    out.oracle_next = b.dimension;
    out.dim_L = jet(points, k).dimension() * g_.lie.dimension();
    out.dim_L_next = jet(points, k + 1).dimension() * g_.lie.dimension();
    out.dim_M = evaluation_dim(source) * evaluation_dim(target);
    out.path = (a.path == RankPath::Modular || b.path == RankPath::Modular) ? RankPath::Modular : RankPath::Exact;
    out.graded = a.graded && b.graded;
    out.truncation_insufficient = a.dimension != b.dimension;
    out.agree = !out.truncation_insufficient && static_cast<std::int64_t>(a.dimension) == out.formula;
    return out;
  }

 private:
  std::size_t evaluation_dim(const SupportFunction& pi) {
    std::size_t d = 1;
    const SupportFunction npi = normalize(pi);
    for (const auto& [p, w] : npi.entries()) d *= irrep(w).module.dim;
    return d;
  }

  ContextPtr ctx_;
  OracleOptions opts_;
  ChevalleyData g_;
  std::map<Weight, Irrep> irreps_;
  std::map<std::pair<std::vector<PointIdeal>, int>, JetAlgebra> jets_;
  std::map<std::pair<std::vector<PointIdeal>, int>, LieStructure> algebras_;
};

}  // namespace currext
