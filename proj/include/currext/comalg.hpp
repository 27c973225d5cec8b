#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "currext/errors.hpp"
#include "currext/linalg.hpp"
#include "currext/polynomial.hpp"

namespace currext {

/// A finitely presented commutative algebra Q[x_1..x_n]/(relations).
/// n = 0 with no relations stands for the ground field itself.
class AlgebraPresentation {
 public:
  AlgebraPresentation() = default;
  AlgebraPresentation(std::vector<std::string> generators, std::vector<Polynomial> relations)
      : generators_(std::move(generators)), relations_(std::move(relations)) {
    std::set<std::string> seen;
    for (const auto& g : generators_)
      if (g.empty() || !seen.insert(g).second)
        fail(ErrorKind::ValidationError, "generator names must be nonempty and distinct");
    for (const auto& r : relations_) {
      if (r.arity() != generators_.size()) fail(ErrorKind::ArityMismatch, "relation arity differs from generator count");
      if (r.is_zero()) fail(ErrorKind::ValidationError, "relations must be nonzero polynomials");
    }
  }

  static AlgebraPresentation parse(std::vector<std::string> generators, const std::vector<std::string>& relations) {
    std::vector<Polynomial> rels;
    for (const auto& r : relations) rels.push_back(parse_polynomial(r, generators));
    return AlgebraPresentation(std::move(generators), std::move(rels));
  }

  std::size_t arity() const { return generators_.size(); }
  const std::vector<std::string>& generators() const { return generators_; }
  const std::vector<Polynomial>& relations() const { return relations_; }
  bool is_ground_field() const { return generators_.empty(); }

  std::string str() const {
    std::string s = "Q[";
    for (std::size_t i = 0; i < generators_.size(); ++i) s += (i ? "," : "") + generators_[i];
    s += "]";
    if (!relations_.empty()) {
      s += "/(";
      for (std::size_t i = 0; i < relations_.size(); ++i) s += (i ? ", " : "") + relations_[i].str(generators_);
      s += ")";
    }
    return s;
  }

  friend bool operator==(const AlgebraPresentation&, const AlgebraPresentation&) = default;

 private:
  std::vector<std::string> generators_;
  std::vector<Polynomial> relations_;
};

/// A rational point of Spec A, standing for its maximal ideal.
class PointIdeal {
 public:
  PointIdeal() = default;
  explicit PointIdeal(std::vector<Rational> coords) : coords_(std::move(coords)) {}
  PointIdeal(std::initializer_list<Rational> coords) : coords_(coords) {}

  const std::vector<Rational>& coords() const { return coords_; }
  std::size_t size() const { return coords_.size(); }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) s += (i ? "," : "") + to_string(coords_[i]);
    return s + ")";
  }

  friend bool operator==(const PointIdeal& a, const PointIdeal& b) { return a.coords_ == b.coords_; }
  friend bool operator<(const PointIdeal& a, const PointIdeal& b) {
    return std::lexicographical_compare(a.coords_.begin(), a.coords_.end(), b.coords_.begin(), b.coords_.end());
  }

 private:
  std::vector<Rational> coords_;
};

inline bool validate_point(const AlgebraPresentation& a, const PointIdeal& p) {
  if (p.size() != a.arity())
    fail(ErrorKind::ArityMismatch, "point " + p.str() + " does not have " + std::to_string(a.arity()) + " coordinates");
  for (const auto& r : a.relations())
    if (r.evaluate(p.coords()) != 0) return false;
  return true;
}

inline void require_point(const AlgebraPresentation& a, const PointIdeal& p) {
  if (!validate_point(a, p)) fail(ErrorKind::InvalidPoint, "point " + p.str() + " is not on " + a.str());
}

/// dim m/m^2 = n - rank of the Jacobian of the relations at p.
inline std::size_t tangent_dimension(const AlgebraPresentation& a, const PointIdeal& p) {
  require_point(a, p);
  const std::size_t n = a.arity();
  if (n == 0) return 0;
  QMatrix jac(a.relations().size(), n);
  for (std::size_t r = 0; r < a.relations().size(); ++r)
    for (std::size_t v = 0; v < n; ++v) jac(r, v) = a.relations()[r].derivative(v).evaluate(p.coords());
  return n - rank(jac);
}

/// A/J for J = prod_i m_i^k, realised through the Chinese remainder theorem as
/// the product of the local algebras A/m_i^k. Each local block has a monomial
/// basis in coordinates centred at its point.
class JetAlgebra {
 public:
  struct LocalBlock {
    PointIdeal point;
    std::size_t offset = 0;
    std::vector<Monomial> monomials;   // all monomials of degree < k, graded order
    Echelon relations;                 // span of truncated relation multiples, reduced
    std::vector<std::size_t> basis;    // indices into monomials of the standard monomials
  };

  std::size_t dimension() const { return dim_; }
  int order() const { return order_; }
  const std::vector<PointIdeal>& points() const { return points_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<LocalBlock>& blocks() const { return blocks_; }
  const AlgebraPresentation& algebra() const { return algebra_; }

  /// Structure constant: b_i * b_j = sum_k product(i, j, k) b_k.
  const Rational& product(std::size_t i, std::size_t j, std::size_t k) const { return table_[(i * dim_ + j) * dim_ + k]; }
  std::vector<Rational> multiply(std::span<const Rational> a, std::span<const Rational> b) const {
    std::vector<Rational> out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (b[j] == 0) continue;
        Rational ab = a[i] * b[j];
        for (std::size_t k = 0; k < dim_; ++k)
          if (product(i, j, k) != 0) out[k] += ab * product(i, j, k);
      }
    }
    return out;
  }
  const std::vector<Rational>& unit() const { return unit_; }

  /// Evaluation a -> a(p) at point index `point`, as coefficients on the basis.
  const std::vector<Rational>& evaluation(std::size_t point) const { return evals_[point]; }
  Rational evaluate(std::size_t point, std::size_t basis_index) const { return evals_[point][basis_index]; }
  Rational evaluate(std::size_t point, std::span<const Rational> v) const {
    Rational s = 0;
    for (std::size_t i = 0; i < dim_; ++i)
      if (v[i] != 0) s += v[i] * evals_[point][i];
    return s;
  }

  std::size_t point_index(const PointIdeal& p) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (points_[i] == p) return i;
    return points_.size();
  }

 private:
  friend JetAlgebra jet_quotient(const AlgebraPresentation&, std::vector<PointIdeal>, int);
  friend std::vector<Rational> reduce_element(const JetAlgebra&, const Polynomial&);

  AlgebraPresentation algebra_;
  std::vector<PointIdeal> points_;
  int order_ = 1;
  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<LocalBlock> blocks_;
  std::vector<Rational> table_;
  std::vector<Rational> unit_;
  std::vector<std::vector<Rational>> evals_;
};

namespace detail {

inline std::vector<Monomial> monomials_below(std::size_t n, int k) {
  std::vector<Monomial> out;
  Monomial m(n, 0);
  // every exponent vector with total degree < k
  auto rec = [&](auto&& self, std::size_t var, int budget) -> void {
    if (var == n) {
      out.push_back(m);
      return;
    }
    for (int e = 0; e <= budget; ++e) {
      m[var] = e;
      self(self, var + 1, budget - e);
    }
    m[var] = 0;
  };
  if (k > 0) rec(rec, 0, k - 1);
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) { return graded_lex_greater(b, a); });
  return out;
}

inline std::vector<Rational> local_coordinates(const JetAlgebra::LocalBlock& block, const Polynomial& centred) {
  std::vector<Rational> v(block.monomials.size());
  for (const auto& [m, c] : centred.terms()) {
    auto it = std::find(block.monomials.begin(), block.monomials.end(), m);
    if (it != block.monomials.end()) v[static_cast<std::size_t>(it - block.monomials.begin())] = c;
  }
  for (std::size_t r = 0; r < block.relations.rank(); ++r) {
    const std::size_t c = block.relations.pivots[r];
    if (v[c] == 0) continue;
    Rational f = v[c];
    for (std::size_t j = 0; j < v.size(); ++j)
      if (block.relations.rref(r, j) != 0) v[j] -= f * block.relations.rref(r, j);
  }
  std::vector<Rational> coords;
  for (std::size_t b : block.basis) coords.push_back(v[b]);
  return coords;
}

}  // namespace detail

/// Normal form of f in A/J, as coordinates on the jet basis.
inline std::vector<Rational> reduce_element(const JetAlgebra& jet, const Polynomial& f) {
  if (f.arity() != jet.algebra_.arity()) fail(ErrorKind::ArityMismatch, "element has wrong number of variables");
  std::vector<Rational> out(jet.dim_);
  for (const auto& block : jet.blocks_) {
    Polynomial centred = f.shifted(block.point.coords()).truncated(jet.order_);
    auto local = detail::local_coordinates(block, centred);
    for (std::size_t i = 0; i < local.size(); ++i) out[block.offset + i] = local[i];
  }
  return out;
}

inline JetAlgebra jet_quotient(const AlgebraPresentation& algebra, std::vector<PointIdeal> points, int k) {
  if (k < 1) fail(ErrorKind::ValidationError, "truncation order must be at least 1");
  for (const auto& p : points) require_point(algebra, p);
  {
    std::vector<PointIdeal> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(ErrorKind::DuplicatePoints, "jet points must be distinct");
  }
  const std::size_t n = algebra.arity();
  JetAlgebra jet;
  jet.algebra_ = algebra;
  jet.points_ = points;
  jet.order_ = k;

  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    JetAlgebra::LocalBlock block;
    block.point = points[pi];
    block.offset = jet.dim_;
    block.monomials = detail::monomials_below(n, k);
    const std::size_t w = block.monomials.size();

    // (I + m^k) / m^k is spanned by truncations of monomial multiples of relations.
    QMatrix span(0, w);
    for (const auto& rel : algebra.relations()) {
      Polynomial centred = rel.shifted(points[pi].coords());
      for (const auto& mono : block.monomials) {
        Polynomial t = (Polynomial::monomial(mono) * centred).truncated(k);
        if (t.is_zero()) continue;
        std::vector<Rational> row(w);
        for (const auto& [m, c] : t.terms())
          row[static_cast<std::size_t>(std::find(block.monomials.begin(), block.monomials.end(), m) -
                                       block.monomials.begin())] = c;
        span.append_row(row);
      }
    }
    // Eliminate low-degree monomials first. Every monomial then reduces to
    // standard monomials of the same or higher degree, so the basis respects
    // the m-adic filtration (linear coordinates are derivations at the point).
    // Within a degree, monomials in the earliest variables survive.
    std::vector<std::size_t> order(w);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const Monomial& ma = block.monomials[a];
      const Monomial& mb = block.monomials[b];
      if (degree(ma) != degree(mb)) return degree(ma) < degree(mb);
      return ma < mb;
    });
    block.relations = span.rows() ? row_reduce(span, &order) : Echelon{QMatrix(0, w), {}};
    std::vector<bool> pivot(w, false);
    for (auto c : block.relations.pivots) pivot[c] = true;
    for (std::size_t i = 0; i < w; ++i)
      if (!pivot[i]) block.basis.push_back(i);
    for (std::size_t b : block.basis) {
      std::string mono = Polynomial::monomial_str(block.monomials[b], algebra.generators());
      jet.labels_.push_back("m" + std::to_string(pi) + ":" + (mono.empty() ? "1" : mono));
    }
    jet.dim_ += block.basis.size();
    jet.blocks_.push_back(std::move(block));
  }

  const std::size_t d = jet.dim_;
  jet.table_.assign(d * d * d, Rational(0));
  jet.unit_.assign(d, Rational(0));
  jet.evals_.assign(points.size(), std::vector<Rational>(d));
  for (std::size_t pi = 0; pi < jet.blocks_.size(); ++pi) {
    const auto& block = jet.blocks_[pi];
    const std::size_t bd = block.basis.size();
    for (std::size_t i = 0; i < bd; ++i) {
      const Monomial& mi = block.monomials[block.basis[i]];
      if (degree(mi) == 0) {
        jet.unit_[block.offset + i] = 1;
        jet.evals_[pi][block.offset + i] = 1;
      }
      for (std::size_t j = 0; j < bd; ++j) {
        const Monomial& mj = block.monomials[block.basis[j]];
        Monomial prod(n);
        for (std::size_t v = 0; v < n; ++v) prod[v] = mi[v] + mj[v];
        if (degree(prod) >= k) continue;
        auto coords = detail::local_coordinates(block, Polynomial::monomial(prod));
        for (std::size_t c = 0; c < bd; ++c)
          jet.table_[((block.offset + i) * d + block.offset + j) * d + block.offset + c] = coords[c];
      }
    }
  }

  // Exhaustive axiom check, block by block (blocks multiply to zero by construction).
  for (const auto& block : jet.blocks_) {
    const std::size_t lo = block.offset, hi = block.offset + block.basis.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = lo; j < hi; ++j) {
        for (std::size_t c = lo; c < hi; ++c)
          if (jet.product(i, j, c) != jet.product(j, i, c))
            fail(ErrorKind::ComputationError, "jet algebra is not commutative");
        for (std::size_t l = lo; l < hi; ++l)
          for (std::size_t out = lo; out < hi; ++out) {
            Rational left = 0, right = 0;
            for (std::size_t m = lo; m < hi; ++m) {
              left += jet.product(i, j, m) * jet.product(m, l, out);
              right += jet.product(j, l, m) * jet.product(i, m, out);
            }
            if (left != right) fail(ErrorKind::ComputationError, "jet algebra is not associative");
          }
      }
  }
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<Rational> e(d);
    e[i] = 1;
    if (jet.multiply(jet.unit_, e) != e) fail(ErrorKind::ComputationError, "jet algebra unit check failed");
    for (std::size_t p = 0; p < points.size(); ++p)
      for (std::size_t j = 0; j < d; ++j) {
        Rational lhs = 0;
        for (std::size_t c = 0; c < d; ++c) lhs += jet.product(i, j, c) * jet.evals_[p][c];
        if (lhs != jet.evals_[p][i] * jet.evals_[p][j])
          fail(ErrorKind::ComputationError, "evaluation is not multiplicative");
      }
  }
  return jet;
}

}  // namespace currext
