#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "currext/errors.hpp"
#include "currext/linalg.hpp"

namespace currext {

// ---------------------------------------------------------------------------
// Cartan types
// ---------------------------------------------------------------------------

struct CartanType {
  char family = 'A';
  int rank = 1;

  std::string name() const { return std::string(1, family) + std::to_string(rank); }
  friend auto operator<=>(const CartanType&, const CartanType&) = default;
};

inline void validate(const CartanType& t) {
  bool ok = false;
  switch (t.family) {
    case 'A': ok = t.rank >= 1; break;
    case 'B': ok = t.rank >= 2; break;
    case 'C': ok = t.rank >= 2; break;
    case 'D': ok = t.rank >= 4; break;
    case 'E': ok = t.rank >= 6 && t.rank <= 8; break;
    case 'F': ok = t.rank == 4; break;
    case 'G': ok = t.rank == 2; break;
    default: ok = false;
  }
  if (!ok) fail(ErrorKind::IllegalType, "no simple Lie algebra of type " + t.name());
}

inline CartanType parse_cartan_type(std::string_view s) {
  if (s.size() < 2) fail(ErrorKind::IllegalType, "bad Cartan type '" + std::string(s) + "'");
  CartanType t;
  t.family = s[0];
  int r = 0;
  for (char c : s.substr(1)) {
    if (c < '0' || c > '9' || r > 1000)
      fail(ErrorKind::IllegalType, "bad Cartan type '" + std::string(s) + "'");
    r = r * 10 + (c - '0');
  }
  t.rank = r;
  validate(t);
  return t;
}

/// A semisimple type as a list of simple factors, kept sorted by (family, rank).
/// Weights of the semisimple algebra are concatenations of per-factor weights
/// in this canonical order.
class SemisimpleType {
 public:
  SemisimpleType() = default;
  explicit SemisimpleType(std::vector<CartanType> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) fail(ErrorKind::IllegalType, "a semisimple type needs at least one factor");
    for (const auto& f : factors_) validate(f);
    std::sort(factors_.begin(), factors_.end());
  }

  /// "A2", "A2xA1", "B3xG2".
  static SemisimpleType parse(std::string_view s) {
    std::vector<CartanType> fs;
    std::size_t start = 0;
    while (start <= s.size()) {
      std::size_t x = s.find('x', start);
      std::string_view part = s.substr(start, x == std::string_view::npos ? s.npos : x - start);
      fs.push_back(parse_cartan_type(part));
      if (x == std::string_view::npos) break;
      start = x + 1;
    }
    return SemisimpleType(std::move(fs));
  }

  const std::vector<CartanType>& factors() const { return factors_; }
  int rank() const {
    int r = 0;
    for (const auto& f : factors_) r += f.rank;
    return r;
  }
  std::string name() const {
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) out += (i ? "x" : "") + factors_[i].name();
    return out;
  }
  bool is_simple() const { return factors_.size() == 1; }

  friend bool operator==(const SemisimpleType&, const SemisimpleType&) = default;

 private:
  std::vector<CartanType> factors_;
};

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

/// Integer coordinates on the fundamental weights.
class Weight {
 public:
  Weight() = default;
  explicit Weight(std::size_t rank) : c_(rank, 0) {}
  explicit Weight(std::vector<std::int64_t> coords) : c_(std::move(coords)) {}
  Weight(std::initializer_list<std::int64_t> coords) : c_(coords) {}

  std::size_t size() const { return c_.size(); }
  std::int64_t operator[](std::size_t i) const { return c_[i]; }
  std::int64_t& operator[](std::size_t i) { return c_[i]; }
  const std::vector<std::int64_t>& coords() const { return c_; }

  bool is_dominant() const {
    return std::all_of(c_.begin(), c_.end(), [](std::int64_t v) { return v >= 0; });
  }
  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](std::int64_t v) { return v == 0; });
  }
  std::int64_t l1() const {
    std::int64_t s = 0;
    for (auto v : c_) s += v < 0 ? -v : v;
    return s;
  }

  Weight& operator+=(const Weight& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Weight& operator-=(const Weight& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
  friend Weight operator-(Weight a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Weight operator*(std::int64_t k, Weight a) {
    for (auto& v : a.c_) v *= k;
    return a;
  }
  friend auto operator<=>(const Weight&, const Weight&) = default;
  friend bool operator==(const Weight&, const Weight&) = default;

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < c_.size(); ++i) s += (i ? "," : "") + std::to_string(c_[i]);
    return s + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const Weight& w) { return os << w.str(); }

 private:
  std::vector<std::int64_t> c_;
};

/// A class in P/Q, written as residues modulo the Smith diagonal of the Cartan
/// matrix. Two classes are comparable only when they come from the same type.
struct PQClass {
  std::vector<std::int64_t> residues;
  std::vector<std::int64_t> diagonal;

  bool is_zero() const {
    return std::all_of(residues.begin(), residues.end(), [](std::int64_t r) { return r == 0; });
  }
  std::int64_t order_of_group() const {
    std::int64_t n = 1;
    for (auto d : diagonal) n *= d;
    return n;
  }
  friend PQClass operator+(const PQClass& a, const PQClass& b) {
    PQClass out = a;
    for (std::size_t i = 0; i < out.residues.size(); ++i)
      out.residues[i] = (a.residues[i] + b.residues[i]) % a.diagonal[i];
    return out;
  }
  friend PQClass operator-(const PQClass& a) {
    PQClass out = a;
    for (std::size_t i = 0; i < out.residues.size(); ++i)
      out.residues[i] = (a.diagonal[i] - a.residues[i]) % a.diagonal[i];
    return out;
  }
  friend auto operator<=>(const PQClass&, const PQClass&) = default;
  friend bool operator==(const PQClass&, const PQClass&) = default;
};

struct SignedWeight {
  int sign = 0;  // -1, 0 or +1
  Weight weight;
};

// ---------------------------------------------------------------------------
// Root datum
// ---------------------------------------------------------------------------

namespace detail {

struct SimpleData {
  std::vector<std::int64_t> d;                       // symmetrizer
  std::vector<std::pair<int, int>> edges;            // Dynkin edges, 0-based
};

// Bourbaki numbering. d_i = (alpha_i, alpha_i)/2 with short roots of length^2 = 2.
inline SimpleData simple_data(const CartanType& t) {
  const int n = t.rank;
  SimpleData s;
  s.d.assign(n, 1);
  auto chain = [&](int upto) {
    for (int i = 0; i + 1 < upto; ++i) s.edges.emplace_back(i, i + 1);
  };
  switch (t.family) {
    case 'A': chain(n); break;
    case 'B':
      chain(n);
      for (int i = 0; i + 1 < n; ++i) s.d[i] = 2;
      break;
    case 'C':
      chain(n);
      s.d[n - 1] = 2;
      break;
    case 'D':
      chain(n - 1);
      s.edges.emplace_back(n - 3, n - 1);
      break;
    case 'E':
      s.edges = {{0, 2}, {2, 3}, {3, 4}, {1, 3}};
      for (int i = 4; i + 1 < n; ++i) s.edges.emplace_back(i, i + 1);
      break;
    case 'F':
      chain(4);
      s.d = {2, 2, 1, 1};
      break;
    case 'G':
      chain(2);
      s.d = {1, 3};
      break;
    default: fail(ErrorKind::IllegalType, t.name());
  }
  return s;
}

}  // namespace detail

class RootDatum {
 public:
  explicit RootDatum(SemisimpleType type) : type_(std::move(type)) {
    rank_ = type_.rank();
    cartan_.assign(rank_, std::vector<std::int64_t>(rank_, 0));
    d_.assign(rank_, 1);
    factor_of_.assign(rank_, 0);

    std::size_t offset = 0;
    for (std::size_t f = 0; f < type_.factors().size(); ++f) {
      const CartanType& ct = type_.factors()[f];
      detail::SimpleData sd = detail::simple_data(ct);
      offsets_.push_back(offset);
      // (alpha_i, alpha_j) = -max(d_i, d_j) along every Dynkin bond.
      std::vector<std::vector<std::int64_t>> gram(ct.rank, std::vector<std::int64_t>(ct.rank, 0));
      for (int i = 0; i < ct.rank; ++i) gram[i][i] = 2 * sd.d[i];
      for (auto [i, j] : sd.edges) gram[i][j] = gram[j][i] = -std::max(sd.d[i], sd.d[j]);
      for (int i = 0; i < ct.rank; ++i) {
        d_[offset + i] = sd.d[i];
        factor_of_[offset + i] = f;
        for (int j = 0; j < ct.rank; ++j)
          cartan_[offset + i][offset + j] = 2 * gram[i][j] / gram[i][i];
      }
      offset += ct.rank;
    }
    offsets_.push_back(offset);

    build_roots();
    build_form();
    snf_ = smith_normal_form(cartan_);
  }

  const SemisimpleType& type() const { return type_; }
  std::size_t rank() const { return static_cast<std::size_t>(rank_); }
  const IntMatrix& cartan_matrix() const { return cartan_; }
  const std::vector<std::int64_t>& symmetrizer() const { return d_; }
  std::size_t factor_count() const { return type_.factors().size(); }
  std::size_t factor_of(std::size_t i) const { return factor_of_[i]; }
  std::size_t factor_offset(std::size_t f) const { return offsets_[f]; }
  std::size_t factor_rank(std::size_t f) const { return offsets_[f + 1] - offsets_[f]; }

  /// Positive roots in simple-root coordinates, sorted by height.
  const std::vector<std::vector<std::int64_t>>& positive_roots() const { return pos_roots_; }
  /// The same roots in fundamental-weight coordinates.
  const std::vector<Weight>& positive_root_weights() const { return pos_root_weights_; }
  std::size_t root_factor(std::size_t root_index) const { return pos_root_factor_[root_index]; }

  /// alpha_j expressed on the fundamental weights: column j of the Cartan matrix.
  Weight simple_root(std::size_t j) const {
    Weight w(rank());
    for (std::size_t i = 0; i < rank(); ++i) w[i] = cartan_[i][j];
    return w;
  }

  Weight to_weight(const std::vector<std::int64_t>& root_coords) const {
    Weight w(rank());
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j) w[i] += cartan_[i][j] * root_coords[j];
    return w;
  }

  Weight rho() const { return Weight(std::vector<std::int64_t>(rank(), 1)); }
  Weight zero() const { return Weight(rank()); }

  void check_weight(const Weight& w) const {
    if (w.size() != rank())
      fail(ErrorKind::RankMismatch, "weight " + w.str() + " has wrong length for type " + type_.name());
  }

  void check_dominant(const Weight& w) const {
    check_weight(w);
    if (!w.is_dominant()) fail(ErrorKind::NotDominant, "weight " + w.str() + " is not dominant");
  }

  Weight reflect(Weight w, std::size_t i) const {
    const std::int64_t k = w[i];
    if (k == 0) return w;
    for (std::size_t r = 0; r < rank(); ++r) w[r] -= k * cartan_[r][i];
    return w;
  }

  /// Pairing with a root given in simple-root coordinates: (w, beta).
  std::int64_t pair_with_root(const Weight& w, const std::vector<std::int64_t>& beta) const {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < rank(); ++k) s += beta[k] * d_[k] * w[k];
    return s;
  }

  /// form_scale() * (a, b); integral for all weights a, b.
  std::int64_t scaled_form(const Weight& a, const Weight& b) const {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < rank(); ++k) {
      std::int64_t bk = 0;  // form_scale * (b in simple-root coordinates)_k
      for (std::size_t j = 0; j < rank(); ++j) bk += inv_scaled_[k][j] * b[j];
      s += bk * d_[k] * a[k];
    }
    return s;
  }
  std::int64_t form_scale() const { return det_; }

  /// Coxeter number, maximised over simple factors.
  int coxeter_number() const {
    int h = 0;
    for (std::size_t f = 0; f < factor_count(); ++f) {
      std::size_t roots = 0;
      for (std::size_t r = 0; r < pos_roots_.size(); ++r)
        if (pos_root_factor_[r] == f) ++roots;
      h = std::max<int>(h, static_cast<int>(2 * roots / factor_rank(f)));
    }
    return h;
  }

  const SmithForm& smith_form() const { return snf_; }

  /// Highest root of simple factor f, padded with zeros to a weight of the full type.
  Weight highest_root_of_factor(std::size_t f) const {
    std::size_t best = pos_roots_.size();
    std::int64_t best_height = -1;
    for (std::size_t r = 0; r < pos_roots_.size(); ++r) {
      if (pos_root_factor_[r] != f) continue;
      std::int64_t h = std::accumulate(pos_roots_[r].begin(), pos_roots_[r].end(), std::int64_t{0});
      if (h > best_height) {
        best_height = h;
        best = r;
      }
    }
    return pos_root_weights_[best];
  }

 private:
  void build_roots() {
    // Root strings: beta + alpha_i is a root iff q = p - <beta, alpha_i^vee> > 0,
    // where p is the length of the alpha_i-string below beta.
    std::set<std::vector<std::int64_t>> known;
    std::vector<std::vector<std::int64_t>> layer;
    for (int i = 0; i < rank_; ++i) {
      std::vector<std::int64_t> e(rank_, 0);
      e[i] = 1;
      layer.push_back(e);
      known.insert(e);
    }
    while (!layer.empty()) {
      for (const auto& b : layer) pos_roots_.push_back(b);
      std::set<std::vector<std::int64_t>> next;
      for (const auto& beta : layer) {
        for (int i = 0; i < rank_; ++i) {
          int p = 0;
          for (;;) {
            std::vector<std::int64_t> down = beta;
            down[i] -= p + 1;
            if (!known.count(down)) break;
            ++p;
          }
          std::int64_t pairing = 0;
          for (int j = 0; j < rank_; ++j) pairing += cartan_[i][j] * beta[j];
          if (p - pairing > 0) {
            std::vector<std::int64_t> up = beta;
            up[i] += 1;
            if (!known.count(up)) next.insert(up);
          }
        }
      }
      for (const auto& b : next) known.insert(b);
      layer.assign(next.begin(), next.end());
    }
    for (const auto& beta : pos_roots_) {
      pos_root_weights_.push_back(to_weight(beta));
      std::size_t f = 0;
      for (int k = 0; k < rank_; ++k)
        if (beta[k] != 0) f = factor_of_[k];
      pos_root_factor_.push_back(f);
    }
  }

  void build_form() {
    QMatrix c(rank(), rank());
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j) c(i, j) = static_cast<long>(cartan_[i][j]);
    QMatrix inv = *inverse(c);
    Integer den = 1;
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j) den = lcm(den, Integer(inv(i, j).get_den()));
    det_ = den.get_si();
    inv_scaled_.assign(rank(), std::vector<std::int64_t>(rank(), 0));
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j) {
        Rational v = inv(i, j) * den;
        inv_scaled_[i][j] = v.get_num().get_si();
      }
  }

  SemisimpleType type_;
  int rank_ = 0;
  IntMatrix cartan_;
  std::vector<std::int64_t> d_;
  std::vector<std::size_t> factor_of_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<std::int64_t>> pos_roots_;
  std::vector<Weight> pos_root_weights_;
  std::vector<std::size_t> pos_root_factor_;
  IntMatrix inv_scaled_;
  std::int64_t det_ = 1;
  SmithForm snf_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

inline RootDatum build_root_system(const SemisimpleType& t) { return RootDatum(t); }

inline PQClass weight_class_mod_Q(const RootDatum& rd, const Weight& w) {
  rd.check_weight(w);
  const SmithForm& snf = rd.smith_form();
  PQClass cls;
  cls.diagonal = snf.diagonal;
  cls.residues.assign(rd.rank(), 0);
  for (std::size_t i = 0; i < rd.rank(); ++i) {
    std::int64_t v = 0;
    for (std::size_t j = 0; j < rd.rank(); ++j) v += snf.left[i][j] * w[j];
    const std::int64_t d = snf.diagonal[i];
    cls.residues[i] = ((v % d) + d) % d;
  }
  return cls;
}

/// Walks x into the dominant chamber by simple reflections. The sign is
/// (-1)^length, or 0 when x lies on a wall of some chamber (a zero coordinate
/// shows up along the walk or at its end).
inline SignedWeight dominant_conjugate_shifted(const RootDatum& rd, Weight x) {
  int sign = 1;
  for (;;) {
    std::size_t neg = rd.rank();
    for (std::size_t i = 0; i < rd.rank(); ++i) {
      if (x[i] == 0) return {0, x};
      if (x[i] < 0 && neg == rd.rank()) neg = i;
    }
    if (neg == rd.rank()) return {sign, x};
    x = rd.reflect(x, neg);
    sign = -sign;
  }
}

/// Unique dominant element of the Weyl orbit of w.
inline Weight dominant_conjugate(const RootDatum& rd, Weight w) {
  for (;;) {
    std::size_t neg = rd.rank();
    for (std::size_t i = 0; i < rd.rank(); ++i)
      if (w[i] < 0) {
        neg = i;
        break;
      }
    if (neg == rd.rank()) return w;
    w = rd.reflect(w, neg);
  }
}

/// lambda* = -w0(lambda), the highest weight of the dual module.
inline Weight dual_weight(const RootDatum& rd, const Weight& w) {
  rd.check_dominant(w);
  return dominant_conjugate(rd, -w);
}

inline Weight highest_root(const RootDatum& rd) {
  if (rd.factor_count() != 1)
    fail(ErrorKind::NotSimpleFactor, "highest_root needs a simple type, got " + rd.type().name());
  return rd.highest_root_of_factor(0);
}

/// All elements of the Weyl orbit of w, by closure under simple reflections.
inline std::vector<Weight> weyl_orbit(const RootDatum& rd, const Weight& w) {
  std::set<Weight> seen{w};
  std::vector<Weight> frontier{w};
  while (!frontier.empty()) {
    std::vector<Weight> next;
    for (const auto& v : frontier)
      for (std::size_t i = 0; i < rd.rank(); ++i) {
        if (v[i] == 0) continue;
        Weight r = rd.reflect(v, i);
        if (seen.insert(r).second) next.push_back(std::move(r));
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

}  // namespace currext
