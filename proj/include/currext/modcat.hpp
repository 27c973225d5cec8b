#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "currext/comalg.hpp"
#include "currext/repcalc.hpp"
#include "currext/rootsys.hpp"

namespace currext {

/// The pair (g, A) every simple module lives over.
class ModuleContext {
 public:
  ModuleContext(SemisimpleType type, AlgebraPresentation algebra)
      : root_datum_(std::move(type)), algebra_(std::move(algebra)) {}

  const SemisimpleType& type() const { return root_datum_.type(); }
  const RootDatum& root_datum() const { return root_datum_; }
  const AlgebraPresentation& algebra() const { return algebra_; }
  MultiplicityCache* cache() const { return &cache_; }

  friend bool operator==(const ModuleContext& a, const ModuleContext& b) {
    return a.type() == b.type() && a.algebra_ == b.algebra_;
  }

 private:
  RootDatum root_datum_;
  AlgebraPresentation algebra_;
  mutable MultiplicityCache cache_;
};

using ContextPtr = std::shared_ptr<const ModuleContext>;

inline ContextPtr make_context(SemisimpleType type, AlgebraPresentation algebra) {
  return std::make_shared<const ModuleContext>(std::move(type), std::move(algebra));
}

/// Label of the simple module V(pi) = (x)_m V_m(pi(m)).
class SupportFunction {
 public:
  using Entries = std::map<PointIdeal, Weight>;

  explicit SupportFunction(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  SupportFunction(ContextPtr ctx, const std::vector<std::pair<PointIdeal, Weight>>& entries)
      : ctx_(std::move(ctx)) {
    for (const auto& [p, w] : entries) {
      require_point(ctx_->algebra(), p);
      ctx_->root_datum().check_dominant(w);
      if (!entries_.emplace(p, w).second)
        fail(ErrorKind::DuplicatePoints, "point " + p.str() + " listed twice");
    }
  }

  const ContextPtr& context() const { return ctx_; }
  const Entries& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  /// pi(m), with points outside the support mapped to the zero weight.
  Weight at(const PointIdeal& p) const {
    auto it = entries_.find(p);
    return it == entries_.end() ? ctx_->root_datum().zero() : it->second;
  }

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (const auto& [p, w] : entries_) {
      s += (first ? "" : ", ") + p.str() + "->" + w.str();
      first = false;
    }
    return s + "}";
  }

  friend bool operator==(const SupportFunction& a, const SupportFunction& b) {
    return *a.ctx_ == *b.ctx_ && a.entries_ == b.entries_;
  }
  friend bool operator<(const SupportFunction& a, const SupportFunction& b) { return a.entries_ < b.entries_; }

 private:
  friend SupportFunction normalize(const SupportFunction&);
  friend SupportFunction dual(const SupportFunction&);
  friend SupportFunction merge_disjoint(const SupportFunction&, const SupportFunction&);

  ContextPtr ctx_;
  Entries entries_;
};

inline void require_same_context(const SupportFunction& a, const SupportFunction& b) {
  if (a.context() != b.context() && !(*a.context() == *b.context()))
    fail(ErrorKind::ContextMismatch, "modules live over different (g, A)");
}

inline SupportFunction normalize(const SupportFunction& pi) {
  SupportFunction out(pi.ctx_);
  for (const auto& [p, w] : pi.entries_)
    if (!w.is_zero()) out.entries_.emplace(p, w);
  return out;
}

inline bool is_isomorphic(const SupportFunction& a, const SupportFunction& b) {
  require_same_context(a, b);
  return normalize(a).entries() == normalize(b).entries();
}

inline SupportFunction dual(const SupportFunction& pi) {
  SupportFunction out(pi.ctx_);
  for (const auto& [p, w] : pi.entries_) out.entries_.emplace(p, dual_weight(pi.ctx_->root_datum(), w));
  return out;
}

/// Tensor product of modules with disjoint supports.
inline SupportFunction merge_disjoint(const SupportFunction& a, const SupportFunction& b) {
  require_same_context(a, b);
  SupportFunction out = a;
  for (const auto& [p, w] : b.entries_)
    if (!out.entries_.emplace(p, w).second) fail(ErrorKind::DuplicatePoints, "supports overlap at " + p.str());
  return out;
}

using SpectralCharacter = std::map<PointIdeal, PQClass>;

inline SpectralCharacter spectral_character(const SupportFunction& pi) {
  SpectralCharacter out;
  for (const auto& [p, w] : pi.entries()) {
    PQClass c = weight_class_mod_Q(pi.context()->root_datum(), w);
    if (!c.is_zero()) out.emplace(p, std::move(c));
  }
  return out;
}

/// <a (x) h_i, pi> = sum_m a(m) <h_i, pi(m)>. Simple coroots are numbered from 1.
inline Rational highest_weight_functional(const SupportFunction& pi, const Polynomial& a, std::size_t h_index) {
  const auto& ctx = *pi.context();
  if (a.arity() != ctx.algebra().arity())
    fail(ErrorKind::ArityMismatch, "element has " + std::to_string(a.arity()) + " variables");
  if (h_index < 1 || h_index > ctx.root_datum().rank())
    fail(ErrorKind::BadIndex, "no simple coroot with index " + std::to_string(h_index));
  Rational s = 0;
  for (const auto& [p, w] : pi.entries()) s += a.evaluate(p.coords()) * static_cast<long>(w[h_index - 1]);
  return s;
}

/// dim V(pi), the product of the pointwise dimensions.
inline Integer module_dimension(const SupportFunction& pi) {
  Integer d = 1;
  for (const auto& [p, w] : pi.entries()) d *= static_cast<unsigned long>(irrep_dimension(pi.context()->root_datum(), w));
  return d;
}

}  // namespace currext
