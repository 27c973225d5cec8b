#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "currext/modcat.hpp"

namespace currext {

enum class VanishingReason { None, DifferAtTwoOrMore, HomZero, TangentZero };

inline const char* to_string(VanishingReason r) {
  switch (r) {
    case VanishingReason::None: return "none";
    case VanishingReason::DifferAtTwoOrMore: return "differ-at-two-or-more";
    case VanishingReason::HomZero: return "hom-zero";
    case VanishingReason::TangentZero: return "tangent-zero";
  }
  return "none";
}

struct PointContribution {
  PointIdeal point;
  Weight source;  // pi(m)
  Weight target;  // pi'(m)
  std::int64_t hom = 0;
  std::int64_t tangent = 0;
  std::int64_t product() const { return hom * tangent; }
};

struct Ext1Report {
  std::int64_t total_dimension = 0;
  std::vector<PointIdeal> difference_locus;
  std::vector<PointContribution> contributions;
  VanishingReason reason = VanishingReason::None;
};

/// dim Ext^1(V(pi), V(pi')).
///  - pi and pi' differ at two or more points: 0.
///  - they differ at exactly one point m: dim Hom_g(g (x) V(pi(m)), V(pi'(m))) * dim m/m^2.
///  - pi = pi': the sum of the same product over the support.
inline Ext1Report ext1_dimension(const SupportFunction& source, const SupportFunction& target) {
  require_same_context(source, target);
  const SupportFunction pi = normalize(source), pj = normalize(target);
  const ModuleContext& ctx = *pi.context();

  Ext1Report report;
  std::set<PointIdeal> points;
  for (const auto& [p, w] : pi.entries()) points.insert(p);
  for (const auto& [p, w] : pj.entries()) points.insert(p);
  for (const auto& p : points)
    if (pi.at(p) != pj.at(p)) report.difference_locus.push_back(p);

  if (report.difference_locus.size() >= 2) {
    report.reason = VanishingReason::DifferAtTwoOrMore;
    return report;
  }
  std::vector<PointIdeal> sites = report.difference_locus;
  if (sites.empty())
    for (const auto& [p, w] : pi.entries()) sites.push_back(p);

  for (const auto& p : sites) {
    PointContribution c;
    c.point = p;
    c.source = pi.at(p);
    c.target = pj.at(p);
    c.hom = hom_g_adjoint_dimension(ctx.root_datum(), c.source, c.target, ctx.cache());
    c.tangent = static_cast<std::int64_t>(tangent_dimension(ctx.algebra(), p));
    report.total_dimension += c.product();
    report.contributions.push_back(std::move(c));
  }
  if (report.total_dimension == 0) {
    bool all_hom_zero = true;
    for (const auto& c : report.contributions) all_hom_zero &= c.hom == 0;
    report.reason = all_hom_zero ? VanishingReason::HomZero : VanishingReason::TangentZero;
  }
  return report;
}

/// Same block iff equal spectral characters. Only meaningful for connected A
/// other than the ground field, which the caller has to vouch for.
inline bool same_block(const SupportFunction& a, const SupportFunction& b, bool assume_connected) {
  require_same_context(a, b);
  if (a.context()->algebra().is_ground_field())
    fail(ErrorKind::TrivialAlgebra, "blocks over the ground field are single modules; no block test");
  if (!assume_connected)
    fail(ErrorKind::RequiresConnectedFlag, "block comparison needs the algebra to be asserted connected");
  return spectral_character(a) == spectral_character(b);
}

using LinkingChain = std::vector<Weight>;

inline std::int64_t default_chain_bound(const RootDatum& rd, const Weight& lambda, const Weight& mu) {
  return lambda.l1() + mu.l1() + 2 * static_cast<std::int64_t>(rd.rank()) * rd.coxeter_number();
}

/// Shortest chain lambda = l_0, ..., l_r = mu of dominant weights with
/// Hom_g(g (x) V(l_i), V(l_{i+1})) != 0, searched over weights of l1-norm <= bound.
inline LinkingChain linking_chain(const RootDatum& rd, const Weight& lambda, const Weight& mu,
                                  std::optional<std::int64_t> bound = std::nullopt,
                                  MultiplicityCache* cache = nullptr) {
  rd.check_dominant(lambda);
  rd.check_dominant(mu);
  if (weight_class_mod_Q(rd, lambda) != weight_class_mod_Q(rd, mu))
    fail(ErrorKind::NotLinked, lambda.str() + " and " + mu.str() + " differ modulo the root lattice");
  const std::int64_t cap = bound.value_or(default_chain_bound(rd, lambda, mu));
  if (cap < 0) fail(ErrorKind::ValidationError, "chain bound must be nonnegative");
  if (lambda == mu) return {lambda};
  if (lambda.l1() > cap || mu.l1() > cap)
    fail(ErrorKind::BoundExceeded, "endpoints exceed the search bound " + std::to_string(cap));

  std::vector<Weight> thetas;
  for (std::size_t f = 0; f < rd.factor_count(); ++f) thetas.push_back(rd.highest_root_of_factor(f));

  std::map<Weight, Weight> parent{{lambda, lambda}};
  std::deque<Weight> queue{lambda};
  while (!queue.empty()) {
    Weight cur = queue.front();
    queue.pop_front();
    std::set<Weight> next;
    for (const auto& th : thetas)
      for (const auto& [nu, c] : tensor_decomposition(rd, cur, th, cache))
        if (c > 0 && nu.l1() <= cap) next.insert(nu);
    for (const auto& nu : next) {
      if (parent.count(nu)) continue;
      parent.emplace(nu, cur);
      if (nu == mu) {
        LinkingChain chain{mu};
        while (chain.back() != lambda) chain.push_back(parent.at(chain.back()));
        return {chain.rbegin(), chain.rend()};
      }
      queue.push_back(nu);
    }
  }
  fail(ErrorKind::BoundExceeded, "no chain from " + lambda.str() + " to " + mu.str() + " with weights of norm <= " +
                                     std::to_string(cap) + "; the search is inconclusive, not a proof of absence");
}

/// Directed graph on isomorphism classes, edge weight dim Ext^1(source, target).
struct ExtQuiver {
  struct Edge {
    std::size_t source, target;
    std::int64_t weight;
  };
  std::vector<SupportFunction> nodes;
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> character_classes;  // node indices sharing a spectral character
};

inline ExtQuiver ext_quiver(const std::vector<SupportFunction>& family) {
  ExtQuiver q;
  for (const auto& pi : family) {
    if (!q.nodes.empty()) require_same_context(q.nodes.front(), pi);
    SupportFunction n = normalize(pi);
    bool seen = false;
    for (const auto& m : q.nodes) seen |= m.entries() == n.entries();
    if (!seen) q.nodes.push_back(std::move(n));
  }
  for (std::size_t i = 0; i < q.nodes.size(); ++i)
    for (std::size_t j = 0; j < q.nodes.size(); ++j) {
      auto r = ext1_dimension(q.nodes[i], q.nodes[j]);
      if (r.total_dimension > 0) q.edges.push_back({i, j, r.total_dimension});
    }
  std::map<SpectralCharacter, std::vector<std::size_t>> by_char;
  std::vector<SpectralCharacter> order;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    auto ch = spectral_character(q.nodes[i]);
    auto [it, inserted] = by_char.try_emplace(ch);
    if (inserted) order.push_back(ch);
    it->second.push_back(i);
  }
  for (const auto& ch : order) q.character_classes.push_back(by_char[ch]);
  return q;
}

inline std::string to_dot(const ExtQuiver& q) {
  std::ostringstream os;
  os << "digraph ext1 {\n";
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    std::string label = q.nodes[i].str();
    os << "  n" << i << " [label=\"" << label << "\"];\n";
  }
  for (const auto& e : q.edges) os << "  n" << e.source << " -> n" << e.target << " [label=\"" << e.weight << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace currext
