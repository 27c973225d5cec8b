#pragma once

#include <random>
#include <string>
#include <vector>

#include "currext/modcat.hpp"

namespace fixtures {

using namespace currext;

inline AlgebraPresentation alg(std::vector<std::string> gens, std::vector<std::string> rels) {
  return AlgebraPresentation::parse(std::move(gens), rels);
}

inline PointIdeal pt(std::initializer_list<const char*> cs) {
  std::vector<Rational> v;
  for (auto c : cs) v.push_back(parse_rational(c));
  return PointIdeal(v);
}

inline SupportFunction sf(const ContextPtr& ctx, std::vector<std::pair<PointIdeal, Weight>> e) { return {ctx, e}; }

// A context with a small pool of points on the variety.
struct Setting {
  ContextPtr ctx;
  std::vector<PointIdeal> pool;
};

inline std::vector<Setting> settings() {
  std::vector<Setting> out;
  auto curve_t = alg({"t"}, {});
  auto node = alg({"x", "y"}, {"x*y"});
  auto cusp = alg({"x", "y"}, {"y^2 - x^3"});
  auto torus = alg({"t", "s"}, {"t*s - 1"});
  for (const char* type : {"A1", "A2", "B2", "G2", "A1xA1"}) {
    auto t = SemisimpleType::parse(type);
    out.push_back({make_context(t, curve_t), {pt({"0"}), pt({"1"}), pt({"-2"})}});
    out.push_back({make_context(t, node), {pt({"0", "0"}), pt({"1", "0"}), pt({"0", "3"})}});
    out.push_back({make_context(t, cusp), {pt({"0", "0"}), pt({"1", "1"})}});
    out.push_back({make_context(t, torus), {pt({"1", "1"}), pt({"2", "1/2"})}});
  }
  return out;
}

inline Weight random_dominant(std::mt19937& rng, std::size_t rank, int max_coord) {
  std::uniform_int_distribution<int> d(0, max_coord);
  Weight w(rank);
  for (std::size_t i = 0; i < rank; ++i) w[i] = d(rng);
  return w;
}

// Random support function on the pool; zero weights are allowed on purpose.
inline SupportFunction random_support(std::mt19937& rng, const Setting& s, int max_coord = 2) {
  std::vector<std::pair<PointIdeal, Weight>> e;
  for (const auto& p : s.pool)
    if (rng() % 2) e.emplace_back(p, random_dominant(rng, s.ctx->root_datum().rank(), max_coord));
  return {s.ctx, e};
}

// Two supports differing at exactly one point of the pool.
inline std::pair<SupportFunction, SupportFunction> differ_at_one(std::mt19937& rng, const Setting& s, int max_coord = 2) {
  const std::size_t rank = s.ctx->root_datum().rank();
  SupportFunction a = random_support(rng, s, max_coord);
  const PointIdeal& m = s.pool[rng() % s.pool.size()];
  std::vector<std::pair<PointIdeal, Weight>> e;
  for (const auto& [p, w] : a.entries())
    if (!(p == m)) e.emplace_back(p, w);
  e.emplace_back(m, random_dominant(rng, rank, max_coord));
  return {a, SupportFunction(s.ctx, e)};
}

}  // namespace fixtures
