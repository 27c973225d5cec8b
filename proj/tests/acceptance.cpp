// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "currext/ceoracle.hpp"
#include "currext/extcalc.hpp"
#include "support/character_oracle.hpp"
#include "support/fixtures.hpp"

using namespace currext;
using namespace fixtures;

namespace {

// pinned budgets and counts
constexpr double kBudgetOracleA1 = 600.0;  // seconds
constexpr double kBudgetOracleA2 = 300.0;
constexpr double kBudgetPQ = 1.0;
constexpr double kBudgetCharacters = 60.0;
constexpr std::size_t kMinOracleA1 = 120;
constexpr std::size_t kOracleA2Pairs = 16;
constexpr std::size_t kVanishingPairs = 200;
constexpr std::size_t kVanishingOracle = 20;
constexpr std::size_t kBlockPairs = 200;
constexpr std::size_t kChainPairs = 50;
constexpr std::size_t kMinAdjunction = 10;
constexpr std::size_t kMinCocycles = 10;
constexpr std::size_t kProductDimension = 400;

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("%s [%d] %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

OracleOptions caps(std::size_t l, std::size_t m) {
  OracleOptions o;
  o.max_L = l;
  o.max_M = m;
  return o;
}

std::string fmt(double s) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2f", s);
  return b;
}

// Runs a criterion; an escaping error is a failure with its message.
void criterion(int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [ok, detail] = body();
    report(id, ok, name + ": " + detail);
  } catch (const std::exception& e) {
    report(id, false, name + ": raised " + e.what());
  }
}

// all functions on two points with sl2 weights 0..3
std::vector<SupportFunction> two_point_family(const ContextPtr& ctx, const PointIdeal& p, const PointIdeal& q) {
  std::vector<SupportFunction> out;
  for (std::int64_t a = 0; a <= 3; ++a)
    for (std::int64_t b = 0; b <= 3; ++b) {
      std::vector<std::pair<PointIdeal, Weight>> e;
      if (a) e.emplace_back(p, Weight{a});
      if (b) e.emplace_back(q, Weight{b});
      out.push_back(SupportFunction(ctx, e));
    }
  return out;
}

std::int64_t det(std::vector<std::vector<std::int64_t>> m) {
  const std::size_t n = m.size();
  std::int64_t prev = 1, sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

std::vector<Weight> dominant_with_dimension_at_most(const RootDatum& rd, std::uint64_t cap) {
  std::vector<Weight> out;
  const int bound = rd.rank() == 1 ? static_cast<int>(cap) : 40;
  if (rd.rank() == 1) {
    for (int a = 0; a < bound; ++a)
      if (irrep_dimension(rd, Weight{a}) <= cap) out.push_back(Weight{a});
  } else {
    for (int a = 0; a < bound; ++a)
      for (int b = 0; b < bound; ++b)
        if (irrep_dimension(rd, Weight{a, b}) <= cap) out.push_back(Weight{a, b});
  }
  return out;
}

}  // namespace

int main() {
  const PointIdeal o2 = pt({"0", "0"});

  criterion(1, "oracle equivalence, sl2 over five algebras", [&] {
    auto t0 = std::chrono::steady_clock::now();
    struct Alg {
      AlgebraPresentation a;
      PointIdeal p, q;
    };
    std::vector<Alg> algs{
        {alg({"t"}, {}), pt({"0"}), pt({"1"})},
        {alg({"t", "s"}, {"t*s - 1"}), pt({"1", "1"}), pt({"2", "1/2"})},
        {alg({"x", "y"}, {}), o2, pt({"1", "2"})},
        {alg({"x", "y"}, {"x*y"}), o2, pt({"1", "0"})},
        {alg({"x", "y"}, {"y^2 - x^3"}), o2, pt({"1", "1"})},
    };
    std::size_t total = 0, agree = 0, nonzero = 0;
    std::string first_bad;
    for (const auto& a : algs) {
      auto ctx = make_context(SemisimpleType::parse("A1"), a.a);
      OracleContext oc(ctx, caps(48, 256));
      auto fam = two_point_family(ctx, a.p, a.q);
      for (const auto& s : fam)
        for (const auto& t : fam) {
          CrossCheck c = oc.cross_check(s, t, 2);
          ++total;
          if (c.agree) ++agree;
          else if (first_bad.empty())
            first_bad = " first mismatch " + s.str() + " vs " + t.str() + " over " + a.a.str();
          if (c.formula > 0) ++nonzero;
        }
    }
    double secs = seconds_since(t0);
    bool ok = agree == total && total >= kMinOracleA1 && secs <= kBudgetOracleA1;
    return std::pair{ok, std::to_string(agree) + "/" + std::to_string(total) + " agree (" + std::to_string(nonzero) +
                             " nonzero), " + fmt(secs) + " s of " + fmt(kBudgetOracleA1) + first_bad};
  });

  criterion(2, "oracle equivalence, sl3 over C[t] at one point", [&] {
    auto t0 = std::chrono::steady_clock::now();
    auto ctx = make_context(SemisimpleType::parse("A2"), alg({"t"}, {}));
    OracleContext oc(ctx, caps(48, 256));
    std::vector<Weight> ws{Weight{0, 0}, Weight{1, 0}, Weight{0, 1}, Weight{1, 1}};
    std::size_t total = 0, agree = 0;
    for (const auto& l : ws)
      for (const auto& m : ws) {
        CrossCheck c = oc.cross_check(sf(ctx, {{pt({"0"}), l}}), sf(ctx, {{pt({"0"}), m}}), 2);
        ++total;
        agree += c.agree;
      }
    double secs = seconds_since(t0);
    bool ok = agree == total && total == kOracleA2Pairs && secs <= kBudgetOracleA2;
    return std::pair{ok, std::to_string(agree) + "/" + std::to_string(total) + " agree, " + fmt(secs) + " s of " +
                             fmt(kBudgetOracleA2)};
  });

  criterion(3, "vanishing when modules differ at two or more points", [&] {
    std::mt19937 rng(2024);
    std::vector<Setting> pool;
    for (const auto& s : settings())
      if (s.ctx->type().name() == "A1" || s.ctx->type().name() == "A2" || s.ctx->type().name() == "A1xA1")
        pool.push_back(s);
    struct Pair {
      SupportFunction a, b;
      std::uint64_t size;
    };
    std::vector<Pair> pairs;
    std::size_t zero = 0;
    while (pairs.size() < kVanishingPairs) {
      const Setting& s = pool[rng() % pool.size()];
      auto a = random_support(rng, s, 2), b = random_support(rng, s, 2);
      auto r = ext1_dimension(a, b);
      if (r.difference_locus.size() < 2) continue;
      if (r.total_dimension == 0 && r.reason == VanishingReason::DifferAtTwoOrMore) ++zero;
      std::uint64_t size = module_dimension(a).get_ui() * module_dimension(b).get_ui();
      pairs.push_back({a, b, size});
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.size < y.size; });
    std::size_t confirmed = 0;
    for (std::size_t i = 0; i < kVanishingOracle; ++i) {
      OracleContext oc(pairs[i].a.context(), caps(128, 256));
      CrossCheck c = oc.cross_check(pairs[i].a, pairs[i].b, 2);
      if (c.oracle == 0 && c.oracle_next == 0 && c.formula == 0) ++confirmed;
    }
    bool ok = zero == kVanishingPairs && confirmed == kVanishingOracle;
    return std::pair{ok, "formula 0 on " + std::to_string(zero) + "/" + std::to_string(kVanishingPairs) +
                             ", oracle H^1 = 0 on " + std::to_string(confirmed) + "/" +
                             std::to_string(kVanishingOracle) + " smallest"};
  });

  criterion(4, "singular points: self-extension of the fundamental module at node and cusp", [&] {
    std::string detail;
    bool ok = true;
    for (const char* rel : {"x*y", "y^2 - x^3"}) {
      auto ctx = make_context(SemisimpleType::parse("A1"), alg({"x", "y"}, {rel}));
      OracleContext oc(ctx, caps(48, 64));
      auto pi = sf(ctx, {{o2, Weight{1}}});
      CrossCheck c = oc.cross_check(pi, pi, 2);
      auto r = ext1_dimension(pi, pi);
      bool here = c.formula == 2 && c.oracle == 2 && c.oracle_next == 2 && r.contributions.size() == 1 &&
                  r.contributions[0].hom == 1 && r.contributions[0].tangent == 2;
      ok &= here;
      detail += std::string(detail.empty() ? "" : "; ") + rel + ": formula " + std::to_string(c.formula) +
                ", H^1 " + std::to_string(c.oracle) + "/" + std::to_string(c.oracle_next);
    }
    return std::pair{ok, detail};
  });

  criterion(5, "P/Q orders equal |det C|", [&] {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t ok_count = 0, total = 0;
    std::string detail;
    for (const char* t : {"A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2", "F4", "E6"}) {
      RootDatum rd(SemisimpleType::parse(t));
      std::vector<std::vector<std::int64_t>> c = rd.cartan_matrix();
      std::int64_t d = std::abs(det(c));
      std::int64_t got = weight_class_mod_Q(rd, rd.zero()).order_of_group();
      ++total;
      ok_count += got == d;
      detail += std::string(detail.empty() ? "" : " ") + t + "=" + std::to_string(got);
    }
    double secs = seconds_since(t0);
    bool ok = ok_count == total && secs < kBudgetPQ;
    return std::pair{ok, detail + ", " + fmt(secs) + " s"};
  });

  criterion(6, "tensor products against brute-force characters, dimension totals", [&] {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t pairs = 0, agree = 0, dims = 0, dims_ok = 0;
    for (const char* t : {"A1", "A2"}) {
      RootDatum rd(SemisimpleType::parse(t));
      oracle::Kostant k(rd);
      auto ws = dominant_with_dimension_at_most(rd, kProductDimension);
      for (const auto& w : ws) {
        ++dims;
        std::int64_t total = 0;
        auto ch = character_of(rd, w, nullptr);
        for (const auto& [mu, m] : ch->weights) total += m;
        dims_ok += static_cast<std::uint64_t>(total) == irrep_dimension(rd, w);
      }
      for (const auto& l : ws)
        for (const auto& m : ws) {
          if (irrep_dimension(rd, l) * irrep_dimension(rd, m) > kProductDimension) continue;
          ++pairs;
          agree += tensor_decomposition(rd, l, m) == k.tensor(l, m);
        }
    }
    double secs = seconds_since(t0);
    bool ok = agree == pairs && dims_ok == dims && secs <= kBudgetCharacters;
    return std::pair{ok, std::to_string(agree) + "/" + std::to_string(pairs) + " products, " +
                             std::to_string(dims_ok) + "/" + std::to_string(dims) + " dimension totals, " +
                             fmt(secs) + " s of " + fmt(kBudgetCharacters)};
  });

  criterion(7, "block coherence and linking chains", [&] {
    std::mt19937 rng(77);
    auto ss = settings();
    std::size_t checked = 0, nonzero = 0, coherent = 0;
    while (checked < kBlockPairs) {
      const Setting& s = ss[rng() % ss.size()];
      auto [a, b] = differ_at_one(rng, s);
      if (rng() % 3 == 0) b = a;
      ++checked;
      if (ext1_dimension(a, b).total_dimension > 0) {
        ++nonzero;
        coherent += same_block(a, b, true);
      }
    }
    std::size_t chains = 0, valid = 0;
    const PointIdeal p = pt({"0"});
    std::vector<ContextPtr> ctxs;
    for (const char* t : {"A1", "A2", "B2", "G2", "A1xA1"})
      ctxs.push_back(make_context(SemisimpleType::parse(t), alg({"t"}, {})));
    while (chains < kChainPairs) {
      const ContextPtr& ctx = ctxs[rng() % ctxs.size()];
      const RootDatum& rd = ctx->root_datum();
      Weight l = random_dominant(rng, rd.rank(), 3), m = random_dominant(rng, rd.rank(), 3);
      if (l == m || weight_class_mod_Q(rd, l) != weight_class_mod_Q(rd, m)) continue;
      ++chains;
      LinkingChain c = linking_chain(rd, l, m, std::nullopt, ctx->cache());
      bool good = !c.empty() && c.front() == l && c.back() == m;
      for (std::size_t i = 0; good && i + 1 < c.size(); ++i)
        good = ext1_dimension(sf(ctx, {{p, c[i]}}), sf(ctx, {{p, c[i + 1]}})).total_dimension > 0 &&
               weight_class_mod_Q(rd, c[i]) == weight_class_mod_Q(rd, c[i + 1]);
      valid += good;
    }
    bool ok = coherent == nonzero && nonzero > 0 && valid == chains;
    return std::pair{ok, std::to_string(coherent) + "/" + std::to_string(nonzero) + " nonzero pairs share a block (of " +
                             std::to_string(checked) + "), " + std::to_string(valid) + "/" +
                             std::to_string(chains) + " chains valid"};
  });

  criterion(8, "tensor-hom adjunction and splitness of explicit extensions", [&] {
    // adjunction on evaluation modules of truncated current algebras
    std::size_t triples = 0, adj_ok = 0, nonzero = 0;
    struct Where {
      AlgebraPresentation a;
      std::vector<PointIdeal> pts;
    };
    for (const auto& w : {Where{alg({"t"}, {}), {pt({"0"}), pt({"1"})}}, Where{alg({"x", "y"}, {"x*y"}), {o2}}}) {
      auto ctx = make_context(SemisimpleType::parse("A1"), w.a);
      OracleContext oc(ctx, caps(64, 256));
      const auto& lie = oc.current_algebra(w.pts, 2);
      std::vector<SupportFunction> mods;
      for (const auto& p : w.pts)
        for (std::int64_t l = 1; l <= 2; ++l) mods.push_back(sf(ctx, {{p, Weight{l}}}));
      std::vector<ModuleMatrices> ev;
      for (const auto& m : mods) ev.push_back(oc.evaluation_module(w.pts, 2, m));
      for (std::size_t i = 0; i < ev.size(); ++i)
        for (std::size_t j = 0; j < ev.size(); ++j)
          for (std::size_t k = 0; k < ev.size(); k += 2) {
            auto lhs = h1_dimension(lie, hom_module(tensor_module(ev[k], ev[i]), ev[j]), oc.options()).dimension;
            auto rhs =
                h1_dimension(lie, hom_module(ev[i], tensor_module(dual_module(ev[k]), ev[j])), oc.options()).dimension;
            ++triples;
            adj_ok += lhs == rhs;
            nonzero += lhs > 0;
          }
    }

    // extensions: split exactly when the cochain is a coboundary
    std::size_t cocycles = 0, split_ok = 0, nonsplit = 0;
    bool saw_zero = false;
    std::mt19937 rng(8);
    auto g = chevalley_structure(SemisimpleType::parse("A1"));
    JetAlgebra jet = jet_quotient(alg({"t"}, {}), {pt({"0"})}, 2);
    LieStructure lie = truncated_current_algebra(jet, g);
    std::size_t lin = 0;
    for (std::size_t a = 0; a < jet.dimension(); ++a)
      if (jet.labels()[a] != "m0:1") lin = a;
    auto check = [&](const ModuleMatrices& v, const ModuleMatrices& w, const Cochain& c) {
      ModuleMatrices e = extension_module(lie, v, w, c);
      bool split = extension_splits(e, v.dim);
      ++cocycles;
      nonsplit += !split;
      split_ok += split == is_coboundary(lie, hom_module(v, w), v.dim, c);
    };
    for (auto [l, m] : {std::pair{0, 2}, {1, 1}, {1, 3}, {2, 2}, {2, 0}, {3, 1}}) {
      Irrep vl = irrep_matrices(g, Weight{l}), vm = irrep_matrices(g, Weight{m});
      ModuleMatrices v = evaluation_module_matrices(jet, g, {&vl}), w = evaluation_module_matrices(jet, g, {&vm});
      // zero cocycle
      Cochain zero(lie.dimension(), SparseMatrix(w.dim, v.dim));
      check(v, w, zero);
      saw_zero = true;
      // derivation times intertwiner, through the validated constructor
      auto ts = intertwiners(g, vl.module, vm.module);
      Cochain deriv;
      for (const auto& t : ts) {
        ExtCocycle phi;
        phi.point = 0;
        phi.values.assign(jet.dimension(), std::vector<QMatrix>(g.lie.dimension(), QMatrix(vm.module.dim, vl.module.dim)));
        phi.values[lin] = t;
        ModuleMatrices e = build_extension_module(phi, jet, g, vl, vm, lie);
        for (std::size_t a = 0; a < jet.dimension(); ++a)
          for (std::size_t x = 0; x < g.lie.dimension(); ++x) deriv.push_back(SparseMatrix::from_dense(phi.values[a][x]));
        bool split = extension_splits(e, v.dim);
        ++cocycles;
        nonsplit += !split;
        split_ok += split == is_coboundary(lie, hom_module(v, w), v.dim, deriv);
      }
      // coboundary of a random map, alone and added to the derivation cocycle
      std::uniform_int_distribution<int> d(-2, 2);
      QMatrix s(w.dim, v.dim);
      for (std::size_t i = 0; i < w.dim; ++i)
        for (std::size_t j = 0; j < v.dim; ++j) s(i, j) = d(rng);
      SparseMatrix ss = SparseMatrix::from_dense(s);
      Cochain cob;
      for (std::size_t x = 0; x < lie.dimension(); ++x) cob.push_back(ss * v.rho[x] - w.rho[x] * ss);
      check(v, w, cob);
      if (!deriv.empty()) {
        Cochain sum;
        for (std::size_t x = 0; x < lie.dimension(); ++x) sum.push_back(cob[x] + deriv[x]);
        check(v, w, sum);
      }
    }
    bool ok = adj_ok == triples && triples >= kMinAdjunction && split_ok == cocycles && cocycles >= kMinCocycles &&
              saw_zero && nonsplit > 0;
    return std::pair{ok, "adjunction " + std::to_string(adj_ok) + "/" + std::to_string(triples) + " triples (" +
                             std::to_string(nonzero) + " nonzero), splitness matches coboundary test on " +
                             std::to_string(split_ok) + "/" + std::to_string(cocycles) + " cochains (" +
                             std::to_string(nonsplit) + " non-split)"};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
