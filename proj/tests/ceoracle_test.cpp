#include <gtest/gtest.h>

#include <random>

#include "currext/ceoracle.hpp"
#include "support/character_oracle.hpp"

using namespace currext;

namespace {

AlgebraPresentation alg(std::vector<std::string> gens, std::vector<std::string> rels) {
  return AlgebraPresentation::parse(std::move(gens), rels);
}

PointIdeal pt(std::initializer_list<const char*> cs) {
  std::vector<Rational> v;
  for (auto c : cs) v.push_back(parse_rational(c));
  return PointIdeal(v);
}

OracleOptions caps(std::size_t l, std::size_t m) {
  OracleOptions o;
  o.max_L = l;
  o.max_M = m;
  return o;
}

SemisimpleType ty(const char* s) { return SemisimpleType::parse(s); }

SupportFunction sf(const ContextPtr& ctx, std::vector<std::pair<PointIdeal, Weight>> e) { return {ctx, e}; }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::ComputationError;
}

// Unit lower times unit upper triangular with small entries: invertible over Z.
QMatrix random_unimodular(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> d(-2, 2);
  QMatrix lo = QMatrix::identity(n), up = QMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      lo(i, j) = d(rng);
      up(j, i) = d(rng);
    }
  // shuffle rows so the change is not triangular
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  QMatrix p = lo * up, out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = p(perm[i], j);
  return out;
}

SparseVec row_of(const QMatrix& m, std::size_t i) {
  SparseVec v;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (m(i, j) != 0) v.emplace_back(static_cast<std::uint32_t>(j), m(i, j));
  return v;
}

// New Lie basis b'_i = sum_j p(i, j) b_j; new module basis given by the columns of q.
// The grading is dropped, so H^1 is computed on the full complex.
std::pair<LieStructure, ModuleMatrices> change_basis(const LieStructure& lie, const ModuleMatrices& m,
                                                     const QMatrix& p, const QMatrix& q) {
  const std::size_t n = lie.dimension();
  QMatrix pinv = *inverse(p), qinv = *inverse(q);
  std::vector<SparseVec> br(n * n);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("b" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      SparseVec v = lie.bracket(row_of(p, i), row_of(p, j));
      QMatrix r(1, n);
      for (const auto& [k, c] : v) r(0, k) = c;
      br[i * n + j] = row_of(r * pinv, 0);
    }
  }
  LieStructure l2(n, std::move(br), std::move(labels));
  ModuleMatrices m2;
  m2.dim = m.dim;
  SparseMatrix sq = SparseMatrix::from_dense(q), sqinv = SparseMatrix::from_dense(qinv);
  for (std::size_t i = 0; i < n; ++i) m2.rho.push_back(sqinv * m.action(row_of(p, i)) * sq);
  return {std::move(l2), std::move(m2)};
}

struct Small {
  const char* type;
  AlgebraPresentation a;
  std::vector<PointIdeal> points;
  int k;
};

std::vector<Small> small_cases() {
  return {
      {"A1", alg({"t"}, {}), {pt({"0"})}, 2},
      {"A1", alg({"t"}, {}), {pt({"0"}), pt({"1"})}, 1},
      {"A1", alg({"x", "y"}, {"x*y"}), {pt({"0", "0"})}, 2},
      {"A1", alg({"x", "y"}, {"y^2 - x^3"}), {pt({"1", "1"})}, 2},
      {"A1", alg({"t"}, {}), {pt({"2"})}, 3},
  };
}

}  // namespace

TEST(Chevalley, DimensionsAndJacobi) {
  EXPECT_EQ(chevalley_structure(ty("A1")).lie.dimension(), 3u);
  EXPECT_EQ(chevalley_structure(ty("A2")).lie.dimension(), 8u);
  EXPECT_EQ(chevalley_structure(ty("A3")).lie.dimension(), 15u);
  auto g = chevalley_structure(ty("A1xA2"));
  EXPECT_EQ(g.lie.dimension(), 11u);
  g.lie.verify();
  EXPECT_TRUE(g.lie.has_grading());
}

TEST(Chevalley, Sl2Brackets) {
  auto g = chevalley_structure(ty("A1"));
  // basis e, h, f
  EXPECT_EQ(g.lie.bracket(0, 2), (SparseVec{{1, Rational(1)}}));
  EXPECT_EQ(g.lie.bracket(1, 0), (SparseVec{{0, Rational(2)}}));
  EXPECT_EQ(g.lie.bracket(1, 2), (SparseVec{{2, Rational(-2)}}));
}

TEST(Chevalley, RejectsOtherTypes) {
  for (const char* t : {"B2", "G2", "A1xC3"})
    EXPECT_EQ(kind_of([&] { chevalley_structure(ty(t)); }), ErrorKind::UnsupportedTypeForOracle) << t;
}

TEST(Irrep, DimensionsAndCharacters) {
  for (const char* t : {"A1", "A2", "A3", "A1xA1", "A1xA2"}) {
    auto g = chevalley_structure(ty(t));
    RootDatum rd(ty(t));
    oracle::Kostant kostant(rd);
    std::vector<Weight> ws;
    std::function<void(Weight, std::size_t, std::int64_t)> gen = [&](Weight w, std::size_t i, std::int64_t left) {
      if (i == w.size()) {
        ws.push_back(w);
        return;
      }
      for (std::int64_t c = 0; c <= left; ++c) {
        w[i] = c;
        gen(w, i + 1, left - c);
      }
    };
    gen(rd.zero(), 0, rd.rank() <= 2 ? 3 : 2);
    for (const auto& w : ws) {
      if (irrep_dimension(rd, w) > 64) continue;
      Irrep v = irrep_matrices(g, w, 64);
      EXPECT_EQ(v.module.dim, irrep_dimension(rd, w)) << t << w;
      std::map<Weight, std::int64_t> ch;
      for (const auto& x : v.weights) ++ch[x];
      EXPECT_EQ(ch, kostant.character(w)) << t << w;
      EXPECT_EQ(v.weights.front(), w);
    }
  }
}

TEST(Irrep, Caps) {
  auto g = chevalley_structure(ty("A2"));
  EXPECT_EQ(kind_of([&] { irrep_matrices(g, Weight{3, 3}, 63); }), ErrorKind::DimensionCap);
  EXPECT_EQ(irrep_matrices(g, Weight{3, 3}, 64).module.dim, 64u);
}

TEST(ModuleMatrices, DerivedModulesAreModules) {
  auto g = chevalley_structure(ty("A2"));
  const auto& a = irrep_matrices(g, Weight{1, 0}).module;
  const auto& b = irrep_matrices(g, Weight{1, 1}).module;
  verify_module(g.lie, dual_module(a));
  verify_module(g.lie, tensor_module(a, b));
  verify_module(g.lie, hom_module(a, b));
  // Hom(V, W) = V* (x) W as weight multisets
  auto h = hom_module(a, b), t = tensor_module(b, dual_module(a));
  auto sorted = [](std::vector<Grade> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  EXPECT_EQ(sorted(h.grades), sorted(t.grades));
}

TEST(ModuleMatrices, BrokenModuleIsRejected) {
  auto g = chevalley_structure(ty("A1"));
  ModuleMatrices m = irrep_matrices(g, Weight{1}).module;
  m.rho[1] = Rational(2) * m.rho[1];
  EXPECT_EQ(kind_of([&] { verify_module(g.lie, m); }), ErrorKind::ComputationError);
}

TEST(TruncatedCurrent, StructureAndGrading) {
  auto g = chevalley_structure(ty("A1"));
  for (const auto& c : small_cases()) {
    JetAlgebra j = jet_quotient(c.a, c.points, c.k);
    LieStructure l = truncated_current_algebra(j, g);
    EXPECT_EQ(l.dimension(), 3 * j.dimension());
    EXPECT_TRUE(l.has_grading());
    EXPECT_EQ(l.cartan().size(), c.points.size());
  }
}

// Whitehead: a semisimple algebra has no first cohomology.
TEST(H1, SemisimpleAlgebraHasNone) {
  for (const char* t : {"A1", "A2", "A1xA1"}) {
    auto g = chevalley_structure(ty(t));
    RootDatum rd(ty(t));
    for (const auto& w : {rd.zero(), Weight(std::vector<std::int64_t>(rd.rank(), 1)), rd.highest_root_of_factor(0)}) {
      const auto& v = irrep_matrices(g, w).module;
      EXPECT_EQ(h1_dimension(g.lie, v, caps(24, 64)).dimension, 0u) << t << w;
    }
  }
}

TEST(H1, GradedMatchesUngraded) {
  auto g = chevalley_structure(ty("A1"));
  for (const auto& c : small_cases()) {
    JetAlgebra j = jet_quotient(c.a, c.points, c.k);
    LieStructure l = truncated_current_algebra(j, g);
    for (std::int64_t a = 0; a <= 2; ++a)
      for (std::int64_t b = 0; b <= 2; ++b) {
        std::vector<const Irrep*> pa(c.points.size(), nullptr), pb(c.points.size(), nullptr);
        Irrep va = irrep_matrices(g, Weight{a}), vb = irrep_matrices(g, Weight{b});
        pa[0] = &va;
        pb[0] = &vb;
        ModuleMatrices h = hom_module(evaluation_module_matrices(j, g, pa), evaluation_module_matrices(j, g, pb));
        verify_module(l, h);
        OracleOptions on = caps(48, 64), off = on;
        off.use_grading = false;
        H1Result x = h1_dimension(l, h, on), y = h1_dimension(l, h, off);
        EXPECT_TRUE(x.graded);
        EXPECT_FALSE(y.graded);
        EXPECT_EQ(x.dimension, y.dimension) << c.a.str() << " " << a << " " << b;
      }
  }
}

TEST(H1, IndependentOfBasis) {
  std::mt19937 rng(7);
  auto g = chevalley_structure(ty("A1"));
  for (const auto& c : small_cases()) {
    JetAlgebra j = jet_quotient(c.a, c.points, c.k);
    LieStructure l = truncated_current_algebra(j, g);
    if (l.dimension() > 9) continue;
    for (auto [a, b] : {std::pair{0, 2}, {1, 1}, {2, 2}, {1, 0}}) {
      std::vector<const Irrep*> pa(c.points.size(), nullptr), pb(c.points.size(), nullptr);
      Irrep va = irrep_matrices(g, Weight{a}), vb = irrep_matrices(g, Weight{b});
      pa[0] = &va;
      pb[0] = &vb;
      ModuleMatrices h = hom_module(evaluation_module_matrices(j, g, pa), evaluation_module_matrices(j, g, pb));
      auto [l2, h2] = change_basis(l, h, random_unimodular(rng, l.dimension()), random_unimodular(rng, h.dim));
      verify_module(l2, h2);
      OracleOptions o = caps(48, 64);
      H1Result x = h1_dimension(l, h, o), y = h1_dimension(l2, h2, o);
      EXPECT_FALSE(y.graded);
      EXPECT_EQ(x.dimension, y.dimension) << c.a.str() << " " << a << " " << b;
    }
  }
}

// Ext^1(M (x) V, W) = Ext^1(V, M* (x) W) for finite-dimensional M.
TEST(H1, TensorHomAdjunction) {
  auto g = chevalley_structure(ty("A1"));
  JetAlgebra j = jet_quotient(alg({"t"}, {}), {pt({"0"})}, 2);
  LieStructure l = truncated_current_algebra(j, g);
  Irrep v1 = irrep_matrices(g, Weight{1}), v2 = irrep_matrices(g, Weight{2}), v0 = irrep_matrices(g, Weight{0});
  auto ev = [&](const Irrep& v) { return evaluation_module_matrices(j, g, {&v}); };
  OracleOptions o = caps(24, 64);
  for (const Irrep* m : {&v1, &v2})
    for (const Irrep* v : {&v0, &v1, &v2})
      for (const Irrep* w : {&v0, &v1, &v2}) {
        auto lhs = h1_dimension(l, hom_module(tensor_module(ev(*m), ev(*v)), ev(*w)), o).dimension;
        auto rhs = h1_dimension(l, hom_module(ev(*v), tensor_module(dual_module(ev(*m)), ev(*w))), o).dimension;
        EXPECT_EQ(lhs, rhs);
      }
}

TEST(H1, Caps) {
  auto g = chevalley_structure(ty("A1"));
  JetAlgebra j = jet_quotient(alg({"t"}, {}), {pt({"0"})}, 3);
  LieStructure l = truncated_current_algebra(j, g);
  ModuleMatrices triv{1, std::vector<SparseMatrix>(l.dimension(), SparseMatrix(1, 1)), {}};
  EXPECT_EQ(kind_of([&] { h1_dimension(l, triv, caps(8, 64)); }), ErrorKind::DimensionCap);
  EXPECT_EQ(kind_of([&] { h1_dimension(l, triv, caps(9, 0)); }), ErrorKind::DimensionCap);
  // trivial module: H^1 = (L/[L, L])^* = 0 since L is perfect
  EXPECT_EQ(h1_dimension(l, triv).dimension, 0u);
}

TEST(H1, AbelianAlgebra) {
  // L = C^3 abelian, trivial 2-dim module: H^1 = Hom(L, M) = 6
  LieStructure l(3, std::vector<SparseVec>(9), {"a", "b", "c"});
  ModuleMatrices m{2, std::vector<SparseMatrix>(3, SparseMatrix(2, 2)), {}};
  EXPECT_EQ(h1_dimension(l, m).dimension, 6u);
}

TEST(Oracle, CrossCheckExamples) {
  auto ctx = make_context(ty("A1"), alg({"t"}, {}));
  OracleContext oc(ctx, caps(48, 256));
  auto p0 = pt({"0"}), p1 = pt({"1"});
  struct Case {
    SupportFunction a, b;
    std::int64_t expect;
  };
  std::vector<Case> cases{
      {sf(ctx, {}), sf(ctx, {{p0, Weight{2}}}), 1},
      {sf(ctx, {{p0, Weight{1}}}), sf(ctx, {{p0, Weight{1}}}), 1},
      {sf(ctx, {{p0, Weight{1}}}), sf(ctx, {{p0, Weight{3}}}), 1},
      {sf(ctx, {{p0, Weight{1}}}), sf(ctx, {{p0, Weight{5}}}), 0},
      {sf(ctx, {{p0, Weight{2}}}), sf(ctx, {{p0, Weight{2}}}), 1},
      {sf(ctx, {{p0, Weight{1}}, {p1, Weight{1}}}), sf(ctx, {{p0, Weight{1}}, {p1, Weight{1}}}), 2},
      {sf(ctx, {{p0, Weight{1}}}), sf(ctx, {{p1, Weight{1}}}), 0},
      {sf(ctx, {}), sf(ctx, {}), 0},
  };
  for (const auto& c : cases) {
    CrossCheck r = oc.cross_check(c.a, c.b, 2);
    EXPECT_EQ(r.formula, c.expect) << c.a.str() << " " << c.b.str();
    EXPECT_TRUE(r.agree) << c.a.str() << " " << c.b.str() << " oracle " << r.oracle << "/" << r.oracle_next;
    EXPECT_FALSE(r.truncation_insufficient);
    EXPECT_TRUE(r.graded || r.dim_L == 0);
  }
}

TEST(Oracle, SingularPoints) {
  // node and cusp: tangent space 2 at the singular point
  for (auto rel : {"x*y", "y^2 - x^3"}) {
    auto ctx = make_context(ty("A1"), alg({"x", "y"}, {rel}));
    OracleContext oc(ctx, caps(48, 64));
    auto o = pt({"0", "0"});
    CrossCheck r = oc.cross_check(sf(ctx, {}), sf(ctx, {{o, Weight{2}}}), 2);
    EXPECT_EQ(r.formula, 2);
    EXPECT_TRUE(r.agree) << rel << " " << r.oracle << "/" << r.oracle_next;
  }
}

TEST(Oracle, HigherRank) {
  auto ctx = make_context(ty("A2"), alg({"t"}, {}));
  OracleContext oc(ctx, caps(48, 128));
  auto p0 = pt({"0"});
  CrossCheck r = oc.cross_check(sf(ctx, {{p0, Weight{1, 1}}}), sf(ctx, {{p0, Weight{1, 1}}}), 2);
  EXPECT_EQ(r.formula, 2);
  EXPECT_TRUE(r.agree) << r.oracle << "/" << r.oracle_next;
  // 3 (x) 8 = 15 + 6* + 3
  r = oc.cross_check(sf(ctx, {{p0, Weight{1, 0}}}), sf(ctx, {{p0, Weight{0, 2}}}), 2);
  EXPECT_EQ(r.formula, 1);
  EXPECT_TRUE(r.agree) << r.oracle << "/" << r.oracle_next;
  r = oc.cross_check(sf(ctx, {{p0, Weight{1, 0}}}), sf(ctx, {{p0, Weight{2, 0}}}), 2);
  EXPECT_EQ(r.formula, 0);
  EXPECT_TRUE(r.agree) << r.oracle << "/" << r.oracle_next;
}

TEST(Oracle, Errors) {
  auto ctx = make_context(ty("A1"), alg({"t"}, {}));
  OracleContext oc(ctx, caps(48, 64));
  auto p0 = pt({"0"}), p1 = pt({"1"});
  EXPECT_EQ(kind_of([&] { oc.evaluation_module({p0}, 2, sf(ctx, {{p1, Weight{1}}})); }),
            ErrorKind::SupportNotCovered);
  OracleContext tight(ctx, caps(6, 64));
  EXPECT_EQ(kind_of([&] { tight.cross_check(sf(ctx, {{p0, Weight{1}}}), sf(ctx, {{p0, Weight{1}}}), 2); }),
            ErrorKind::DimensionCap);
  auto other = make_context(ty("A1"), alg({"x", "y"}, {}));
  EXPECT_EQ(kind_of([&] { oc.cross_check(sf(other, {}), sf(other, {})); }), ErrorKind::ContextMismatch);
  EXPECT_EQ(kind_of([&] { OracleContext(make_context(ty("B2"), alg({"t"}, {}))); }),
            ErrorKind::UnsupportedTypeForOracle);
}

namespace {

// The cocycle a (x) x -> D(a) T(x) for a linear coordinate D at the point.
struct Built {
  JetAlgebra jet;
  ChevalleyData g;
  LieStructure lie;
  Irrep lambda, mu;
  std::vector<std::vector<std::vector<QMatrix>>> intertwiners;
};

Built setup(Weight l, Weight m) {
  auto g = chevalley_structure(ty("A1"));
  JetAlgebra j = jet_quotient(alg({"t"}, {}), {pt({"0"})}, 2);
  LieStructure lie = truncated_current_algebra(j, g);
  Irrep a = irrep_matrices(g, l), b = irrep_matrices(g, m);
  auto ts = intertwiners(g, a.module, b.module);
  return {std::move(j), std::move(g), std::move(lie), std::move(a), std::move(b), {ts}};
}

ExtCocycle derivation_cocycle(const Built& s, const std::vector<QMatrix>& t) {
  // basis of the jet is 1, t; the derivation picks the t coordinate
  ExtCocycle phi;
  phi.point = 0;
  const std::size_t dg = s.g.lie.dimension();
  std::vector<QMatrix> zero(dg, QMatrix(s.mu.module.dim, s.lambda.module.dim));
  phi.values = {zero, t};
  return phi;
}

}  // namespace

TEST(Intertwiners, CountMatchesHomDimension) {
  auto g = chevalley_structure(ty("A1"));
  RootDatum rd(ty("A1"));
  for (std::int64_t a = 0; a <= 4; ++a)
    for (std::int64_t b = 0; b <= 4; ++b) {
      Irrep va = irrep_matrices(g, Weight{a}), vb = irrep_matrices(g, Weight{b});
      EXPECT_EQ(static_cast<std::int64_t>(intertwiners(g, va.module, vb.module).size()),
                hom_g_adjoint_dimension(rd, Weight{a}, Weight{b}))
          << a << " " << b;
    }
}

TEST(Extension, NonzeroCocycleGivesNonSplitExtension) {
  for (auto [l, m] : {std::pair{0, 2}, {1, 1}, {1, 3}, {2, 2}, {2, 0}}) {
    Built s = setup(Weight{l}, Weight{m});
    ASSERT_EQ(s.intertwiners[0].size(), 1u) << l << " " << m;
    ExtCocycle phi = derivation_cocycle(s, s.intertwiners[0][0]);
    ModuleMatrices e = build_extension_module(phi, s.jet, s.g, s.lambda, s.mu, s.lie);
    EXPECT_EQ(e.dim, s.lambda.module.dim + s.mu.module.dim);
    EXPECT_FALSE(extension_splits(e, s.lambda.module.dim)) << l << " " << m;

    // the same verdict from the cohomology side
    ModuleMatrices v = evaluation_module_matrices(s.jet, s.g, {&s.lambda});
    ModuleMatrices w = evaluation_module_matrices(s.jet, s.g, {&s.mu});
    Cochain c;
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t x = 0; x < 3; ++x) c.push_back(SparseMatrix::from_dense(phi.values[a][x]));
    EXPECT_FALSE(is_coboundary(s.lie, hom_module(v, w), v.dim, c));
  }
}

TEST(Extension, CoboundarySplits) {
  // c(x) = s rho_V(x) - rho_W(x) s for a random s between evaluation modules at 0
  std::mt19937 rng(3);
  Built s = setup(Weight{1}, Weight{1});
  ModuleMatrices v = evaluation_module_matrices(s.jet, s.g, {&s.lambda});
  ModuleMatrices w = evaluation_module_matrices(s.jet, s.g, {&s.mu});
  std::uniform_int_distribution<int> d(-3, 3);
  QMatrix sm(w.dim, v.dim);
  for (std::size_t i = 0; i < w.dim; ++i)
    for (std::size_t j = 0; j < v.dim; ++j) sm(i, j) = d(rng);
  SparseMatrix ss = SparseMatrix::from_dense(sm);
  Cochain c;
  for (std::size_t x = 0; x < s.lie.dimension(); ++x) c.push_back(ss * v.rho[x] - w.rho[x] * ss);
  ModuleMatrices e = extension_module(s.lie, v, w, c);
  EXPECT_TRUE(extension_splits(e, v.dim));
  EXPECT_TRUE(is_coboundary(s.lie, hom_module(v, w), v.dim, c));
}

TEST(Extension, RejectsNonCocycles) {
  Built s = setup(Weight{1}, Weight{1});
  ExtCocycle phi = derivation_cocycle(s, s.intertwiners[0][0]);
  // not a derivation: nonzero on the unit
  ExtCocycle bad = phi;
  bad.values[0] = bad.values[1];
  EXPECT_EQ(kind_of([&] { build_extension_module(bad, s.jet, s.g, s.lambda, s.mu, s.lie); }),
            ErrorKind::NotACocycle);
  // not equivariant
  bad = phi;
  bad.values[1][0](0, 0) += 1;
  EXPECT_EQ(kind_of([&] { build_extension_module(bad, s.jet, s.g, s.lambda, s.mu, s.lie); }),
            ErrorKind::NotACocycle);
  // a raw cochain that breaks the module axioms
  ModuleMatrices v = evaluation_module_matrices(s.jet, s.g, {&s.lambda});
  Cochain c(s.lie.dimension(), SparseMatrix(2, 2));
  c[0] = SparseMatrix::from_dense(QMatrix::identity(2));
  EXPECT_EQ(kind_of([&] { extension_module(s.lie, v, v, c); }), ErrorKind::NotACocycle);
}
