#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace nlie;
using fixtures::basis_vectors;

namespace {

MetricNAlgebra s3() { return simple(3, SignVector::all_plus(4)); }

/// z with [z, w, e_I] = 0 for w in s and basis (n-2)-tuples I, solved from the bracket directly.
Subspace reference_centraliser(const NAlgebra& alg, const Subspace& s) {
  const std::size_t d = alg.dim();
  const auto e = basis_vectors(d);
  std::vector<Vector> rows;
  for (const auto& w : s.basis())
    for_each_combination(d, alg.arity() - 2, [&](const IndexTuple& t) {
      std::vector<Vector> cols;
      for (std::size_t j = 0; j < d; ++j) {
        std::vector<Vector> args{e[j], w};
        for (auto i : t) args.push_back(e[i]);
        cols.push_back(bracket(alg, args));
      }
      for (std::size_t k = 0; k < d; ++k) {
        Vector row(d);
        for (std::size_t j = 0; j < d; ++j) row[j] = cols[j][k];
        rows.push_back(std::move(row));
      }
    });
  if (rows.empty()) return Subspace::full(d);
  return nullspace(Matrix::from_rows(rows, d));
}

}  // namespace

TEST(IndexTuple, CanonicalizeTracksPermutationSign) {
  auto [s1, t1] = IndexTuple::canonicalize({2, 0, 1});
  EXPECT_EQ(s1, 1);
  EXPECT_EQ(t1, IndexTuple({0, 1, 2}));
  auto [s2, t2] = IndexTuple::canonicalize({1, 0, 2});
  EXPECT_EQ(s2, -1);
  EXPECT_EQ(IndexTuple::canonicalize({1, 1, 2}).first, 0);
  EXPECT_THROW(IndexTuple({2, 1}), PreconditionFailed);
  EXPECT_EQ(IndexTuple({0, 2}).str(), "[1,3]");
}

TEST(IndexTuple, CombinationsAreLexicographic) {
  std::vector<std::string> seen;
  for_each_combination(4, 2, [&](const IndexTuple& t) { seen.push_back(t.str()); });
  EXPECT_EQ(seen, (std::vector<std::string>{"[1,2]", "[1,3]", "[1,4]", "[2,3]", "[2,4]", "[3,4]"}));
}

TEST(NAlgebra, NormalizeTableAppliesSignsAndMerges) {
  std::vector<RawEntry> raw{{{1, 0}, {0, 0, 1}}, {{0, 1}, {0, 0, 2}}, {{2, 2}, {0, 0, 0}}};
  const NAlgebra a = normalize_table(2, 3, raw);
  ASSERT_EQ(a.table().size(), 1u);
  EXPECT_EQ(*a.structure(IndexTuple({0, 1})), (Vector{0, 0, 1}));
  std::vector<RawEntry> bad{{{0, 3}, {0, 0, 1}}};
  EXPECT_THROW(normalize_table(2, 3, bad), DimensionMismatch);
}

TEST(Bracket, SimpleSignConvention) {
  // [e2, e3, e4] = -e1 and [e1, e3, e4] = e2 in s^(3).
  const auto e = basis_vectors(4);
  EXPECT_EQ(bracket(s3().algebra, {e[1], e[2], e[3]}), Rational(-1) * e[0]);
  EXPECT_EQ(bracket(s3().algebra, {e[0], e[2], e[3]}), e[1]);
  EXPECT_EQ(bracket(s3().algebra, {e[2], e[0], e[3]}), Rational(-1) * e[1]);
}

TEST(Bracket, MultilinearAndAlternating) {
  std::mt19937 rng(1);
  const NAlgebra alg = simple(4, SignVector::parse("+-+-+")).algebra;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Vector> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(fixtures::rand_vector(rng, 5));
    const Vector y = fixtures::rand_vector(rng, 5);
    const Rational c(static_cast<long>(rng() % 7) - 3, 2);
    std::vector<Vector> mixed = xs;
    mixed[1] = c * xs[1] + y;
    std::vector<Vector> with_y = xs;
    with_y[1] = y;
    EXPECT_EQ(bracket(alg, mixed), c * bracket(alg, xs) + bracket(alg, with_y));
    std::vector<Vector> swapped = xs;
    std::swap(swapped[0], swapped[3]);
    EXPECT_EQ(bracket(alg, swapped), Rational(-1) * bracket(alg, xs));
    std::vector<Vector> repeated = xs;
    repeated[2] = repeated[0];
    EXPECT_TRUE(nlie::is_zero(bracket(alg, repeated)));
  }
}

TEST(AdjointMaps, MatchTheBracket) {
  const NAlgebra alg = fixtures::twist_fixture().algebra;
  const auto e = basis_vectors(alg.dim());
  for (const auto& [x, m] : adjoint_maps(alg).maps)
    for (std::size_t j = 0; j < alg.dim(); ++j) {
      std::vector<Vector> args;
      for (auto i : x) args.push_back(e[i]);
      args.push_back(e[j]);
      EXPECT_EQ(m.column(j), bracket(alg, args));
    }
}

TEST(Jacobi, AgreesWithReferenceOnCorpus) {
  for (const auto& [name, m] : fixtures::corpus()) {
    EXPECT_TRUE(check_jacobi(m.algebra).ok()) << name;
    EXPECT_TRUE(fixtures::reference_jacobi(m.algebra)) << name;
    EXPECT_TRUE(check_metric(m).ok()) << name;
    EXPECT_TRUE(fixtures::reference_metric(m)) << name;
  }
}

TEST(Jacobi, DiagonalChangesOfS3StayLie) {
  // [..^e_i..] = c_i e_i is a Lie 3-algebra for any c; only off-diagonal terms break it.
  NAlgebra::Table t = simple(3, SignVector::all_plus(4)).algebra.table();
  t[IndexTuple({0, 1, 2})] = Vector{0, 0, 0, 2};
  const NAlgebra scaled(3, 4, t);
  EXPECT_TRUE(fixtures::reference_jacobi(scaled));
  EXPECT_TRUE(check_jacobi(scaled).ok());
  t[IndexTuple({0, 1, 2})] = Vector{0, 0, 0, -1};
  EXPECT_TRUE(check_jacobi(NAlgebra(3, 4, t)).ok());
  t[IndexTuple({0, 1, 2})] = Vector{1, 0, 0, 1};
  const NAlgebra off(3, 4, t);
  EXPECT_FALSE(fixtures::reference_jacobi(off));
  EXPECT_EQ(check_jacobi(off).witnesses.size(), 6u);
}

TEST(Jacobi, DetectsBrokenAlgebrasLikeTheReference) {
  // Random perturbations of a Lie algebra table.
  std::mt19937 rng(4);
  const NAlgebra base = so3().algebra;
  int broken = 0;
  for (int trial = 0; trial < 20; ++trial) {
    NAlgebra::Table t = base.table();
    t[IndexTuple({0, 1})] = fixtures::rand_vector(rng, 3, 2);
    const NAlgebra a(2, 3, t);
    const auto rep = check_jacobi(a);
    EXPECT_EQ(rep.ok(), fixtures::reference_jacobi(a));
    if (!rep.ok()) {
      ++broken;
      EXPECT_EQ(rep.witnesses.front().tuples.size(), 2u);
      EXPECT_FALSE(nlie::is_zero(rep.witnesses.front().mismatch));
    }
  }
  EXPECT_GT(broken, 0);
}

TEST(Metric, WrongSignsInGramAreReported) {
  // s^(3) table with gram diag(1,1,1,-1).
  const MetricNAlgebra m(s3().algebra, BilinearForm(Matrix::diagonal(Vector{1, 1, 1, -1})));
  const auto rep = check_metric(m);
  EXPECT_FALSE(rep.ok());
  EXPECT_FALSE(fixtures::reference_metric(m));
  EXPECT_EQ(rep.kind, ViolationKind::metric);
  EXPECT_THROW(check_metric(MetricNAlgebra(s3().algebra, BilinearForm(Matrix(4, 4)))), PreconditionFailed);
}

TEST(Structure, CentreDerivedCentraliserAgreeWithReference) {
  std::mt19937 rng(8);
  for (const auto& [name, m] : fixtures::corpus()) {
    EXPECT_EQ(centre(m.algebra), fixtures::reference_centre(m.algebra)) << name;
    EXPECT_EQ(derived_ideal(m.algebra), fixtures::reference_derived(m.algebra)) << name;
    std::vector<Vector> vs{fixtures::rand_vector(rng, m.dim())};
    const Subspace s = Subspace::span(vs, m.dim());
    EXPECT_EQ(centraliser(m.algebra, s), reference_centraliser(m.algebra, s)) << name;
    const Subspace closure = ideal_closure(m.algebra, s);
    EXPECT_TRUE(closure.contains(s)) << name;
    EXPECT_TRUE(fixtures::reference_is_ideal(m.algebra, closure)) << name;
    EXPECT_EQ(is_ideal(m.algebra, s).ok(), fixtures::reference_is_ideal(m.algebra, s)) << name;
  }
}

TEST(Structure, TheoremFamilyExamples) {
  const MetricNAlgebra tf = theorem_family(4, 1);
  const Vector v = unit_vector(6, 1);
  std::vector<Vector> vv{v};
  EXPECT_EQ(centre(tf.algebra), Subspace::span(vv, 6));
  // derived ideal = span(v) + W
  std::vector<std::size_t> idx{1, 2, 3, 4, 5};
  EXPECT_EQ(derived_ideal(tf.algebra), Subspace::coordinate(6, idx));
  EXPECT_TRUE(is_ideal(tf.algebra, Subspace::span(vv, 6)).ok());
  std::vector<Vector> uu{unit_vector(6, 0)};
  EXPECT_FALSE(is_ideal(tf.algebra, Subspace::span(uu, 6)).ok());
  EXPECT_EQ(ideal_closure(tf.algebra, Subspace::span(uu, 6)), Subspace::full(6));
}

TEST(Structure, SimpleAlgebraHasOnlyTrivialIdeals) {
  std::mt19937 rng(2);
  const NAlgebra alg = simple(4, SignVector::parse("++--+")).algebra;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vector> vs{fixtures::rand_vector(rng, 5)};
    if (nlie::is_zero(vs[0])) continue;
    EXPECT_EQ(ideal_closure(alg, Subspace::span(vs, 5)), Subspace::full(5));
  }
}

TEST(DirectSum, BlocksDoNotInteract) {
  const MetricNAlgebra sum = direct_sum(s3(), simple(3, SignVector::parse("-+-+")));
  EXPECT_EQ(sum.dim(), 8u);
  EXPECT_TRUE(check_jacobi(sum.algebra).ok());
  EXPECT_TRUE(check_metric(sum).ok());
  const auto e = basis_vectors(8);
  EXPECT_TRUE(nlie::is_zero(bracket(sum.algebra, {e[0], e[4], e[1]})));
  EXPECT_EQ(sum.form.signature(), (Signature{6, 2, 0}));
}

TEST(Transport, IsAnIsomorphism) {
  std::mt19937 rng(12);
  for (const char* name : {"s3", "tf(3,1)", "medina(1)"}) {
    MetricNAlgebra m;
    for (auto& c : fixtures::corpus())
      if (c.name == name) m = c.algebra;
    Matrix phi;
    do {
      phi = Matrix(m.dim(), m.dim());
      for (std::size_t i = 0; i < m.dim(); ++i) phi(i, i) = 1;
      for (int k = 0; k < 3; ++k) phi(rng() % m.dim(), rng() % m.dim()) += Rational(static_cast<long>(rng() % 5) - 2);
    } while (!try_inverse(phi));
    const MetricNAlgebra t = transport(m, phi);
    EXPECT_TRUE(check_morphism(phi, m.algebra, t.algebra).ok()) << name;
    EXPECT_TRUE(check_isometry(phi, m.form, t.form).ok()) << name;
    EXPECT_TRUE(check_jacobi(t.algebra).ok()) << name;
    EXPECT_TRUE(check_metric(t).ok()) << name;
    EXPECT_EQ(transport(t, inverse(phi)), m) << name;
  }
}

TEST(Reduce, SimpleFourAlgebraAtE5GivesSimpleThree) {
  const MetricNAlgebra s4 = simple(4, SignVector::all_plus(5));
  const NAlgebra r = reduce_by_element(s4.algebra, unit_vector(5, 4));
  EXPECT_EQ(r.arity(), 3u);
  EXPECT_TRUE(check_jacobi(r).ok());
  std::vector<std::size_t> idx{0, 1, 2, 3};
  const Subspace der = derived_ideal(r);
  EXPECT_EQ(der, Subspace::coordinate(5, idx));
  EXPECT_EQ(restrict_algebra(r, der), s3().algebra);
  EXPECT_EQ(centre(r), Subspace::coordinate(5, std::vector<std::size_t>{4}));
}

TEST(Reduce, RandomElementsGiveLieAlgebras) {
  std::mt19937 rng(99);
  for (const MetricNAlgebra& m : {s3(), theorem_family(4, 1)}) {
    for (int trial = 0; trial < 10; ++trial) {
      const NAlgebra r = reduce_by_element(m.algebra, fixtures::rand_vector(rng, m.dim()));
      EXPECT_TRUE(check_jacobi(r).ok());
      EXPECT_TRUE(fixtures::reference_jacobi(r));
    }
  }
  EXPECT_THROW(reduce_by_element(so3().algebra, unit_vector(3, 0)), PreconditionFailed);
}

TEST(Quotient, TheoremFamilyByCentrePerp) {
  const MetricNAlgebra tf = theorem_family(4, 1);
  std::vector<std::size_t> idx{1, 2, 3, 4, 5};
  const QuotientResult q = quotient_coisotropic(tf, Subspace::coordinate(6, idx));
  EXPECT_EQ(q.algebra.dim(), 4u);
  EXPECT_EQ(q.algebra.arity(), 4u);
  EXPECT_TRUE(q.algebra.algebra.is_abelian());
  EXPECT_TRUE(q.algebra.form.positive_definite());
  EXPECT_EQ(q.projection * q.section, Matrix::identity(4));
}

TEST(Quotient, RejectsNonCoisotropicOrNonIdeal) {
  const MetricNAlgebra tf = theorem_family(4, 1);
  std::vector<std::size_t> v{1};
  EXPECT_THROW(quotient_coisotropic(tf, Subspace::coordinate(6, v)), PreconditionFailed);  // isotropic
  std::vector<std::size_t> u{0, 1};
  EXPECT_THROW(quotient_coisotropic(tf, Subspace::coordinate(6, u)), PreconditionFailed);  // not an ideal
}

TEST(Morphism, DetectsNonHomomorphism) {
  Matrix phi = Matrix::identity(4);
  phi(0, 0) = 2;
  const auto rep = check_morphism(phi, s3().algebra, s3().algebra);
  EXPECT_FALSE(rep.ok());
  EXPECT_EQ(rep.kind, ViolationKind::not_homomorphism);
}
