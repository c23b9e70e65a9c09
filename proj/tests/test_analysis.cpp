#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"

using namespace nlie;

namespace {

std::vector<std::size_t> factor_dims(const DecompositionResult& d) {
  std::vector<std::size_t> out;
  for (const auto& f : d.factors) out.push_back(f.algebra.dim());
  return out;
}

bool commutes_with_all_ads(const Matrix& m, const NAlgebra& alg) {
  for (const auto& [x, a] : adjoint_maps(alg).maps)
    if (m * a != a * m) return false;
  return true;
}

Signature sum_signature(const DecompositionResult& d) {
  Signature s{0, 0, 0};
  for (const auto& f : d.factors) {
    const Signature t = f.algebra.form.signature();
    s.p += t.p;
    s.q += t.q;
    s.r += t.r;
  }
  return s;
}

}  // namespace

TEST(Classify, Examples) {
  const MetricNAlgebra tf = theorem_family(4, 1);
  std::vector<Vector> v{unit_vector(6, 1)};
  const Subspace line_v = Subspace::span(v, 6);
  EXPECT_EQ(classify_subspace(tf, line_v), SubspaceClass::isotropic);
  EXPECT_EQ(classify_subspace(tf, orthogonal_complement(line_v, tf.form)), SubspaceClass::coisotropic);
  std::vector<Vector> x{Vector{1, 1, 0, 0, 0, 0}};
  EXPECT_EQ(classify_subspace(tf, Subspace::span(x, 6)), SubspaceClass::nondegenerate);
  EXPECT_EQ(classify_subspace(tf, Subspace::full(6)), SubspaceClass::nondegenerate);
  // span(v, e1): contains its radical span(v) but is neither inside nor around its complement.
  std::vector<Vector> mix{unit_vector(6, 1), unit_vector(6, 2)};
  EXPECT_EQ(classify_subspace(tf, Subspace::span(mix, 6)), SubspaceClass::mixed);
  EXPECT_THROW(classify_subspace(tf, Subspace::full(5)), DimensionMismatch);
}

TEST(Commutant, Examples) {
  const MetricNAlgebra s3 = simple(3, SignVector::all_plus(4));
  const Commutant c = commutant(s3);
  ASSERT_EQ(c.basis.size(), 1u);
  EXPECT_TRUE(detail::is_scalar(c.basis[0]));

  const MetricNAlgebra ss = direct_sum(s3, s3);
  const Commutant c2 = commutant(ss);
  EXPECT_GE(c2.symmetric.size(), 2u);
  Matrix p1(8, 8);
  for (std::size_t i = 0; i < 4; ++i) p1(i, i) = 1;
  std::vector<Vector> flat;
  for (const auto& m : c2.symmetric) flat.push_back(m.data());
  const Subspace sym = Subspace::span(flat, 64);
  EXPECT_TRUE(sym.contains(p1.data()));
  EXPECT_TRUE(sym.contains((Matrix::identity(8) - p1).data()));

  const Commutant c3 = commutant(abelian(3, BilinearForm::identity(3)));
  EXPECT_EQ(c3.basis.size(), 9u);
  EXPECT_EQ(c3.symmetric.size(), 6u);
}

TEST(Commutant, SymmetricShortcutAgreesWithFullSolve) {
  for (const auto& [name, m] : fixtures::corpus()) {
    const AdjointMaps ads = adjoint_maps(m.algebra);
    const Commutant c = commutant(m, ads);
    const auto fast = symmetric_commutant(m, ads);
    std::vector<Vector> a, b;
    for (const auto& x : c.symmetric) a.push_back(x.data());
    for (const auto& x : fast) b.push_back(x.data());
    EXPECT_EQ(Subspace::span(a, m.dim() * m.dim()), Subspace::span(b, m.dim() * m.dim())) << name;
    for (const auto& x : c.basis) EXPECT_TRUE(commutes_with_all_ads(x, m.algebra)) << name;
    const Matrix& g = m.form.gram();
    for (const auto& x : fast) EXPECT_TRUE((g * x).is_symmetric()) << name;
  }
}

TEST(Indecomposability, Examples) {
  for (const char* s : {"++++", "+-+-", "----", "+++-"})
    EXPECT_EQ(indecomposability(simple(3, SignVector::parse(s))).verdict, Verdict::indecomposable_certified) << s;
  EXPECT_EQ(indecomposability(simple(4, SignVector::parse("-++-+"))).verdict, Verdict::indecomposable_certified);
  EXPECT_EQ(indecomposability(theorem_family(4, 2)).verdict, Verdict::indecomposable_certified);

  const MetricNAlgebra split = direct_sum(simple(3, SignVector::all_plus(4)), abelian(3, BilinearForm::identity(1)));
  const Indecomposability r = indecomposability(split);
  ASSERT_EQ(r.verdict, Verdict::decomposable);
  std::vector<std::size_t> last{4};
  EXPECT_EQ(*r.witness, Subspace::coordinate(5, last));

  const MetricNAlgebra bad(simple(3, SignVector::all_plus(4)).algebra, BilinearForm(Matrix::diagonal(Vector{1, 1, 1, -1})));
  EXPECT_THROW(indecomposability(bad), PreconditionFailed);
}

TEST(Indecomposability, SearchSplitsSumsOfSimpleAlgebras) {
  const MetricNAlgebra ss = direct_sum(simple(3, SignVector::all_plus(4)), simple(3, SignVector::parse("-+-+")));
  const Indecomposability r = indecomposability(ss);
  ASSERT_EQ(r.verdict, Verdict::decomposable);
  EXPECT_EQ(r.witness->rank(), 4u);
  EXPECT_TRUE(fixtures::reference_is_ideal(ss.algebra, *r.witness));
  EXPECT_TRUE(restrict_form(ss.form, *r.witness).nondegenerate());
}

TEST(Indecomposability, HyperbolicAbelianPlaneSplitsIntoLines) {
  Matrix g(2, 2);
  g(0, 1) = 1;
  g(1, 0) = 1;
  const MetricNAlgebra h = abelian(3, BilinearForm(g));
  const DecompositionResult d = decompose(h);
  EXPECT_EQ(factor_dims(d), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(d.factors[0].algebra.form.signature(), (Signature{0, 1, 0}));
  EXPECT_EQ(d.factors[1].algebra.form.signature(), (Signature{1, 0, 0}));
}

TEST(Indecomposability, VerdictInvariantUnderIsometries) {
  std::mt19937 rng(31);
  for (const auto& [name, m] : fixtures::corpus()) {
    if (!m.form.positive_definite()) continue;
    const Verdict before = indecomposability(m).verdict;
    const Matrix q = fixtures::random_orthogonal(rng, m.dim());
    ASSERT_EQ(q.transpose() * q, Matrix::identity(m.dim()));
    const MetricNAlgebra moved = transport(m, q);
    EXPECT_EQ(moved.form, m.form) << name;
    EXPECT_EQ(indecomposability(moved).verdict, before) << name;
  }
}

TEST(Decompose, Examples) {
  const MetricNAlgebra e = direct_sum(simple(3, SignVector::all_plus(4)), abelian(3, BilinearForm::identity(2)));
  const DecompositionResult d = decompose(e);
  EXPECT_EQ(factor_dims(d), (std::vector<std::size_t>{1, 1, 4}));
  EXPECT_EQ(d.factors[2].algebra, simple(3, SignVector::all_plus(4)));
  for (const auto& f : d.factors) EXPECT_EQ(f.verdict, Verdict::indecomposable_certified);
  EXPECT_TRUE(d.reassembly_ok);
  EXPECT_TRUE(d.embeddings_ok);
  for (const auto& s : d.splits) EXPECT_EQ(s.verdict, SplitVerdict::certified);

  const MetricNAlgebra tf = theorem_family(5, 2);
  const DecompositionResult single = decompose(tf);
  ASSERT_EQ(single.factors.size(), 1u);
  EXPECT_EQ(single.factors[0].algebra, tf);
  EXPECT_EQ(single.factors[0].embedding, Matrix::identity(tf.dim()));
  EXPECT_TRUE(single.splits.empty());
}

TEST(Decompose, TwistFixtureGivesSimpleAndTwoLines) {
  const DecompositionResult d = decompose(fixtures::twist_fixture());
  EXPECT_EQ(factor_dims(d), (std::vector<std::size_t>{1, 1, 5}));
  EXPECT_EQ(d.factors[0].algebra.form.signature(), (Signature{0, 1, 0}));
  EXPECT_EQ(d.factors[1].algebra.form.signature(), (Signature{1, 0, 0}));
  EXPECT_EQ(d.factors[2].verdict, Verdict::indecomposable_certified);
  EXPECT_TRUE(d.reassembly_ok);
}

TEST(Decompose, FactorsAreOrthogonalAndSignaturesAdd) {
  for (const auto& [name, m] : fixtures::corpus()) {
    const DecompositionResult d = decompose(m);
    EXPECT_TRUE(d.reassembly_ok) << name;
    EXPECT_TRUE(d.embeddings_ok) << name;
    EXPECT_EQ(sum_signature(d), m.form.signature()) << name;
    for (const auto& sp : d.splits) EXPECT_EQ(sp.verdict, SplitVerdict::certified) << name;
    for (const auto& f : d.factors) EXPECT_EQ(f.verdict, Verdict::indecomposable_certified) << name;
    std::size_t total = 0;
    for (std::size_t a = 0; a < d.factors.size(); ++a) {
      total += d.factors[a].algebra.dim();
      for (std::size_t b = a + 1; b < d.factors.size(); ++b) {
        const Matrix cross = d.factors[a].embedding.transpose() * m.form.gram() * d.factors[b].embedding;
        EXPECT_TRUE(cross.is_zero()) << name;
      }
      Subspace image = column_space(d.factors[a].embedding);
      EXPECT_TRUE(fixtures::reference_is_ideal(m.algebra, image)) << name;
    }
    EXPECT_EQ(total, m.dim()) << name;
  }
}

TEST(Decompose, EuclideanFactorsAreLinesOrSimpleUpToSignedPermutation) {
  for (const auto& [name, m] : fixtures::corpus()) {
    if (!m.form.positive_definite()) continue;
    for (const auto& f : decompose(m).factors) {
      const std::size_t k = f.algebra.dim();
      if (k == 1) continue;
      ASSERT_EQ(k, m.arity() + 1) << name;
      // Search signed permutations taking the factor onto simple(n, +, scale).
      const Rational scale = f.algebra.form.gram()(0, 0);
      const MetricNAlgebra target = simple(m.arity(), SignVector::all_plus(k), scale);
      std::vector<std::size_t> perm(k);
      for (std::size_t i = 0; i < k; ++i) perm[i] = i;
      bool found = false;
      do {
        for (std::size_t mask = 0; mask < (1u << k) && !found; ++mask) {
          Matrix p(k, k);
          for (std::size_t i = 0; i < k; ++i) p(perm[i], i) = (mask >> i) & 1 ? -1 : 1;
          if (transport(f.algebra, p) == target) found = true;
        }
      } while (!found && std::next_permutation(perm.begin(), perm.end()));
      EXPECT_TRUE(found) << name;
    }
  }
}

TEST(Report, Examples) {
  const StructureReport r = structure_report(theorem_family(4, 1));
  EXPECT_EQ(r.dim, 6u);
  EXPECT_EQ(r.signature, (Signature{5, 1, 0}));
  EXPECT_EQ(r.centre_dim, 1u);
  EXPECT_EQ(r.derived_dim, 5u);
  EXPECT_TRUE(r.centreperp_equals_derived);
  EXPECT_TRUE(r.ideal_perp_ok);
  EXPECT_FALSE(r.inconsistent);
  ASSERT_TRUE(r.decomposition);
  ASSERT_EQ(r.decomposition->factors.size(), 1u);
  EXPECT_EQ(r.decomposition->factors[0].verdict, Verdict::indecomposable_certified);

  const StructureReport a = structure_report(abelian(3, BilinearForm::identity(3)));
  EXPECT_EQ(a.centre_dim, 3u);
  EXPECT_EQ(a.derived_dim, 0u);
  ASSERT_TRUE(a.decomposition);
  EXPECT_EQ(factor_dims(*a.decomposition), (std::vector<std::size_t>{1, 1, 1}));

  const StructureReport dp = structure_report(dual_pair(simple(3, SignVector::all_plus(4))));
  EXPECT_EQ(dp.signature, (Signature{4, 4, 0}));
  EXPECT_EQ(dp.centre_dim, 0u);
  EXPECT_EQ(dp.derived_dim, 8u);
}

TEST(Report, DegenerateOrBrokenInputIsFlaggedNotDecomposed) {
  Vector diag{1, 1, 1, 0};
  const StructureReport r = structure_report(MetricNAlgebra(simple(3, SignVector::all_plus(4)).algebra,
                                                            BilinearForm(Matrix::diagonal(diag))));
  EXPECT_EQ(r.signature, (Signature{3, 0, 1}));
  EXPECT_FALSE(r.metric_ok);
  EXPECT_FALSE(r.decomposition);
  EXPECT_FALSE(r.inconsistent);
}
