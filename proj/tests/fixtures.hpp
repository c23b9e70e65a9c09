#pragma once

// Shared builders and slow reference implementations for the tests.

#include <random>
#include <string>
#include <vector>

#include "nlie/nlie.hpp"

namespace fixtures {

using namespace nlie;

/// n = 4 double extension of W = R^5: the 3-bracket on W is
/// [y1,y2,y3] = [e5,y1,y2,y3] of s^(4) and the 4-bracket on W is s^(4) itself.
inline MetricNAlgebra twist_fixture() {
  const MetricNAlgebra s4 = simple(4, SignVector::all_plus(5));
  NAlgebra::Table t;
  for_each_combination(5, 3, [&](const IndexTuple& y) {
    std::vector<std::size_t> idx{4};
    for (auto i : y) idx.push_back(i);
    Vector v = s4.algebra.basis_bracket(idx);
    if (!nlie::is_zero(v)) t.emplace(y, std::move(v));
  });
  MetricNAlgebra w(NAlgebra(3, 5, std::move(t)), BilinearForm::identity(5));
  return double_extension({w, s4.algebra});
}

/// Block of the fixture spanned by W (basis indices 3..7, 1-based).
inline Subspace twist_block() {
  std::vector<std::size_t> idx{2, 3, 4, 5, 6};
  return Subspace::coordinate(7, idx);
}

inline Vector rand_vector(std::mt19937& rng, std::size_t d, int range = 3) {
  Vector v(d);
  for (auto& x : v) {
    const long num = static_cast<long>(rng() % (2 * range + 1)) - range;
    const long den = static_cast<long>(rng() % 3) + 1;
    x = Rational(num, den);
  }
  return v;
}

/// Random exact orthogonal matrix: a signed permutation followed by a few
/// rotations by the angle with cosine 3/5 in random coordinate planes.
inline Matrix random_orthogonal(std::mt19937& rng, std::size_t d, int rotations = 3) {
  std::vector<std::size_t> perm(d);
  for (std::size_t i = 0; i < d; ++i) perm[i] = i;
  for (std::size_t i = d; i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
  Matrix q(d, d);
  for (std::size_t i = 0; i < d; ++i) q(perm[i], i) = (rng() % 2) ? 1 : -1;
  for (int r = 0; r < rotations && d >= 2; ++r) {
    const std::size_t a = rng() % d;
    std::size_t b = rng() % (d - 1);
    if (b >= a) ++b;
    Matrix g = Matrix::identity(d);
    g(a, a) = Rational(3, 5);
    g(b, b) = Rational(3, 5);
    g(a, b) = Rational(-4, 5);
    g(b, a) = Rational(4, 5);
    q = g * q;
  }
  return q;
}

inline std::vector<Vector> basis_vectors(std::size_t d) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < d; ++i) out.push_back(unit_vector(d, i));
  return out;
}

/// The fundamental identity evaluated literally with `bracket` on all basis
/// (n-1)-tuples X and n-tuples Y.
inline bool reference_jacobi(const NAlgebra& alg) {
  const std::size_t n = alg.arity();
  const std::size_t d = alg.dim();
  const auto e = basis_vectors(d);
  bool ok = true;
  for_each_combination(d, n - 1, [&](const IndexTuple& x) {
    if (!ok) return;
    std::vector<Vector> xs;
    for (auto i : x) xs.push_back(e[i]);
    auto ad = [&](const Vector& y) {
      std::vector<Vector> args = xs;
      args.push_back(y);
      return bracket(alg, args);
    };
    for_each_combination(d, n, [&](const IndexTuple& y) {
      if (!ok) return;
      std::vector<Vector> ys;
      for (auto i : y) ys.push_back(e[i]);
      const Vector lhs = ad(bracket(alg, ys));
      Vector rhs(d);
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Vector> args = ys;
        args[i] = ad(ys[i]);
        rhs = rhs + bracket(alg, args);
      }
      if (lhs != rhs) ok = false;
    });
  });
  return ok;
}

/// <[X, e_i], e_j> + <e_i, [X, e_j]> = 0 for all basis X, i, j.
inline bool reference_metric(const MetricNAlgebra& m) {
  const std::size_t n = m.arity();
  const std::size_t d = m.dim();
  const auto e = basis_vectors(d);
  bool ok = true;
  for_each_combination(d, n - 1, [&](const IndexTuple& x) {
    std::vector<Vector> xs;
    for (auto i : x) xs.push_back(e[i]);
    auto ad = [&](const Vector& y) {
      std::vector<Vector> args = xs;
      args.push_back(y);
      return bracket(m.algebra, args);
    };
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (!(m.form(ad(e[i]), e[j]) + m.form(e[i], ad(e[j]))).is_zero()) ok = false;
  });
  return ok;
}

/// Centre from the bracket directly: z with [e_X, z] = 0 for all basis X.
inline Subspace reference_centre(const NAlgebra& alg) {
  const std::size_t n = alg.arity();
  const std::size_t d = alg.dim();
  const auto e = basis_vectors(d);
  std::vector<Vector> rows;
  for_each_combination(d, n - 1, [&](const IndexTuple& x) {
    // Row k of the map z -> [e_X, z] is (coefficient k of [e_X, e_j])_j.
    std::vector<Vector> cols;
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<Vector> args;
      for (auto i : x) args.push_back(e[i]);
      args.push_back(e[j]);
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

/// Span of all brackets of basis vectors.
inline Subspace reference_derived(const NAlgebra& alg) {
  const auto e = basis_vectors(alg.dim());
  std::vector<Vector> vs;
  for_each_combination(alg.dim(), alg.arity(), [&](const IndexTuple& t) {
    std::vector<Vector> args;
    for (auto i : t) args.push_back(e[i]);
    vs.push_back(bracket(alg, args));
  });
  return Subspace::span(vs, alg.dim());
}

/// Ideal test straight from the definition on basis tuples of V and basis vectors of s.
inline bool reference_is_ideal(const NAlgebra& alg, const Subspace& s) {
  const auto e = basis_vectors(alg.dim());
  bool ok = true;
  for_each_combination(alg.dim(), alg.arity() - 1, [&](const IndexTuple& x) {
    for (const auto& w : s.basis()) {
      std::vector<Vector> args;
      for (auto i : x) args.push_back(e[i]);
      args.push_back(w);
      if (!s.contains(bracket(alg, args))) ok = false;
    }
  });
  return ok;
}

/// Constructed corpus used by the structure and property tests.
struct Named {
  std::string name;
  MetricNAlgebra algebra;
};

inline std::vector<Named> corpus() {
  std::vector<Named> c;
  c.push_back({"s3", simple(3, SignVector::all_plus(4))});
  c.push_back({"s3(+-+-)", simple(3, SignVector::parse("+-+-"))});
  c.push_back({"s4", simple(4, SignVector::all_plus(5))});
  c.push_back({"s4(--+++) scale 2", simple(4, SignVector::parse("--+++"), 2)});
  c.push_back({"so3", so3()});
  c.push_back({"tf(3,1)", theorem_family(3, 1)});
  c.push_back({"tf(3,2)", theorem_family(3, 2)});
  c.push_back({"tf(4,1)", theorem_family(4, 1)});
  c.push_back({"tf(4,2)", theorem_family(4, 2)});
  c.push_back({"tf(5,1)", theorem_family(5, 1)});
  {
    std::vector<Rational> a{1};
    c.push_back({"medina(1)", medina_lorentzian(BilinearForm::identity(2),
                                                SkewEndomorphism(rotation_blocks(a), BilinearForm::identity(2)))});
    std::vector<Rational> b{1, 2};
    c.push_back({"medina(1,2)", medina_lorentzian(BilinearForm::identity(4),
                                                  SkewEndomorphism(rotation_blocks(b), BilinearForm::identity(4)))});
  }
  c.push_back({"dual(s3)", dual_pair(simple(3, SignVector::all_plus(4)))});
  c.push_back({"dual(s4)", dual_pair(simple(4, SignVector::all_plus(5)))});
  c.push_back({"twist fixture", twist_fixture()});
  c.push_back({"s3+R2", direct_sum(simple(3, SignVector::all_plus(4)), abelian(3, BilinearForm::identity(2)))});
  c.push_back({"s3+s3", direct_sum(simple(3, SignVector::all_plus(4)), simple(3, SignVector::parse("++--")))});
  c.push_back({"abelian R^3", abelian(3, BilinearForm::identity(3))});
  return c;
}

}  // namespace fixtures
