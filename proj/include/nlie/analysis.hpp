#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nlie/algebra.hpp"
#include "nlie/linalg.hpp"
#include "nlie/polynomial.hpp"

namespace nlie {

enum class SubspaceClass { nondegenerate, isotropic, coisotropic, mixed };

inline const char* to_string(SubspaceClass c) {
  switch (c) {
    case SubspaceClass::nondegenerate: return "nondegenerate";
    case SubspaceClass::isotropic: return "isotropic";
    case SubspaceClass::coisotropic: return "coisotropic";
    case SubspaceClass::mixed: return "mixed";
  }
  return "?";
}

/// First matching tag in the order nondegenerate, isotropic, coisotropic, mixed
/// (so the zero subspace and the whole space of a metric algebra are nondegenerate).
inline SubspaceClass classify_subspace(const BilinearForm& b, const Subspace& s) {
  if (s.ambient_dim() != b.dim()) throw DimensionMismatch("classify_subspace: dimension mismatch");
  const Subspace perp = orthogonal_complement(s, b);
  if (subspace_intersect(s, perp).is_zero()) return SubspaceClass::nondegenerate;
  if (perp.contains(s)) return SubspaceClass::isotropic;
  if (s.contains(perp)) return SubspaceClass::coisotropic;
  return SubspaceClass::mixed;
}

inline SubspaceClass classify_subspace(const MetricNAlgebra& malg, const Subspace& s) {
  return classify_subspace(malg.form, s);
}

namespace detail {

inline Matrix unflatten(const Vector& v, std::size_t d) {
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = v[i * d + j];
  return m;
}

inline std::vector<Matrix> unflatten_all(const Subspace& s, std::size_t d) {
  std::vector<Matrix> out;
  for (const auto& v : s.basis()) out.push_back(unflatten(v, d));
  return out;
}

/// Trace of a*b without forming the product.
inline Rational trace_product(const Matrix& a, const Matrix& b) {
  Rational t;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (!a(i, k).is_zero() && !b(k, i).is_zero()) t.add_product(a(i, k), b(k, i));
  return t;
}

}  // namespace detail

struct Commutant {
  /// Basis of {M : M ad_X = ad_X M for every basis tuple X}.
  std::vector<Matrix> basis;
  /// Basis of the b-symmetric part (<Mx, y> = <x, My>).
  std::vector<Matrix> symmetric;
};

inline Commutant commutant(const MetricNAlgebra& malg, const AdjointMaps& ads) {
  const std::size_t d = malg.dim();
  SparseRowReducer eq(d * d);
  for (const Matrix& a : ads.span_basis) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        // (M A - A M)(i, j)
        SparseRowReducer::Row row;
        for (std::size_t k = 0; k < d; ++k) {
          if (!a(k, j).is_zero()) row.emplace_back(i * d + k, a(k, j));
          if (!a(i, k).is_zero()) row.emplace_back(k * d + j, -a(i, k));
        }
        if (!row.empty()) eq.add(std::move(row));
      }
  }
  Commutant out;
  out.basis = detail::unflatten_all(eq.nullspace(), d);

  // Combinations sum c_k B_k with G M symmetric.
  const Matrix& g = malg.form.gram();
  std::vector<Matrix> gb;
  for (const auto& b : out.basis) gb.push_back(g * b);
  Matrix sys(d * (d - (d > 0 ? 1 : 0)) / 2, out.basis.size());
  std::size_t r = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j, ++r)
      for (std::size_t k = 0; k < gb.size(); ++k) sys(r, k) = gb[k](i, j) - gb[k](j, i);
  const Subspace combos = nullspace(sys);
  for (const auto& c : combos.basis()) {
    Matrix m(d, d);
    for (std::size_t k = 0; k < c.size(); ++k)
      if (!c[k].is_zero()) m = m + c[k] * out.basis[k];
    out.symmetric.push_back(std::move(m));
  }
  return out;
}

inline Commutant commutant(const MetricNAlgebra& malg) { return commutant(malg, adjoint_maps(malg.algebra)); }

/// The b-symmetric commutant alone, solved as K = G M symmetric with K ad + ad^T K = 0.
/// Assumes every adjoint map is skew for the form.
inline std::vector<Matrix> symmetric_commutant(const MetricNAlgebra& malg, const AdjointMaps& ads) {
  const std::size_t d = malg.dim();
  std::vector<std::size_t> idx(d * d);
  std::size_t count = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) idx[i * d + j] = idx[j * d + i] = count++;
  SparseRowReducer eq(count);
  for (const Matrix& a : ads.span_basis) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        // (K A)(i, j) + (K A)(j, i)
        SparseRowReducer::Row row;
        for (std::size_t k = 0; k < d; ++k) {
          if (!a(k, j).is_zero()) row.emplace_back(idx[i * d + k], a(k, j));
          if (!a(k, i).is_zero()) row.emplace_back(idx[j * d + k], a(k, i));
        }
        if (!row.empty()) eq.add(std::move(row));
      }
  }
  const Matrix ginv = inverse(malg.form.gram());
  std::vector<Matrix> out;
  const Subspace sol = eq.nullspace();
  for (const auto& v : sol.basis()) {
    Matrix k(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) k(i, j) = v[idx[i * d + j]];
    out.push_back(ginv * k);
  }
  return out;
}

enum class Verdict { decomposable, indecomposable_certified, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::decomposable: return "decomposable";
    case Verdict::indecomposable_certified: return "indecomposable_certified";
    case Verdict::unknown: return "unknown";
  }
  return "?";
}

struct Indecomposability {
  Verdict verdict = Verdict::unknown;
  /// Proper nondegenerate ideal, present iff decomposable.
  std::optional<Subspace> witness;
  /// "dimension", "central line", "commutant" or "search".
  std::string method;
};

namespace detail {

inline bool is_scalar(const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i == j ? m(i, j) != m(0, 0) : !m(i, j).is_zero()) return false;
  return true;
}

/// Every element of `sym` is a scalar plus an element of the radical of the
/// associative algebra A generated by `sym` and the identity. Then no
/// element of sym is an idempotent other than 0 and id.
inline bool symmetric_part_is_local(const std::vector<Matrix>& sym, std::size_t d) {
  std::vector<Matrix> gens;
  for (const auto& m : sym)
    if (!is_scalar(m)) gens.push_back(m);
  if (gens.empty()) return true;

  RowReducer span(d * d);
  std::vector<Matrix> alg;
  auto push = [&](const Matrix& m) {
    if (span.add(m.data())) alg.push_back(m);
  };
  push(Matrix::identity(d));
  for (const auto& g : gens) push(g);
  for (std::size_t k = 0; k < alg.size(); ++k)
    for (const auto& g : gens) push(alg[k] * g);

  const Rational dd(static_cast<long>(d));
  for (const auto& m : gens) {
    const Rational lambda = m.trace() / dd;
    for (const auto& y : alg)
      if (trace_product(m, y) != lambda * y.trace()) return false;
  }
  return true;
}

inline Matrix power(const Matrix& m, std::size_t e) {
  Matrix r = Matrix::identity(m.rows());
  for (std::size_t i = 0; i < e; ++i) r = r * m;
  return r;
}

/// Generalized eigenspaces of m for pairwise coprime factors of its
/// characteristic polynomial found over Q. Empty if m yields a single piece.
inline std::vector<Subspace> rational_primary_pieces(const Matrix& m) {
  const Polynomial chi = characteristic_polynomial(m);
  std::vector<std::pair<Polynomial, std::size_t>> pieces;
  for (const auto& [f, mult] : squarefree_factorization(chi)) {
    Polynomial rest = f;
    for (const auto& root : rational_roots(f)) {
      pieces.emplace_back(Polynomial::linear(root), mult);
      rest = divmod(rest, Polynomial::linear(root)).first;
    }
    if (rest.degree() >= 1) pieces.emplace_back(rest, mult);
  }
  std::vector<Subspace> out;
  if (pieces.size() < 2) return out;
  for (const auto& [g, mult] : pieces) out.push_back(nullspace(power(evaluate(g, m), mult)));
  return out;
}

inline bool is_proper_nondegenerate_ideal(const MetricNAlgebra& malg, const Subspace& s, const AdjointMaps& ads) {
  return !s.is_zero() && !s.is_full() && is_ideal(malg.algebra, s, ads).ok() &&
         restrict_form(malg.form, s).nondegenerate();
}

}  // namespace detail

/// Looks for a proper nondegenerate ideal. A central non-null line is tried
/// first, then the b-symmetric commutant: if every element is a scalar plus
/// a nilpotent the algebra is certified indecomposable, else elements of it
/// are split along rational primary components of their characteristic polynomials.
inline Indecomposability indecomposability(const MetricNAlgebra& malg, const AdjointMaps& ads) {
  const std::size_t d = malg.dim();
  if (!malg.form.nondegenerate()) throw PreconditionFailed("indecomposability: form is degenerate");
  if (!check_jacobi(malg.algebra, ads).ok()) throw PreconditionFailed("indecomposability: Jacobi identity fails");
  if (!check_metric(malg, ads).ok()) throw PreconditionFailed("indecomposability: form is not invariant");
  if (d <= 1) return {Verdict::indecomposable_certified, std::nullopt, "dimension"};

  const Subspace z = centre(malg.algebra, ads);
  {
    const auto& zb = z.basis();
    std::optional<Vector> line;
    for (std::size_t i = 0; i < zb.size() && !line; ++i)
      if (!malg.form(zb[i], zb[i]).is_zero()) line = zb[i];
    for (std::size_t i = 0; i < zb.size() && !line; ++i)
      for (std::size_t j = i + 1; j < zb.size() && !line; ++j) {
        Vector s = zb[i] + zb[j];
        if (!malg.form(s, s).is_zero()) line = std::move(s);
      }
    if (line) {
      std::vector<Vector> one{*line};
      return {Verdict::decomposable, Subspace::span(one, d), "central line"};
    }
  }

  const std::vector<Matrix> sym = symmetric_commutant(malg, ads);
  if (detail::symmetric_part_is_local(sym, d)) return {Verdict::indecomposable_certified, std::nullopt, "commutant"};

  auto attempt = [&](const Matrix& m) -> std::optional<Subspace> {
    if (detail::is_scalar(m)) return std::nullopt;
    auto pieces = detail::rational_primary_pieces(m);
    std::optional<Subspace> best;
    for (auto& p : pieces)
      if (!best || p.rank() < best->rank()) best = std::move(p);
    if (best && detail::is_proper_nondegenerate_ideal(malg, *best, ads)) return best;
    return std::nullopt;
  };
  for (const auto& m : sym)
    if (auto w = attempt(m)) return {Verdict::decomposable, std::move(*w), "commutant"};
  std::mt19937 rng(20240607u);
  for (int round = 0; round < 24; ++round) {
    Matrix m(d, d);
    for (const auto& b : sym) {
      const long c = static_cast<long>(rng() % 7) - 3;
      if (c != 0) m = m + Rational(c) * b;
    }
    if (auto w = attempt(m)) return {Verdict::decomposable, std::move(*w), "search"};
  }
  return {Verdict::unknown, std::nullopt, "search"};
}

inline Indecomposability indecomposability(const MetricNAlgebra& malg) {
  return indecomposability(malg, adjoint_maps(malg.algebra));
}

enum class SplitVerdict { certified, heuristic };

inline const char* to_string(SplitVerdict v) { return v == SplitVerdict::certified ? "certified" : "heuristic"; }

struct Factor {
  MetricNAlgebra algebra;
  /// dim V x dim factor; columns are the images of the factor basis.
  Matrix embedding;
  Verdict verdict = Verdict::unknown;  // indecomposable_certified or unknown
};

struct Split {
  std::size_t ideal_dim = 0;
  std::size_t complement_dim = 0;
  std::string method;
  SplitVerdict verdict = SplitVerdict::heuristic;
};

struct DecompositionResult {
  std::vector<Factor> factors;
  std::vector<Split> splits;
  /// transport of the direct sum of the factors by [E_1 | E_2 | ...] equals the input.
  bool reassembly_ok = false;
  /// Every embedding is an isometric morphism and the images are pairwise orthogonal.
  bool embeddings_ok = false;
};

namespace detail {

inline bool factor_less(const Factor& a, const Factor& b) {
  if (a.algebra.dim() != b.algebra.dim()) return a.algebra.dim() < b.algebra.dim();
  const Signature sa = a.algebra.form.signature(), sb = b.algebra.form.signature();
  if (sa != sb) return sa < sb;
  if (a.algebra.algebra.table() != b.algebra.algebra.table())
    return a.algebra.algebra.table() < b.algebra.algebra.table();
  if (a.algebra.form.gram().data() != b.algebra.form.gram().data())
    return a.algebra.form.gram().data() < b.algebra.form.gram().data();
  return a.embedding.data() < b.embedding.data();
}

inline void decompose_into(const MetricNAlgebra& malg, const Matrix& embedding, DecompositionResult& out) {
  const AdjointMaps ads = adjoint_maps(malg.algebra);
  const Indecomposability ind = indecomposability(malg, ads);
  if (ind.verdict != Verdict::decomposable) {
    out.factors.push_back({malg, embedding, ind.verdict});
    return;
  }
  const Subspace& ideal = *ind.witness;
  const Subspace perp = orthogonal_complement(ideal, malg.form);
  Split split{ideal.rank(), perp.rank(), ind.method, SplitVerdict::heuristic};
  const bool exact = is_ideal(malg.algebra, ideal, ads).ok() && is_ideal(malg.algebra, perp, ads).ok() &&
                     subspace_intersect(ideal, perp).is_zero() && ideal.rank() + perp.rank() == malg.dim();
  if (!exact) {
    // Not expected for a verified witness; keep the factor whole.
    out.factors.push_back({malg, embedding, Verdict::unknown});
    return;
  }
  bool parts_ok = true;
  std::vector<std::pair<MetricNAlgebra, Matrix>> parts;
  for (const Subspace* s : {&ideal, &perp}) {
    MetricNAlgebra part(restrict_algebra(malg.algebra, *s), restrict_form(malg.form, *s));
    Matrix e = s->basis_matrix().transpose();
    parts_ok = parts_ok && check_morphism(e, part.algebra, malg.algebra).ok() &&
               check_isometry(e, part.form, malg.form).ok();
    parts.emplace_back(std::move(part), std::move(e));
  }
  split.verdict = parts_ok ? SplitVerdict::certified : SplitVerdict::heuristic;
  out.splits.push_back(split);
  for (auto& [part, e] : parts) decompose_into(part, embedding * e, out);
}

}  // namespace detail

/// Recursive orthogonal splitting along witness ideals, factors in canonical order.
inline DecompositionResult decompose(const MetricNAlgebra& malg) {
  DecompositionResult out;
  detail::decompose_into(malg, Matrix::identity(malg.dim()), out);
  std::sort(out.factors.begin(), out.factors.end(), detail::factor_less);

  const std::size_t d = malg.dim();
  out.embeddings_ok = true;
  std::vector<Vector> columns;
  for (const auto& f : out.factors) {
    out.embeddings_ok = out.embeddings_ok && check_morphism(f.embedding, f.algebra.algebra, malg.algebra).ok() &&
                        check_isometry(f.embedding, f.algebra.form, malg.form).ok();
    for (std::size_t j = 0; j < f.embedding.cols(); ++j) columns.push_back(f.embedding.column(j));
  }
  if (out.factors.empty()) return out;
  MetricNAlgebra sum = out.factors.front().algebra;
  for (std::size_t k = 1; k < out.factors.size(); ++k) sum = direct_sum(sum, out.factors[k].algebra);
  const Matrix all = Matrix::from_columns(columns, d);
  if (columns.size() == d && try_inverse(all)) {
    // Orthogonality of distinct images follows from the block-diagonal gram of the sum.
    out.reassembly_ok = transport(sum, all) == malg;
  }
  return out;
}

struct StructureReport {
  std::size_t arity = 0;
  std::size_t dim = 0;
  Signature signature;
  bool jacobi_ok = false;
  bool metric_ok = false;
  std::size_t centre_dim = 0;
  std::size_t derived_dim = 0;
  bool centreperp_equals_derived = false;
  /// For I in {centre, derived ideal}: I^perp is an ideal inside the centraliser of I.
  bool ideal_perp_ok = false;
  /// jacobi_ok and metric_ok hold but one of the two identities above fails.
  bool inconsistent = false;
  /// Present when jacobi_ok and metric_ok (which includes a nondegenerate form).
  std::optional<DecompositionResult> decomposition;
};

inline StructureReport structure_report(const MetricNAlgebra& malg) {
  StructureReport r;
  r.arity = malg.arity();
  r.dim = malg.dim();
  r.signature = malg.form.signature();
  const AdjointMaps ads = adjoint_maps(malg.algebra);
  r.jacobi_ok = check_jacobi(malg.algebra, ads).ok();
  r.metric_ok = malg.form.nondegenerate() && check_metric(malg, ads).ok();
  const Subspace z = centre(malg.algebra, ads);
  const Subspace der = derived_ideal(malg.algebra);
  r.centre_dim = z.rank();
  r.derived_dim = der.rank();
  r.centreperp_equals_derived = orthogonal_complement(z, malg.form) == der;
  r.ideal_perp_ok = true;
  for (const Subspace* i : {&z, &der}) {
    const Subspace perp = orthogonal_complement(*i, malg.form);
    r.ideal_perp_ok = r.ideal_perp_ok && is_ideal(malg.algebra, perp, ads).ok() &&
                      centraliser(malg.algebra, *i).contains(perp);
  }
  if (r.jacobi_ok && r.metric_ok) {
    r.inconsistent = !r.centreperp_equals_derived || !r.ideal_perp_ok;
    r.decomposition = decompose(malg);
  }
  return r;
}

}  // namespace nlie
