#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlie/linalg.hpp"

namespace nlie {

/// Strictly increasing list of 0-based basis indices (a basis element of a
/// wedge power). External formats print these 1-based.
class IndexTuple {
 public:
  IndexTuple() = default;

  explicit IndexTuple(std::vector<std::size_t> indices) : idx_(std::move(indices)) {
    for (std::size_t i = 1; i < idx_.size(); ++i)
      if (idx_[i - 1] >= idx_[i]) throw PreconditionFailed("IndexTuple: indices not strictly increasing");
  }

  /// Sorts `seq` and returns the permutation sign; sign 0 if an index repeats.
  static std::pair<int, IndexTuple> canonicalize(std::vector<std::size_t> seq) {
    int sign = 1;
    for (std::size_t i = 1; i < seq.size(); ++i)
      for (std::size_t j = i; j > 0 && seq[j - 1] > seq[j]; --j) {
        std::swap(seq[j - 1], seq[j]);
        sign = -sign;
      }
    for (std::size_t i = 1; i < seq.size(); ++i)
      if (seq[i - 1] == seq[i]) return {0, IndexTuple{}};
    IndexTuple t;
    t.idx_ = std::move(seq);
    return {sign, std::move(t)};
  }

  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  std::size_t operator[](std::size_t i) const { return idx_[i]; }
  std::size_t back() const { return idx_.back(); }
  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }
  const std::vector<std::size_t>& values() const { return idx_; }

  bool contains(std::size_t i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }

  /// Copy with position `pos` removed.
  IndexTuple without(std::size_t pos) const {
    IndexTuple t;
    t.idx_ = idx_;
    t.idx_.erase(t.idx_.begin() + static_cast<std::ptrdiff_t>(pos));
    return t;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < idx_.size(); ++i) s += (i ? "," : "") + std::to_string(idx_[i] + 1);
    return s + "]";
  }

  friend bool operator==(const IndexTuple&, const IndexTuple&) = default;
  friend auto operator<=>(const IndexTuple&, const IndexTuple&) = default;

 private:
  std::vector<std::size_t> idx_;
};

/// Calls f(tuple) for every strictly increasing k-subset of {0..n-1} in lexicographic order.
inline void for_each_combination(std::size_t n, std::size_t k, const std::function<void(const IndexTuple&)>& f) {
  if (k > n) return;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  while (true) {
    f(IndexTuple(c));
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

/// One entry of an unnormalized structure-constant listing (0-based indices, any order).
struct RawEntry {
  std::vector<std::size_t> indices;
  Vector coeffs;
};

/// An n-ary alternating bracket on Q^dim, stored by its structure constants on
/// strictly increasing basis tuples. Absent keys are zero brackets.
class NAlgebra {
 public:
  using Table = std::map<IndexTuple, Vector>;

  NAlgebra() : NAlgebra(2, 0) {}

  /// Abelian algebra.
  NAlgebra(std::size_t arity, std::size_t dim) : arity_(arity), dim_(dim) {
    if (arity < 2) throw PreconditionFailed("NAlgebra: arity must be at least 2");
  }

  /// Validates canonical keys and drops zero values.
  NAlgebra(std::size_t arity, std::size_t dim, Table table) : NAlgebra(arity, dim) {
    for (auto& [key, value] : table) {
      if (key.size() != arity) throw DimensionMismatch("NAlgebra: key " + key.str() + " has wrong length");
      if (!key.empty() && key.back() >= dim) throw DimensionMismatch("NAlgebra: key " + key.str() + " out of range");
      if (value.size() != dim) throw DimensionMismatch("NAlgebra: value for " + key.str() + " has wrong length");
      if (!nlie::is_zero(value)) table_.emplace(key, std::move(value));
    }
  }

  std::size_t arity() const { return arity_; }
  std::size_t dim() const { return dim_; }
  const Table& table() const { return table_; }
  bool is_abelian() const { return table_.empty(); }

  const Vector* structure(const IndexTuple& key) const {
    auto it = table_.find(key);
    return it == table_.end() ? nullptr : &it->second;
  }

  /// [e_{seq_1}, ..., e_{seq_n}] for an arbitrary index sequence.
  Vector basis_bracket(std::vector<std::size_t> seq) const {
    if (seq.size() != arity_) throw DimensionMismatch("basis_bracket: wrong number of arguments");
    auto [sign, key] = IndexTuple::canonicalize(std::move(seq));
    Vector out(dim_);
    if (sign == 0) return out;
    if (const Vector* c = structure(key)) {
      out = *c;
      if (sign < 0)
        for (auto& x : out) x = -x;
    }
    return out;
  }

  friend bool operator==(const NAlgebra&, const NAlgebra&) = default;

 private:
  std::size_t arity_;
  std::size_t dim_;
  Table table_;
};

/// Sorts each entry with its permutation sign, sums entries on the same key and drops zeros.
inline NAlgebra normalize_table(std::size_t arity, std::size_t dim, std::span<const RawEntry> raw) {
  NAlgebra::Table table;
  for (const auto& e : raw) {
    if (e.indices.size() != arity) throw DimensionMismatch("normalize_table: entry has wrong number of indices");
    if (e.coeffs.size() != dim) throw DimensionMismatch("normalize_table: coefficient vector has wrong length");
    for (auto i : e.indices)
      if (i >= dim) throw DimensionMismatch("normalize_table: index " + std::to_string(i + 1) + " out of range");
    auto [sign, key] = IndexTuple::canonicalize(e.indices);
    if (sign == 0) {
      if (nlie::is_zero(e.coeffs)) continue;
      throw PreconditionFailed("normalize_table: repeated index with nonzero value");
    }
    auto [it, inserted] = table.try_emplace(key, Vector(dim));
    for (std::size_t k = 0; k < dim; ++k) {
      if (sign > 0)
        it->second[k] += e.coeffs[k];
      else
        it->second[k] -= e.coeffs[k];
    }
  }
  return NAlgebra(arity, dim, std::move(table));
}

/// A Lie n-algebra candidate together with a symmetric bilinear form.
struct MetricNAlgebra {
  NAlgebra algebra;
  BilinearForm form;

  MetricNAlgebra() = default;
  MetricNAlgebra(NAlgebra a, BilinearForm b) : algebra(std::move(a)), form(std::move(b)) {
    if (algebra.dim() != form.dim()) throw DimensionMismatch("MetricNAlgebra: form dimension differs from algebra");
  }

  std::size_t arity() const { return algebra.arity(); }
  std::size_t dim() const { return algebra.dim(); }

  friend bool operator==(const MetricNAlgebra&, const MetricNAlgebra&) = default;
};

enum class ViolationKind { jacobi, metric, skew, not_ideal, not_homomorphism, not_isometry };

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::jacobi: return "jacobi";
    case ViolationKind::metric: return "metric";
    case ViolationKind::skew: return "skew";
    case ViolationKind::not_ideal: return "not_ideal";
    case ViolationKind::not_homomorphism: return "not_homomorphism";
    case ViolationKind::not_isometry: return "not_isometry";
  }
  return "unknown";
}

/// A failing instance: the basis tuples involved and the nonzero defect.
struct Witness {
  std::vector<IndexTuple> tuples;
  Vector mismatch;
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct ViolationReport {
  ViolationKind kind = ViolationKind::jacobi;
  std::vector<Witness> witnesses;

  bool ok() const { return witnesses.empty(); }
};

/// Alternating multilinear bracket of n arbitrary vectors.
inline Vector bracket(const NAlgebra& alg, std::span<const Vector> args) {
  const std::size_t n = alg.arity();
  const std::size_t d = alg.dim();
  if (args.size() != n) throw DimensionMismatch("bracket: expected " + std::to_string(n) + " arguments");
  for (const auto& a : args)
    if (a.size() != d) throw DimensionMismatch("bracket: argument has wrong length");
  Vector out(d);
  if (alg.is_abelian()) return out;

  std::vector<std::vector<std::size_t>> support(n);
  double terms = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k)
      if (!args[i][k].is_zero()) support[i].push_back(k);
    if (support[i].empty()) return out;
    terms *= static_cast<double>(support[i].size());
  }

  if (terms <= static_cast<double>(alg.table().size() * n * n)) {
    // Expand over the supports.
    std::vector<std::size_t> seq(n);
    std::function<void(std::size_t, const Rational&)> expand = [&](std::size_t slot, const Rational& coeff) {
      if (slot == n) {
        auto [sign, key] = IndexTuple::canonicalize(seq);
        if (sign == 0) return;
        if (const Vector* c = alg.structure(key)) axpy(out, sign > 0 ? coeff : -coeff, *c);
        return;
      }
      for (auto k : support[slot]) {
        seq[slot] = k;
        expand(slot + 1, coeff * args[slot][k]);
      }
    };
    expand(0, Rational(1));
    return out;
  }

  // Sum of minors: coefficient of key t is det(args[i][t_j]).
  Matrix m(n, n);
  for (const auto& [key, value] : alg.table()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = args[i][key[j]];
    const Rational det = determinant(m);
    if (!det.is_zero()) axpy(out, det, value);
  }
  return out;
}

inline Vector bracket(const NAlgebra& alg, std::initializer_list<Vector> args) {
  std::vector<Vector> v(args);
  return bracket(alg, v);
}

/// The nonzero left multiplications ad_X : y -> [e_X, y] over basis (n-1)-tuples X,
/// and a basis of their linear span.
struct AdjointMaps {
  std::map<IndexTuple, Matrix> maps;
  std::vector<Matrix> span_basis;
};

inline AdjointMaps adjoint_maps(const NAlgebra& alg) {
  const std::size_t n = alg.arity();
  const std::size_t d = alg.dim();
  AdjointMaps out;
  for (const auto& [key, value] : alg.table()) {
    for (std::size_t p = 0; p < n; ++p) {
      // [e_{key without p}, e_{key_p}] = (-1)^(n-1-p) [e_key]
      const bool negate = ((n - 1 - p) % 2) == 1;
      auto [it, inserted] = out.maps.try_emplace(key.without(p), Matrix(d, d));
      Matrix& m = it->second;
      const std::size_t col = key[p];
      for (std::size_t r = 0; r < d; ++r) {
        if (negate)
          m(r, col) -= value[r];
        else
          m(r, col) += value[r];
      }
    }
  }
  std::erase_if(out.maps, [](const auto& kv) { return kv.second.is_zero(); });

  RowReducer span(d * d);
  for (const auto& [x, m] : out.maps) {
    span.add(m.data());
    if (span.rank() == d * d) break;
  }
  for (const auto& row : span.rows()) {
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m(i, j) = row[i * d + j];
    out.span_basis.push_back(std::move(m));
  }
  return out;
}

namespace detail {

/// D(c_Y) - sum_i [y_1, ..., D y_i, ..., y_n] on every basis tuple Y, nonzero entries only.
inline std::map<IndexTuple, Vector> derivation_defect(const NAlgebra& alg, const Matrix& d_map) {
  const std::size_t n = alg.arity();
  const std::size_t d = alg.dim();
  std::map<IndexTuple, Vector> defect;
  for (const auto& [key, value] : alg.table()) {
    Vector lhs = d_map * value;
    if (!nlie::is_zero(lhs)) {
      auto [it, ins] = defect.try_emplace(key, Vector(d));
      for (std::size_t k = 0; k < d; ++k) it->second[k] += lhs[k];
    }
  }
  for (const auto& [key, value] : alg.table()) {
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t k = key[p];
      for (std::size_t j = 0; j < d; ++j) {
        const Rational& dkj = d_map(k, j);
        if (dkj.is_zero()) continue;
        std::vector<std::size_t> seq = key.values();
        seq[p] = j;
        auto [sign, y] = IndexTuple::canonicalize(std::move(seq));
        if (sign == 0) continue;
        auto [it, ins] = defect.try_emplace(y, Vector(d));
        axpy(it->second, sign > 0 ? -dkj : dkj, value);
      }
    }
  }
  std::erase_if(defect, [](const auto& kv) { return nlie::is_zero(kv.second); });
  return defect;
}

inline bool is_derivation(const NAlgebra& alg, const Matrix& d_map) {
  return derivation_defect(alg, d_map).empty();
}

inline Matrix skew_defect(const Matrix& d_map, const Matrix& gram) {
  return d_map.transpose() * gram + gram * d_map;
}

}  // namespace detail

/// n-Jacobi identity on all pairs of basis tuples. Every ad_X being a
/// derivation is linear in ad_X, so the span basis decides; the per-tuple
/// enumeration only runs to collect witnesses.
inline ViolationReport check_jacobi(const NAlgebra& alg, const AdjointMaps& ads) {
  ViolationReport report{ViolationKind::jacobi, {}};
  bool all_ok = true;
  for (const auto& m : ads.span_basis)
    if (!detail::is_derivation(alg, m)) {
      all_ok = false;
      break;
    }
  if (all_ok) return report;
  for (const auto& [x, m] : ads.maps)
    for (auto& [y, v] : detail::derivation_defect(alg, m)) report.witnesses.push_back({{x, y}, std::move(v)});
  return report;
}

inline ViolationReport check_jacobi(const NAlgebra& alg) { return check_jacobi(alg, adjoint_maps(alg)); }

/// <[X, y], z> + <y, [X, z]> = 0 for all basis tuples X and basis vectors y, z.
inline ViolationReport check_metric(const MetricNAlgebra& malg, const AdjointMaps& ads) {
  if (!malg.form.nondegenerate()) throw PreconditionFailed("check_metric: form is degenerate");
  ViolationReport report{ViolationKind::metric, {}};
  const Matrix& g = malg.form.gram();
  bool all_ok = true;
  for (const auto& m : ads.span_basis)
    if (!detail::skew_defect(m, g).is_zero()) {
      all_ok = false;
      break;
    }
  if (all_ok) return report;
  const std::size_t d = malg.dim();
  for (const auto& [x, m] : ads.maps) {
    const Matrix e = detail::skew_defect(m, g);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j)
        if (!e(i, j).is_zero()) report.witnesses.push_back({{x, IndexTuple({i}), IndexTuple({j})}, {e(i, j)}});
  }
  return report;
}

inline ViolationReport check_metric(const MetricNAlgebra& malg) {
  return check_metric(malg, adjoint_maps(malg.algebra));
}

/// [V, ..., V]
inline Subspace derived_ideal(const NAlgebra& alg) {
  RowReducer r(alg.dim());
  for (const auto& [key, value] : alg.table()) {
    r.add(value);
    if (r.rank() == alg.dim()) break;
  }
  return Subspace::from_reducer(r);
}

/// {z : [z, V, ..., V] = 0}
inline Subspace centre(const NAlgebra& alg, const AdjointMaps& ads) {
  RowReducer r(alg.dim());
  for (const auto& m : ads.span_basis)
    for (std::size_t i = 0; i < m.rows() && r.rank() < alg.dim(); ++i) r.add(m.row(i));
  return nullspace(r);
}

inline Subspace centre(const NAlgebra& alg) { return centre(alg, adjoint_maps(alg)); }

/// {z : [z, w, V, ..., V] = 0 for all w in s}
inline Subspace centraliser(const NAlgebra& alg, const Subspace& s) {
  const std::size_t d = alg.dim();
  const std::size_t n = alg.arity();
  if (s.ambient_dim() != d) throw DimensionMismatch("centraliser: dimension mismatch");
  if (s.is_full()) return centre(alg);
  RowReducer r(d);
  for (const auto& w : s.basis()) {
    // constraint[I](component, j) = sum_k w_k [e_j, e_k, e_I]_component
    std::map<IndexTuple, Matrix> constraint;
    for (const auto& [key, value] : alg.table()) {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          if (a == b) continue;
          const std::size_t j = key[a];
          const std::size_t k = key[b];
          if (w[k].is_zero()) continue;
          std::vector<std::size_t> seq{j, k};
          std::vector<std::size_t> rest;
          for (std::size_t c = 0; c < n; ++c)
            if (c != a && c != b) rest.push_back(key[c]);
          seq.insert(seq.end(), rest.begin(), rest.end());
          const int sign = IndexTuple::canonicalize(seq).first;
          auto [it, ins] = constraint.try_emplace(IndexTuple(rest), Matrix(d, d));
          const Rational f = sign > 0 ? w[k] : -w[k];
          for (std::size_t c = 0; c < d; ++c)
            if (!value[c].is_zero()) it->second(c, j).add_product(f, value[c]);
        }
    }
    for (const auto& [i, m] : constraint)
      for (std::size_t row = 0; row < d && r.rank() < d; ++row) r.add(m.row(row));
    if (r.rank() == d) break;
  }
  return nullspace(r);
}

/// Witnesses are (X, {k}) with mismatch ad_X(w_k) for the k-th echelon basis vector of s.
inline ViolationReport is_ideal(const NAlgebra& alg, const Subspace& s, const AdjointMaps& ads) {
  if (s.ambient_dim() != alg.dim()) throw DimensionMismatch("is_ideal: dimension mismatch");
  ViolationReport report{ViolationKind::not_ideal, {}};
  bool all_ok = true;
  for (const auto& m : ads.span_basis) {
    for (const auto& w : s.basis())
      if (!s.contains(m * w)) {
        all_ok = false;
        break;
      }
    if (!all_ok) break;
  }
  if (all_ok) return report;
  for (const auto& [x, m] : ads.maps)
    for (std::size_t k = 0; k < s.rank(); ++k) {
      Vector image = m * s.basis()[k];
      if (!s.contains(image)) report.witnesses.push_back({{x, IndexTuple({k})}, std::move(image)});
    }
  return report;
}

inline ViolationReport is_ideal(const NAlgebra& alg, const Subspace& s) { return is_ideal(alg, s, adjoint_maps(alg)); }

/// [s, ..., s] inside s.
inline bool is_subalgebra(const NAlgebra& alg, const Subspace& s) {
  if (s.ambient_dim() != alg.dim()) throw DimensionMismatch("is_subalgebra: dimension mismatch");
  bool ok = true;
  for_each_combination(s.rank(), alg.arity(), [&](const IndexTuple& t) {
    if (!ok) return;
    std::vector<Vector> args;
    for (auto i : t) args.push_back(s.basis()[i]);
    if (!s.contains(bracket(alg, args))) ok = false;
  });
  return ok;
}

/// Smallest ideal containing s.
inline Subspace ideal_closure(const NAlgebra& alg, const Subspace& s, const AdjointMaps& ads) {
  if (s.ambient_dim() != alg.dim()) throw DimensionMismatch("ideal_closure: dimension mismatch");
  RowReducer r(alg.dim());
  for (const auto& v : s.basis()) r.add(v);
  std::size_t before = 0;
  while (r.rank() != before && r.rank() < alg.dim()) {
    before = r.rank();
    const std::vector<Vector> current = r.rows();
    for (const auto& v : current)
      for (const auto& m : ads.span_basis) r.add(m * v);
  }
  return Subspace::from_reducer(r);
}

inline Subspace ideal_closure(const NAlgebra& alg, const Subspace& s) {
  return ideal_closure(alg, s, adjoint_maps(alg));
}

inline NAlgebra direct_sum(const NAlgebra& a, const NAlgebra& b) {
  if (a.arity() != b.arity()) throw DimensionMismatch("direct_sum: arity mismatch");
  const std::size_t d = a.dim() + b.dim();
  NAlgebra::Table table;
  for (const auto& [key, value] : a.table()) {
    Vector v(d);
    std::copy(value.begin(), value.end(), v.begin());
    table.emplace(key, std::move(v));
  }
  for (const auto& [key, value] : b.table()) {
    std::vector<std::size_t> shifted;
    for (auto i : key) shifted.push_back(i + a.dim());
    Vector v(d);
    std::copy(value.begin(), value.end(), v.begin() + static_cast<std::ptrdiff_t>(a.dim()));
    table.emplace(IndexTuple(std::move(shifted)), std::move(v));
  }
  return NAlgebra(a.arity(), d, std::move(table));
}

inline MetricNAlgebra direct_sum(const MetricNAlgebra& a, const MetricNAlgebra& b) {
  return MetricNAlgebra(direct_sum(a.algebra, b.algebra), direct_sum(a.form, b.form));
}

/// Bracket restricted to a subalgebra, expressed in the echelon basis of `s`.
inline NAlgebra restrict_algebra(const NAlgebra& alg, const Subspace& s) {
  NAlgebra::Table table;
  for_each_combination(s.rank(), alg.arity(), [&](const IndexTuple& t) {
    std::vector<Vector> args;
    for (auto i : t) args.push_back(s.basis()[i]);
    Vector b = bracket(alg, args);
    if (nlie::is_zero(b)) return;
    if (!s.contains(b)) throw PreconditionFailed("restrict_algebra: subspace is not closed under the bracket");
    table.emplace(t, s.coordinates(b));
  });
  return NAlgebra(alg.arity(), s.rank(), std::move(table));
}

/// [x_1, ..., x_{n-1}]_z := [x_1, ..., x_{n-1}, z]
inline NAlgebra reduce_by_element(const NAlgebra& alg, const Vector& z) {
  if (alg.arity() < 3) throw PreconditionFailed("reduce_by_element: arity must be at least 3");
  if (z.size() != alg.dim()) throw DimensionMismatch("reduce_by_element: element has wrong length");
  NAlgebra::Table table;
  for (const auto& [x, m] : adjoint_maps(alg).maps) {
    Vector v = m * z;
    if (!nlie::is_zero(v)) table.emplace(x, std::move(v));
  }
  return NAlgebra(alg.arity() - 1, alg.dim(), std::move(table));
}

inline MetricNAlgebra reduce_by_element(const MetricNAlgebra& malg, const Vector& z) {
  return MetricNAlgebra(reduce_by_element(malg.algebra, z), malg.form);
}

/// The structure [x_1..x_n]' = phi[phi^-1 x_1, ..., phi^-1 x_n], for which phi is an isomorphism.
inline NAlgebra transport(const NAlgebra& alg, const Matrix& phi) {
  if (!phi.square() || phi.rows() != alg.dim()) throw DimensionMismatch("transport: map has wrong shape");
  const Matrix psi = inverse(phi);
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < alg.dim(); ++j) cols.push_back(psi.column(j));
  NAlgebra::Table table;
  if (!alg.is_abelian()) {
    for_each_combination(alg.dim(), alg.arity(), [&](const IndexTuple& t) {
      std::vector<Vector> args;
      for (auto i : t) args.push_back(cols[i]);
      Vector b = bracket(alg, args);
      if (!nlie::is_zero(b)) table.emplace(t, phi * b);
    });
  }
  return NAlgebra(alg.arity(), alg.dim(), std::move(table));
}

inline MetricNAlgebra transport(const MetricNAlgebra& malg, const Matrix& phi) {
  const Matrix psi = inverse(phi);
  return MetricNAlgebra(transport(malg.algebra, phi), BilinearForm(psi.transpose() * malg.form.gram() * psi));
}

/// phi[e_t] = [phi e_t1, ..., phi e_tn] for every basis tuple t of `a`.
inline ViolationReport check_morphism(const Matrix& phi, const NAlgebra& a, const NAlgebra& b) {
  if (a.arity() != b.arity()) throw DimensionMismatch("check_morphism: arity mismatch");
  if (phi.rows() != b.dim() || phi.cols() != a.dim()) throw DimensionMismatch("check_morphism: map has wrong shape");
  ViolationReport report{ViolationKind::not_homomorphism, {}};
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < a.dim(); ++j) cols.push_back(phi.column(j));
  for_each_combination(a.dim(), a.arity(), [&](const IndexTuple& t) {
    Vector lhs(b.dim());
    if (const Vector* c = a.structure(t)) lhs = phi * *c;
    std::vector<Vector> args;
    for (auto i : t) args.push_back(cols[i]);
    Vector diff = lhs - bracket(b, args);
    if (!nlie::is_zero(diff)) report.witnesses.push_back({{t}, std::move(diff)});
  });
  return report;
}

/// phi^T gram_b phi = gram_a.
inline ViolationReport check_isometry(const Matrix& phi, const BilinearForm& a, const BilinearForm& b) {
  if (phi.rows() != b.dim() || phi.cols() != a.dim()) throw DimensionMismatch("check_isometry: map has wrong shape");
  ViolationReport report{ViolationKind::not_isometry, {}};
  const Matrix diff = phi.transpose() * b.gram() * phi - a.gram();
  for (std::size_t i = 0; i < diff.rows(); ++i)
    for (std::size_t j = i; j < diff.cols(); ++j)
      if (!diff(i, j).is_zero()) report.witnesses.push_back({{IndexTuple({i}), IndexTuple({j})}, {diff(i, j)}});
  return report;
}

struct QuotientResult {
  MetricNAlgebra algebra;
  /// Columns: the chosen representatives of I / I^perp in V.
  Matrix section;
  /// dim(I/I^perp) x dim V; on I it returns coordinates modulo I^perp.
  Matrix projection;
};

/// I / I^perp for a coisotropic ideal I, realised on the lexicographically
/// first echelon complement of I^perp inside I.
inline QuotientResult quotient_coisotropic(const MetricNAlgebra& malg, const Subspace& ideal) {
  const std::size_t d = malg.dim();
  if (ideal.ambient_dim() != d) throw DimensionMismatch("quotient_coisotropic: dimension mismatch");
  const AdjointMaps ads = adjoint_maps(malg.algebra);
  if (!is_ideal(malg.algebra, ideal, ads).ok()) throw PreconditionFailed("quotient_coisotropic: subspace is not an ideal");
  const Subspace perp = orthogonal_complement(ideal, malg.form);
  if (!ideal.contains(perp)) throw PreconditionFailed("quotient_coisotropic: ideal is not coisotropic");
  // Representatives modulo I^perp are well defined only if I^perp absorbs brackets.
  if (!is_ideal(malg.algebra, perp, ads).ok())
    throw PreconditionFailed("quotient_coisotropic: I^perp is not an ideal, induced bracket ill-defined");

  RowReducer acc(d);
  for (const auto& p : perp.basis()) acc.add(p);
  std::vector<Vector> reps;
  for (const auto& v : ideal.basis())
    if (acc.add(v)) reps.push_back(v);
  const std::size_t k = reps.size();

  // Basis of V adapted to reps, I^perp, then a complement of I.
  std::vector<Vector> adapted = reps;
  for (const auto& p : perp.basis()) adapted.push_back(p);
  RowReducer full(d);
  for (const auto& v : adapted) full.add(v);
  for (std::size_t i = 0; i < d && full.rank() < d; ++i)
    if (full.add(unit_vector(d, i))) adapted.push_back(unit_vector(d, i));
  const Matrix change = inverse(Matrix::from_columns(adapted, d));
  Matrix projection(k, d);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < d; ++j) projection(i, j) = change(i, j);

  NAlgebra::Table table;
  for_each_combination(k, malg.arity(), [&](const IndexTuple& t) {
    std::vector<Vector> args;
    for (auto i : t) args.push_back(reps[i]);
    Vector b = projection * bracket(malg.algebra, args);
    if (!nlie::is_zero(b)) table.emplace(t, std::move(b));
  });
  const Matrix section = Matrix::from_columns(reps, d);
  BilinearForm form(section.transpose() * malg.form.gram() * section);
  if (!form.nondegenerate()) throw PreconditionFailed("quotient_coisotropic: induced form is degenerate");
  return {MetricNAlgebra(NAlgebra(malg.arity(), k, std::move(table)), std::move(form)), section, projection};
}

}  // namespace nlie
