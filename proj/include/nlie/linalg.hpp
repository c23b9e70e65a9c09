#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nlie/matrix.hpp"

namespace nlie {

/// Incrementally maintained reduced row-echelon basis of a row space.
///
/// Every stored row has a leading 1 in its pivot column and zeros in the
/// pivot columns of all other rows, so `reduce` is a single pass.
class RowReducer {
 public:
  explicit RowReducer(std::size_t cols) : cols_(cols) {}

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return rows_.size(); }

  /// Reduces `v` against the stored rows in place; returns true if it becomes zero.
  bool reduce(Vector& v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const Rational c = v[pivots_[k]];
      if (!c.is_zero()) axpy(v, -c, rows_[k]);
    }
    return is_zero(v);
  }

  bool contains(Vector v) const { return reduce(v); }

  /// Adds `v` to the span; returns true if the rank grew.
  bool add(Vector v) {
    if (v.size() != cols_) throw DimensionMismatch("RowReducer::add: length mismatch");
    if (reduce(v)) return false;
    std::size_t p = 0;
    while (v[p].is_zero()) ++p;
    const Rational inv = Rational(1) / v[p];
    for (auto& x : v) x *= inv;
    for (auto& r : rows_) {
      const Rational c = r[p];
      if (!c.is_zero()) axpy(r, -c, v);
    }
    // Keep rows sorted by pivot column.
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), p);
    return true;
  }

  const std::vector<Vector>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

 private:
  std::size_t cols_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

class Subspace;

/// Echelon basis of a row space with sparse rows, for large homogeneous
/// systems whose equations touch few unknowns. Rows are kept in echelon
/// (not reduced) form until `nullspace()` back-substitutes.
class SparseRowReducer {
 public:
  using Entry = std::pair<std::size_t, Rational>;
  using Row = std::vector<Entry>;  // sorted by column, no zeros

  explicit SparseRowReducer(std::size_t cols) : cols_(cols), pivot_row_(cols, npos) {}

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return rows_.size(); }

  /// Adds a sparse row (entries in any order, duplicates summed); returns true if rank grew.
  bool add(Row row) {
    std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    Row clean;
    for (auto& e : row) {
      if (e.first >= cols_) throw DimensionMismatch("SparseRowReducer::add: column out of range");
      if (!clean.empty() && clean.back().first == e.first)
        clean.back().second += e.second;
      else
        clean.push_back(std::move(e));
    }
    std::erase_if(clean, [](const Entry& e) { return e.second.is_zero(); });
    while (!clean.empty()) {
      const std::size_t lead = clean.front().first;
      const std::size_t p = pivot_row_[lead];
      if (p == npos) {
        const Rational inv = Rational(1) / clean.front().second;
        for (auto& e : clean) e.second *= inv;
        pivot_row_[lead] = rows_.size();
        rows_.push_back(std::move(clean));
        return true;
      }
      clean = combine(clean, -clean.front().second, rows_[p]);
    }
    return false;
  }

  /// Basis of {x : row . x = 0 for all rows}.
  Subspace nullspace() const;

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// a + f * b
  static Row combine(const Row& a, const Rational& f, const Row& b) {
    Row out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        out.emplace_back(b[j].first, f * b[j].second);
        ++j;
      } else {
        Rational v = a[i].second;
        v.add_product(f, b[j].second);
        if (!v.is_zero()) out.emplace_back(a[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::size_t cols_;
  std::vector<Row> rows_;
  std::vector<std::size_t> pivot_row_;
};

/// A linear subspace of Q^n stored by its canonical reduced echelon basis.
/// Two equal subspaces have identical representations.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(std::size_t ambient) { return Subspace(ambient, {}, {}); }
  static Subspace full(std::size_t ambient) {
    std::vector<Vector> rows;
    std::vector<std::size_t> piv;
    for (std::size_t i = 0; i < ambient; ++i) {
      rows.push_back(unit_vector(ambient, i));
      piv.push_back(i);
    }
    return Subspace(ambient, std::move(rows), std::move(piv));
  }

  static Subspace span(std::span<const Vector> vectors, std::size_t ambient) {
    RowReducer r(ambient);
    for (const auto& v : vectors) {
      if (v.size() != ambient) throw DimensionMismatch("Subspace::span: vector length mismatch");
      r.add(v);
    }
    return from_reducer(r);
  }

  static Subspace from_reducer(const RowReducer& r) { return Subspace(r.cols(), r.rows(), r.pivots()); }

  /// Span of the given unit vectors (0-based indices).
  static Subspace coordinate(std::size_t ambient, std::span<const std::size_t> indices) {
    std::vector<Vector> vs;
    for (auto i : indices) vs.push_back(unit_vector(ambient, i));
    return span(vs, ambient);
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t rank() const { return basis_.size(); }
  bool is_zero() const { return basis_.empty(); }
  bool is_full() const { return basis_.size() == ambient_; }

  const std::vector<Vector>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  Matrix basis_matrix() const { return Matrix::from_rows(basis_, ambient_); }

  bool contains(const Vector& v) const {
    if (v.size() != ambient_) throw DimensionMismatch("Subspace::contains: length mismatch");
    Vector w = v;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      const Rational c = w[pivots_[k]];
      if (!c.is_zero()) axpy(w, -c, basis_[k]);
    }
    return nlie::is_zero(w);
  }

  bool contains(const Subspace& other) const {
    if (other.ambient_ != ambient_) throw DimensionMismatch("Subspace::contains: ambient mismatch");
    for (const auto& v : other.basis_)
      if (!contains(v)) return false;
    return true;
  }

  /// Coefficients of `v` (assumed in the subspace) in the echelon basis.
  Vector coordinates(const Vector& v) const {
    Vector c(basis_.size());
    for (std::size_t k = 0; k < basis_.size(); ++k) c[k] = v[pivots_[k]];
    return c;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  Subspace(std::size_t ambient, std::vector<Vector> basis, std::vector<std::size_t> pivots)
      : ambient_(ambient), basis_(std::move(basis)), pivots_(std::move(pivots)) {}

  std::size_t ambient_ = 0;
  std::vector<Vector> basis_;
  std::vector<std::size_t> pivots_;
};

inline Subspace SparseRowReducer::nullspace() const {
  // Back-substitute from the highest pivot so every row is fully reduced.
  std::vector<Row> reduced(rows_.size());
  std::vector<std::size_t> order;
  for (std::size_t c = 0; c < cols_; ++c)
    if (pivot_row_[c] != npos) order.push_back(c);
  std::vector<bool> is_pivot(cols_, false);
  for (auto c : order) is_pivot[c] = true;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Row row = rows_[pivot_row_[*it]];
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = 1; k < row.size(); ++k) {
        const std::size_t c = row[k].first;
        if (is_pivot[c]) {
          row = combine(row, -row[k].second, reduced[pivot_row_[c]]);
          changed = true;
          break;
        }
      }
    }
    reduced[pivot_row_[*it]] = std::move(row);
  }
  std::vector<Vector> kernel;
  for (std::size_t f = 0; f < cols_; ++f) {
    if (is_pivot[f]) continue;
    Vector v(cols_);
    v[f] = 1;
    kernel.push_back(std::move(v));
  }
  std::vector<std::size_t> free_index(cols_, npos);
  {
    std::size_t k = 0;
    for (std::size_t f = 0; f < cols_; ++f)
      if (!is_pivot[f]) free_index[f] = k++;
  }
  for (auto c : order) {
    const Row& row = reduced[pivot_row_[c]];
    for (std::size_t k = 1; k < row.size(); ++k) kernel[free_index[row[k].first]][c] = -row[k].second;
  }
  return Subspace::span(kernel, cols_);
}

struct RrefResult {
  Matrix reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
  Subspace nullspace;
};

/// Canonical reduced row-echelon form, rank, and right nullspace of `m`.
inline RrefResult rref(const Matrix& m) {
  RowReducer r(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) r.add(m.row(i));
  RrefResult out;
  out.rank = r.rank();
  out.pivots = r.pivots();
  out.reduced = Matrix(m.rows(), m.cols());
  for (std::size_t i = 0; i < r.rank(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.reduced(i, j) = r.rows()[i][j];

  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : out.pivots) is_pivot[p] = true;
  std::vector<Vector> kernel;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols());
    v[f] = 1;
    for (std::size_t k = 0; k < out.rank; ++k) v[out.pivots[k]] = -r.rows()[k][f];
    kernel.push_back(std::move(v));
  }
  out.nullspace = Subspace::span(kernel, m.cols());
  return out;
}

inline Subspace nullspace(const Matrix& m) { return rref(m).nullspace; }

/// Right nullspace of the stacked rows collected in a reducer.
inline Subspace nullspace(const RowReducer& r) {
  std::vector<bool> is_pivot(r.cols(), false);
  for (auto p : r.pivots()) is_pivot[p] = true;
  std::vector<Vector> kernel;
  for (std::size_t f = 0; f < r.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(r.cols());
    v[f] = 1;
    for (std::size_t k = 0; k < r.rank(); ++k) v[r.pivots()[k]] = -r.rows()[k][f];
    kernel.push_back(std::move(v));
  }
  return Subspace::span(kernel, r.cols());
}

inline Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("subspace_sum: ambient dimension mismatch");
  RowReducer r(a.ambient_dim());
  for (const auto& v : a.basis()) r.add(v);
  for (const auto& v : b.basis()) r.add(v);
  return Subspace::from_reducer(r);
}

inline Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw DimensionMismatch("subspace_intersect: ambient dimension mismatch");
  const std::size_t n = a.ambient_dim();
  const std::size_t ra = a.rank();
  const std::size_t rb = b.rank();
  // Solve c.A = d.B, i.e. the kernel of [A^T | -B^T].
  Matrix m(n, ra + rb);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < ra; ++k) m(i, k) = a.basis()[k][i];
    for (std::size_t k = 0; k < rb; ++k) m(i, ra + k) = -b.basis()[k][i];
  }
  const Subspace ker = nullspace(m);
  std::vector<Vector> vs;
  for (const auto& c : ker.basis()) {
    Vector v(n);
    for (std::size_t k = 0; k < ra; ++k) axpy(v, c[k], a.basis()[k]);
    vs.push_back(std::move(v));
  }
  return Subspace::span(vs, n);
}

/// Image of a subspace under a linear map given as a matrix acting on columns.
inline Subspace image(const Matrix& map, const Subspace& s) {
  if (map.cols() != s.ambient_dim()) throw DimensionMismatch("image: shape mismatch");
  std::vector<Vector> vs;
  for (const auto& v : s.basis()) vs.push_back(map * v);
  return Subspace::span(vs, map.rows());
}

inline Subspace column_space(const Matrix& m) {
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.column(j));
  return Subspace::span(cols, m.rows());
}

inline std::optional<Matrix> try_inverse(const Matrix& m) {
  if (!m.square()) throw DimensionMismatch("inverse: matrix is not square");
  const std::size_t n = m.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  const RrefResult r = rref(aug);
  for (std::size_t i = 0; i < n; ++i)
    if (i >= r.pivots.size() || r.pivots[i] != i) return std::nullopt;
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = r.reduced(i, n + j);
  return inv;
}

inline Matrix inverse(const Matrix& m) {
  auto inv = try_inverse(m);
  if (!inv) throw PreconditionFailed("inverse: matrix is singular");
  return *inv;
}

inline std::size_t matrix_rank(const Matrix& m) { return rref(m).rank; }

inline Rational determinant(Matrix a) {
  if (!a.square()) throw DimensionMismatch("determinant: matrix is not square");
  const std::size_t n = a.rows();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k).is_zero()) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      det = -det;
    }
    det *= a(k, k);
    const Rational inv = Rational(1) / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k).is_zero()) continue;
      const Rational f = a(i, k) * inv;
      for (std::size_t j = k; j < n; ++j) a(i, j).sub_product(f, a(k, j));
    }
  }
  return det;
}

/// Inertia of a symmetric form: positive, negative and null directions.
struct Signature {
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t r = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
  friend auto operator<=>(const Signature&, const Signature&) = default;
};

/// Signature by symmetric congruence elimination. A zero pivot with a nonzero
/// off-diagonal partner is repaired by adding the partner row/column, which
/// extracts a non-null vector from the hyperbolic pair.
inline Signature congruence_signature(Matrix a) {
  if (!a.square()) throw DimensionMismatch("signature: gram is not square");
  const std::size_t n = a.rows();
  Signature s;
  auto swap_rc = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < n; ++k) std::swap(a(i, k), a(j, k));
    for (std::size_t k = 0; k < n; ++k) std::swap(a(k, i), a(k, j));
  };
  auto add_rc = [&](std::size_t dst, std::size_t src, const Rational& f) {
    for (std::size_t k = 0; k < n; ++k) a(dst, k).add_product(f, a(src, k));
    for (std::size_t k = 0; k < n; ++k) a(k, dst).add_product(f, a(k, src));
  };
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k).is_zero()) {
      std::size_t j = k + 1;
      while (j < n && a(j, j).is_zero()) ++j;
      if (j < n) {
        swap_rc(k, j);
      } else {
        j = k + 1;
        while (j < n && a(k, j).is_zero()) ++j;
        if (j == n) {
          ++s.r;
          continue;
        }
        add_rc(k, j, 1);  // new a(k,k) = 2 a(k,j) since a(j,j) = 0
      }
    }
    const Rational pivot = a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k).is_zero()) continue;
      add_rc(i, k, -(a(i, k) / pivot));
    }
    if (pivot.sign() > 0)
      ++s.p;
    else
      ++s.q;
  }
  return s;
}

/// Symmetric bilinear form on Q^n given by its Gram matrix.
class BilinearForm {
 public:
  BilinearForm() : signature_{} {}

  explicit BilinearForm(Matrix gram) : gram_(std::move(gram)) {
    if (!gram_.is_symmetric()) throw PreconditionFailed("BilinearForm: gram matrix is not symmetric");
    signature_ = congruence_signature(gram_);
  }

  static BilinearForm identity(std::size_t n) { return BilinearForm(Matrix::identity(n)); }
  static BilinearForm diagonal(std::span<const Rational> d) { return BilinearForm(Matrix::diagonal(d)); }

  std::size_t dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }
  const Signature& signature() const { return signature_; }
  bool nondegenerate() const { return signature_.r == 0; }
  bool positive_definite() const { return signature_.p == dim(); }

  Rational operator()(std::span<const Rational> x, std::span<const Rational> y) const {
    if (x.size() != dim() || y.size() != dim()) throw DimensionMismatch("BilinearForm: vector length mismatch");
    Rational s;
    for (std::size_t i = 0; i < dim(); ++i) {
      if (x[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim(); ++j)
        if (!gram_(i, j).is_zero() && !y[j].is_zero()) s += x[i] * gram_(i, j) * y[j];
    }
    return s;
  }

  friend bool operator==(const BilinearForm& a, const BilinearForm& b) { return a.gram_ == b.gram_; }

 private:
  Matrix gram_;
  Signature signature_;
};

inline Signature signature(const BilinearForm& b) { return b.signature(); }

inline BilinearForm direct_sum(const BilinearForm& a, const BilinearForm& b) {
  return BilinearForm(block_diagonal(a.gram(), b.gram()));
}

/// {v : <v, w> = 0 for all w in s}.
inline Subspace orthogonal_complement(const Subspace& s, const BilinearForm& b) {
  if (s.ambient_dim() != b.dim()) throw DimensionMismatch("orthogonal_complement: dimension mismatch");
  const Matrix constraints = s.basis_matrix() * b.gram();
  if (constraints.rows() == 0) return Subspace::full(b.dim());
  return nullspace(constraints);
}

/// Gram matrix of `b` on the echelon basis of `s`.
inline BilinearForm restrict_form(const BilinearForm& b, const Subspace& s) {
  if (s.ambient_dim() != b.dim()) throw DimensionMismatch("restrict_form: dimension mismatch");
  const Matrix basis = s.basis_matrix();
  return BilinearForm(basis * b.gram() * basis.transpose());
}

}  // namespace nlie
