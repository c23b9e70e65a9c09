#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlie/algebra.hpp"

namespace nlie {

/// Signs attached to the basis vectors of a simple Lie n-algebra, length n+1.
class SignVector {
 public:
  explicit SignVector(std::vector<int> signs) : signs_(std::move(signs)) {
    for (int s : signs_)
      if (s != 1 && s != -1) throw PreconditionFailed("SignVector: entries must be +1 or -1");
  }

  static SignVector all_plus(std::size_t length) { return SignVector(std::vector<int>(length, 1)); }

  /// "+-++" style strings.
  static SignVector parse(std::string_view text) {
    std::vector<int> s;
    for (char c : text) {
      if (c == '+')
        s.push_back(1);
      else if (c == '-')
        s.push_back(-1);
      else
        throw ParseError("sign string may only contain '+' and '-', got '" + std::string(text) + "'");
    }
    return SignVector(std::move(s));
  }

  std::size_t size() const { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }
  std::size_t count(int sign) const { return static_cast<std::size_t>(std::count(signs_.begin(), signs_.end(), sign)); }

  std::string str() const {
    std::string s;
    for (int x : signs_) s += x > 0 ? '+' : '-';
    return s;
  }

 private:
  std::vector<int> signs_;
};

/// Raised when an assembled structure fails its own identities; carries the report.
class InvalidConstruction : public PreconditionFailed {
 public:
  InvalidConstruction(const std::string& what, ViolationReport report)
      : PreconditionFailed(what), report_(std::move(report)) {}
  const ViolationReport& report() const { return report_; }

 private:
  ViolationReport report_;
};

/// The simple Lie n-algebra on n+1 basis vectors,
/// [e_1, ..., ^e_i, ..., e_{n+1}] = (-1)^i eps_i e_i (1-based i),
/// with invariant metric scale * diag(eps).
inline MetricNAlgebra simple(std::size_t n, const SignVector& signs, const Rational& scale = 1) {
  if (n < 2) throw PreconditionFailed("simple: arity must be at least 2");
  if (signs.size() != n + 1) throw PreconditionFailed("simple: expected " + std::to_string(n + 1) + " signs");
  if (scale.sign() <= 0) throw PreconditionFailed("simple: scale must be positive");
  const std::size_t d = n + 1;
  NAlgebra::Table table;
  Vector diag(d);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<std::size_t> key;
    for (std::size_t j = 0; j < d; ++j)
      if (j != i) key.push_back(j);
    Vector value(d);
    // 1-based position i+1: (-1)^(i+1)
    value[i] = ((i % 2 == 0) ? -1 : 1) * signs[i];
    table.emplace(IndexTuple(std::move(key)), std::move(value));
    diag[i] = scale * Rational(signs[i]);
  }
  return MetricNAlgebra(NAlgebra(n, d, std::move(table)), BilinearForm::diagonal(diag));
}

inline MetricNAlgebra abelian(std::size_t arity, const BilinearForm& form) {
  return MetricNAlgebra(NAlgebra(arity, form.dim()), form);
}

/// so(3) with [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2 and the identity metric.
inline MetricNAlgebra so3() {
  NAlgebra::Table t;
  t.emplace(IndexTuple({0, 1}), Vector{0, 0, 1});
  t.emplace(IndexTuple({1, 2}), Vector{1, 0, 0});
  t.emplace(IndexTuple({0, 2}), Vector{0, -1, 0});
  return MetricNAlgebra(NAlgebra(2, 3, std::move(t)), BilinearForm::identity(3));
}

/// Euclidean W with an (n-1)-bracket and an optional n-bracket on the same space.
struct DoubleExtensionInput {
  MetricNAlgebra w_metric;
  std::optional<NAlgebra> w_nbracket;
};

/// R u + R v + W (basis order u, v, W) with
///   [u, x_1..x_{n-1}] = [x_1..x_{n-1}],
///   [x_1..x_n] = (-1)^n <[x_1..x_{n-1}], x_n> v + [x_1..x_n]_W,
/// <u,v> = 1, u and v null and orthogonal to W.
inline MetricNAlgebra double_extension(const DoubleExtensionInput& input) {
  const MetricNAlgebra& w = input.w_metric;
  const std::size_t n = w.arity() + 1;
  const std::size_t dw = w.dim();
  const std::size_t d = dw + 2;
  if (!w.form.positive_definite()) throw PreconditionFailed("double_extension: W must be euclidean");
  if (input.w_nbracket) {
    if (input.w_nbracket->arity() != n) throw DimensionMismatch("double_extension: n-bracket on W has wrong arity");
    if (input.w_nbracket->dim() != dw) throw DimensionMismatch("double_extension: n-bracket on W has wrong dimension");
  }
  {
    const AdjointMaps ads = adjoint_maps(w.algebra);
    auto j = check_jacobi(w.algebra, ads);
    if (!j.ok()) throw InvalidConstruction("double_extension: (n-1)-bracket on W fails the Jacobi identity", j);
    auto m = check_metric(w, ads);
    if (!m.ok()) throw InvalidConstruction("double_extension: (n-1)-bracket on W is not metric", m);
  }
  if (input.w_nbracket) {
    auto j = check_jacobi(*input.w_nbracket);
    if (!j.ok()) throw InvalidConstruction("double_extension: n-bracket on W fails the Jacobi identity", j);
  }

  auto shift = [&](const Vector& wv) {
    Vector out(d);
    for (std::size_t k = 0; k < dw; ++k) out[k + 2] = wv[k];
    return out;
  };

  NAlgebra::Table table;
  for (const auto& [key, value] : w.algebra.table()) {
    std::vector<std::size_t> idx{0};
    for (auto i : key) idx.push_back(i + 2);
    table.emplace(IndexTuple(std::move(idx)), shift(value));
  }
  const Matrix& g = w.form.gram();
  for_each_combination(dw, n, [&](const IndexTuple& y) {
    Vector value(d);
    if (const Vector* c = w.algebra.structure(y.without(n - 1))) {
      Rational pairing;
      for (std::size_t k = 0; k < dw; ++k)
        if (!(*c)[k].is_zero()) pairing.add_product((*c)[k], g(k, y.back()));
      value[1] = (n % 2 == 0) ? pairing : -pairing;
    }
    if (input.w_nbracket)
      if (const Vector* c = input.w_nbracket->structure(y))
        for (std::size_t k = 0; k < dw; ++k) value[k + 2] = (*c)[k];
    if (nlie::is_zero(value)) return;
    std::vector<std::size_t> idx;
    for (auto i : y) idx.push_back(i + 2);
    table.emplace(IndexTuple(std::move(idx)), std::move(value));
  });

  Matrix gram(d, d);
  gram(0, 1) = 1;
  gram(1, 0) = 1;
  for (std::size_t i = 0; i < dw; ++i)
    for (std::size_t j = 0; j < dw; ++j) gram(i + 2, j + 2) = g(i, j);

  MetricNAlgebra out(NAlgebra(n, d, std::move(table)), BilinearForm(std::move(gram)));
  const AdjointMaps ads = adjoint_maps(out.algebra);
  auto j = check_jacobi(out.algebra, ads);
  if (!j.ok())
    throw InvalidConstruction("double_extension: n-bracket on W is not invariant under the (n-1)-structure", j);
  auto m = check_metric(out, ads);
  if (!m.ok()) throw InvalidConstruction("double_extension: assembled algebra is not metric", m);
  return out;
}

/// Indecomposable lorentzian family: double extension of m orthogonal copies of
/// the euclidean simple Lie (n-1)-algebra. dim = m n + 2.
inline MetricNAlgebra theorem_family(std::size_t n, std::size_t copies) {
  if (n < 3) throw PreconditionFailed("theorem_family: arity must be at least 3");
  if (copies < 1) throw PreconditionFailed("theorem_family: need at least one copy");
  const MetricNAlgebra block = simple(n - 1, SignVector::all_plus(n));
  MetricNAlgebra w = block;
  for (std::size_t i = 1; i < copies; ++i) w = direct_sum(w, block);
  return double_extension({w, std::nullopt});
}

/// Endomorphism of a euclidean space that is skew for its inner product.
class SkewEndomorphism {
 public:
  SkewEndomorphism(Matrix a, const BilinearForm& w_form) : a_(std::move(a)) {
    if (!a_.square() || a_.rows() != w_form.dim()) throw DimensionMismatch("SkewEndomorphism: shape mismatch");
    const Matrix g = w_form.gram();
    if (!(a_.transpose() * g + g * a_).is_zero())
      throw PreconditionFailed("SkewEndomorphism: matrix is not skew with respect to the form");
    invertible_ = matrix_rank(a_) == a_.rows();
  }

  const Matrix& matrix() const { return a_; }
  bool invertible() const { return invertible_; }

 private:
  Matrix a_;
  bool invertible_ = false;
};

/// Block diagonal of 2x2 rotation generators [[0,-a],[a,0]].
inline Matrix rotation_blocks(std::span<const Rational> a) {
  Matrix m(2 * a.size(), 2 * a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    m(2 * i, 2 * i + 1) = -a[i];
    m(2 * i + 1, 2 * i) = a[i];
  }
  return m;
}

/// Lorentzian Lie algebra R u + R v + W with [u,x] = A x and [x,y] = <A x, y> v.
inline MetricNAlgebra medina_lorentzian(const BilinearForm& w_form, const SkewEndomorphism& a) {
  if (!w_form.positive_definite()) throw PreconditionFailed("medina_lorentzian: W must be euclidean");
  if (a.matrix().rows() != w_form.dim()) throw DimensionMismatch("medina_lorentzian: endomorphism has wrong size");
  if (!a.invertible()) throw PreconditionFailed("medina_lorentzian: endomorphism is singular");
  const std::size_t dw = w_form.dim();
  const std::size_t d = dw + 2;
  const Matrix& am = a.matrix();
  const Matrix pairing = am.transpose() * w_form.gram();  // (i,j) = <A e_i, e_j>
  NAlgebra::Table table;
  for (std::size_t j = 0; j < dw; ++j) {
    Vector value(d);
    for (std::size_t k = 0; k < dw; ++k) value[k + 2] = am(k, j);
    table.emplace(IndexTuple({0, j + 2}), std::move(value));
  }
  for (std::size_t i = 0; i < dw; ++i)
    for (std::size_t j = i + 1; j < dw; ++j) {
      Vector value(d);
      value[1] = pairing(i, j);
      table.emplace(IndexTuple({i + 2, j + 2}), std::move(value));
    }
  Matrix gram(d, d);
  gram(0, 1) = 1;
  gram(1, 0) = 1;
  for (std::size_t i = 0; i < dw; ++i)
    for (std::size_t j = 0; j < dw; ++j) gram(i + 2, j + 2) = w_form.gram()(i, j);
  MetricNAlgebra out(NAlgebra(2, d, std::move(table)), BilinearForm(std::move(gram)));
  const AdjointMaps ads = adjoint_maps(out.algebra);
  auto j = check_jacobi(out.algebra, ads);
  if (!j.ok()) throw InvalidConstruction("medina_lorentzian: assembled algebra fails the Jacobi identity", j);
  auto m = check_metric(out, ads);
  if (!m.ok()) throw InvalidConstruction("medina_lorentzian: assembled algebra is not metric", m);
  return out;
}

/// s + s* (basis: s-basis, then its dual basis) with
/// [x_1..x_{n-1}, alpha] = beta, beta(x) = -alpha([x_1..x_{n-1}, x]),
/// the s-metric on s, the dual pairing between s and s*, and zero on s*.
inline MetricNAlgebra dual_pair(const MetricNAlgebra& s) {
  const std::size_t n = s.arity();
  const std::size_t m = s.dim();
  if (m != n + 1) throw PreconditionFailed("dual_pair: input must have dimension arity + 1");
  const AdjointMaps ads = adjoint_maps(s.algebra);
  if (!check_jacobi(s.algebra, ads).ok()) throw PreconditionFailed("dual_pair: input fails the Jacobi identity");
  if (!s.form.nondegenerate() || !check_metric(s, ads).ok()) throw PreconditionFailed("dual_pair: input is not metric");
  const std::size_t d = 2 * m;
  NAlgebra::Table table;
  for (const auto& [key, value] : s.algebra.table()) {
    Vector v(d);
    std::copy(value.begin(), value.end(), v.begin());
    table.emplace(key, std::move(v));
  }
  for (const auto& [x, ad] : ads.maps)
    for (std::size_t j = 0; j < m; ++j) {
      Vector beta(d);
      for (std::size_t k = 0; k < m; ++k) beta[m + k] = -ad(j, k);
      if (nlie::is_zero(beta)) continue;
      std::vector<std::size_t> idx = x.values();
      idx.push_back(m + j);
      table.emplace(IndexTuple(std::move(idx)), std::move(beta));
    }
  Matrix gram(d, d);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) gram(i, j) = s.form.gram()(i, j);
    gram(i, m + i) = 1;
    gram(m + i, i) = 1;
  }
  return MetricNAlgebra(NAlgebra(n, d, std::move(table)), BilinearForm(std::move(gram)));
}

struct TwistResult {
  Matrix phi;
  /// Multiple c with [y_1..y_{n-1}] = [c x, y_1..y_{n-1}]_W on the block.
  Rational calibration;
  Subspace image;
  ViolationReport isometry;
  ViolationReport ideal;
  bool image_nondegenerate = false;
  Rational uu;                 // <phi(u), phi(u)>
  bool u_perp_image = false;   // <phi(u), phi(y)> = 0 on the block

  bool ok() const { return isometry.ok() && ideal.ok() && image_nondegenerate && uu.is_zero() && u_perp_image; }
};

/// The isometry v -> v, u -> u - x - |x|^2/2 v, y -> y + <y,x> v (y in W),
/// which moves an s^(n) summand of the W n-bracket into a nondegenerate ideal.
/// `v_alg` must use the double-extension basis order (u, v, W).
inline TwistResult build_twist(const MetricNAlgebra& v_alg, const Subspace& s_block, const Vector& x) {
  const std::size_t n = v_alg.arity();
  const std::size_t d = v_alg.dim();
  if (d < 2) throw PreconditionFailed("build_twist: algebra is not a double extension");
  if (s_block.ambient_dim() != d || x.size() != d) throw DimensionMismatch("build_twist: dimension mismatch");
  const Matrix& g = v_alg.form.gram();
  if (g(0, 1) != 1 || !g(0, 0).is_zero() || !g(1, 1).is_zero())
    throw PreconditionFailed("build_twist: basis vectors 1 and 2 are not complementary null directions");
  for (std::size_t k = 2; k < d; ++k)
    if (!g(0, k).is_zero() || !g(1, k).is_zero())
      throw PreconditionFailed("build_twist: u, v are not orthogonal to W");
  for (const auto& y : s_block.basis())
    if (!y[0].is_zero() || !y[1].is_zero()) throw PreconditionFailed("build_twist: block is not inside W");
  if (!s_block.contains(x)) throw PreconditionFailed("build_twist: x does not lie in the block");

  const Vector u = unit_vector(d, 0);
  auto w_part = [](Vector vec) {
    vec[0] = 0;
    vec[1] = 0;
    return vec;
  };
  // [y_1..y_{n-1}] := [u, y_1..y_{n-1}]
  auto induced = [&](std::vector<Vector> ys) {
    ys.insert(ys.begin(), u);
    return bracket(v_alg.algebra, ys);
  };
  const auto& block = s_block.basis();

  bool central = true;
  for_each_combination(block.size(), n - 2, [&](const IndexTuple& t) {
    std::vector<Vector> ys{x};
    for (auto i : t) ys.push_back(block[i]);
    if (!nlie::is_zero(induced(ys))) central = false;
  });
  if (!central) throw PreconditionFailed("build_twist: x is not central for the induced (n-1)-structure");

  auto sides = [&](const IndexTuple& t) {
    std::vector<Vector> ys;
    for (auto i : t) ys.push_back(block[i]);
    std::vector<Vector> with_x{x};
    with_x.insert(with_x.end(), ys.begin(), ys.end());
    return std::pair{induced(std::move(ys)), w_part(bracket(v_alg.algebra, with_x))};
  };
  std::optional<Rational> c;
  bool consistent = true;
  for_each_combination(block.size(), n - 1, [&](const IndexTuple& t) {
    if (c || !consistent) return;
    auto [lhs, rhs] = sides(t);
    if (nlie::is_zero(lhs)) return;
    std::size_t k = 0;
    while (k < d && rhs[k].is_zero()) ++k;
    if (k == d)
      consistent = false;
    else
      c = lhs[k] / rhs[k];
  });
  const Rational scale = c.value_or(Rational(0));
  if (consistent)
    for_each_combination(block.size(), n - 1, [&](const IndexTuple& t) {
      if (!consistent) return;
      auto [lhs, rhs] = sides(t);
      if (lhs != scale * rhs) consistent = false;
    });
  if (!consistent) throw PreconditionFailed("build_twist: calibration fails for every multiple of x");

  const Vector xs = scale * x;
  const Rational norm = v_alg.form(xs, xs);
  Matrix phi = Matrix::identity(d);
  // column 0: u - x - |x|^2/2 v
  for (std::size_t k = 2; k < d; ++k) phi(k, 0) = -xs[k];
  phi(1, 0) = -norm / Rational(2);
  // columns of W: e_w + <e_w, x> v
  for (std::size_t w = 2; w < d; ++w) {
    Rational p;
    for (std::size_t k = 2; k < d; ++k)
      if (!xs[k].is_zero()) p.add_product(g(w, k), xs[k]);
    phi(1, w) = p;
  }

  TwistResult r;
  r.phi = phi;
  r.calibration = scale;
  r.isometry = check_isometry(phi, v_alg.form, v_alg.form);
  r.image = image(phi, s_block);
  r.ideal = is_ideal(v_alg.algebra, r.image);
  r.image_nondegenerate = restrict_form(v_alg.form, r.image).nondegenerate();
  const Vector phi_u = phi.column(0);
  r.uu = v_alg.form(phi_u, phi_u);
  r.u_perp_image = true;
  for (const auto& y : r.image.basis())
    if (!v_alg.form(phi_u, y).is_zero()) r.u_perp_image = false;
  return r;
}

}  // namespace nlie
