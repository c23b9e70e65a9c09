#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nlie/matrix.hpp"

namespace nlie {

/// Univariate polynomial over Q, coefficients from degree 0 upwards with no
/// trailing zeros (the zero polynomial is empty).
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(const Rational& a) { return Polynomial({a}); }
  /// t - root
  static Polynomial linear(const Rational& root) { return Polynomial({-root, Rational(1)}); }

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  const Rational& leading() const { return c_.back(); }

  Polynomial monic() const {
    if (is_zero()) return *this;
    Polynomial p = *this;
    const Rational inv = Rational(1) / leading();
    for (auto& x : p.c_) x *= inv;
    return p;
  }

  Polynomial derivative() const {
    std::vector<Rational> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(Rational(static_cast<long>(i)) * c_[i]);
    return Polynomial(std::move(d));
  }

  Rational operator()(const Rational& x) const {
    Rational v;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      v *= x;
      v += *it;
    }
    return v;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j].add_product(a.c_[i], b.c_[j]);
    return Polynomial(std::move(c));
  }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  /// Quotient and remainder; `b` must be nonzero.
  friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw std::domain_error("Polynomial: division by zero");
    std::vector<Rational> r = a.c_;
    if (a.degree() < b.degree()) return {Polynomial(), a};
    std::vector<Rational> q(a.c_.size() - b.c_.size() + 1);
    const Rational inv = Rational(1) / b.leading();
    for (std::size_t k = q.size(); k-- > 0;) {
      const Rational f = r[k + b.c_.size() - 1] * inv;
      q[k] = f;
      if (f.is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[k + j].sub_product(f, b.c_[j]);
    }
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// Monic gcd (zero if both are zero).
inline Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// det(t I - m) by Faddeev-LeVerrier.
inline Polynomial characteristic_polynomial(const Matrix& m) {
  if (!m.square()) throw DimensionMismatch("characteristic_polynomial: matrix is not square");
  const std::size_t n = m.rows();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  Matrix mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix next = m * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = std::move(next);
    c[n - k] = -(m * mk).trace() / Rational(static_cast<long>(k));
  }
  return Polynomial(std::move(c));
}

/// p evaluated at a square matrix (Horner).
inline Matrix evaluate(const Polynomial& p, const Matrix& m) {
  const std::size_t n = m.rows();
  Matrix v(n, n);
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    v = v * m;
    for (std::size_t i = 0; i < n; ++i) v(i, i) += *it;
  }
  return v;
}

/// Yun's algorithm: pairs (f_i, i) with p = lc * prod f_i^i, f_i monic,
/// square-free and pairwise coprime. Constant factors are omitted.
inline std::vector<std::pair<Polynomial, std::size_t>> squarefree_factorization(const Polynomial& p) {
  std::vector<std::pair<Polynomial, std::size_t>> out;
  if (p.degree() < 1) return out;
  const Polynomial f = p.monic();
  Polynomial a = gcd(f, f.derivative());
  Polynomial b = divmod(f, a).first;
  Polynomial c = divmod(f.derivative(), a).first;
  Polynomial d = c - b.derivative();
  for (std::size_t i = 1; b.degree() >= 1; ++i) {
    Polynomial g = gcd(b, d);
    if (g.degree() >= 1) out.emplace_back(g, i);
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    d = c - b.derivative();
  }
  return out;
}

namespace detail {

/// Positive divisors of |x| by trial division, or nullopt when |x| is too large.
inline std::optional<std::vector<mpz_class>> small_divisors(const mpz_class& x) {
  mpz_class a = ::abs(x);
  if (a == 0 || a > mpz_class("1000000000000")) return std::nullopt;
  std::vector<mpz_class> small, large;
  for (mpz_class k = 1; k * k <= a; ++k) {
    if (a % k == 0) {
      small.push_back(k);
      if (k * k != a) large.push_back(a / k);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

}  // namespace detail

/// Distinct rational roots, found with the rational root theorem. Gives up
/// (returning what it has, possibly only 0) when the integer coefficients
/// at either end exceed 10^12.
inline std::vector<Rational> rational_roots(const Polynomial& p) {
  std::vector<Rational> roots;
  if (p.degree() < 1) return roots;
  // Strip zero roots.
  std::size_t low = 0;
  while (p.coeffs()[low].is_zero()) ++low;
  if (low > 0) roots.push_back(Rational(0));
  std::vector<Rational> rest(p.coeffs().begin() + static_cast<std::ptrdiff_t>(low), p.coeffs().end());
  const Polynomial q(rest);
  if (q.degree() < 1) return roots;
  // Clear denominators.
  mpz_class l = 1;
  for (const auto& x : q.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.denominator().get_mpz_t());
  std::vector<mpz_class> ints;
  for (const auto& x : q.coeffs()) ints.push_back(x.numerator() * (l / x.denominator()));
  auto ps = detail::small_divisors(ints.front());
  auto qs = detail::small_divisors(ints.back());
  if (!ps || !qs) return roots;
  for (const auto& a : *ps)
    for (const auto& b : *qs) {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      if (g != 1) continue;
      for (int s : {1, -1}) {
        const Rational r(mpq_class(s * a, b));
        if (q(r).is_zero()) roots.push_back(r);
      }
    }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace nlie
