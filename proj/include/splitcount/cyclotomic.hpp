#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "splitcount/errors.hpp"
#include "splitcount/multipoly.hpp"
#include "splitcount/unipoly.hpp"

namespace splitcount {

/// d-th cyclotomic polynomial, computed by exact division
///   Phi_d = (x^d - 1) / prod_{e|d, e<d} Phi_e.
/// Monic with integer coefficients, degree phi(d).
inline UniPoly cyclotomic_polynomial(int d) {
  if (d < 1) throw Error("cyclotomic_polynomial needs d >= 1");
  std::map<int, UniPoly> phi;
  for (int m = 1; m <= d; ++m) {
    if (d % m != 0) continue;
    UniPoly num = UniPoly::monomial(1, m) - UniPoly::one();
    UniPoly den = UniPoly::one();
    for (auto& [e, p] : phi)
      if (m % e == 0) den = den * p;
    phi[m] = num.divide_exact(den);
  }
  return phi[d];
}

namespace detail {

inline const UniPoly& cyclotomic_cached(int d) {
  thread_local std::map<int, UniPoly> cache;
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, cyclotomic_polynomial(d)).first;
  return it->second;
}

}  // namespace detail

/// Element of Z[zeta_d], reduced modulo Phi_d; coefficients are the
/// representation in the power basis 1, zeta, ..., zeta^{phi(d)-1}.
class CyclotomicInteger {
 public:
  explicit CyclotomicInteger(int d) : d_(check_order(d)), c_(phi_degree(d)) {}

  static CyclotomicInteger from_int(int d, Int v) {
    CyclotomicInteger x(d);
    x.c_[0] = std::move(v);
    return x;
  }

  /// Reduce an arbitrary integer polynomial in zeta modulo Phi_d.
  static CyclotomicInteger from_poly(int d, const UniPoly& p) {
    check_order(d);
    CyclotomicInteger x(d);
    UniPoly r = p.mod_monic(detail::cyclotomic_cached(d));
    for (int i = 0; i <= r.degree(); ++i) x.c_[static_cast<size_t>(i)] = r.coeff(i);
    return x;
  }

  int order() const { return d_; }
  const std::vector<Int>& coeffs() const { return c_; }

  bool operator==(const CyclotomicInteger& o) const = default;

  bool is_zero() const {
    for (const Int& v : c_)
      if (v != 0) return false;
    return true;
  }

  CyclotomicInteger operator+(const CyclotomicInteger& o) const {
    check_same(o);
    CyclotomicInteger out(d_);
    for (size_t i = 0; i < c_.size(); ++i) out.c_[i] = c_[i] + o.c_[i];
    return out;
  }

  CyclotomicInteger operator-(const CyclotomicInteger& o) const {
    check_same(o);
    CyclotomicInteger out(d_);
    for (size_t i = 0; i < c_.size(); ++i) out.c_[i] = c_[i] - o.c_[i];
    return out;
  }

  CyclotomicInteger operator*(const CyclotomicInteger& o) const {
    check_same(o);
    if (is_zero() || o.is_zero()) return CyclotomicInteger(d_);
    std::vector<Int> conv(2 * c_.size() - 1);
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (size_t j = 0; j < o.c_.size(); ++j) conv[i + j] += c_[i] * o.c_[j];
    }
    return from_poly(d_, UniPoly(std::move(conv)));
  }

  CyclotomicInteger pow(uint64_t e) const {
    CyclotomicInteger base = *this;
    CyclotomicInteger acc = from_int(d_, 1);
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  /// The integer value when all coefficients of zeta^1.. vanish.
  std::optional<Int> as_integer() const {
    for (size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return std::nullopt;
    return c_[0];
  }

  /// Text form with z denoting zeta_d, e.g. "2 + z".
  std::string to_string() const { return UniPoly(c_).to_string("z"); }

 private:
  static int check_order(int d) {
    if (d < 1) throw Error("cyclotomic order must be >= 1");
    return d;
  }
  static size_t phi_degree(int d) {
    return static_cast<size_t>(detail::cyclotomic_cached(d).degree());
  }
  void check_same(const CyclotomicInteger& o) const {
    if (d_ != o.d_) throw OrderMismatch("cyclotomic orders differ");
  }

  int d_;
  std::vector<Int> c_;
};

/// zeta^(e mod d), reduced modulo Phi_d.
inline CyclotomicInteger root_power(int d, long long e) {
  if (d < 1) throw Error("root_power needs d >= 1");
  long long r = e % d;
  if (r < 0) r += d;
  return CyclotomicInteger::from_poly(d, UniPoly::monomial(1, static_cast<int>(r)));
}

/// Substitute t_i -> zeta^i for i = l..d and return the reduced value.
/// p must be a polynomial of dimension d in which variables below l are
/// absent; l = 1 is the full substitution (zeta, zeta^2, ..., zeta^d).
inline CyclotomicInteger eval_at_roots(const MultiPoly& p, int d, int l = 1) {
  if (l < 1 || l > d) throw DimensionMismatch("offset l must satisfy 1 <= l <= d");
  if (p.nvars() != d)
    throw DimensionMismatch("polynomial dimension != cyclotomic order");
  // Accumulate in Z[x]/(x^d - 1) first, then reduce modulo Phi_d once.
  std::vector<Int> acc(static_cast<size_t>(d));
  for (size_t t = 0; t < p.nterms(); ++t) {
    auto e = p.term_exps(t);
    long long idx = 0;
    for (int v = 0; v < d; ++v) {
      if (e[static_cast<size_t>(v)] == 0) continue;
      if (v + 1 < l)
        throw DimensionMismatch("polynomial uses a variable below the offset");
      idx += static_cast<long long>(v + 1) * e[static_cast<size_t>(v)];
    }
    acc[static_cast<size_t>(idx % d)] += p.term_coeff(t);
  }
  return CyclotomicInteger::from_poly(d, UniPoly(std::move(acc)));
}

/// Horner evaluation of an integer polynomial at a cyclotomic point.
inline CyclotomicInteger eval_unipoly_at(const UniPoly& p, const CyclotomicInteger& x) {
  CyclotomicInteger acc(x.order());
  for (int i = p.degree(); i >= 0; --i)
    acc = acc * x + CyclotomicInteger::from_int(x.order(), p.coeff(i));
  return acc;
}

}  // namespace splitcount
