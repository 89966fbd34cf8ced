#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "splitcount/errors.hpp"

namespace splitcount {

/// Exact integer type for all polynomial and cyclotomic coefficients.
using Int = mpz_class;

/// Dense univariate polynomial over Z, canonical form: no trailing zero
/// coefficient, the zero polynomial has an empty coefficient vector.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UniPoly zero() { return UniPoly(); }
  static UniPoly constant(Int v) { return UniPoly({std::move(v)}); }
  static UniPoly one() { return constant(1); }

  /// c * x^k
  static UniPoly monomial(Int c, int k) {
    if (c == 0) return zero();
    std::vector<Int> v(static_cast<size_t>(k) + 1);
    v.back() = std::move(c);
    return UniPoly(std::move(v));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero

  const Int& coeff(int k) const {
    static const Int kZero = 0;
    if (k < 0 || k >= static_cast<int>(c_.size())) return kZero;
    return c_[static_cast<size_t>(k)];
  }

  const std::vector<Int>& coeffs() const { return c_; }

  bool operator==(const UniPoly& other) const = default;

  UniPoly operator+(const UniPoly& o) const {
    std::vector<Int> out(std::max(c_.size(), o.c_.size()));
    for (size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) out[i] += o.c_[i];
    return UniPoly(std::move(out));
  }

  UniPoly operator-(const UniPoly& o) const {
    std::vector<Int> out(std::max(c_.size(), o.c_.size()));
    for (size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) out[i] -= o.c_[i];
    return UniPoly(std::move(out));
  }

  UniPoly operator*(const UniPoly& o) const {
    if (is_zero() || o.is_zero()) return zero();
    std::vector<Int> out(c_.size() + o.c_.size() - 1);
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (size_t j = 0; j < o.c_.size(); ++j) out[i + j] += c_[i] * o.c_[j];
    }
    return UniPoly(std::move(out));
  }

  /// Horner evaluation at an integer point.
  Int eval(const Int& x) const {
    Int acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  /// Exact division; throws if the remainder is nonzero or divisor is zero.
  UniPoly divide_exact(const UniPoly& divisor) const {
    if (divisor.is_zero()) throw Error("division by zero polynomial");
    std::vector<Int> rem = c_;
    const int dd = divisor.degree();
    const Int& lead = divisor.c_.back();
    if (static_cast<int>(rem.size()) - 1 < dd) {
      if (is_zero()) return zero();
      throw Error("inexact polynomial division");
    }
    std::vector<Int> quot(rem.size() - static_cast<size_t>(dd));
    for (int k = static_cast<int>(rem.size()) - 1 - dd; k >= 0; --k) {
      Int& top = rem[static_cast<size_t>(k + dd)];
      if (top == 0) continue;
      if (top % lead != 0) throw Error("inexact polynomial division");
      Int q = top / lead;
      for (int i = 0; i <= dd; ++i)
        rem[static_cast<size_t>(k + i)] -= q * divisor.c_[static_cast<size_t>(i)];
      quot[static_cast<size_t>(k)] = std::move(q);
    }
    for (const Int& r : rem)
      if (r != 0) throw Error("inexact polynomial division");
    return UniPoly(std::move(quot));
  }

  /// Remainder of division by a monic divisor (integer arithmetic stays exact).
  UniPoly mod_monic(const UniPoly& divisor) const {
    const int dd = divisor.degree();
    std::vector<Int> rem = c_;
    for (int k = static_cast<int>(rem.size()) - 1; k >= dd; --k) {
      Int q = std::move(rem[static_cast<size_t>(k)]);
      rem[static_cast<size_t>(k)] = 0;
      if (q == 0) continue;
      for (int i = 0; i < dd; ++i)
        rem[static_cast<size_t>(k - dd + i)] -= q * divisor.c_[static_cast<size_t>(i)];
    }
    rem.resize(static_cast<size_t>(dd));
    return UniPoly(std::move(rem));
  }

  /// Canonical text form, ascending degree, e.g. "1 + t + 2*t^2 - t^3".
  std::string to_string(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::string out;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      const bool negative = c_[i] < 0;
      Int mag = abs(c_[i]);
      if (out.empty()) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      const bool unit = (mag == 1);
      if (i == 0 || !unit) out += mag.get_str();
      if (i > 0) {
        if (!unit) out += "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Int> c_;
};

/// Gaussian binomial [m+n choose n]_q as a polynomial in q, via exact
/// division of products of (q^i - 1) factors. Degree m*n.
inline UniPoly gaussian_binomial(int m, int n) {
  if (m < 0 || n < 0) throw Error("gaussian_binomial needs m, n >= 0");
  // [m+n over n]_q = prod_{i=n+1}^{m+n}(q^i - 1) / prod_{i=1}^{m}(q^i - 1)
  UniPoly num = UniPoly::one();
  UniPoly den = UniPoly::one();
  for (int i = 1; i <= m; ++i) {
    num = num * (UniPoly::monomial(1, n + i) - UniPoly::one());
    den = den * (UniPoly::monomial(1, i) - UniPoly::one());
  }
  return num.divide_exact(den);
}

}  // namespace splitcount
