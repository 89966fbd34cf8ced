#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "splitcount/errors.hpp"
#include "splitcount/unipoly.hpp"

namespace splitcount {

/// Sparse polynomial over Z in a fixed number of variables t_1..t_d.
/// Canonical form: no zero coefficients; terms sorted by total degree, then
/// lexicographically descending on the exponent vector (t_1-major). Exponents
/// are stored flat, nvars per term; each exponent must fit in 16 bits.
class MultiPoly {
 public:
  using Exp = uint16_t;
  static constexpr int kMaxExponent = 65535;

  explicit MultiPoly(int nvars = 1) : nvars_(nvars) {
    if (nvars < 1) throw DimensionMismatch("MultiPoly needs at least one variable");
  }

  static MultiPoly zero(int nvars) { return MultiPoly(nvars); }

  static MultiPoly constant(int nvars, Int c) {
    MultiPoly p(nvars);
    if (c != 0) {
      p.exps_.assign(static_cast<size_t>(nvars), 0);
      p.coeffs_.push_back(std::move(c));
    }
    return p;
  }

  static MultiPoly one(int nvars) { return constant(nvars, 1); }

  /// c * prod t_i^{exps[i-1]}; exponent vector given in full length nvars.
  static MultiPoly monomial(int nvars, const std::vector<int>& exps, Int c) {
    MultiPoly p(nvars);
    if (static_cast<int>(exps.size()) != nvars)
      throw DimensionMismatch("exponent vector length != nvars");
    if (c == 0) return p;
    for (int e : exps)
      if (e < 0 || e > kMaxExponent) throw Error("exponent out of range");
    p.exps_.reserve(exps.size());
    for (int e : exps) p.exps_.push_back(static_cast<Exp>(e));
    p.coeffs_.push_back(std::move(c));
    return p;
  }

  /// The single variable t_var (1-indexed).
  static MultiPoly variable(int nvars, int var) {
    std::vector<int> e(static_cast<size_t>(nvars), 0);
    e.at(static_cast<size_t>(var - 1)) = 1;
    return monomial(nvars, e, 1);
  }

  /// Adopt term data already in canonical order with nonzero coefficients.
  static MultiPoly from_sorted_terms(int nvars, std::vector<Exp> exps,
                                     std::vector<Int> coeffs) {
    MultiPoly p(nvars);
    if (exps.size() != coeffs.size() * static_cast<size_t>(nvars))
      throw DimensionMismatch("term data shape mismatch");
    p.exps_ = std::move(exps);
    p.coeffs_ = std::move(coeffs);
    return p;
  }

  int nvars() const { return nvars_; }
  bool is_zero() const { return coeffs_.empty(); }
  size_t nterms() const { return coeffs_.size(); }

  std::span<const Exp> term_exps(size_t i) const {
    return {exps_.data() + i * static_cast<size_t>(nvars_), static_cast<size_t>(nvars_)};
  }
  const Int& term_coeff(size_t i) const { return coeffs_[i]; }

  bool operator==(const MultiPoly& o) const {
    return nvars_ == o.nvars_ && exps_ == o.exps_ && coeffs_ == o.coeffs_;
  }

  /// Coefficient of the given exponent vector (zero when absent).
  Int coeff(const std::vector<int>& exps) const {
    if (static_cast<int>(exps.size()) != nvars_)
      throw DimensionMismatch("exponent vector length != nvars");
    std::vector<Exp> key;
    key.reserve(exps.size());
    for (int e : exps) key.push_back(static_cast<Exp>(e));
    for (size_t i = 0; i < nterms(); ++i) {
      auto t = term_exps(i);
      if (std::equal(t.begin(), t.end(), key.begin(), key.end())) return coeffs_[i];
    }
    return 0;
  }

  MultiPoly operator+(const MultiPoly& o) const {
    check_same_vars(o);
    MultiPoly out(nvars_);
    out.exps_.reserve(exps_.size() + o.exps_.size());
    out.coeffs_.reserve(coeffs_.size() + o.coeffs_.size());
    size_t i = 0, j = 0;
    while (i < nterms() || j < o.nterms()) {
      int cmp;
      if (i == nterms())
        cmp = 1;
      else if (j == o.nterms())
        cmp = -1;
      else
        cmp = compare(term_exps(i), o.term_exps(j));
      if (cmp < 0) {
        out.push_term(term_exps(i), coeffs_[i]);
        ++i;
      } else if (cmp > 0) {
        out.push_term(o.term_exps(j), o.coeffs_[j]);
        ++j;
      } else {
        Int c = coeffs_[i] + o.coeffs_[j];
        if (c != 0) out.push_term(term_exps(i), std::move(c));
        ++i;
        ++j;
      }
    }
    return out;
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    *this = *this + o;
    return *this;
  }

  /// Multiply by a single term c * t^delta in place-friendly linear time.
  MultiPoly shifted(std::span<const Exp> delta, const Int& c) const {
    MultiPoly out(nvars_);
    if (c == 0) return out;
    out.exps_.reserve(exps_.size());
    out.coeffs_.reserve(coeffs_.size());
    for (size_t i = 0; i < nterms(); ++i) {
      auto t = term_exps(i);
      for (int v = 0; v < nvars_; ++v) {
        const int e = static_cast<int>(t[static_cast<size_t>(v)]) +
                      static_cast<int>(delta[static_cast<size_t>(v)]);
        if (e > kMaxExponent) throw Error("exponent overflow in multiplication");
        out.exps_.push_back(static_cast<Exp>(e));
      }
      out.coeffs_.push_back(coeffs_[i] * c);
    }
    return out;  // shifting by a constant vector preserves the term order
  }

  MultiPoly operator*(const MultiPoly& o) const {
    check_same_vars(o);
    if (is_zero() || o.is_zero()) return MultiPoly(nvars_);
    if (o.nterms() == 1) return shifted(o.term_exps(0), o.coeffs_[0]);
    if (nterms() == 1) return o.shifted(term_exps(0), coeffs_[0]);

    std::map<std::vector<Exp>, Int, TermLess> acc;
    std::vector<Exp> key(static_cast<size_t>(nvars_));
    for (size_t i = 0; i < nterms(); ++i) {
      auto a = term_exps(i);
      for (size_t j = 0; j < o.nterms(); ++j) {
        auto b = o.term_exps(j);
        for (int v = 0; v < nvars_; ++v) {
          const int e = static_cast<int>(a[static_cast<size_t>(v)]) +
                        static_cast<int>(b[static_cast<size_t>(v)]);
          if (e > kMaxExponent) throw Error("exponent overflow in multiplication");
          key[static_cast<size_t>(v)] = static_cast<Exp>(e);
        }
        acc[key] += coeffs_[i] * o.coeffs_[j];
      }
    }
    MultiPoly out(nvars_);
    out.exps_.reserve(acc.size() * static_cast<size_t>(nvars_));
    out.coeffs_.reserve(acc.size());
    for (auto& [e, c] : acc)
      if (c != 0) out.push_term({e.data(), e.size()}, std::move(c));
    return out;
  }

  /// Multiply by t_var^power (var 1-indexed).
  MultiPoly scale_shift(int var, int power) const {
    if (var < 1 || var > nvars_) throw DimensionMismatch("variable index out of range");
    if (power < 0) throw Error("negative power");
    std::vector<Exp> delta(static_cast<size_t>(nvars_), 0);
    delta[static_cast<size_t>(var - 1)] = static_cast<Exp>(power);
    return shifted({delta.data(), delta.size()}, 1);
  }

  /// Evaluate with every variable set to the given integers.
  Int eval_ints(const std::vector<Int>& values) const {
    if (static_cast<int>(values.size()) != nvars_)
      throw DimensionMismatch("value vector length != nvars");
    Int total = 0;
    for (size_t i = 0; i < nterms(); ++i) {
      Int term = coeffs_[i];
      auto e = term_exps(i);
      for (int v = 0; v < nvars_; ++v)
        for (int k = 0; k < e[static_cast<size_t>(v)]; ++k)
          term *= values[static_cast<size_t>(v)];
      total += term;
    }
    return total;
  }

  /// Set every variable except t_var to 1 and collapse to a univariate
  /// polynomial in t_var.
  UniPoly collapse_to_unipoly(int var) const {
    if (var < 1 || var > nvars_) throw DimensionMismatch("variable index out of range");
    int deg = 0;
    for (size_t i = 0; i < nterms(); ++i)
      deg = std::max(deg, static_cast<int>(term_exps(i)[static_cast<size_t>(var - 1)]));
    std::vector<Int> c(static_cast<size_t>(deg) + 1);
    for (size_t i = 0; i < nterms(); ++i)
      c[term_exps(i)[static_cast<size_t>(var - 1)]] += coeffs_[i];
    return UniPoly(std::move(c));
  }

  int min_total_degree() const {
    if (is_zero()) return -1;
    return total_degree_of(term_exps(0));
  }
  int max_total_degree() const {
    if (is_zero()) return -1;
    return total_degree_of(term_exps(nterms() - 1));
  }

  /// Canonical text form, e.g. "1 + t1^5*t2 + 2*t2^6".
  std::string to_string(const std::string& prefix = "t") const {
    if (is_zero()) return "0";
    std::string out;
    for (size_t i = 0; i < nterms(); ++i) {
      const Int& c = coeffs_[i];
      const bool negative = c < 0;
      Int mag = abs(c);
      if (out.empty()) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      auto e = term_exps(i);
      bool constant_term = true;
      for (auto x : e)
        if (x) constant_term = false;
      const bool unit = (mag == 1);
      if (constant_term || !unit) out += mag.get_str();
      bool first_factor = constant_term || !unit;
      for (int v = 0; v < nvars_; ++v) {
        const int x = e[static_cast<size_t>(v)];
        if (!x) continue;
        if (first_factor && !constant_term && unit)
          first_factor = false;
        else
          out += "*";
        out += prefix + std::to_string(v + 1);
        if (x > 1) out += "^" + std::to_string(x);
      }
    }
    return out;
  }

  static int total_degree_of(std::span<const Exp> e) {
    int s = 0;
    for (auto x : e) s += x;
    return s;
  }

  /// Canonical order: total degree ascending, then lexicographically
  /// descending on exponent vectors.
  static int compare(std::span<const Exp> a, std::span<const Exp> b) {
    const int da = total_degree_of(a), db = total_degree_of(b);
    if (da != db) return da < db ? -1 : 1;
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
    return 0;
  }

  struct TermLess {
    bool operator()(const std::vector<Exp>& a, const std::vector<Exp>& b) const {
      return compare({a.data(), a.size()}, {b.data(), b.size()}) < 0;
    }
  };

 private:
  void check_same_vars(const MultiPoly& o) const {
    if (nvars_ != o.nvars_)
      throw DimensionMismatch("operands have different variable counts");
  }

  void push_term(std::span<const Exp> e, Int c) {
    exps_.insert(exps_.end(), e.begin(), e.end());
    coeffs_.push_back(std::move(c));
  }

  int nvars_;
  std::vector<Exp> exps_;
  std::vector<Int> coeffs_;
};

/// Complete homogeneous symmetric polynomial h_k in the listed variables
/// (1-indexed, within nvars); other variables do not appear. Term count is
/// C(k + |vars| - 1, |vars| - 1).
inline MultiPoly complete_homogeneous(int nvars, int k, std::vector<int> vars) {
  if (k < 0) throw Error("h_k needs k >= 0");
  if (k == 0) return MultiPoly::one(nvars);
  if (vars.empty()) throw NoVariables("h_k with k >= 1 needs at least one variable");
  std::sort(vars.begin(), vars.end());
  for (int v : vars)
    if (v < 1 || v > nvars) throw DimensionMismatch("variable index out of range");

  // Emit monomials directly in canonical order: all terms share total degree
  // k, and giving the smallest listed variable the largest exponent first
  // yields descending lex order.
  MultiPoly out(nvars);
  std::vector<int> exps(static_cast<size_t>(nvars), 0);
  std::vector<MultiPoly::Exp> flat;
  std::vector<Int> coeffs;
  auto emit = [&]() {
    for (int e : exps) flat.push_back(static_cast<MultiPoly::Exp>(e));
    coeffs.push_back(1);
  };
  auto rec = [&](auto&& self, size_t vi, int remaining) -> void {
    if (vi + 1 == vars.size()) {
      exps[static_cast<size_t>(vars[vi] - 1)] = remaining;
      emit();
      exps[static_cast<size_t>(vars[vi] - 1)] = 0;
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      exps[static_cast<size_t>(vars[vi] - 1)] = e;
      self(self, vi + 1, remaining - e);
    }
    exps[static_cast<size_t>(vars[vi] - 1)] = 0;
  };
  rec(rec, 0, k);
  return MultiPoly::from_sorted_terms(nvars, std::move(flat), std::move(coeffs));
}

}  // namespace splitcount
