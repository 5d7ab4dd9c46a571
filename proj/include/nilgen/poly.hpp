#ifndef NILGEN_POLY_HPP
#define NILGEN_POLY_HPP

#include <string>
#include <vector>

#include "nilgen/matrix.hpp"

namespace nilgen {

/// Dense univariate polynomial over an exact field; coeffs[i] is the t^i coefficient.
template <CoefficientField F>
class Poly {
 public:
  using Elem = typename F::Elem;

  explicit Poly(F fld) : fld_(std::move(fld)) {}
  Poly(F fld, std::vector<Elem> coeffs) : fld_(std::move(fld)), c_(std::move(coeffs)) {
    trim();
  }
  static Poly constant(F fld, Elem e) { return Poly(fld, {e}); }
  static Poly t_minus(F fld, Elem lambda) {
    return Poly(fld, {-lambda, fld.one()});
  }

  const F& field() const { return fld_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  const std::vector<Elem>& coeffs() const { return c_; }
  Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : fld_.zero(); }
  Elem leading() const { return c_.back(); }
  bool is_unit() const { return degree() == 0; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Elem> r(std::max(a.c_.size(), b.c_.size()), a.fld_.zero());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
    return Poly(a.fld_, std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Elem> r(std::max(a.c_.size(), b.c_.size()), a.fld_.zero());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) - b.coeff(i);
    return Poly(a.fld_, std::move(r));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.fld_);
    std::vector<Elem> r(a.c_.size() + b.c_.size() - 1, a.fld_.zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    return Poly(a.fld_, std::move(r));
  }
  Poly scaled(const Elem& s) const {
    Poly r = *this;
    for (auto& x : r.c_) x = x * s;
    r.trim();
    return r;
  }
  Poly shifted(std::size_t k) const {  // multiply by t^k
    if (is_zero()) return *this;
    Poly r(fld_);
    r.c_.assign(k, fld_.zero());
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
    return r;
  }

  /// Quotient and remainder; divisor must be nonzero.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.is_zero()) throw precondition_error("polynomial division by zero");
    Poly rem = *this;
    Poly quot(fld_);
    quot.c_.assign(std::max<int>(0, degree() - d.degree() + 1), fld_.zero());
    Elem dinv = d.leading().inverse();
    while (!rem.is_zero() && rem.degree() >= d.degree()) {
      std::size_t k = rem.degree() - d.degree();
      Elem f = rem.leading() * dinv;
      quot.c_[k] = quot.c_[k] + f;
      for (std::size_t i = 0; i < d.c_.size(); ++i)
        rem.c_[k + i] = rem.c_[k + i] - f * d.c_[i];
      rem.trim();
    }
    quot.trim();
    return {quot, rem};
  }
  Poly operator/(const Poly& d) const { return divmod(d).first; }
  Poly operator%(const Poly& d) const { return divmod(d).second; }
  bool divides(const Poly& other) const { return (other % *this).is_zero(); }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(leading().inverse());
  }

  static Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = a % b;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  /// Evaluate at a square matrix applied to a column vector: p(B) v.
  std::vector<Elem> apply_to(const Matrix<F>& B, std::vector<Elem> v) const {
    std::vector<Elem> acc(v.size(), fld_.zero());
    // Horner from the top coefficient
    for (std::size_t i = c_.size(); i-- > 0;) {
      acc = B.apply(acc);
      for (std::size_t j = 0; j < v.size(); ++j) acc[j] = acc[j] + c_[i] * v[j];
    }
    return acc;
  }

  std::string str(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      if (i == 0 || c_[i] != fld_.one()) s += c_[i].str();
      if (i >= 1) {
        if (c_[i] != fld_.one()) s += "*";
        s += var;
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  F fld_;
  std::vector<Elem> c_;
};

}  // namespace nilgen

#endif
