#ifndef NILGEN_FIELD_HPP
#define NILGEN_FIELD_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "nilgen/errors.hpp"

namespace nilgen {

using bigrat = boost::multiprecision::cpp_rational;

/// Element of a prime field F_p, kept as the canonical residue 0..p-1.
/// Elements are self-contained (they carry p) so that generic linear algebra
/// can combine them without threading a field context through every call.
struct Fp {
  uint32_t v = 0;
  uint32_t p = 0;

  friend bool operator==(const Fp& a, const Fp& b) { return a.v == b.v && a.p == b.p; }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

  bool is_zero() const { return v == 0; }

  friend Fp operator+(const Fp& a, const Fp& b) {
    assert(a.p == b.p);
    uint32_t s = a.v + b.v;
    if (s >= a.p) s -= a.p;
    return {s, a.p};
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    assert(a.p == b.p);
    uint32_t s = a.v + a.p - b.v;
    if (s >= a.p) s -= a.p;
    return {s, a.p};
  }
  friend Fp operator-(const Fp& a) { return {a.v == 0 ? 0 : a.p - a.v, a.p}; }
  friend Fp operator*(const Fp& a, const Fp& b) {
    assert(a.p == b.p);
    return {static_cast<uint32_t>((uint64_t(a.v) * b.v) % a.p), a.p};
  }
  Fp inverse() const {
    if (v == 0) throw precondition_error("division by zero in F_" + std::to_string(p));
    // extended Euclid on (v, p)
    int64_t t = 0, newt = 1, r = p, newr = v;
    while (newr != 0) {
      int64_t q = r / newr;
      t = std::exchange(newt, t - q * newt);
      r = std::exchange(newr, r - q * newr);
    }
    if (t < 0) t += p;
    return {static_cast<uint32_t>(t), p};
  }
  friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inverse(); }

  std::string str() const { return std::to_string(v); }
};

/// Element of Q as an exact reduced fraction.
struct Rat {
  bigrat v;

  Rat() = default;
  explicit Rat(bigrat x) : v(std::move(x)) {}

  friend bool operator==(const Rat& a, const Rat& b) { return a.v == b.v; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v != b.v; }
  bool is_zero() const { return v == 0; }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(a.v + b.v); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(a.v - b.v); }
  friend Rat operator-(const Rat& a) { return Rat(-a.v); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(a.v * b.v); }
  Rat inverse() const {
    if (v == 0) throw precondition_error("division by zero in Q");
    return Rat(1 / v);
  }
  friend Rat operator/(const Rat& a, const Rat& b) { return a * b.inverse(); }

  std::string str() const { return v.str(); }
};

inline bool is_prime_u32(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Prime field F_p. Checked prime at construction.
class PrimeField {
 public:
  using Elem = Fp;

  explicit PrimeField(uint32_t p) : p_(p) {
    if (!is_prime_u32(p)) throw input_error("field order " + std::to_string(p) + " is not prime");
  }

  uint32_t p() const { return p_; }
  uint64_t size() const { return p_; }
  bool is_finite() const { return true; }

  Elem zero() const { return {0, p_}; }
  Elem one() const { return {1 % p_, p_}; }
  Elem from_int(long long k) const {
    long long r = k % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return {static_cast<uint32_t>(r), p_};
  }
  Elem element(uint64_t residue) const { return {static_cast<uint32_t>(residue % p_), p_}; }

  /// All p elements, in residue order.
  std::vector<Elem> enumerate() const {
    std::vector<Elem> out;
    out.reserve(p_);
    for (uint32_t i = 0; i < p_; ++i) out.push_back({i, p_});
    return out;
  }

  /// A generator of the multiplicative group F_p^*.
  Elem primitive_element() const {
    for (uint32_t g = 1; g < p_; ++g) {
      uint32_t ord = 1;
      Elem x{g, p_};
      Elem acc = x;
      while (acc.v != 1) {
        acc = acc * x;
        ++ord;
      }
      if (ord == p_ - 1) return x;
    }
    return one();  // p == 2
  }

  std::string name() const { return "F" + std::to_string(p_); }
  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  uint32_t p_;
};

/// The rationals. Enumeration is refused (infinite field).
class RationalField {
 public:
  using Elem = Rat;

  uint64_t size() const { throw precondition_error("Q is infinite"); }
  bool is_finite() const { return false; }

  Elem zero() const { return Rat(bigrat(0)); }
  Elem one() const { return Rat(bigrat(1)); }
  Elem from_int(long long k) const { return Rat(bigrat(k)); }
  Elem fraction(long long num, long long den) const {
    if (den == 0) throw input_error("zero denominator");
    return Rat(bigrat(num) / den);
  }

  std::vector<Elem> enumerate() const { throw precondition_error("cannot enumerate Q"); }
  Elem primitive_element() const { throw precondition_error("Q has no primitive element"); }

  std::string name() const { return "Q"; }
  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

template <class F>
concept CoefficientField = requires(const F f, typename F::Elem a) {
  { f.zero() } -> std::same_as<typename F::Elem>;
  { f.one() } -> std::same_as<typename F::Elem>;
  { f.from_int(1LL) } -> std::same_as<typename F::Elem>;
  { a + a } -> std::same_as<typename F::Elem>;
  { a - a } -> std::same_as<typename F::Elem>;
  { a* a } -> std::same_as<typename F::Elem>;
  { a.inverse() } -> std::same_as<typename F::Elem>;
  { a.is_zero() } -> std::same_as<bool>;
  { f.is_finite() } -> std::same_as<bool>;
};

/// Runtime description of a coefficient field, as read from config/files.
struct FieldSpec {
  enum class Kind { prime, rational };
  Kind kind = Kind::prime;
  uint32_t p = 2;

  static FieldSpec prime(uint32_t p) { return {Kind::prime, p}; }
  static FieldSpec rational() { return {Kind::rational, 0}; }

  /// Accepts "F2", "F5", ..., "Q".
  static FieldSpec parse(const std::string& s);
  std::string str() const { return kind == Kind::prime ? "F" + std::to_string(p) : "Q"; }
};

/// Calls fn with the concrete field object chosen by spec.
template <class Fn>
decltype(auto) with_field(const FieldSpec& spec, Fn&& fn) {
  if (spec.kind == FieldSpec::Kind::prime) return fn(PrimeField(spec.p));
  return fn(RationalField{});
}

}  // namespace nilgen

#endif
