#ifndef NILGEN_GAUSSIAN_HPP
#define NILGEN_GAUSSIAN_HPP

#include <cstdint>
#include <string>

#include "nilgen/errors.hpp"

namespace nilgen {

using uint128 = unsigned __int128;

inline uint128 checked_mul_u128(uint128 a, uint128 b) {
  if (a != 0 && b > ~uint128(0) / a) throw guard_error("gaussian_binomial overflow");
  return a * b;
}

inline uint128 pow_u128(uint64_t base, unsigned exp) {
  uint128 r = 1;
  for (unsigned i = 0; i < exp; ++i) r = checked_mul_u128(r, base);
  return r;
}

/// Number of m-dimensional subspaces of F_q^d, via the exact product formula
/// [d,m]_q = prod_{i=1..m} (q^(d-m+i) - 1) / (q^i - 1), one exact division per step.
inline uint128 gaussian_binomial(unsigned d, unsigned m, uint64_t q) {
  if (m > d) return 0;
  if (q < 2) throw precondition_error("gaussian_binomial requires q >= 2");
  uint128 r = 1;
  for (unsigned i = 1; i <= m; ++i) {
    uint128 num = pow_u128(q, d - m + i) - 1;
    uint128 den = pow_u128(q, i) - 1;
    r = checked_mul_u128(r, num);
    r /= den;  // exact: partial products of Gaussian binomials are integers
  }
  return r;
}

/// Pascal-style recurrence [d,m]_q = [d-1,m-1]_q + q^m [d-1,m]_q, used as the
/// independent cross-check of the product formula.
inline uint128 gaussian_binomial_recurrence(unsigned d, unsigned m, uint64_t q) {
  if (m > d) return 0;
  if (m == 0 || m == d) return 1;
  return gaussian_binomial_recurrence(d - 1, m - 1, q) +
         checked_mul_u128(pow_u128(q, m), gaussian_binomial_recurrence(d - 1, m, q));
}

inline bool fits_u64(uint128 x, uint64_t* out) {
  if (x > ~uint64_t(0)) return false;
  if (out) *out = static_cast<uint64_t>(x);
  return true;
}

inline std::string u128_to_string(uint128 x) {
  if (x == 0) return "0";
  std::string s;
  while (x > 0) {
    s.insert(s.begin(), char('0' + int(x % 10)));
    x /= 10;
  }
  return s;
}

}  // namespace nilgen

#endif
