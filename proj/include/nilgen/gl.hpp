#ifndef NILGEN_GL_HPP
#define NILGEN_GL_HPP

#include <cstdint>
#include <vector>

#include "nilgen/matrix.hpp"

namespace nilgen {

inline uint64_t gl_order(int n, uint64_t q) {
  // |GL(n,q)| = prod_{i=0..n-1} (q^n - q^i)
  uint64_t qn = 1;
  for (int i = 0; i < n; ++i) qn *= q;
  uint64_t ord = 1, qi = 1;
  for (int i = 0; i < n; ++i) {
    ord *= (qn - qi);
    qi *= q;
  }
  return ord;
}

/// All invertible n×n matrices over F_q, by filtering the q^(n^2) grid.
/// Guarded: meant for the sweep sizes the stabilizer machinery supports.
inline std::vector<Matrix<PrimeField>> enumerate_gl(const PrimeField& fld, int n,
                                                    uint64_t guard = 30000) {
  uint64_t ord = gl_order(n, fld.p());
  if (ord > guard)
    throw guard_error("|GL(" + std::to_string(n) + "," + std::to_string(fld.p()) +
                      ")| = " + std::to_string(ord) + " exceeds guard " + std::to_string(guard));
  std::vector<Matrix<PrimeField>> out;
  out.reserve(ord);
  std::vector<uint32_t> odo(static_cast<std::size_t>(n) * n, 0);
  for (;;) {
    Matrix<PrimeField> m(fld, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = fld.element(odo[std::size_t(i) * n + j]);
    if (m.is_invertible()) out.push_back(std::move(m));
    std::size_t k = odo.size();
    bool carry = true;
    while (k-- > 0) {
      if (++odo[k] < fld.p()) {
        carry = false;
        break;
      }
      odo[k] = 0;
    }
    if (carry) break;
  }
  return out;
}

/// Generating set of GL(n,q): a transvection, the n-cycle permutation, and the
/// primitive-scalar dilation of the first coordinate.
inline std::vector<Matrix<PrimeField>> gl_generators(const PrimeField& fld, int n) {
  std::vector<Matrix<PrimeField>> gens;
  if (n >= 2) {
    auto t = Matrix<PrimeField>::identity(fld, n);
    t(0, 1) = fld.one();
    gens.push_back(std::move(t));
    Matrix<PrimeField> cyc(fld, n, n);
    for (int i = 0; i < n; ++i) cyc((i + 1) % n, i) = fld.one();
    gens.push_back(std::move(cyc));
  }
  if (fld.p() > 2 || n == 1) {
    auto d = Matrix<PrimeField>::identity(fld, n);
    d(0, 0) = fld.primitive_element();
    gens.push_back(std::move(d));
  }
  return gens;
}

}  // namespace nilgen

#endif
