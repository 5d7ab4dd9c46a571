#ifndef NILGEN_FIXTURES_HPP
#define NILGEN_FIXTURES_HPP

#include "nilgen/free_algebra.hpp"

namespace nilgen {

/// The worked-example algebra with annihilator series strictly shorter than
/// its power series: F(N_4, {x1..x4}) modulo the ideal spanned by all degree-4
/// monomials except (x1 x2)(x3 x4). Satisfies I_1 = P^3, I_2 = P^2, I_3 = P
/// while P^4 != 0 and P^5 = 0.
template <CoefficientField F>
StructureAlgebra<F> rpowvsann_fixture(const F& fld) {
  FreeNilpotentAlgebra free_alg(4, 4);
  const MonomialContext& ctx = free_alg.context();
  auto P = free_alg.to_structure_algebra(fld);
  int special = ctx.product(ctx.product(ctx.generator(1), ctx.generator(2)),
                            ctx.product(ctx.generator(3), ctx.generator(4)));
  Matrix<F> rows(fld, 0, P.dim());
  for (std::size_t i = ctx.degree_offset(4); i < ctx.size(); ++i) {
    if (static_cast<int>(i) == special) continue;
    auto v = P.zero_vec();
    v[i] = fld.one();
    rows.append_row(v);
  }
  IdealHandle<F> K(P, Subspace<F>::span(rows));
  return quotient(P, K.subspace).algebra;
}

}  // namespace nilgen

#endif
