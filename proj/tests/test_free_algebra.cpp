#include <doctest.h>

#include "nilgen/free_algebra.hpp"

using namespace nilgen;

namespace {
std::size_t catalan(int k) {
  std::vector<std::size_t> c{1};
  for (int i = 1; i <= k; ++i) {
    std::size_t s = 0;
    for (int j = 0; j < i; ++j) s += c[j] * c[i - 1 - j];
    c.push_back(s);
  }
  return c[k];
}
std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}
}  // namespace

TEST_CASE("monomial counts follow Catalan times n^k") {
  MonomialContext m21(2, 1);
  CHECK(m21.size() == 2);
  MonomialContext m22(2, 2);
  CHECK(m22.size() == 6);
  MonomialContext m33(3, 3);
  CHECK(m33.size() == 66);  // 3 + 9 + 2*27
  for (int n = 1; n <= 4; ++n)
    for (int c = 1; c <= 4; ++c) {
      MonomialContext ctx(n, c);
      for (int k = 1; k <= c; ++k)
        CHECK(ctx.degree_count(k) == catalan(k - 1) * ipow(n, k));
    }
}

TEST_CASE("grafting respects the truncation") {
  MonomialContext ctx(3, 2);
  int x1 = ctx.generator(1), x2 = ctx.generator(2), x3 = ctx.generator(3);
  int p = ctx.product(x1, x2);
  CHECK(p != MonomialContext::kZero);
  CHECK(ctx.degree(p) == 2);
  CHECK(ctx.product(p, x3) == MonomialContext::kZero);  // degree 3 > c
  CHECK(ctx.str(p) == "(x1 x2)");
}

TEST_CASE("distinct bracketings are distinct basis elements") {
  MonomialContext ctx(2, 3);
  int x1 = ctx.generator(1), x2 = ctx.generator(2);
  int a = ctx.product(ctx.product(x1, x2), x2);  // (x1 x2) x2
  int b = ctx.product(x1, ctx.product(x2, x2));  // x1 (x2 x2)
  CHECK(a != b);
  CHECK(ctx.str(a) == "((x1 x2) x2)");
  CHECK(ctx.str(b) == "(x1 (x2 x2))");
}

TEST_CASE("canonical order is by degree then structure, and parsing round-trips") {
  MonomialContext ctx(2, 3);
  for (std::size_t i = 0; i + 1 < ctx.size(); ++i)
    CHECK(ctx.degree(static_cast<int>(i)) <= ctx.degree(static_cast<int>(i + 1)));
  for (std::size_t i = 0; i < ctx.size(); ++i)
    CHECK(ctx.parse(ctx.str(static_cast<int>(i))) == static_cast<int>(i));
  CHECK_THROWS_AS(ctx.parse("x9"), input_error);
  CHECK_THROWS_AS(ctx.parse("((x1 x1) (x1 x1))"), input_error);  // degree 4 > c
  CHECK_THROWS_AS(ctx.parse("(x1"), input_error);
}

TEST_CASE("multidegree is additive under products") {
  MonomialContext ctx(3, 3);
  int x1 = ctx.generator(1), x2 = ctx.generator(2), x3 = ctx.generator(3);
  int u = ctx.product(ctx.product(x1, x2), x2);
  MultiDegree expect{{1, 1}, {2, 2}};
  CHECK(ctx.multidegree(u) == expect);
  CHECK(ctx.multidegree(x3) == MultiDegree{{3, 1}});
  for (std::size_t a = 0; a < ctx.size(); ++a)
    for (std::size_t b = 0; b < ctx.size(); ++b) {
      int w = ctx.product(static_cast<int>(a), static_cast<int>(b));
      if (w == MonomialContext::kZero) continue;
      auto mda = ctx.multidegree(static_cast<int>(a));
      for (const auto& [v, k] : ctx.multidegree(static_cast<int>(b))) mda[v] += k;
      CHECK(ctx.multidegree(w) == mda);
    }
}

TEST_CASE("free nilpotent structure algebra: filtration and table") {
  PrimeField f2(2);
  FreeNilpotentAlgebra free21(1, 2);
  CHECK(free21.dim() == 2);  // {x, x x}

  FreeNilpotentAlgebra free22(2, 2);
  auto sa = free22.to_structure_algebra(f2);
  CHECK(sa.dim() == 6);
  // all 16 degree-1 x degree-1 products land in the 4 degree-2 monomials
  const auto& ctx = free22.context();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      int w = ctx.product(i, j);
      CHECK(w >= 2);
      CHECK(ctx.degree(w) == 2);
    }
  FreeNilpotentAlgebra free32(3, 2);
  CHECK(free32.dim() == 12);
  CHECK(free32.degree_component_dim(2) == 9);

  // filtration F^k F^l ⊆ F^{k+l} on every basis pair (zero when k+l > c)
  FreeNilpotentAlgebra f33(3, 3);
  const auto& c3 = f33.context();
  for (std::size_t a = 0; a < c3.size(); ++a)
    for (std::size_t b = 0; b < c3.size(); ++b) {
      int w = c3.product(static_cast<int>(a), static_cast<int>(b));
      int da = c3.degree(static_cast<int>(a)), db = c3.degree(static_cast<int>(b));
      if (da + db > 3) {
        CHECK(w == MonomialContext::kZero);
      } else {
        CHECK(c3.degree(w) == da + db);
      }
    }
}

TEST_CASE("free element product") {
  PrimeField f3(3);
  FreeNilpotentAlgebra fa(2, 2);
  const auto& ctx = fa.context();
  FreeElement<PrimeField> a, b;
  a.add(ctx.generator(1), f3.one());
  a.add(ctx.generator(2), f3.from_int(2));
  b.add(ctx.generator(1), f3.one());
  auto p = fa.product(f3, a, b);
  // (x1 + 2 x2) x1 = x1x1 + 2 x2x1
  CHECK(p.coeffs.size() == 2);
  CHECK(p.coeffs.at(ctx.product(0, 0)) == f3.one());
  CHECK(p.coeffs.at(ctx.product(1, 0)) == f3.from_int(2));
}

TEST_CASE("basis guard") {
  CHECK_THROWS_AS(MonomialContext(6, 5, 50000), guard_error);
  MonomialContext ok(5, 5, 50000);  // 47155 monomials, inside the default guard
  CHECK(ok.size() == 47155);
}
