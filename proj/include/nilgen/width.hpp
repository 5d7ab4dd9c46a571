#ifndef NILGEN_WIDTH_HPP
#define NILGEN_WIDTH_HPP

#include <set>

#include "nilgen/census.hpp"

namespace nilgen {

/// Width data of a verbal ideal f(P) over a finite field: the closure set
/// \bar{f(P)} (all values of f, closed under multiplication by every element
/// of P), its span, and the BFS level of every span element (level = minimal
/// number of closure-set summands).
struct WidthResult {
  int width = 0;                                     // max level over the span
  std::size_t closure_size = 0;                      // |\bar{f(P)}| without 0
  std::size_t verbal_dim = 0;                        // dim f(P)
  std::vector<std::vector<uint32_t>> closure;        // the nonzero closure elements
  std::vector<int> level;                            // per span element (mixed-radix index)
  Subspace<PrimeField> span;

  explicit WidthResult(Subspace<PrimeField> s) : span(std::move(s)) {}
};

namespace detail_width {

inline std::vector<uint32_t> raw(const std::vector<Fp>& v) {
  std::vector<uint32_t> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].v;
  return r;
}

/// Mixed-radix index of a span element given by its coordinates.
inline std::size_t span_index(const Subspace<PrimeField>& span, const std::vector<Fp>& v,
                              uint32_t p) {
  // coordinates = entries of v at the pivot columns (basis is RREF)
  auto acc = span.accumulator();
  std::size_t idx = 0;
  std::vector<Fp> coords;
  std::vector<Fp> w = v;
  for (std::size_t r = 0; r < span.dim(); ++r) {
    Fp c = w[acc.pivots()[r]];
    coords.push_back(c);
    if (!c.is_zero())
      for (std::size_t j = 0; j < w.size(); ++j)
        w[j] = w[j] - c * span.basis()(r, j);
  }
  for (std::size_t r = 0; r < span.dim(); ++r) idx = idx * p + coords[r].v;
  return idx;
}

}  // namespace detail_width

/// BFS width of the verbal ideal f(P): S = value set of f closed under all
/// multiplications by elements of P; width = number of BFS levels needed for
/// the sumsets of S ∪ {0} to cover span(S).
inline WidthResult width_bfs(const StructureAlgebra<PrimeField>& P, const Identity& f,
                             uint64_t tuple_guard = (1u << 22),
                             uint64_t span_guard = (1u << 22)) {
  const PrimeField& fld = P.field();
  const int t = f.num_variables();
  long double card = 1;
  for (std::size_t i = 0; i < P.dim(); ++i) card *= fld.p();
  long double tuples = 1;
  for (int i = 0; i < t; ++i) tuples *= card;
  if (tuples > static_cast<long double>(tuple_guard))
    throw guard_error("width value sweep exceeds guard");
  if (card > static_cast<long double>(tuple_guard))
    throw guard_error("width closure sweep exceeds guard");

  // all elements of P (needed both for substitution tuples and for closure)
  std::vector<StructureAlgebra<PrimeField>::Vec> elements;
  {
    auto scalars = fld.enumerate();
    std::vector<uint32_t> odo(P.dim(), 0);
    for (;;) {
      auto v = P.zero_vec();
      for (std::size_t j = 0; j < P.dim(); ++j) v[j] = scalars[odo[j]];
      elements.push_back(std::move(v));
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
  }

  // value set of f
  std::set<std::vector<uint32_t>> closure;
  {
    std::vector<std::size_t> pick(t, 0);
    std::function<void(int)> rec = [&](int var) {
      if (var == t) {
        std::vector<StructureAlgebra<PrimeField>::Vec> subst;
        for (int v = 0; v < t; ++v) subst.push_back(elements[pick[v]]);
        auto val = detail::eval_identity(P, f, subst);
        bool nz = false;
        for (const auto& x : val) nz = nz || !x.is_zero();
        if (nz) closure.insert(detail_width::raw(val));
        return;
      }
      for (std::size_t e = 0; e < elements.size(); ++e) {
        pick[var] = e;
        rec(var + 1);
      }
    };
    rec(0);
  }

  // closure under all multiplications by elements of P
  std::vector<std::vector<uint32_t>> frontier(closure.begin(), closure.end());
  while (!frontier.empty()) {
    std::vector<std::vector<uint32_t>> next;
    for (const auto& sraw : frontier) {
      auto s = P.zero_vec();
      for (std::size_t j = 0; j < P.dim(); ++j) s[j] = fld.element(sraw[j]);
      for (const auto& e : elements) {
        for (auto prod : {P.mul(s, e), P.mul(e, s)}) {
          bool nz = false;
          for (const auto& x : prod) nz = nz || !x.is_zero();
          if (!nz) continue;
          auto r = detail_width::raw(prod);
          if (closure.insert(r).second) next.push_back(std::move(r));
        }
      }
    }
    frontier = std::move(next);
  }

  // span and BFS levels
  Matrix<PrimeField> rows(fld, 0, P.dim());
  for (const auto& sraw : closure) {
    std::vector<Fp> v(P.dim());
    for (std::size_t j = 0; j < P.dim(); ++j) v[j] = fld.element(sraw[j]);
    rows.append_row(v);
  }
  WidthResult out(Subspace<PrimeField>::span(rows));
  out.closure.assign(closure.begin(), closure.end());
  out.closure_size = closure.size();
  out.verbal_dim = out.span.dim();
  long double states = 1;
  for (std::size_t i = 0; i < out.span.dim(); ++i) states *= fld.p();
  if (states > static_cast<long double>(span_guard))
    throw guard_error("width BFS state space exceeds guard");

  std::size_t nstates = static_cast<std::size_t>(states);
  out.level.assign(nstates, -1);
  out.level[0] = 0;
  // closure elements as span indices
  std::vector<std::size_t> steps;
  for (const auto& sraw : out.closure) {
    std::vector<Fp> v(P.dim());
    for (std::size_t j = 0; j < P.dim(); ++j) v[j] = fld.element(sraw[j]);
    steps.push_back(detail_width::span_index(out.span, v, fld.p()));
  }
  // index arithmetic: adding a closure element = adding coordinate digits mod p
  auto add_idx = [&](std::size_t a, std::size_t b) {
    std::size_t r = 0, mul = 1;
    std::vector<uint32_t> da(out.span.dim()), db(out.span.dim());
    for (std::size_t k = out.span.dim(); k-- > 0;) {
      da[k] = a % fld.p();
      a /= fld.p();
      db[k] = b % fld.p();
      b /= fld.p();
    }
    for (std::size_t k = 0; k < out.span.dim(); ++k) r = r * fld.p() + (da[k] + db[k]) % fld.p();
    (void)mul;
    return r;
  };
  std::vector<std::size_t> bfs{0};
  int levels = 0;
  while (!bfs.empty()) {
    std::vector<std::size_t> next;
    for (auto s : bfs)
      for (auto st : steps) {
        std::size_t ns = add_idx(s, st);
        if (out.level[ns] < 0) {
          out.level[ns] = out.level[s] + 1;
          levels = std::max(levels, out.level[ns]);
          next.push_back(ns);
        }
      }
    bfs = std::move(next);
  }
  for (auto l : out.level)
    if (l < 0) throw std::logic_error("width BFS failed to cover the verbal ideal span");
  out.width = levels;
  return out;
}

/// Width of f over generic representatives across a range of ranks.
struct WidthTrendRow {
  int n;
  std::size_t ideal_dim;
  std::size_t verbal_dim;
  int width;
};

inline std::vector<WidthTrendRow> width_trend(const PrimitiveClass& cls, const Identity& f,
                                              const PrimeField& fld, int n_lo, int n_hi,
                                              uint64_t seed) {
  std::vector<WidthTrendRow> rows;
  std::mt19937_64 rng(seed);
  for (int n = n_lo; n <= n_hi; ++n) {
    auto Fn = relatively_free(cls, n, fld);
    TopAction<PrimeField> act(Fn, /*centrality_certified=*/true);
    auto gl = enumerate_gl(fld, n);
    auto K = sample_generic_ideal(act, gl, rng);
    auto q = quotient_by_top_subspace(Fn, act, K);
    auto w = width_bfs(q.algebra, f);
    rows.push_back({n, K.dim(), w.verbal_dim, w.width});
  }
  return rows;
}

}  // namespace nilgen

#endif
