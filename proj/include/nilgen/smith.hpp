#ifndef NILGEN_SMITH_HPP
#define NILGEN_SMITH_HPP

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "nilgen/poly.hpp"
#include "nilgen/subspace.hpp"

namespace nilgen {

/// V as an F[t]-module through a linear operator B (t acts as B), decomposed
/// into cyclic summands V_i = F[t] v_i with annihilators (f_i), f_1 | f_2 | ... | f_r.
template <CoefficientField F>
struct InvariantFactorDecomposition {
  std::vector<Poly<F>> factors;                          // monic, ascending divisibility
  std::vector<std::vector<typename F::Elem>> generators;  // one cyclic generator per factor

  std::size_t rank() const { return factors.size(); }
};

namespace detail {

/// Square polynomial matrix with row operations mirrored on a unimodular U
/// such that original = U * current * (column ops). Only U is tracked; it is
/// what the cyclic generators are read from.
template <CoefficientField F>
struct SmithWorkspace {
  using P = Poly<F>;
  F fld;
  std::size_t m;
  std::vector<std::vector<P>> a;  // the matrix being diagonalized
  std::vector<std::vector<P>> u;  // accumulated inverse row ops

  SmithWorkspace(F f, const Matrix<F>& B) : fld(f), m(B.rows()) {
    P zero(fld), one = P::constant(fld, fld.one());
    a.assign(m, std::vector<P>(m, zero));
    u.assign(m, std::vector<P>(m, zero));
    for (std::size_t i = 0; i < m; ++i) {
      u[i][i] = one;
      for (std::size_t j = 0; j < m; ++j) {
        // tI - B
        P e = P::constant(fld, -B(i, j));
        if (i == j) e = e + P(fld, {fld.zero(), fld.one()});
        a[i][j] = e;
      }
    }
  }

  // row_i -= q * row_j   =>   col_j(U) += q * col_i(U)
  void row_axpy(std::size_t i, std::size_t j, const P& q) {
    for (std::size_t k = 0; k < m; ++k) a[i][k] = a[i][k] - q * a[j][k];
    for (std::size_t k = 0; k < m; ++k) u[k][j] = u[k][j] + q * u[k][i];
  }
  void row_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(a[i], a[j]);
    for (std::size_t k = 0; k < m; ++k) std::swap(u[k][i], u[k][j]);
  }
  // row_i *= s (unit)  =>  col_i(U) *= s^{-1}
  void row_scale(std::size_t i, const typename F::Elem& s) {
    for (std::size_t k = 0; k < m; ++k) a[i][k] = a[i][k].scaled(s);
    auto sinv = s.inverse();
    for (std::size_t k = 0; k < m; ++k) u[k][i] = u[k][i].scaled(sinv);
  }
  // row_i += row_j  =>  col_j(U) -= col_i(U)
  void row_add(std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < m; ++k) a[i][k] = a[i][k] + a[j][k];
    for (std::size_t k = 0; k < m; ++k) u[k][j] = u[k][j] - u[k][i];
  }
  void col_axpy(std::size_t j, std::size_t i, const P& q) {  // col_j -= q * col_i
    for (std::size_t k = 0; k < m; ++k) a[k][j] = a[k][j] - q * a[k][i];
  }
  void col_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < m; ++k) std::swap(a[k][i], a[k][j]);
  }
};

}  // namespace detail

/// Invariant factors of V (dim m) as an F[t]-module via B, computed from the
/// Smith normal form of tI - B with fraction-free polynomial row/column
/// reduction, pivoting on minimal-degree entries. Cyclic generators are read
/// off the tracked unimodular factor, so the decomposition is explicit.
template <CoefficientField F>
InvariantFactorDecomposition<F> invariant_factors(const Matrix<F>& B) {
  if (B.rows() != B.cols()) throw precondition_error("operator must be square");
  const F& fld = B.field();
  const std::size_t m = B.rows();
  InvariantFactorDecomposition<F> out;
  if (m == 0) return out;

  detail::SmithWorkspace<F> w(fld, B);
  auto& a = w.a;

  for (std::size_t k = 0; k < m; ++k) {
    for (;;) {
      // minimal-degree nonzero pivot in the trailing submatrix
      std::size_t pi = m, pj = m;
      int best = -1;
      for (std::size_t i = k; i < m; ++i)
        for (std::size_t j = k; j < m; ++j)
          if (!a[i][j].is_zero() && (best < 0 || a[i][j].degree() < best)) {
            best = a[i][j].degree();
            pi = i;
            pj = j;
          }
      if (best < 0) break;  // trailing block zero
      w.row_swap(k, pi);
      w.col_swap(k, pj);

      bool clean = true;
      for (std::size_t i = k + 1; i < m; ++i) {
        if (a[i][k].is_zero()) continue;
        auto q = a[i][k] / a[k][k];
        w.row_axpy(i, k, q);
        if (!a[i][k].is_zero()) clean = false;  // remainder left, degree dropped
      }
      for (std::size_t j = k + 1; j < m; ++j) {
        if (a[k][j].is_zero()) continue;
        auto q = a[k][j] / a[k][k];
        w.col_axpy(j, k, q);
        if (!a[k][j].is_zero()) clean = false;
      }
      if (!clean) continue;

      // ensure the pivot divides every remaining entry before moving on
      bool divides_all = true;
      for (std::size_t i = k + 1; i < m && divides_all; ++i)
        for (std::size_t j = k + 1; j < m && divides_all; ++j)
          if (!a[i][j].is_zero() && !(a[i][j] % a[k][k]).is_zero()) {
            w.row_add(k, i);
            divides_all = false;
          }
      if (divides_all) break;
    }
    if (!a[k][k].is_zero() && a[k][k].leading() != fld.one())
      w.row_scale(k, a[k][k].leading().inverse());
  }

  for (std::size_t k = 0; k < m; ++k) {
    if (a[k][k].is_unit()) continue;
    out.factors.push_back(a[k][k]);
    std::vector<typename F::Elem> gen(m, fld.zero());
    for (std::size_t j = 0; j < m; ++j) {
      if (w.u[j][k].is_zero()) continue;
      std::vector<typename F::Elem> e(m, fld.zero());
      e[j] = fld.one();
      auto contrib = w.u[j][k].apply_to(B, e);
      for (std::size_t t = 0; t < m; ++t) gen[t] = gen[t] + contrib[t];
    }
    out.generators.push_back(std::move(gen));
  }
  return out;
}

/// Block companion matrix of the invariant factors together with the explicit
/// change of basis (columns v_i, B v_i, ..., B^{deg-1} v_i). Satisfies B*T = T*C
/// with T invertible, certifying the decomposition.
template <CoefficientField F>
std::pair<Matrix<F>, Matrix<F>> companion_certificate(const Matrix<F>& B,
                                                      const InvariantFactorDecomposition<F>& ifd) {
  const F& fld = B.field();
  const std::size_t m = B.rows();
  Matrix<F> T(fld, m, m);  // columns are the chain vectors
  Matrix<F> C(fld, m, m);
  std::size_t col = 0;
  for (std::size_t i = 0; i < ifd.factors.size(); ++i) {
    const auto& f = ifd.factors[i];
    std::size_t d = static_cast<std::size_t>(f.degree());
    std::vector<typename F::Elem> v = ifd.generators[i];
    std::size_t base = col;
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t t = 0; t < m; ++t) T(t, col) = v[t];
      if (j + 1 < d) C(base + j + 1, base + j) = fld.one();
      v = B.apply(v);
      ++col;
    }
    for (std::size_t j = 0; j < d; ++j) C(base + j, base + d - 1) = -f.coeff(j);
  }
  return {T, C};
}

/// Lemma-style splitting: subspaces U ⊆ W with dim W = ell, dim U = m - ell,
/// dim B(U) = dim U and V = W ⊕ B(U), built by even/odd interleaving of the
/// power chains on each cyclic summand, largest summands first. The admissible
/// interval is the achievable one, [m - sum floor(m_i/2), m]; it contains the
/// lemma's stated interval [ceil((2m+r)/3), m].
template <CoefficientField F>
std::pair<Subspace<F>, Subspace<F>> split_pair(const Matrix<F>& B, std::size_t ell) {
  const F& fld = B.field();
  const std::size_t m = B.rows();
  auto ifd = invariant_factors(B);

  struct Summand {
    std::size_t deg;
    std::vector<std::vector<typename F::Elem>> chain;  // e_0..e_{deg-1}
  };
  std::vector<Summand> summands;
  std::size_t u_capacity = 0;
  for (std::size_t i = 0; i < ifd.factors.size(); ++i) {
    Summand s;
    s.deg = static_cast<std::size_t>(ifd.factors[i].degree());
    u_capacity += s.deg / 2;
    auto v = ifd.generators[i];
    for (std::size_t j = 0; j < s.deg; ++j) {
      s.chain.push_back(v);
      v = B.apply(v);
    }
    summands.push_back(std::move(s));
  }
  if (ell > m || m - ell > u_capacity)
    throw precondition_error("ell outside admissible interval [" +
                             std::to_string(m - u_capacity) + "," + std::to_string(m) + "]");
  std::sort(summands.begin(), summands.end(),
            [](const Summand& x, const Summand& y) { return x.deg > y.deg; });

  std::size_t need_u = m - ell;
  Matrix<F> ubasis(fld, 0, m), wbasis(fld, 0, m);
  for (auto& s : summands) {
    std::size_t ui = std::min(s.deg / 2, need_u);
    need_u -= ui;
    for (std::size_t j = 0; j < ui; ++j) ubasis.append_row(s.chain[2 * j]);
    for (std::size_t j = 0; j < s.deg; ++j) {
      bool first_odd = (j % 2 == 1) && (j < 2 * ui);
      if (!first_odd) wbasis.append_row(s.chain[j]);
    }
  }
  return {Subspace<F>::span(ubasis), Subspace<F>::span(wbasis)};
}

/// If rank_B(V) > m/2 there is an eigenvalue lambda with an eigenspace of
/// dimension >= rank; returns that certified pair, or nullopt when the first
/// invariant factor is not linear (which forces rank <= m/2).
template <CoefficientField F>
std::optional<std::pair<typename F::Elem, Subspace<F>>> large_eigenspace(const Matrix<F>& B) {
  const F& fld = B.field();
  auto ifd = invariant_factors(B);
  if (ifd.factors.empty()) return std::nullopt;
  if (ifd.factors.front().degree() != 1) return std::nullopt;
  typename F::Elem lambda = -ifd.factors.front().coeff(0);
  Poly<F> lin = Poly<F>::t_minus(fld, lambda);
  Matrix<F> basis(fld, 0, B.rows());
  for (std::size_t i = 0; i < ifd.factors.size(); ++i) {
    auto q = ifd.factors[i] / lin;
    basis.append_row(q.apply_to(B, ifd.generators[i]));
  }
  return std::make_pair(lambda, Subspace<F>::span(basis));
}

/// Checks dim U_1 + ... + dim U_n <= c * dim(U_1 + ... + U_n) under the
/// lemma's hypothesis: every part V_j of the independent decomposition
/// V_1 ⊕ ... ⊕ V_t = V receives a nonzero projection from at most c of the
/// subspaces U_i. Hypothesis violations are reported distinctly.
template <CoefficientField F>
bool component_bound_check(const std::vector<Subspace<F>>& parts,
                           const std::vector<Subspace<F>>& us, std::size_t c) {
  if (parts.empty()) throw precondition_error("no parts given");
  const F& fld = parts.front().field();
  std::size_t ambient = parts.front().ambient_dim();
  std::size_t total = 0;
  Matrix<F> stacked(fld, 0, ambient);
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (const auto& p : parts) {
    ranges.emplace_back(total, total + p.dim());
    total += p.dim();
    stacked = vstack(stacked, p.basis());
  }
  if (total != ambient || stacked.rank() != ambient)
    throw precondition_error("parts are not an independent decomposition of the ambient space");
  Matrix<F> inv_t = stacked.inverse().transpose();

  std::vector<std::size_t> part_hits(parts.size(), 0);
  std::size_t dims = 0;
  Matrix<F> all(fld, 0, ambient);
  for (const auto& u : us) {
    std::vector<bool> hits(parts.size(), false);
    for (std::size_t i = 0; i < u.dim(); ++i) {
      auto coords = inv_t.apply(u.basis().row(i));  // row vector * stacked^{-1}
      for (std::size_t pidx = 0; pidx < parts.size(); ++pidx)
        for (std::size_t k = ranges[pidx].first; k < ranges[pidx].second; ++k)
          if (!coords[k].is_zero()) hits[pidx] = true;
    }
    for (std::size_t pidx = 0; pidx < parts.size(); ++pidx) part_hits[pidx] += hits[pidx];
    dims += u.dim();
    all = vstack(all, u.basis());
  }
  for (std::size_t pidx = 0; pidx < parts.size(); ++pidx)
    if (part_hits[pidx] > c)
      throw precondition_error("a part receives nonzero projections from more than c subspaces");
  return dims <= c * Subspace<F>::span(all).dim();
}

}  // namespace nilgen

#endif
