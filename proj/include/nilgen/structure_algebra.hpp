#ifndef NILGEN_STRUCTURE_ALGEBRA_HPP
#define NILGEN_STRUCTURE_ALGEBRA_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nilgen/subspace.hpp"

namespace nilgen {

template <CoefficientField F>
class StructureAlgebra;

/// Collects structure-tensor entries (e_i e_j has coefficient c at e_k) and
/// freezes them into the CSR layout StructureAlgebra uses.
template <CoefficientField F>
class StructureAlgebraBuilder {
 public:
  using Elem = typename F::Elem;

  StructureAlgebraBuilder(F fld, std::size_t dim) : fld_(std::move(fld)), dim_(dim) {
    cells_.resize(dim_ * dim_);
  }

  void add_entry(int i, int j, int k, const Elem& c) {
    if (!c.is_zero()) cells_[std::size_t(i) * dim_ + j].emplace_back(k, c);
  }
  void set_product(int i, int j, const std::vector<Elem>& dense) {
    auto& cell = cells_[std::size_t(i) * dim_ + j];
    cell.clear();
    for (std::size_t k = 0; k < dense.size(); ++k)
      if (!dense[k].is_zero()) cell.emplace_back(static_cast<int>(k), dense[k]);
  }

  StructureAlgebra<F> build(std::vector<std::string> labels = {},
                            std::vector<int> degrees = {}) &&;

 private:
  friend class StructureAlgebra<F>;
  F fld_;
  std::size_t dim_;
  std::vector<std::vector<std::pair<int, Elem>>> cells_;
};

/// Finite-dimensional algebra over an exact field given by structure constants
/// (CSR over basis pairs). Immutable after construction; optionally carries
/// free-monomial labels and a degree grading (set by the constructions that
/// guarantee them, in which case the algebra is generated by its degree-1 part).
template <CoefficientField F>
class StructureAlgebra {
 public:
  using Elem = typename F::Elem;
  using Vec = std::vector<Elem>;

  StructureAlgebra(StructureAlgebraBuilder<F>&& b, std::vector<std::string> labels,
                   std::vector<int> degrees)
      : fld_(b.fld_), dim_(b.dim_), labels_(std::move(labels)), degrees_(std::move(degrees)) {
    offsets_.assign(dim_ * dim_ + 1, 0);
    std::size_t total = 0;
    for (std::size_t c = 0; c < b.cells_.size(); ++c) {
      offsets_[c] = total;
      total += b.cells_[c].size();
    }
    offsets_[dim_ * dim_] = total;
    entries_.reserve(total);
    for (auto& cell : b.cells_)
      for (auto& e : cell) entries_.push_back(std::move(e));
  }

  const F& field() const { return fld_; }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool graded() const { return !degrees_.empty(); }
  const std::vector<int>& degrees() const { return degrees_; }

  /// Sparse structure row for e_i * e_j.
  std::pair<const std::pair<int, Elem>*, const std::pair<int, Elem>*> product_entries(
      std::size_t i, std::size_t j) const {
    std::size_t c = i * dim_ + j;
    return {entries_.data() + offsets_[c], entries_.data() + offsets_[c + 1]};
  }

  Vec basis_product(std::size_t i, std::size_t j) const {
    Vec r(dim_, fld_.zero());
    auto [b, e] = product_entries(i, j);
    for (auto* p = b; p != e; ++p) r[p->first] = r[p->first] + p->second;
    return r;
  }

  Vec mul(const Vec& a, const Vec& b) const {
    Vec r(dim_, fld_.zero());
    for (std::size_t i = 0; i < dim_; ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (b[j].is_zero()) continue;
        Elem c = a[i] * b[j];
        auto [pb, pe] = product_entries(i, j);
        for (auto* p = pb; p != pe; ++p) r[p->first] = r[p->first] + c * p->second;
      }
    }
    return r;
  }

  Vec zero_vec() const { return Vec(dim_, fld_.zero()); }
  Vec basis_vec(std::size_t i) const {
    Vec v = zero_vec();
    v[i] = fld_.one();
    return v;
  }

  /// Matrix of left multiplication x -> e_i * x (acts on column vectors).
  Matrix<F> left_mul_matrix(std::size_t i) const {
    Matrix<F> m(fld_, dim_, dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      auto [pb, pe] = product_entries(i, j);
      for (auto* p = pb; p != pe; ++p) m(p->first, j) = m(p->first, j) + p->second;
    }
    return m;
  }
  Matrix<F> right_mul_matrix(std::size_t i) const {
    Matrix<F> m(fld_, dim_, dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      auto [pb, pe] = product_entries(j, i);
      for (auto* p = pb; p != pe; ++p) m(p->first, j) = m(p->first, j) + p->second;
    }
    return m;
  }

 private:
  F fld_;
  std::size_t dim_;
  std::vector<std::size_t> offsets_;
  std::vector<std::pair<int, Elem>> entries_;
  std::vector<std::string> labels_;
  std::vector<int> degrees_;
};

template <CoefficientField F>
StructureAlgebra<F> StructureAlgebraBuilder<F>::build(std::vector<std::string> labels,
                                                      std::vector<int> degrees) && {
  return StructureAlgebra<F>(std::move(*this), std::move(labels), std::move(degrees));
}

/// Linear span of all products ab, a in A, b in B (bilinearity reduces this
/// to products of basis vectors).
template <CoefficientField F>
Subspace<F> subspace_product(const StructureAlgebra<F>& P, const Subspace<F>& A,
                             const Subspace<F>& B) {
  if (A.ambient_dim() != P.dim() || B.ambient_dim() != P.dim())
    throw precondition_error("subspace/algebra ambient mismatch");
  RrefAccumulator<F> acc(P.field(), P.dim());
  for (std::size_t i = 0; i < A.dim(); ++i) {
    auto a = A.basis().row(i);
    for (std::size_t j = 0; j < B.dim(); ++j) {
      if (acc.rank() == P.dim()) break;
      acc.insert(P.mul(a, B.basis().row(j)));
    }
  }
  return Subspace<F>::span(acc.to_matrix());
}

/// Descending power series P = P^1 ⊇ P^2 ⊇ ..., ending with the first zero or
/// stabilized term. P^i is the span of all degree-i monomial values, computed
/// by the full convolution sum_k P^k P^(i-k) (nonassociative monomials of
/// degree i factor arbitrarily). Graded algebras generated in degree one take
/// the coordinate shortcut; the generic convolution is kept as the oracle.
template <CoefficientField F>
std::vector<Subspace<F>> power_series(const StructureAlgebra<F>& P, bool force_generic = false) {
  std::vector<Subspace<F>> out;
  out.push_back(Subspace<F>::full(P.field(), P.dim()));
  if (P.graded() && !force_generic) {
    int maxdeg = 0;
    for (int d : P.degrees()) maxdeg = std::max(maxdeg, d);
    for (int i = 2;; ++i) {
      Matrix<F> rows(P.field(), 0, P.dim());
      for (std::size_t j = 0; j < P.dim(); ++j)
        if (P.degrees()[j] >= i) {
          auto v = P.zero_vec();
          v[j] = P.field().one();
          rows.append_row(v);
        }
      out.push_back(Subspace<F>::span(rows));
      if (out.back().dim() == 0 || i > maxdeg) break;
    }
    return out;
  }
  for (int i = 2;; ++i) {
    RrefAccumulator<F> acc(P.field(), P.dim());
    for (int k = 1; k < i; ++k) {
      const auto& A = out[k - 1];
      const auto& B = out[i - k - 1];
      for (std::size_t a = 0; a < A.dim(); ++a)
        for (std::size_t b = 0; b < B.dim(); ++b)
          acc.insert(P.mul(A.basis().row(a), B.basis().row(b)));
    }
    Subspace<F> next = Subspace<F>::span(acc.to_matrix());
    bool stable = next == out.back();
    out.push_back(std::move(next));
    if (out.back().dim() == 0 || stable) break;
  }
  return out;
}

/// True if P^(c+1) = 0; the series length certifies the nilpotency index.
template <CoefficientField F>
bool is_nilpotent(const StructureAlgebra<F>& P) {
  auto ps = power_series(P);
  return ps.back().dim() == 0;
}

/// Kernel of multiplication by the listed basis elements only. With the
/// c+1 free generators of a relatively free algebra this is the Lemma-style
/// shortcut; it must agree with the full annihilator there.
template <CoefficientField F>
Subspace<F> annihilator_against(const StructureAlgebra<F>& P,
                                const std::vector<std::size_t>& gens) {
  const F& fld = P.field();
  RrefAccumulator<F> rowspace(fld, P.dim());
  for (std::size_t gi : gens) {
    for (bool left : {true, false}) {
      Matrix<F> m = left ? P.left_mul_matrix(gi) : P.right_mul_matrix(gi);
      for (std::size_t r = 0; r < P.dim(); ++r) {
        if (rowspace.rank() == P.dim()) break;
        rowspace.insert(m.row(r));
      }
    }
  }
  return Subspace<F>::span(rowspace.to_matrix().null_space());
}

/// Annihilator I(P) = {x | ax = xa = 0 for all a}: kernel of the stacked
/// left/right multiplication maps, accumulated row by row.
template <CoefficientField F>
Subspace<F> annihilator(const StructureAlgebra<F>& P) {
  std::vector<std::size_t> gens(P.dim());
  for (std::size_t i = 0; i < P.dim(); ++i) gens[i] = i;
  return annihilator_against(P, gens);
}

/// Quotient algebra P/K together with the projection (dim Q × dim P, acting on
/// column vectors) and the coset-representative lift (dim P × dim Q). Coset
/// representatives are the non-pivot coordinates of K's RREF basis.
template <CoefficientField F>
struct QuotientResult {
  StructureAlgebra<F> algebra;
  Matrix<F> projection;
  Matrix<F> lift;
  std::vector<std::size_t> kept;  // coordinates of P representing Q's basis
};

template <CoefficientField F>
QuotientResult<F> quotient(const StructureAlgebra<F>& P, const Subspace<F>& K) {
  const F& fld = P.field();
  if (K.ambient_dim() != P.dim()) throw precondition_error("ideal ambient mismatch");
  auto acc = K.accumulator();
  std::vector<bool> is_pivot(P.dim(), false);
  for (auto c : acc.pivots()) is_pivot[c] = true;
  std::vector<std::size_t> kept;
  for (std::size_t c = 0; c < P.dim(); ++c)
    if (!is_pivot[c]) kept.push_back(c);
  std::size_t qd = kept.size();

  Matrix<F> proj(fld, qd, P.dim());
  // pi(e_c) for kept c is the corresponding quotient basis vector; for a pivot
  // column, reduce e_pivot by K's rows: e_p ≡ -sum(later coords) mod K.
  for (std::size_t qi = 0; qi < qd; ++qi) proj(qi, kept[qi]) = fld.one();
  for (std::size_t r = 0; r < acc.rank(); ++r) {
    std::size_t p = acc.pivots()[r];
    const auto& row = acc.rows()[r];
    for (std::size_t qi = 0; qi < qd; ++qi) {
      if (kept[qi] > p && !row[kept[qi]].is_zero()) proj(qi, p) = -row[kept[qi]];
    }
  }
  Matrix<F> lift(fld, P.dim(), qd);
  for (std::size_t qi = 0; qi < qd; ++qi) lift(kept[qi], qi) = fld.one();

  StructureAlgebraBuilder<F> b(fld, qd);
  for (std::size_t i = 0; i < qd; ++i)
    for (std::size_t j = 0; j < qd; ++j) {
      auto prod = P.basis_product(kept[i], kept[j]);
      b.set_product(static_cast<int>(i), static_cast<int>(j), proj.apply(prod));
    }

  std::vector<std::string> labels;
  if (!P.labels().empty())
    for (auto c : kept) labels.push_back(P.labels()[c]);
  std::vector<int> degrees;
  if (P.graded()) {
    // the quotient inherits the grading iff every K basis row is homogeneous
    bool graded = true;
    for (std::size_t r = 0; r < acc.rank() && graded; ++r) {
      int d = -1;
      for (std::size_t c = 0; c < P.dim(); ++c)
        if (!acc.rows()[r][c].is_zero()) {
          if (d < 0) d = P.degrees()[c];
          else if (d != P.degrees()[c]) graded = false;
        }
    }
    if (graded)
      for (auto c : kept) degrees.push_back(P.degrees()[c]);
  }
  return {std::move(b).build(std::move(labels), std::move(degrees)), std::move(proj),
          std::move(lift), std::move(kept)};
}

/// Ascending annihilator series I_1 ⊆ I_2 ⊆ ... ⊆ P (I_k is the preimage of
/// I(P/I_{k-1})); ends when the series stabilizes (at P for nilpotent P).
template <CoefficientField F>
std::vector<Subspace<F>> annihilator_series(const StructureAlgebra<F>& P) {
  std::vector<Subspace<F>> out;
  out.push_back(annihilator(P));
  for (;;) {
    const Subspace<F>& prev = out.back();
    if (prev.dim() == P.dim()) break;
    auto q = quotient(P, prev);
    Subspace<F> annq = annihilator(q.algebra);
    Matrix<F> rows = prev.basis();
    for (std::size_t i = 0; i < annq.dim(); ++i)
      rows.append_row(q.lift.apply(annq.basis().row(i)));
    Subspace<F> next = Subspace<F>::span(rows);
    if (next == prev) break;  // non-nilpotent: series stalls below P
    out.push_back(std::move(next));
  }
  return out;
}

/// True iff P·S + S·P ⊆ S.
template <CoefficientField F>
bool is_ideal(const StructureAlgebra<F>& P, const Subspace<F>& S) {
  if (S.ambient_dim() != P.dim()) throw precondition_error("subspace ambient mismatch");
  auto acc = S.accumulator();
  for (std::size_t r = 0; r < S.dim(); ++r) {
    auto v = S.basis().row(r);
    for (std::size_t i = 0; i < P.dim(); ++i) {
      if (!acc.contains(P.mul(P.basis_vec(i), v))) return false;
      if (!acc.contains(P.mul(v, P.basis_vec(i)))) return false;
    }
  }
  return true;
}

/// Subspace with an ideal certificate checked at construction.
template <CoefficientField F>
struct IdealHandle {
  Subspace<F> subspace;

  IdealHandle(const StructureAlgebra<F>& P, Subspace<F> s) : subspace(std::move(s)) {
    if (!is_ideal(P, subspace)) throw precondition_error("subspace is not an ideal");
  }
};

/// Least ideal containing S, by multiplication fixpoint.
template <CoefficientField F>
IdealHandle<F> ideal_generated_by(const StructureAlgebra<F>& P, const Subspace<F>& S) {
  RrefAccumulator<F> acc(P.field(), P.dim());
  std::vector<std::vector<typename F::Elem>> frontier;
  for (std::size_t i = 0; i < S.dim(); ++i) {
    auto v = S.basis().row(i);
    if (acc.insert(v)) frontier.push_back(v);
  }
  while (!frontier.empty()) {
    std::vector<std::vector<typename F::Elem>> next;
    for (const auto& v : frontier)
      for (std::size_t i = 0; i < P.dim(); ++i) {
        auto l = P.mul(P.basis_vec(i), v);
        if (acc.insert(l)) next.push_back(std::move(l));
        auto r = P.mul(v, P.basis_vec(i));
        if (acc.insert(r)) next.push_back(std::move(r));
      }
    frontier = std::move(next);
  }
  return IdealHandle<F>(P, Subspace<F>::span(acc.to_matrix()));
}

/// Z_{q-1}-grading of §-style quasihomogeneous components: residue class k
/// holds the span of basis elements whose degree is ≡ k (mod q-1).
template <CoefficientField F>
struct QuasiGrading {
  uint64_t modulus;  // q-1, with q=2 giving the single-component Z_1 grading
  std::map<int, Subspace<F>> components;
};

template <CoefficientField F>
QuasiGrading<F> quasihomogeneous_decomposition(const StructureAlgebra<F>& P) {
  const F& fld = P.field();
  if (!fld.is_finite()) throw precondition_error("quasihomogeneous grading needs a finite field");
  if (!P.graded()) throw precondition_error("carrier has no degree grading");
  uint64_t q = fld.size();
  uint64_t mod = q >= 2 ? q - 1 : 1;
  QuasiGrading<F> g{mod, {}};
  std::map<int, Matrix<F>> rows;
  for (std::size_t i = 0; i < P.dim(); ++i) {
    int k = static_cast<int>(P.degrees()[i] % mod);
    auto it = rows.find(k);
    if (it == rows.end()) it = rows.emplace(k, Matrix<F>(fld, 0, P.dim())).first;
    it->second.append_row(P.basis_vec(i));
  }
  for (auto& [k, m] : rows) g.components.emplace(k, Subspace<F>::span(m));
  return g;
}

}  // namespace nilgen

#endif
