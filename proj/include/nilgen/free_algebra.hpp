#ifndef NILGEN_FREE_ALGEBRA_HPP
#define NILGEN_FREE_ALGEBRA_HPP

#include <map>
#include <memory>

#include "nilgen/monomial.hpp"
#include "nilgen/structure_algebra.hpp"

namespace nilgen {

/// Element of a free nilpotent algebra: sparse monomial-index -> coefficient map.
template <CoefficientField F>
struct FreeElement {
  using Elem = typename F::Elem;
  std::map<int, Elem> coeffs;  // no zero coefficients stored

  void add(int mono, const Elem& c) {
    if (c.is_zero()) return;
    auto it = coeffs.find(mono);
    if (it == coeffs.end()) {
      coeffs.emplace(mono, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) coeffs.erase(it);
    }
  }

  std::vector<Elem> to_dense(const F& fld, std::size_t dim) const {
    std::vector<Elem> v(dim, fld.zero());
    for (const auto& [m, c] : coeffs) v[m] = c;
    return v;
  }
};

/// The free c-step nilpotent algebra F(N_c, x1..xn): interned monomial basis
/// of all trees of degree <= c with the grafting product, plus its degree and
/// multidegree gradings.
class FreeNilpotentAlgebra {
 public:
  FreeNilpotentAlgebra(int n, int c, std::size_t basis_guard = 50000)
      : ctx_(std::make_shared<MonomialContext>(n, c, basis_guard)) {}

  const MonomialContext& context() const { return *ctx_; }
  std::shared_ptr<const MonomialContext> context_ptr() const { return ctx_; }
  int generators() const { return ctx_->generators(); }
  int nil_class() const { return ctx_->nil_class(); }
  std::size_t dim() const { return ctx_->size(); }
  std::size_t degree_component_dim(int k) const { return ctx_->degree_count(k); }

  template <CoefficientField F>
  FreeElement<F> product(const F& fld, const FreeElement<F>& a, const FreeElement<F>& b) const {
    FreeElement<F> r;
    for (const auto& [u, cu] : a.coeffs)
      for (const auto& [v, cv] : b.coeffs) {
        int w = ctx_->product(u, v);
        if (w != MonomialContext::kZero) r.add(w, cu * cv);
      }
    return r;
  }

  /// Monomial algebra on the interned basis; products are single table lookups.
  template <CoefficientField F>
  StructureAlgebra<F> to_structure_algebra(const F& fld) const {
    StructureAlgebraBuilder<F> b(fld, ctx_->size());
    for (std::size_t i = 0; i < ctx_->size(); ++i)
      for (std::size_t j = 0; j < ctx_->size(); ++j) {
        int w = ctx_->product(static_cast<int>(i), static_cast<int>(j));
        if (w != MonomialContext::kZero)
          b.add_entry(static_cast<int>(i), static_cast<int>(j), w, fld.one());
      }
    std::vector<int> degs(ctx_->size());
    std::vector<std::string> labels(ctx_->size());
    for (std::size_t i = 0; i < ctx_->size(); ++i) {
      degs[i] = ctx_->degree(static_cast<int>(i));
      labels[i] = ctx_->str(static_cast<int>(i));
    }
    return std::move(b).build(std::move(labels), std::move(degs));
  }

 private:
  std::shared_ptr<MonomialContext> ctx_;
};

}  // namespace nilgen

#endif
