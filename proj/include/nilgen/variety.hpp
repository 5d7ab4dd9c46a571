#ifndef NILGEN_VARIETY_HPP
#define NILGEN_VARIETY_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nilgen/free_algebra.hpp"
#include "nilgen/structure_algebra.hpp"

namespace nilgen {

/// How identity consequences are spanned.
///  - multihomogeneous: identities are split into the multihomogeneous
///    components of their full polarization, then substituted by single
///    monomials. Exact for infinite fields and for multilinear systems.
///  - exact_finite: no splitting; substitutions run over single monomials and
///    all two-monomial field combinations. Exact for per-variable degree <= 2;
///    higher degrees are rejected.
enum class VarietyMode { multihomogeneous, exact_finite };

/// A primitive class (variety) of algebras: nilpotency index plus identities.
class PrimitiveClass {
 public:
  PrimitiveClass(int c, std::vector<Identity> identities, VarietyMode mode, std::string name)
      : c_(c), mode_(mode), name_(std::move(name)), identities_(std::move(identities)) {
    if (c_ < 1) throw input_error("nilpotency index must be >= 1");
    if (mode_ == VarietyMode::multihomogeneous) {
      for (const auto& id : identities_)
        for (const auto& comp : id.polarize()) polarized_.push_back(comp);
    } else {
      for (const auto& id : identities_)
        if (id.max_pervar_degree() > 2)
          throw input_error(
              "exact-finite mode supports identities of per-variable degree <= 2 only");
    }
  }

  static PrimitiveClass nilpotent(int c) { return {c, {}, VarietyMode::multihomogeneous, "nilpotent"}; }
  static PrimitiveClass commutative(int c) {
    return {c, {Identity::parse("(y1*y2) - (y2*y1)")}, VarietyMode::multihomogeneous, "commutative"};
  }
  static PrimitiveClass anticommutative(int c) {
    return {c,
            {Identity::parse("(y1*y1)"), Identity::parse("(y1*y2) + (y2*y1)")},
            VarietyMode::multihomogeneous,
            "anticommutative"};
  }
  static PrimitiveClass lie(int c) {
    // x^2 is included explicitly so char-2 behavior matches the standard definition
    return {c,
            {Identity::parse("(y1*y1)"),
             Identity::parse("((y1*y2)*y3) + ((y2*y3)*y1) + ((y3*y1)*y2)")},
            VarietyMode::multihomogeneous,
            "lie"};
  }
  static PrimitiveClass associative(int c) {
    return {c, {Identity::parse("((y1*y2)*y3) - (y1*(y2*y3))")}, VarietyMode::multihomogeneous,
            "associative"};
  }
  static PrimitiveClass builtin(const std::string& name, int c);

  PrimitiveClass with_extra_identity(const Identity& id, const std::string& new_name) const {
    auto ids = identities_;
    ids.push_back(id);
    return PrimitiveClass(c_, std::move(ids), mode_, new_name);
  }

  int c() const { return c_; }
  VarietyMode mode() const { return mode_; }
  const std::string& name() const { return name_; }
  const std::vector<Identity>& identities() const { return identities_; }
  /// Generator identities actually substituted (components in multihomogeneous
  /// mode, the raw identities in exact-finite mode).
  const std::vector<Identity>& generators() const {
    return mode_ == VarietyMode::multihomogeneous ? polarized_ : identities_;
  }

 private:
  int c_;
  VarietyMode mode_;
  std::string name_;
  std::vector<Identity> identities_;
  std::vector<Identity> polarized_;
};

inline PrimitiveClass PrimitiveClass::builtin(const std::string& name, int c) {
  if (name == "nilpotent") return nilpotent(c);
  if (name == "commutative") return commutative(c);
  if (name == "anticommutative") return anticommutative(c);
  if (name == "lie") return lie(c);
  if (name == "associative") return associative(c);
  throw input_error("unknown built-in class: " + name);
}

struct BuildGuards {
  std::size_t basis_guard = 50000;        // free-monomial count
  std::size_t consequence_guard = 4000;   // free dim for monolithic spans
};

namespace detail {

/// Evaluates an identity term tree over FreeElement substitutions inside the
/// truncated free algebra.
template <CoefficientField F>
FreeElement<F> eval_tree_free(const F& fld, const MonomialContext& ctx, const Identity& id,
                              int node, const std::vector<FreeElement<F>>& subst) {
  const auto& nd = id.node(node);
  if (nd.left < 0) return subst[nd.var - 1];
  auto l = eval_tree_free(fld, ctx, id, nd.left, subst);
  auto r = eval_tree_free(fld, ctx, id, nd.right, subst);
  FreeElement<F> out;
  for (const auto& [u, cu] : l.coeffs)
    for (const auto& [v, cv] : r.coeffs) {
      int w = ctx.product(u, v);
      if (w != MonomialContext::kZero) out.add(w, cu * cv);
    }
  return out;
}

/// Minimal degree present in a substitution element (for pruning).
template <CoefficientField F>
int min_degree(const MonomialContext& ctx, const FreeElement<F>& e) {
  int d = ctx.nil_class() + 1;
  for (const auto& [m, c] : e.coeffs) d = std::min(d, ctx.degree(m));
  return d;
}

}  // namespace detail

/// Span of all substitution values of the class identities inside the free
/// c-step nilpotent algebra on n generators, closed under left/right
/// multiplication by basis monomials until fixpoint. Returned in free-algebra
/// coordinates (the verbal ideal V(F(X)) truncated at degree c).
template <CoefficientField F>
Subspace<F> consequence_span(const PrimitiveClass& cls, int n, const F& fld,
                             const BuildGuards& guards = {},
                             std::shared_ptr<const MonomialContext> ctx_in = nullptr) {
  auto ctx_ptr = ctx_in ? ctx_in
                        : std::make_shared<const MonomialContext>(n, cls.c(), guards.basis_guard);
  const MonomialContext& ctx = *ctx_ptr;
  if (ctx.size() > guards.consequence_guard)
    throw guard_error("free dimension " + std::to_string(ctx.size()) +
                      " exceeds consequence-span guard " +
                      std::to_string(guards.consequence_guard));
  const int c = cls.c();

  // substitution elements
  std::vector<FreeElement<F>> elems;
  for (std::size_t m = 0; m < ctx.size(); ++m) {
    FreeElement<F> e;
    e.add(static_cast<int>(m), fld.one());
    elems.push_back(std::move(e));
  }
  if (cls.mode() == VarietyMode::exact_finite) {
    if (!fld.is_finite())
      throw precondition_error("exact-finite mode requires a finite field");
    auto scalars = fld.enumerate();
    for (std::size_t m1 = 0; m1 < ctx.size(); ++m1)
      for (std::size_t m2 = m1 + 1; m2 < ctx.size(); ++m2)
        for (const auto& a : scalars)
          for (const auto& b : scalars) {
            if (a.is_zero() || b.is_zero()) continue;  // reduces to a single monomial
            FreeElement<F> e;
            e.add(static_cast<int>(m1), a);
            e.add(static_cast<int>(m2), b);
            elems.push_back(std::move(e));
          }
  }

  RrefAccumulator<F> acc(fld, ctx.size());
  std::vector<std::vector<typename F::Elem>> frontier;
  auto insert_value = [&](const FreeElement<F>& val) {
    if (val.coeffs.empty()) return;
    auto dense = val.to_dense(fld, ctx.size());
    if (acc.insert(dense)) frontier.push_back(std::move(dense));
  };

  for (const auto& gen : cls.generators()) {
    int t = gen.num_variables();
    if (t == 0) continue;
    std::vector<int> pervar(t);
    for (int v = 1; v <= t; ++v) pervar[v - 1] = gen.pervar_degree(v);
    // odometer over substitution choices with degree pruning
    std::vector<std::size_t> choice(t, 0);
    std::function<void(int, int)> rec = [&](int var, int used) {
      if (var == t) {
        std::vector<FreeElement<F>> subst;
        for (int v = 0; v < t; ++v) subst.push_back(elems[choice[v]]);
        FreeElement<F> total;
        for (const auto& term : gen.terms()) {
          auto ce = fld.from_int(term.coeff);
          if (ce.is_zero()) continue;
          auto val = detail::eval_tree_free(fld, ctx, gen, term.tree, subst);
          for (const auto& [m, cf] : val.coeffs) total.add(m, ce * cf);
        }
        insert_value(total);
        return;
      }
      for (std::size_t e = 0; e < elems.size(); ++e) {
        int md = detail::min_degree(ctx, elems[e]);
        if (used + pervar[var] * md > c) continue;
        choice[var] = e;
        rec(var + 1, used + pervar[var] * md);
      }
    };
    rec(0, 0);
  }

  // ideal closure: multiply new vectors by basis monomials on both sides
  while (!frontier.empty()) {
    std::vector<std::vector<typename F::Elem>> next;
    for (const auto& v : frontier) {
      for (std::size_t m = 0; m < ctx.size(); ++m) {
        std::vector<typename F::Elem> lv(ctx.size(), fld.zero());
        std::vector<typename F::Elem> rv(ctx.size(), fld.zero());
        bool lnz = false, rnz = false;
        for (std::size_t j = 0; j < ctx.size(); ++j) {
          if (v[j].is_zero()) continue;
          int lw = ctx.product(static_cast<int>(m), static_cast<int>(j));
          if (lw != MonomialContext::kZero) {
            lv[lw] = lv[lw] + v[j];
            lnz = true;
          }
          int rw = ctx.product(static_cast<int>(j), static_cast<int>(m));
          if (rw != MonomialContext::kZero) {
            rv[rw] = rv[rw] + v[j];
            rnz = true;
          }
        }
        if (lnz && acc.insert(lv)) next.push_back(std::move(lv));
        if (rnz && acc.insert(rv)) next.push_back(std::move(rv));
      }
    }
    frontier = std::move(next);
  }
  return Subspace<F>::span(acc.to_matrix());
}

/// The relatively free algebra F_n(V) = F(X)/V(F(X)) realized by structure
/// constants on a pivot-monomial basis (the non-pivot columns of the RREF of
/// the consequence space, in canonical monomial order).
template <CoefficientField F>
class RelativelyFreeAlgebra {
 public:
  using Elem = typename F::Elem;
  using Vec = std::vector<Elem>;

  struct BasisElement {
    int degree;
    int free_monomial;  // index into the monomial context
    int left = -1, right = -1;  // carrier basis indices of the two factors (degree >= 2)
  };

  static RelativelyFreeAlgebra build(const PrimitiveClass& cls, int n, const F& fld,
                                     const BuildGuards& guards = {});

  const PrimitiveClass& cls() const { return cls_; }
  int rank() const { return n_; }
  int nil_class() const { return cls_.c(); }
  const StructureAlgebra<F>& carrier() const { return *carrier_; }
  const MonomialContext& context() const { return *ctx_; }
  std::shared_ptr<const MonomialContext> context_ptr() const { return ctx_; }
  std::size_t dim() const { return carrier_->dim(); }
  const std::vector<BasisElement>& basis() const { return basis_; }

  /// Dimension of the degree-k homogeneous component (multihomogeneous mode).
  std::size_t degree_dim(int k) const {
    std::size_t cnt = 0;
    for (const auto& b : basis_) cnt += (b.degree == k);
    return cnt;
  }

  /// F^k as a subspace of the carrier. In multihomogeneous mode this is the
  /// coordinate block of degrees >= k; otherwise the power series is used.
  Subspace<F> power_component(int k) const {
    if (carrier_->graded()) {
      Matrix<F> rows(fld_, 0, dim());
      for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i].degree >= k) rows.append_row(carrier_->basis_vec(i));
      return Subspace<F>::span(rows);
    }
    auto ps = power_series(*carrier_);
    if (static_cast<std::size_t>(k) <= ps.size()) return ps[k - 1];
    return Subspace<F>::zero(fld_, dim());
  }
  Subspace<F> top_component() const { return power_component(cls_.c()); }

  /// Image of a free monomial under the natural projection.
  Vec project_monomial(int mono) const {
    auto it = proj_cache_.find(mono);
    if (it != proj_cache_.end()) return it->second;
    Vec r(dim(), fld_.zero());
    if (ctx_->is_leaf(mono)) {
      r[ctx_->leaf_var(mono) - 1] = fld_.one();
    } else {
      r = carrier_->mul(project_monomial(ctx_->left(mono)), project_monomial(ctx_->right(mono)));
    }
    proj_cache_.emplace(mono, r);
    return r;
  }
  Vec project_element(const FreeElement<F>& e) const {
    Vec r(dim(), fld_.zero());
    for (const auto& [m, c] : e.coeffs) {
      auto pm = project_monomial(m);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] + c * pm[i];
    }
    return r;
  }

  /// The consequence space in free-algebra coordinates (kernel of the
  /// projection), materialized on demand under the monolithic guard.
  Subspace<F> consequence_space(const BuildGuards& guards = {}) const {
    if (ctx_->size() > guards.consequence_guard)
      throw guard_error("free dimension exceeds consequence-space guard");
    Matrix<F> proj(fld_, dim(), ctx_->size());
    for (std::size_t m = 0; m < ctx_->size(); ++m) {
      auto col = project_monomial(static_cast<int>(m));
      for (std::size_t i = 0; i < dim(); ++i) proj(i, m) = col[i];
    }
    return Subspace<F>::span(proj.null_space());
  }

 private:
  RelativelyFreeAlgebra(PrimitiveClass cls, int n, F fld)
      : cls_(std::move(cls)), n_(n), fld_(std::move(fld)) {}

  static RelativelyFreeAlgebra build_incremental(const PrimitiveClass& cls, int n, const F& fld,
                                                 const BuildGuards& guards);
  static RelativelyFreeAlgebra build_monolithic(const PrimitiveClass& cls, int n, const F& fld,
                                                const BuildGuards& guards);

  PrimitiveClass cls_;
  int n_;
  F fld_;
  std::shared_ptr<const MonomialContext> ctx_;
  std::shared_ptr<const StructureAlgebra<F>> carrier_;
  std::vector<BasisElement> basis_;
  mutable std::unordered_map<int, Vec> proj_cache_;
};

template <CoefficientField F>
RelativelyFreeAlgebra<F> RelativelyFreeAlgebra<F>::build(const PrimitiveClass& cls, int n,
                                                         const F& fld,
                                                         const BuildGuards& guards) {
  if (cls.mode() == VarietyMode::multihomogeneous)
    return build_incremental(cls, n, fld, guards);
  return build_monolithic(cls, n, fld, guards);
}

template <CoefficientField F>
RelativelyFreeAlgebra<F> RelativelyFreeAlgebra<F>::build_monolithic(const PrimitiveClass& cls,
                                                                    int n, const F& fld,
                                                                    const BuildGuards& guards) {
  RelativelyFreeAlgebra out(cls, n, fld);
  out.ctx_ = std::make_shared<const MonomialContext>(n, cls.c(), guards.basis_guard);
  FreeNilpotentAlgebra free_alg(n, cls.c(), guards.basis_guard);
  auto free_sa = free_alg.to_structure_algebra(fld);
  auto cons = consequence_span(cls, n, fld, guards, out.ctx_);
  auto q = quotient(free_sa, cons);
  std::size_t deg1 = 0;
  for (auto c : q.kept) deg1 += (out.ctx_->degree(static_cast<int>(c)) == 1);
  if (deg1 < static_cast<std::size_t>(n))
    throw input_error("degenerate class: free generators do not survive the quotient");

  std::vector<std::size_t> pos(out.ctx_->size(), SIZE_MAX);
  for (std::size_t i = 0; i < q.kept.size(); ++i) pos[q.kept[i]] = i;
  for (auto c : q.kept) {
    BasisElement b;
    b.free_monomial = static_cast<int>(c);
    b.degree = out.ctx_->degree(b.free_monomial);
    if (!out.ctx_->is_leaf(b.free_monomial)) {
      b.left = static_cast<int>(pos[out.ctx_->left(b.free_monomial)]);
      b.right = static_cast<int>(pos[out.ctx_->right(b.free_monomial)]);
      if (b.left < 0 || b.right < 0)
        throw std::logic_error("pivot basis is not closed under factorization");
    }
    out.basis_.push_back(b);
  }
  out.carrier_ = std::make_shared<const StructureAlgebra<F>>(std::move(q.algebra));
  return out;
}

template <CoefficientField F>
RelativelyFreeAlgebra<F> RelativelyFreeAlgebra<F>::build_incremental(const PrimitiveClass& cls,
                                                                     int n, const F& fld,
                                                                     const BuildGuards& guards) {
  using Sparse = std::vector<std::pair<int, Elem>>;
  const int c = cls.c();
  RelativelyFreeAlgebra out(cls, n, fld);
  out.ctx_ = std::make_shared<const MonomialContext>(n, c, guards.basis_guard);
  const MonomialContext& ctx = *out.ctx_;

  for (const auto& gen : cls.generators())
    if (gen.degree() == 1 && !fld.from_int(gen.terms()[0].coeff).is_zero())
      throw input_error("degenerate class: a linear identity kills the generators");

  std::vector<BasisElement> basis;
  std::vector<int> local_rank;                             // rank within its degree block
  std::vector<std::vector<std::size_t>> by_degree(c + 1);  // carrier indices per degree
  for (int v = 1; v <= n; ++v) {
    basis.push_back({1, ctx.generator(v), -1, -1});
    local_rank.push_back(v - 1);
    by_degree[1].push_back(v - 1);
  }
  // products for pairs with degree sum <= built degree, keyed (a << 32) | b
  std::unordered_map<uint64_t, Sparse> prods;
  auto key = [](std::size_t a, std::size_t b) { return (uint64_t(a) << 32) | uint64_t(b); };

  for (int k = 2; k <= c; ++k) {
    // cover V_k = ⊕_{i+j=k} Q_i ⊗ Q_j, coordinates in canonical order
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    std::vector<std::size_t> split_offset(k, 0);
    for (int i = 1; i < k; ++i) {
      split_offset[i] = coords.size();
      for (auto a : by_degree[i])
        for (auto b : by_degree[k - i]) coords.emplace_back(a, b);
    }
    auto coord_of = [&](std::size_t a, std::size_t b) {
      int i = basis[a].degree;
      return split_offset[i] +
             std::size_t(local_rank[a]) * by_degree[k - i].size() + local_rank[b];
    };

    // evaluates one identity term at a tuple of carrier basis elements;
    // subproducts reduce through the structure built so far and the top-level
    // products land in cover coordinates. Returns (degree, sparse entries).
    const Identity* cur_gen = nullptr;
    const std::vector<int>* cur_delta = nullptr;
    const std::vector<std::size_t>* cur_tuple = nullptr;
    std::function<std::pair<int, Sparse>(int)> ev = [&](int node) -> std::pair<int, Sparse> {
      const auto& nd = cur_gen->node(node);
      if (nd.left < 0) {
        int d = (*cur_delta)[nd.var - 1];
        std::size_t bidx = by_degree[d][(*cur_tuple)[nd.var - 1]];
        return {d, Sparse{{static_cast<int>(bidx), fld.one()}}};
      }
      auto L = ev(nd.left);
      auto R = ev(nd.right);
      int d = L.first + R.first;
      std::unordered_map<std::size_t, Elem> accum;
      auto add = [&](std::size_t idx, const Elem& val) {
        auto it = accum.find(idx);
        if (it == accum.end())
          accum.emplace(idx, val);
        else
          it->second = it->second + val;
      };
      for (const auto& [la, lc] : L.second)
        for (const auto& [rb, rc] : R.second) {
          Elem f = lc * rc;
          if (d == k) {
            add(coord_of(la, rb), f);
          } else {
            auto pit = prods.find(key(la, rb));
            if (pit == prods.end()) continue;
            for (const auto& [gidx, pc] : pit->second) add(gidx, f * pc);
          }
        }
      Sparse entries;
      for (auto& [idx, val] : accum)
        if (!val.is_zero()) entries.emplace_back(static_cast<int>(idx), val);
      return {d, std::move(entries)};
    };

    RrefAccumulator<F> rel(fld, coords.size());
    for (const auto& gen : cls.generators()) {
      int t = gen.num_variables();
      if (t == 0) continue;
      std::vector<int> pervar(t);
      for (int v = 1; v <= t; ++v) pervar[v - 1] = gen.pervar_degree(v);

      std::vector<int> delta(t, 1);
      std::vector<std::size_t> tuple(t, 0);
      cur_gen = &gen;
      cur_delta = &delta;
      cur_tuple = &tuple;

      std::function<void(int)> pick = [&](int v) {
        if (v == t) {
          std::vector<Elem> relvec(coords.size(), fld.zero());
          bool nz = false;
          for (const auto& term : gen.terms()) {
            Elem ce = fld.from_int(term.coeff);
            if (ce.is_zero()) continue;
            auto r = ev(term.tree);
            for (const auto& [cd, val] : r.second) {
              relvec[cd] = relvec[cd] + ce * val;
              nz = true;
            }
          }
          if (nz) rel.insert(std::move(relvec));
          return;
        }
        for (std::size_t bi = 0; bi < by_degree[delta[v]].size(); ++bi) {
          tuple[v] = bi;
          pick(v + 1);
        }
      };
      // degree assignments with sum pervar[v] * delta[v] == k, each delta >= 1
      std::function<void(int, int)> assign = [&](int var, int remaining) {
        if (var == t) {
          if (remaining == 0) pick(0);
          return;
        }
        int min_rest = 0;
        for (int w = var + 1; w < t; ++w) min_rest += pervar[w];
        for (int d = 1; d <= c; ++d) {
          int cost = pervar[var] * d;
          if (cost + min_rest > remaining) break;
          delta[var] = d;
          assign(var + 1, remaining - cost);
        }
      };
      assign(0, k);
    }

    // new basis elements: non-pivot coordinates, in canonical order
    std::vector<bool> is_pivot(coords.size(), false);
    for (auto p : rel.pivots()) is_pivot[p] = true;
    std::vector<std::size_t> coord_to_basis(coords.size(), SIZE_MAX);
    for (std::size_t cd = 0; cd < coords.size(); ++cd) {
      if (is_pivot[cd]) continue;
      BasisElement b;
      b.degree = k;
      b.left = static_cast<int>(coords[cd].first);
      b.right = static_cast<int>(coords[cd].second);
      b.free_monomial = ctx.product(basis[coords[cd].first].free_monomial,
                                    basis[coords[cd].second].free_monomial);
      coord_to_basis[cd] = basis.size();
      local_rank.push_back(static_cast<int>(by_degree[k].size()));
      by_degree[k].push_back(basis.size());
      basis.push_back(b);
    }
    // express every cover coordinate over the new basis
    std::vector<const std::vector<Elem>*> pivot_row(coords.size(), nullptr);
    for (std::size_t r = 0; r < rel.rank(); ++r) pivot_row[rel.pivots()[r]] = &rel.rows()[r];
    for (std::size_t cd = 0; cd < coords.size(); ++cd) {
      Sparse sp;
      if (!is_pivot[cd]) {
        sp.emplace_back(static_cast<int>(coord_to_basis[cd]), fld.one());
      } else {
        const auto& row = *pivot_row[cd];
        for (std::size_t j = cd + 1; j < coords.size(); ++j)
          if (!is_pivot[j] && !row[j].is_zero())
            sp.emplace_back(static_cast<int>(coord_to_basis[j]), -row[j]);
      }
      prods[key(coords[cd].first, coords[cd].second)] = std::move(sp);
    }
  }

  StructureAlgebraBuilder<F> sb(fld, basis.size());
  for (const auto& [pk, sparse] : prods) {
    int a = static_cast<int>(pk >> 32), b = static_cast<int>(pk & 0xffffffffu);
    for (const auto& [idx, coeff] : sparse) sb.add_entry(a, b, idx, coeff);
  }
  std::vector<std::string> labels;
  std::vector<int> degrees;
  for (const auto& b : basis) {
    labels.push_back(ctx.str(b.free_monomial));
    degrees.push_back(b.degree);
  }
  out.basis_ = std::move(basis);
  out.carrier_ = std::make_shared<const StructureAlgebra<F>>(
      std::move(sb).build(std::move(labels), std::move(degrees)));
  return out;
}

template <CoefficientField F>
RelativelyFreeAlgebra<F> relatively_free(const PrimitiveClass& cls, int n, const F& fld,
                                         const BuildGuards& guards = {}) {
  return RelativelyFreeAlgebra<F>::build(cls, n, fld, guards);
}

namespace detail {

/// Evaluates one identity term at a tuple of algebra elements.
template <CoefficientField F>
typename StructureAlgebra<F>::Vec eval_tree_algebra(
    const StructureAlgebra<F>& P, const Identity& id, int node,
    const std::vector<typename StructureAlgebra<F>::Vec>& subst) {
  const auto& nd = id.node(node);
  if (nd.left < 0) return subst[nd.var - 1];
  return P.mul(eval_tree_algebra(P, id, nd.left, subst),
               eval_tree_algebra(P, id, nd.right, subst));
}

template <CoefficientField F>
typename StructureAlgebra<F>::Vec eval_identity(
    const StructureAlgebra<F>& P, const Identity& id,
    const std::vector<typename StructureAlgebra<F>::Vec>& subst) {
  auto out = P.zero_vec();
  const F& fld = P.field();
  for (const auto& term : id.terms()) {
    auto ce = fld.from_int(term.coeff);
    if (ce.is_zero()) continue;
    auto v = eval_tree_algebra(P, id, term.tree, subst);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] + ce * v[i];
  }
  return out;
}

/// Spanning substitution tuples for the value span of w in P: basis vectors
/// for multilinear w, basis vectors plus two-basis field combinations for
/// per-variable degree <= 2. Calls fn(value) for every substitution.
template <CoefficientField F, class Fn>
void spanning_values(const StructureAlgebra<F>& P, const Identity& w, Fn&& fn) {
  const F& fld = P.field();
  int t = w.num_variables();
  std::vector<typename StructureAlgebra<F>::Vec> elems;
  for (std::size_t i = 0; i < P.dim(); ++i) elems.push_back(P.basis_vec(i));
  if (!w.is_multilinear()) {
    if (w.max_pervar_degree() > 2)
      throw precondition_error(
          "substitution supports multilinear identities or per-variable degree <= 2");
    if (!fld.is_finite())
      throw precondition_error("non-multilinear substitution requires a finite field");
    auto scalars = fld.enumerate();
    for (std::size_t i = 0; i < P.dim(); ++i)
      for (std::size_t j = i + 1; j < P.dim(); ++j)
        for (const auto& a : scalars)
          for (const auto& b : scalars) {
            if (a.is_zero() || b.is_zero()) continue;
            auto v = P.zero_vec();
            v[i] = a;
            v[j] = b;
            elems.push_back(std::move(v));
          }
  }
  std::vector<typename StructureAlgebra<F>::Vec> subst(t, P.zero_vec());
  std::function<void(int)> rec = [&](int var) {
    if (var == t) {
      fn(eval_identity(P, w, subst));
      return;
    }
    for (const auto& e : elems) {
      subst[var] = e;
      rec(var + 1);
    }
  };
  rec(0);
}

}  // namespace detail

/// The verbal ideal w(P): ideal generated by all values of w in P.
template <CoefficientField F>
Subspace<F> verbal_ideal(const Identity& w, const StructureAlgebra<F>& P) {
  RrefAccumulator<F> acc(P.field(), P.dim());
  detail::spanning_values(P, w, [&](typename StructureAlgebra<F>::Vec v) { acc.insert(std::move(v)); });
  return ideal_generated_by(P, Subspace<F>::span(acc.to_matrix())).subspace;
}

/// True iff w vanishes under every substitution. Small finite algebras are
/// checked on all tuples; otherwise the spanning substitutions decide.
template <CoefficientField F>
bool is_identity(const Identity& w, const StructureAlgebra<F>& P,
                 uint64_t exhaustive_guard = (1u << 20)) {
  const F& fld = P.field();
  int t = w.num_variables();
  if (fld.is_finite()) {
    long double card = 1;
    for (std::size_t i = 0; i < P.dim(); ++i) card *= static_cast<long double>(fld.size());
    long double tuples = 1;
    for (int i = 0; i < t; ++i) tuples *= card;
    if (tuples <= static_cast<long double>(exhaustive_guard)) {
      auto scalars = fld.enumerate();
      std::vector<typename StructureAlgebra<F>::Vec> subst(t, P.zero_vec());
      std::function<bool(int)> rec = [&](int var) -> bool {
        if (var == t) {
          auto v = detail::eval_identity(P, w, subst);
          for (const auto& x : v)
            if (!x.is_zero()) return false;
          return true;
        }
        std::vector<uint32_t> odo(P.dim(), 0);
        for (;;) {
          for (std::size_t i = 0; i < P.dim(); ++i) subst[var][i] = scalars[odo[i]];
          if (!rec(var + 1)) return false;
          std::size_t i = P.dim();
          bool carry = true;
          while (i-- > 0) {
            if (++odo[i] < scalars.size()) {
              carry = false;
              break;
            }
            odo[i] = 0;
          }
          if (carry) return true;
        }
      };
      return rec(0);
    }
  }
  bool ok = true;
  detail::spanning_values(P, w, [&](typename StructureAlgebra<F>::Vec v) {
    for (const auto& x : v)
      if (!x.is_zero()) ok = false;
  });
  return ok;
}

/// Result of the centrality scan I(F_n) = F_n^c over ranks n = 1..c+1.
template <CoefficientField F>
struct CentralityResult {
  bool central = true;
  int failed_rank = 0;
  std::vector<typename F::Elem> witness;  // element of I(F_n) \ F_n^c
  std::string witness_label;
};

/// Checks I(F_n) = F_n^c for n = 1..c+1 (Remark-style rank bound for
/// multihomogeneous classes). Ranks with F_n^c = 0 are vacuous. On failure the
/// first offending annihilator element is returned as a witness.
template <CoefficientField F>
CentralityResult<F> centrality_check(const PrimitiveClass& cls, const F& fld,
                                     const BuildGuards& guards = {}) {
  if (cls.mode() != VarietyMode::multihomogeneous)
    throw precondition_error("centrality check requires multihomogeneous mode");
  CentralityResult<F> res;
  for (int n = 1; n <= cls.c() + 1; ++n) {
    auto Fn = relatively_free(cls, n, fld, guards);
    auto top = Fn.top_component();
    if (top.dim() == 0) continue;
    auto I = annihilator(Fn.carrier());
    if (!I.contains(top))
      throw std::logic_error("power component not contained in annihilator");
    if (I.dim() == top.dim()) continue;
    // witness: a basis row of I outside the top component
    for (std::size_t r = 0; r < I.dim(); ++r) {
      auto row = I.basis().row(r);
      if (!top.contains(row)) {
        res.central = false;
        res.failed_rank = n;
        res.witness = row;
        std::string lbl;
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (row[i].is_zero()) continue;
          if (!lbl.empty()) lbl += " + ";
          if (!(row[i] == fld.one())) lbl += row[i].str() + "*";
          lbl += Fn.carrier().labels()[i];
        }
        res.witness_label = lbl;
        return res;
      }
    }
    throw std::logic_error("annihilator exceeds top component but no witness row found");
  }
  return res;
}

}  // namespace nilgen

#endif
