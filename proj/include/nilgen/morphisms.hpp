#ifndef NILGEN_MORPHISMS_HPP
#define NILGEN_MORPHISMS_HPP

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "nilgen/gl.hpp"
#include "nilgen/variety.hpp"

namespace nilgen {

/// Algebra homomorphism as a matrix (columns are images of basis vectors),
/// with the multiplicativity certificate h(e_i e_j) = h(e_i) h(e_j) checked
/// on all basis pairs at construction.
template <CoefficientField F>
class AlgebraHom {
 public:
  AlgebraHom(const StructureAlgebra<F>& source, const StructureAlgebra<F>& target,
             Matrix<F> matrix)
      : source_(&source), target_(&target), m_(std::move(matrix)) {
    if (m_.rows() != target.dim() || m_.cols() != source.dim())
      throw precondition_error("homomorphism matrix shape mismatch");
    for (std::size_t i = 0; i < source.dim(); ++i) {
      auto hi = m_.apply(source.basis_vec(i));
      for (std::size_t j = 0; j < source.dim(); ++j) {
        auto lhs = m_.apply(source.basis_product(i, j));
        auto rhs = target.mul(hi, m_.apply(source.basis_vec(j)));
        if (lhs != rhs)
          throw precondition_error("multiplicativity certificate failed at basis pair (" +
                                   std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }

  const Matrix<F>& matrix() const { return m_; }
  const StructureAlgebra<F>& source() const { return *source_; }
  const StructureAlgebra<F>& target() const { return *target_; }

 private:
  const StructureAlgebra<F>* source_;
  const StructureAlgebra<F>* target_;
  Matrix<F> m_;
};

/// Derivation d of P: Leibniz certificate d(e_i e_j) = d(e_i) e_j + e_i d(e_j)
/// checked on all basis pairs.
template <CoefficientField F>
class Derivation {
 public:
  Derivation(const StructureAlgebra<F>& algebra, Matrix<F> matrix)
      : p_(&algebra), m_(std::move(matrix)) {
    if (m_.rows() != algebra.dim() || m_.cols() != algebra.dim())
      throw precondition_error("derivation matrix shape mismatch");
    for (std::size_t i = 0; i < algebra.dim(); ++i)
      for (std::size_t j = 0; j < algebra.dim(); ++j) {
        auto lhs = m_.apply(algebra.basis_product(i, j));
        auto rhs = algebra.mul(m_.apply(algebra.basis_vec(i)), algebra.basis_vec(j));
        auto rhs2 = algebra.mul(algebra.basis_vec(i), m_.apply(algebra.basis_vec(j)));
        for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = rhs[k] + rhs2[k];
        if (lhs != rhs)
          throw precondition_error("Leibniz certificate failed at basis pair (" +
                                   std::to_string(i) + "," + std::to_string(j) + ")");
      }
  }

  const Matrix<F>& matrix() const { return m_; }
  const StructureAlgebra<F>& algebra() const { return *p_; }

 private:
  const StructureAlgebra<F>* p_;
  Matrix<F> m_;
};

/// Raw (uncertified) hom matrix extending x_i -> images[i]; h on a basis
/// element (b')(b'') is h(b') h(b'') by structural recursion.
template <CoefficientField F>
Matrix<F> extend_generator_map_matrix(const RelativelyFreeAlgebra<F>& Fn,
                                      const std::vector<typename StructureAlgebra<F>::Vec>& images,
                                      const StructureAlgebra<F>& P) {
  if (images.size() != static_cast<std::size_t>(Fn.rank()))
    throw precondition_error("need one image per free generator");
  const F& fld = Fn.carrier().field();
  Matrix<F> h(fld, P.dim(), Fn.dim());
  std::vector<typename StructureAlgebra<F>::Vec> img(Fn.dim());
  for (std::size_t b = 0; b < Fn.dim(); ++b) {
    const auto& info = Fn.basis()[b];
    if (info.degree == 1) {
      img[b] = images[b];
    } else {
      img[b] = P.mul(img[info.left], img[info.right]);
    }
    for (std::size_t i = 0; i < P.dim(); ++i) h(i, b) = img[b][i];
  }
  return h;
}

/// Universal-property extension: the generator-image map extends to a
/// certified homomorphism F_n -> P. Certificate failure signals P outside the
/// class (diagnostic, not silent).
template <CoefficientField F>
AlgebraHom<F> extend_generator_map(const RelativelyFreeAlgebra<F>& Fn,
                                   const std::vector<typename StructureAlgebra<F>::Vec>& images,
                                   const StructureAlgebra<F>& P) {
  return AlgebraHom<F>(Fn.carrier(), P, extend_generator_map_matrix(Fn, images, P));
}

/// Leibniz recursion: the matrix of the derivation extending x_i -> images[i]
/// on a relatively free algebra, d((b')(b'')) = d(b') b'' + b' d(b'').
template <CoefficientField F>
Matrix<F> extend_generator_derivation_matrix(
    const RelativelyFreeAlgebra<F>& Fn,
    const std::vector<typename StructureAlgebra<F>::Vec>& images) {
  if (images.size() != static_cast<std::size_t>(Fn.rank()))
    throw precondition_error("need one image per free generator");
  const auto& P = Fn.carrier();
  const F& fld = P.field();
  Matrix<F> m(fld, Fn.dim(), Fn.dim());
  std::vector<typename StructureAlgebra<F>::Vec> img(Fn.dim());
  for (std::size_t b = 0; b < Fn.dim(); ++b) {
    const auto& info = Fn.basis()[b];
    if (info.degree == 1) {
      img[b] = images[b];
    } else {
      auto lhs = P.mul(img[info.left], P.basis_vec(info.right));
      auto rhs = P.mul(P.basis_vec(info.left), img[info.right]);
      for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] = lhs[i] + rhs[i];
      img[b] = std::move(lhs);
    }
    for (std::size_t i = 0; i < Fn.dim(); ++i) m(i, b) = img[b][i];
  }
  return m;
}

/// Certified derivation extension (multihomogeneous classes): any generator
/// image map extends to a unique derivation of F_n.
template <CoefficientField F>
Derivation<F> extend_generator_derivation(
    const RelativelyFreeAlgebra<F>& Fn,
    const std::vector<typename StructureAlgebra<F>::Vec>& images) {
  return Derivation<F>(Fn.carrier(), extend_generator_derivation_matrix(Fn, images));
}

/// Nilpotent-algebra automorphism test: an endomorphism is bijective iff the
/// induced map on P/P^2 is invertible.
template <CoefficientField F>
bool is_automorphism(const AlgebraHom<F>& h) {
  if (&h.source() != &h.target())
    throw precondition_error("automorphism test needs source = target");
  const auto& P = h.source();
  auto p2 = subspace_product(P, Subspace<F>::full(P.field(), P.dim()),
                             Subspace<F>::full(P.field(), P.dim()));
  auto q = quotient(P, p2);
  Matrix<F> induced = q.projection * h.matrix() * q.lift;
  return induced.is_invertible();
}

/// Scalar-mod-square classification of an endomorphism or derivation matrix.
template <CoefficientField F>
std::optional<typename F::Elem> scalar_mod_square(const StructureAlgebra<F>& P,
                                                  const Matrix<F>& m) {
  auto p2 = subspace_product(P, Subspace<F>::full(P.field(), P.dim()),
                             Subspace<F>::full(P.field(), P.dim()));
  auto q = quotient(P, p2);
  Matrix<F> induced = q.projection * m * q.lift;
  typename F::Elem lam = P.field().zero();
  if (induced.is_scalar(&lam)) return lam;
  return std::nullopt;
}

/// The GL(n) action on the top power F_n^c of a relatively free algebra in a
/// central class: A acts as the restriction to F_n^c of the automorphism
/// extending x_i -> sum_j A_{ji} x_j. The top block is cached per call.
template <CoefficientField F>
class TopAction {
 public:
  TopAction(const RelativelyFreeAlgebra<F>& Fn, bool centrality_certified = false)
      : Fn_(&Fn) {
    if (!centrality_certified) {
      auto res = centrality_check(Fn.cls(), Fn.carrier().field());
      if (!res.central)
        throw precondition_error("class is not central; the top action is undefined");
    }
    for (std::size_t i = 0; i < Fn.dim(); ++i)
      if (Fn.basis()[i].degree == Fn.nil_class()) top_.push_back(i);
  }

  std::size_t top_dim() const { return top_.size(); }
  const std::vector<std::size_t>& top_coords() const { return top_; }

  /// Matrix of A~ on the degree-c block (column-vector convention).
  Matrix<F> apply(const Matrix<F>& A) const {
    const auto& Fn = *Fn_;
    const F& fld = Fn.carrier().field();
    const int n = Fn.rank();
    if (static_cast<int>(A.rows()) != n || static_cast<int>(A.cols()) != n)
      throw precondition_error("matrix size must match the rank");
    std::vector<typename StructureAlgebra<F>::Vec> images(n);
    for (int i = 0; i < n; ++i) {
      auto v = Fn.carrier().zero_vec();
      for (int j = 0; j < n; ++j) v[j] = A(j, i);
      images[i] = std::move(v);
    }
    Matrix<F> h = extend_generator_map_matrix(Fn, images, Fn.carrier());
    Matrix<F> top(fld, top_.size(), top_.size());
    for (std::size_t r = 0; r < top_.size(); ++r)
      for (std::size_t c = 0; c < top_.size(); ++c) top(r, c) = h(top_[r], top_[c]);
    return top;
  }

  /// K (subspace of F^c in top coordinates) mapped by A~.
  Subspace<F> apply_to(const Matrix<F>& A, const Subspace<F>& K) const {
    return K.apply(apply(A));
  }

 private:
  const RelativelyFreeAlgebra<F>* Fn_;
  std::vector<std::size_t> top_;
};

/// All A in GL(n,q) whose induced action fixes K setwise, plus the
/// scalar-only flag (the stabilizer always contains the scalars).
template <CoefficientField F>
struct StabilizerResult {
  std::vector<Matrix<F>> elements;
  bool is_scalar_only = false;
};

template <CoefficientField F>
StabilizerResult<F> stabilizer_in_gl(const TopAction<F>& action, const Subspace<F>& K,
                                     const std::vector<Matrix<F>>& gl) {
  StabilizerResult<F> out;
  for (const auto& A : gl)
    if (action.apply_to(A, K) == K) out.elements.push_back(A);
  const F& fld = K.field();
  uint64_t q = fld.size();
  out.is_scalar_only = out.elements.size() == q - 1;
  return out;
}

/// Orbit of K under the induced GL action, generated by closure over the
/// standard GL generators.
template <CoefficientField F>
std::vector<Subspace<F>> ideal_orbit(const TopAction<F>& action, const Subspace<F>& K,
                                     const std::vector<Matrix<F>>& generators) {
  std::vector<Subspace<F>> orbit{K};
  std::vector<std::size_t> frontier{0};
  auto seen = [&](const Subspace<F>& s) {
    for (const auto& o : orbit)
      if (o == s) return true;
    return false;
  };
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (auto idx : frontier)
      for (const auto& g : generators) {
        auto img = action.apply_to(g, orbit[idx]);
        if (!seen(img)) {
          next.push_back(orbit.size());
          orbit.push_back(std::move(img));
        }
      }
    frontier = std::move(next);
  }
  return orbit;
}

/// Malcev-style isomorphism of quotients: F/K ≅ F/L iff K and L lie on the
/// same orbit of the induced action.
template <CoefficientField F>
bool are_isomorphic_quotients(const TopAction<F>& action, const Subspace<F>& K,
                              const Subspace<F>& L, const std::vector<Matrix<F>>& generators) {
  if (K.dim() != L.dim()) return false;
  if (K == L) return true;
  for (const auto& s : ideal_orbit(action, K, generators))
    if (s == L) return true;
  return false;
}

/// Builds the quotient F/K for K given in top-block coordinates.
template <CoefficientField F>
QuotientResult<F> quotient_by_top_subspace(const RelativelyFreeAlgebra<F>& Fn,
                                           const TopAction<F>& action, const Subspace<F>& K) {
  const F& fld = Fn.carrier().field();
  Matrix<F> rows(fld, 0, Fn.dim());
  for (std::size_t i = 0; i < K.dim(); ++i) {
    auto full = Fn.carrier().zero_vec();
    for (std::size_t t = 0; t < action.top_coords().size(); ++t)
      full[action.top_coords()[t]] = K.basis()(i, t);
    rows.append_row(full);
  }
  return quotient(Fn.carrier(), Subspace<F>::span(rows));
}

/// Brute-force automorphism count of P = F/K by generator-image search: each
/// of the |P|^n image tuples is extended through F_n and counted when it kills
/// K and induces a bijection of P. The oracle for the stabilizer-parameterized
/// count. `lift` is the coset-representative lift from quotient().
template <CoefficientField F>
uint64_t brute_force_automorphism_count(const RelativelyFreeAlgebra<F>& Fn,
                                        const Subspace<F>& K_full,
                                        const StructureAlgebra<F>& P, const Matrix<F>& lift,
                                        uint64_t guard = (1u << 20)) {
  const F& fld = P.field();
  if (!fld.is_finite()) throw precondition_error("brute force needs a finite field");
  long double card = 1;
  for (std::size_t i = 0; i < P.dim(); ++i) card *= fld.size();
  long double tuples = 1;
  for (int i = 0; i < Fn.rank(); ++i) tuples *= card;
  if (tuples > static_cast<long double>(guard))
    throw guard_error("brute-force automorphism search exceeds guard");

  auto scalars = fld.enumerate();
  const int n = Fn.rank();
  uint64_t count = 0;
  std::vector<typename StructureAlgebra<F>::Vec> images(n, P.zero_vec());
  std::vector<uint32_t> odo(static_cast<std::size_t>(n) * P.dim(), 0);
  for (;;) {
    for (int i = 0; i < n; ++i)
      for (std::size_t j = 0; j < P.dim(); ++j)
        images[i][j] = scalars[odo[std::size_t(i) * P.dim() + j]];
    Matrix<F> h = extend_generator_map_matrix(Fn, images, P);
    bool kills = true;
    for (std::size_t r = 0; r < K_full.dim() && kills; ++r) {
      auto img = h.apply(K_full.basis().row(r));
      for (const auto& x : img)
        if (!x.is_zero()) {
          kills = false;
          break;
        }
    }
    if (kills) {
      Matrix<F> induced = h * lift;  // endomorphism of P (h factors through K)
      if (induced.is_invertible()) ++count;
    }
    std::size_t k = odo.size();
    bool carry = true;
    while (k-- > 0) {
      if (++odo[k] < scalars.size()) {
        carry = false;
        break;
      }
      odo[k] = 0;
    }
    if (carry) break;
  }
  return count;
}

/// Stabilizer-parameterized automorphism group order of P = F/K (K inside the
/// top power): |Aut P| = |Stab_GL(K)| * |P^2|^n. Every automorphism is an
/// invertible generator substitution whose top action fixes K, freely
/// corrected by P^2 parts.
template <CoefficientField F>
struct AutomorphismOrder {
  uint64_t stabilizer_order;
  uint64_t p2_card;
  int rank;
  uint64_t order;  // stabilizer_order * p2_card^rank
  bool scalar_only;
};

template <CoefficientField F>
AutomorphismOrder<F> automorphism_order(const RelativelyFreeAlgebra<F>& Fn,
                                        const TopAction<F>& action, const Subspace<F>& K,
                                        const std::vector<Matrix<F>>& gl) {
  auto stab = stabilizer_in_gl(action, K, gl);
  auto q = quotient_by_top_subspace(Fn, action, K);
  const auto& P = q.algebra;
  auto p2 = subspace_product(P, Subspace<F>::full(P.field(), P.dim()),
                             Subspace<F>::full(P.field(), P.dim()));
  uint64_t p2card = 1;
  for (std::size_t i = 0; i < p2.dim(); ++i) p2card *= P.field().size();
  uint64_t order = stab.elements.size();
  for (int i = 0; i < Fn.rank(); ++i) order *= p2card;
  return {stab.elements.size(), p2card, Fn.rank(), order, stab.is_scalar_only};
}

/// Basis of the derivation space (solutions of the Leibniz linear system in
/// the m^2 matrix unknowns), with each element classified scalar-mod-square.
template <CoefficientField F>
struct DerivationSpace {
  std::vector<Matrix<F>> basis;
  std::vector<std::optional<typename F::Elem>> scalar_class;  // per basis element
  bool all_scalar_mod_square = true;
};

template <CoefficientField F>
DerivationSpace<F> derivation_space(const StructureAlgebra<F>& P, std::size_t dim_guard = 64) {
  const F& fld = P.field();
  const std::size_t m = P.dim();
  if (m > dim_guard) throw guard_error("derivation solve exceeds dimension guard");
  // unknowns D_{t,k} flattened t*m + k; equations indexed by (a,b,t)
  Matrix<F> sys(fld, m * m * m, m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      auto cab = P.basis_product(a, b);
      for (std::size_t t = 0; t < m; ++t) {
        std::size_t row = (a * m + b) * m + t;
        for (std::size_t k = 0; k < m; ++k)
          if (!cab[k].is_zero()) sys(row, t * m + k) = sys(row, t * m + k) + cab[k];
        // -(D e_a) e_b: D_{s,a} * c_{s b}^t
        for (std::size_t s = 0; s < m; ++s) {
          auto [pb, pe] = P.product_entries(s, b);
          for (auto* p = pb; p != pe; ++p)
            if (static_cast<std::size_t>(p->first) == t)
              sys(row, s * m + a) = sys(row, s * m + a) - p->second;
        }
        // -e_a (D e_b): D_{s,b} * c_{a s}^t
        for (std::size_t s = 0; s < m; ++s) {
          auto [pb, pe] = P.product_entries(a, s);
          for (auto* p = pb; p != pe; ++p)
            if (static_cast<std::size_t>(p->first) == t)
              sys(row, s * m + b) = sys(row, s * m + b) - p->second;
        }
      }
    }
  Matrix<F> ker = sys.null_space();
  DerivationSpace<F> out;
  for (std::size_t r = 0; r < ker.rows(); ++r) {
    Matrix<F> d(fld, m, m);
    for (std::size_t t = 0; t < m; ++t)
      for (std::size_t k = 0; k < m; ++k) d(t, k) = ker(r, t * m + k);
    Derivation<F> check(P, d);  // certificate
    auto sc = scalar_mod_square(P, d);
    if (!sc) out.all_scalar_mod_square = false;
    out.scalar_class.push_back(sc);
    out.basis.push_back(std::move(d));
  }
  return out;
}

/// Default automorphism of a 2-step nilpotent algebra: lambda on a complement
/// Q of P^2, lambda^2 on P^2, plus an arbitrary linear correction R: Q -> P^2.
template <CoefficientField F>
AlgebraHom<F> default_automorphism(const StructureAlgebra<F>& P, const Matrix<F>& R,
                                   const typename F::Elem& lambda) {
  if (lambda.is_zero()) throw precondition_error("default automorphism needs lambda != 0");
  auto ps = power_series(P);
  if (ps.size() < 2 || (ps.size() >= 3 && ps[2].dim() != 0))
    throw precondition_error("default automorphism is defined for 2-step nilpotent algebras");
  const F& fld = P.field();
  const auto& p2 = ps[1];
  auto accp2 = p2.accumulator();
  std::vector<bool> is_pivot(P.dim(), false);
  for (auto c : accp2.pivots()) is_pivot[c] = true;
  std::vector<std::size_t> comp;
  for (std::size_t c = 0; c < P.dim(); ++c)
    if (!is_pivot[c]) comp.push_back(c);
  std::size_t k = comp.size(), l = p2.dim();
  if (R.rows() != l || R.cols() != k)
    throw precondition_error("correction matrix must be dim(P^2) x dim(Q)");
  // basis change S: columns = complement units then P^2 basis rows
  Matrix<F> S(fld, P.dim(), P.dim());
  for (std::size_t j = 0; j < k; ++j) S(comp[j], j) = fld.one();
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t i = 0; i < P.dim(); ++i) S(i, k + j) = p2.basis()(j, i);
  Matrix<F> block(fld, P.dim(), P.dim());
  for (std::size_t j = 0; j < k; ++j) {
    block(j, j) = lambda;
    for (std::size_t i = 0; i < l; ++i) block(k + i, j) = R(i, j);
  }
  for (std::size_t j = 0; j < l; ++j) block(k + j, k + j) = lambda * lambda;
  Matrix<F> mat = S * block * S.inverse();
  return AlgebraHom<F>(P, P, std::move(mat));
}

/// Default derivation: lambda on the complement, 2*lambda on P^2, plus R.
template <CoefficientField F>
Derivation<F> default_derivation(const StructureAlgebra<F>& P, const Matrix<F>& R,
                                 const typename F::Elem& lambda) {
  auto ps = power_series(P);
  if (ps.size() < 2 || (ps.size() >= 3 && ps[2].dim() != 0))
    throw precondition_error("default derivation is defined for 2-step nilpotent algebras");
  const F& fld = P.field();
  const auto& p2 = ps[1];
  auto accp2 = p2.accumulator();
  std::vector<bool> is_pivot(P.dim(), false);
  for (auto c : accp2.pivots()) is_pivot[c] = true;
  std::vector<std::size_t> comp;
  for (std::size_t c = 0; c < P.dim(); ++c)
    if (!is_pivot[c]) comp.push_back(c);
  std::size_t k = comp.size(), l = p2.dim();
  if (R.rows() != l || R.cols() != k)
    throw precondition_error("correction matrix must be dim(P^2) x dim(Q)");
  Matrix<F> S(fld, P.dim(), P.dim());
  for (std::size_t j = 0; j < k; ++j) S(comp[j], j) = fld.one();
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t i = 0; i < P.dim(); ++i) S(i, k + j) = p2.basis()(j, i);
  Matrix<F> block(fld, P.dim(), P.dim());
  auto two_lambda = lambda + lambda;
  for (std::size_t j = 0; j < k; ++j) {
    block(j, j) = lambda;
    for (std::size_t i = 0; i < l; ++i) block(k + i, j) = R(i, j);
  }
  for (std::size_t j = 0; j < l; ++j) block(k + j, k + j) = two_lambda;
  Matrix<F> mat = S * block * S.inverse();
  return Derivation<F>(P, std::move(mat));
}

template <CoefficientField F>
Matrix<F> Fn_lift(const RelativelyFreeAlgebra<F>& Fn, const StructureAlgebra<F>& P,
                  const Matrix<F>& proj) {
  // Right inverse of proj: proj is dimP x dimFn with full row rank; build the
  // coset-representative lift from its RREF.
  (void)Fn;
  Matrix<F> red = proj;
  auto piv = red.rref_in_place();
  Matrix<F> lift(P.field(), proj.cols(), proj.rows());
  for (std::size_t r = 0; r < piv.size(); ++r) lift(piv[r], r) = P.field().one();
  // proj * lift = identity on the pivot coordinates only when proj is in RREF;
  // compose with the change of basis to make it exact for the original proj.
  Matrix<F> pl = proj * lift;
  return lift * pl.inverse();
}

}  // namespace nilgen

#endif
