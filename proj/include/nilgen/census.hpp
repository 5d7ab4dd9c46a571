#ifndef NILGEN_CENSUS_HPP
#define NILGEN_CENSUS_HPP

#include <algorithm>
#include <map>
#include <random>
#include <thread>
#include <unordered_map>

#include "nilgen/morphisms.hpp"

namespace nilgen {

/// Raw-residue view of a prime-field structure algebra used by the exhaustive
/// sweeps: dense left/right multiplication tables, no per-element field tags.
struct FastAlgebra {
  uint32_t p = 2;
  std::size_t dim = 0;
  std::size_t top_offset = 0;  // coordinates >= top_offset span F^c
  std::vector<std::vector<uint32_t>> left, right;  // dim matrices, row-major dim x dim

  static FastAlgebra from(const StructureAlgebra<PrimeField>& P, std::size_t top_offset) {
    FastAlgebra fa;
    fa.p = P.field().p();
    fa.dim = P.dim();
    fa.top_offset = top_offset;
    fa.left.resize(fa.dim);
    fa.right.resize(fa.dim);
    for (std::size_t i = 0; i < fa.dim; ++i) {
      fa.left[i].assign(fa.dim * fa.dim, 0);
      fa.right[i].assign(fa.dim * fa.dim, 0);
      for (std::size_t j = 0; j < fa.dim; ++j) {
        auto [b, e] = P.product_entries(i, j);
        for (auto* q = b; q != e; ++q) fa.left[i][std::size_t(q->first) * fa.dim + j] = q->second.v;
        auto [b2, e2] = P.product_entries(j, i);
        for (auto* q = b2; q != e2; ++q)
          fa.right[i][std::size_t(q->first) * fa.dim + j] = q->second.v;
      }
    }
    return fa;
  }
};

namespace detail_census {

/// y += M x (mod p), all raw residues.
inline void matvec_acc(const std::vector<uint32_t>& m, const uint32_t* x, uint32_t* y,
                       std::size_t dim, uint32_t p) {
  for (std::size_t r = 0; r < dim; ++r) {
    uint64_t acc = y[r];
    const uint32_t* row = m.data() + r * dim;
    for (std::size_t c = 0; c < dim; ++c) acc += uint64_t(row[c]) * x[c];
    y[r] = static_cast<uint32_t>(acc % p);
  }
}

/// Reduces v against the RREF rows; true if v lies in their span.
inline bool reduces_to_zero(const std::vector<std::vector<uint32_t>>& rows,
                            const std::vector<std::size_t>& pivots, uint32_t* v,
                            std::size_t dim, uint32_t p) {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    uint32_t f = v[pivots[r]];
    if (f == 0) continue;
    uint32_t neg = p - f;
    const auto& row = rows[r];
    for (std::size_t c = pivots[r]; c < dim; ++c)
      v[c] = static_cast<uint32_t>((v[c] + uint64_t(neg) * row[c]) % p);
  }
  for (std::size_t c = 0; c < dim; ++c)
    if (v[c] != 0) return false;
  return true;
}

inline bool fast_is_ideal(const FastAlgebra& fa, const std::vector<std::vector<uint32_t>>& rows,
                          const std::vector<std::size_t>& pivots) {
  std::vector<uint32_t> prod(fa.dim);
  for (const auto& v : rows) {
    for (std::size_t i = 0; i < fa.dim; ++i) {
      std::fill(prod.begin(), prod.end(), 0);
      matvec_acc(fa.left[i], v.data(), prod.data(), fa.dim, fa.p);
      if (!reduces_to_zero(rows, pivots, prod.data(), fa.dim, fa.p)) return false;
      std::fill(prod.begin(), prod.end(), 0);
      matvec_acc(fa.right[i], v.data(), prod.data(), fa.dim, fa.p);
      if (!reduces_to_zero(rows, pivots, prod.data(), fa.dim, fa.p)) return false;
    }
  }
  return true;
}

/// Enumerates, for one RREF pivot pattern, every subspace; rows arrive already
/// in RREF. fn(rows, pivots, in_top).
template <class Fn>
void for_each_subspace_of_pattern(std::size_t d, uint32_t p,
                                  const std::vector<std::size_t>& pattern,
                                  std::size_t top_offset, Fn&& fn) {
  std::size_t m = pattern.size();
  std::vector<bool> is_pivot(d, false);
  for (auto c : pattern) is_pivot[c] = true;
  // free positions (row, col), row-major
  std::vector<std::pair<std::size_t, std::size_t>> free_pos;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = pattern[r] + 1; c < d; ++c)
      if (!is_pivot[c]) free_pos.emplace_back(r, c);

  std::vector<std::vector<uint32_t>> rows(m, std::vector<uint32_t>(d, 0));
  for (std::size_t r = 0; r < m; ++r) rows[r][pattern[r]] = 1;
  std::vector<uint32_t> odo(free_pos.size(), 0);
  bool pattern_in_top = true;
  for (auto c : pattern) pattern_in_top = pattern_in_top && (c >= top_offset);
  for (;;) {
    bool in_top = pattern_in_top;
    if (in_top)
      for (std::size_t k = 0; k < free_pos.size() && in_top; ++k)
        in_top = odo[k] == 0 || free_pos[k].second >= top_offset;
    fn(rows, pattern, in_top);
    std::size_t k = odo.size();
    bool carry = true;
    while (k-- > 0) {
      if (++odo[k] < p) {
        rows[free_pos[k].first][free_pos[k].second] = odo[k];
        carry = false;
        break;
      }
      odo[k] = 0;
      rows[free_pos[k].first][free_pos[k].second] = 0;
    }
    if (carry) break;
  }
}

inline std::vector<std::vector<std::size_t>> pivot_patterns(std::size_t d, std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  if (m > d) return out;
  std::vector<std::size_t> pat(m);
  for (std::size_t i = 0; i < m; ++i) pat[i] = i;
  for (;;) {
    out.push_back(pat);
    std::size_t i = m;
    bool done = true;
    while (i-- > 0) {
      if (pat[i] + (m - i) <= d - 1) {
        ++pat[i];
        for (std::size_t j = i + 1; j < m; ++j) pat[j] = pat[j - 1] + 1;
        done = false;
        break;
      }
    }
    if (done) break;
  }
  return out;
}

}  // namespace detail_census

/// Exhaustive ideal census of a relatively free algebra over F_q: per-dimension
/// totals of ideals and of ideals inside F^c. Subspaces inside F^c are ideals
/// outright in a central class (short-circuited; certified by the caller).
struct IdealCensus {
  std::size_t carrier_dim = 0;
  std::size_t top_dim = 0;
  uint64_t q = 2;
  std::vector<uint64_t> subspaces_by_dim;  // all subspaces of the carrier
  std::vector<uint64_t> ideals_by_dim;
  std::vector<uint64_t> ideals_in_top_by_dim;
  uint64_t subspaces = 0, ideals = 0, ideals_in_top = 0;

  double in_top_fraction() const {
    return ideals ? double(ideals_in_top) / double(ideals) : 0.0;
  }
};

struct CensusOptions {
  uint64_t subspace_guard = 100000000ull;  // 1e8
  int threads = 1;
};

template <CoefficientField F>
IdealCensus enumerate_ideals(const RelativelyFreeAlgebra<F>& Fn,
                             const CensusOptions& opts = {});

/// Full-sweep census for prime fields.
inline IdealCensus enumerate_ideals(const RelativelyFreeAlgebra<PrimeField>& Fn,
                                    const CensusOptions& opts) {
  const auto& P = Fn.carrier();
  const PrimeField& fld = P.field();
  const std::size_t d = P.dim();
  uint64_t total = 0;
  {
    uint128 t = 0;
    for (unsigned m = 0; m <= d; ++m) t += gaussian_binomial(static_cast<unsigned>(d), m, fld.p());
    if (!fits_u64(t, &total) || total > opts.subspace_guard)
      throw guard_error("census subspace count exceeds guard; restrict to ideals inside F^c");
  }
  std::size_t top_offset = d - Fn.top_component().dim();
  FastAlgebra fa = FastAlgebra::from(P, top_offset);

  IdealCensus census;
  census.carrier_dim = d;
  census.top_dim = d - top_offset;
  census.q = fld.p();
  census.subspaces_by_dim.assign(d + 1, 0);
  census.ideals_by_dim.assign(d + 1, 0);
  census.ideals_in_top_by_dim.assign(d + 1, 0);

  int threads = std::max(1, opts.threads);
  for (std::size_t m = 0; m <= d; ++m) {
    auto patterns = detail_census::pivot_patterns(d, m);
    std::vector<uint64_t> subs(threads, 0), ideals(threads, 0), intop(threads, 0);
    auto work = [&](int w) {
      for (std::size_t pi = w; pi < patterns.size(); pi += threads) {
        detail_census::for_each_subspace_of_pattern(
            d, fa.p, patterns[pi], top_offset,
            [&](const std::vector<std::vector<uint32_t>>& rows,
                const std::vector<std::size_t>& pivots, bool in_top) {
              ++subs[w];
              if (in_top) {
                ++ideals[w];
                ++intop[w];
              } else if (detail_census::fast_is_ideal(fa, rows, pivots)) {
                ++ideals[w];
              }
            });
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }
    for (int w = 0; w < threads; ++w) {
      census.subspaces_by_dim[m] += subs[w];
      census.ideals_by_dim[m] += ideals[w];
      census.ideals_in_top_by_dim[m] += intop[w];
    }
  }
  for (std::size_t m = 0; m <= d; ++m) {
    census.subspaces += census.subspaces_by_dim[m];
    census.ideals += census.ideals_by_dim[m];
    census.ideals_in_top += census.ideals_in_top_by_dim[m];
  }
  return census;
}

/// Orbit census of the subspaces of F^c under the induced GL(n,q) action:
/// union-find closure over the generator images, cross-checked by Burnside
/// counting over the full group.
struct OrbitCensus {
  std::size_t top_dim = 0;
  std::vector<Subspace<PrimeField>> subspaces;          // all subspaces of F^c
  std::vector<std::size_t> orbit_of;                    // subspace -> orbit id
  std::vector<std::vector<std::size_t>> orbits;         // orbit id -> member ids
  std::vector<uint64_t> orbit_count_by_dim;             // per subspace dimension
  std::vector<uint64_t> burnside_count_by_dim;          // independent cross-check
};

namespace detail_census {
inline std::string subspace_key(const Subspace<PrimeField>& s) {
  std::string key;
  key.reserve(s.dim() * s.ambient_dim() + 4);
  key += char('0' + s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.ambient_dim(); ++j)
      key += char('0' + s.basis()(i, j).v);
  return key;
}
}  // namespace detail_census

inline OrbitCensus isomorphism_class_census(const TopAction<PrimeField>& act,
                                            const std::vector<Matrix<PrimeField>>& gl,
                                            uint64_t guard = 2000000) {
  const PrimeField& fld = gl.front().field();
  std::size_t d = act.top_dim();
  OrbitCensus oc;
  oc.top_dim = d;
  {
    uint128 t = 0;
    for (unsigned m = 0; m <= d; ++m) t += gaussian_binomial(static_cast<unsigned>(d), m, fld.p());
    uint64_t total = 0;
    if (!fits_u64(t, &total) || total > guard)
      throw guard_error("orbit census subspace count exceeds guard");
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t m = 0; m <= d; ++m) {
    SubspaceStream st(fld, d, m);
    while (auto s = st.next()) {
      index.emplace(detail_census::subspace_key(*s), oc.subspaces.size());
      oc.subspaces.push_back(std::move(*s));
    }
  }
  // union-find over generator images
  std::vector<std::size_t> parent(oc.subspaces.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  std::vector<Matrix<PrimeField>> gen_mats =
      gl_generators(fld, static_cast<int>(gl.front().rows()));
  std::vector<Matrix<PrimeField>> gen_tops;
  for (const auto& g : gen_mats) gen_tops.push_back(act.apply(g));
  for (std::size_t i = 0; i < oc.subspaces.size(); ++i)
    for (const auto& gt : gen_tops) {
      auto img = oc.subspaces[i].apply(gt);
      auto it = index.find(detail_census::subspace_key(img));
      if (it == index.end()) throw std::logic_error("orbit image escaped the index");
      unite(i, it->second);
    }
  // materialize orbits
  std::unordered_map<std::size_t, std::size_t> root_to_orbit;
  oc.orbit_of.assign(oc.subspaces.size(), 0);
  for (std::size_t i = 0; i < oc.subspaces.size(); ++i) {
    std::size_t r = find(i);
    auto it = root_to_orbit.find(r);
    if (it == root_to_orbit.end()) {
      it = root_to_orbit.emplace(r, oc.orbits.size()).first;
      oc.orbits.emplace_back();
    }
    oc.orbit_of[i] = it->second;
    oc.orbits[it->second].push_back(i);
  }
  oc.orbit_count_by_dim.assign(d + 1, 0);
  for (const auto& orb : oc.orbits) ++oc.orbit_count_by_dim[oc.subspaces[orb.front()].dim()];

  // Burnside cross-check: orbits per dimension = average number of fixed
  // subspaces over the whole group
  oc.burnside_count_by_dim.assign(d + 1, 0);
  std::vector<uint64_t> fixed(d + 1, 0);
  for (const auto& A : gl) {
    auto t = act.apply(A);
    for (const auto& s : oc.subspaces)
      if (s.apply(t) == s) ++fixed[s.dim()];
  }
  for (std::size_t m = 0; m <= d; ++m) {
    if (fixed[m] % gl.size() != 0)
      throw std::logic_error("Burnside sum not divisible by the group order");
    oc.burnside_count_by_dim[m] = fixed[m] / gl.size();
  }
  return oc;
}

/// Per-orbit automorphism statistics and the exact generic-order check
/// |Aut(F/K)| = (q-1) (|F/K| / q^n)^n on scalar-only orbits.
struct AutStatistics {
  struct OrbitRow {
    std::size_t dim;            // dim K
    std::size_t orbit_size;
    uint64_t stabilizer_order;
    uint64_t aut_order;
    bool scalar_only;
    bool pffaut_match;          // aut_order == (q-1) * (|P|/q^n)^n
  };
  std::vector<OrbitRow> rows;
  std::map<uint64_t, uint64_t> aut_histogram;  // |Aut| -> number of orbits
  bool all_scalar_only_match = true;
  uint64_t scalar_only_orbits = 0;
};

inline AutStatistics aut_statistics(const RelativelyFreeAlgebra<PrimeField>& Fn,
                                    const TopAction<PrimeField>& act,
                                    const std::vector<Matrix<PrimeField>>& gl,
                                    const OrbitCensus& oc) {
  const PrimeField& fld = Fn.carrier().field();
  uint64_t q = fld.p();
  AutStatistics out;
  for (const auto& orb : oc.orbits) {
    const auto& K = oc.subspaces[orb.front()];
    auto ord = automorphism_order(Fn, act, K, gl);
    uint64_t dimP = Fn.dim() - K.dim();
    // (q-1) * (|P| / q^n)^n = (q-1) * q^{(dim P - n) n}
    uint64_t generic = q - 1;
    for (int i = 0; i < Fn.rank() * (static_cast<int>(dimP) - Fn.rank()); ++i) generic *= q;
    bool match = ord.order == generic;
    if (ord.scalar_only) {
      ++out.scalar_only_orbits;
      if (!match) out.all_scalar_only_match = false;
    }
    out.rows.push_back({K.dim(), orb.size(), ord.stabilizer_order, ord.order,
                        ord.scalar_only, match});
    ++out.aut_histogram[ord.order];
  }
  return out;
}

/// Stabilizer-genericity fractions over the subspaces of F^c.
struct StabilizerFractions {
  std::vector<uint64_t> total_by_dim;
  std::vector<uint64_t> scalar_only_by_dim;
  uint64_t total = 0, scalar_only = 0;
};

inline StabilizerFractions stabilizer_fractions(const TopAction<PrimeField>& act,
                                                const std::vector<Matrix<PrimeField>>& gl,
                                                const OrbitCensus& oc) {
  StabilizerFractions out;
  out.total_by_dim.assign(oc.top_dim + 1, 0);
  out.scalar_only_by_dim.assign(oc.top_dim + 1, 0);
  for (const auto& orb : oc.orbits) {
    const auto& K = oc.subspaces[orb.front()];
    auto stab = stabilizer_in_gl(act, K, gl);
    out.total_by_dim[K.dim()] += orb.size();
    out.total += orb.size();
    if (stab.is_scalar_only) {
      out.scalar_only_by_dim[K.dim()] += orb.size();
      out.scalar_only += orb.size();
    }
  }
  return out;
}

/// Decides whether F/K (K inside F^c, in top coordinates) has Q as a quotient,
/// by generator-image search organized by the induced linear part: the kernel
/// condition h(K) = 0 depends only on the images mod Q^2, so whole blocks of
/// |Q^2|^n tuples are pruned at once.
inline bool surjection_exists(const RelativelyFreeAlgebra<PrimeField>& Fn,
                              const TopAction<PrimeField>& act, const Subspace<PrimeField>& K,
                              const StructureAlgebra<PrimeField>& Q,
                              uint64_t guard = (1u << 26)) {
  const PrimeField& fld = Q.field();
  const int n = Fn.rank();
  auto q2 = subspace_product(Q, Subspace<PrimeField>::full(fld, Q.dim()),
                             Subspace<PrimeField>::full(fld, Q.dim()));
  auto qq = quotient(Q, q2);
  std::size_t rq = qq.algebra.dim();
  long double work = 1;
  for (int i = 0; i < n; ++i) work *= static_cast<long double>(std::pow(double(fld.p()), rq));
  if (work > static_cast<long double>(guard)) throw guard_error("surjection search exceeds guard");
  if (rq > static_cast<std::size_t>(n) * 64) return false;

  // K in full coordinates of Fn
  Matrix<PrimeField> Krows(fld, 0, Fn.dim());
  for (std::size_t i = 0; i < K.dim(); ++i) {
    auto v = Fn.carrier().zero_vec();
    for (std::size_t t = 0; t < act.top_coords().size(); ++t)
      v[act.top_coords()[t]] = K.basis()(i, t);
    Krows.append_row(v);
  }
  auto Kfull = Subspace<PrimeField>::span(Krows);

  auto scalars = fld.enumerate();
  std::vector<uint32_t> bodo(std::size_t(n) * rq, 0);
  std::vector<StructureAlgebra<PrimeField>::Vec> base_images(n, Q.zero_vec());
  for (;;) {
    // images modulo Q^2, lifted through coset representatives
    for (int i = 0; i < n; ++i) {
      auto v = qq.algebra.zero_vec();
      for (std::size_t j = 0; j < rq; ++j) v[j] = scalars[bodo[std::size_t(i) * rq + j]];
      base_images[i] = qq.lift.apply(v);
    }
    // rank precheck mod Q^2 and the kernel condition (B-dependent only)
    Matrix<PrimeField> bm(fld, rq, n);
    for (int i = 0; i < n; ++i)
      for (std::size_t j = 0; j < rq; ++j) bm(j, i) = scalars[bodo[std::size_t(i) * rq + j]];
    if (bm.rank() == rq) {
      auto h0 = extend_generator_map_matrix(Fn, base_images, Q);
      bool kills = true;
      for (std::size_t r = 0; r < Kfull.dim() && kills; ++r) {
        auto img = h0.apply(Kfull.basis().row(r));
        for (const auto& x : img) kills = kills && x.is_zero();
      }
      if (kills) {
        // sweep the Q^2 corrections; surjectivity = full rank of the image span
        std::size_t q2dim = q2.dim();
        std::vector<uint32_t> wodo(std::size_t(n) * q2dim, 0);
        std::vector<StructureAlgebra<PrimeField>::Vec> images(n);
        for (;;) {
          for (int i = 0; i < n; ++i) {
            images[i] = base_images[i];
            for (std::size_t j = 0; j < q2dim; ++j) {
              uint32_t cc = wodo[std::size_t(i) * q2dim + j];
              if (cc == 0) continue;
              auto row = q2.basis().row(j);
              for (std::size_t t = 0; t < images[i].size(); ++t)
                images[i][t] = images[i][t] + fld.element(cc) * row[t];
            }
          }
          auto h = extend_generator_map_matrix(Fn, images, Q);
          if (h.rank() == Q.dim()) return true;
          std::size_t k = wodo.size();
          bool carry = true;
          while (k-- > 0) {
            if (++wodo[k] < fld.p()) {
              carry = false;
              break;
            }
            wodo[k] = 0;
          }
          if (carry) break;
        }
      }
    }
    std::size_t k = bodo.size();
    bool carry = true;
    while (k-- > 0) {
      if (++bodo[k] < fld.p()) {
        carry = false;
        break;
      }
      bodo[k] = 0;
    }
    if (carry) break;
  }
  return false;
}

/// Fraction of ideals K inside F^c whose quotient F/K surjects onto Q.
struct QuotientTestReport {
  std::vector<uint64_t> total_by_dim;
  std::vector<uint64_t> surjecting_by_dim;
  uint64_t total = 0, surjecting = 0;
  double fraction() const { return total ? double(surjecting) / double(total) : 0.0; }
};

inline QuotientTestReport generic_quotient_test(const RelativelyFreeAlgebra<PrimeField>& Fn,
                                                const TopAction<PrimeField>& act,
                                                const StructureAlgebra<PrimeField>& Q,
                                                uint64_t subspace_guard = 1000000) {
  const PrimeField& fld = Fn.carrier().field();
  std::size_t d = act.top_dim();
  QuotientTestReport rep;
  rep.total_by_dim.assign(d + 1, 0);
  rep.surjecting_by_dim.assign(d + 1, 0);
  uint64_t seen = 0;
  for (std::size_t m = 0; m <= d; ++m) {
    SubspaceStream st(fld, d, m, subspace_guard);
    while (auto K = st.next()) {
      if (++seen > subspace_guard) throw guard_error("quotient test exceeds subspace guard");
      ++rep.total_by_dim[m];
      if (surjection_exists(Fn, act, *K, Q)) ++rep.surjecting_by_dim[m];
    }
    rep.total += rep.total_by_dim[m];
    rep.surjecting += rep.surjecting_by_dim[m];
  }
  return rep;
}

/// Fraction of r-tuples of elements of P that freely generate a rank-r
/// relatively free subalgebra (dimension of the generated subalgebra equals
/// dim F_r).
inline double free_tuple_fraction(const StructureAlgebra<PrimeField>& P,
                                  std::size_t free_rank_dim, int r,
                                  uint64_t guard = (1u << 22)) {
  const PrimeField& fld = P.field();
  long double card = 1;
  for (std::size_t i = 0; i < P.dim(); ++i) card *= fld.p();
  long double tuples = 1;
  for (int i = 0; i < r; ++i) tuples *= card;
  if (tuples > static_cast<long double>(guard)) throw guard_error("tuple sweep exceeds guard");

  auto scalars = fld.enumerate();
  uint64_t total = 0, free_count = 0;
  std::vector<uint32_t> odo(std::size_t(r) * P.dim(), 0);
  for (;;) {
    ++total;
    RrefAccumulator<PrimeField> acc(fld, P.dim());
    std::vector<StructureAlgebra<PrimeField>::Vec> frontier;
    for (int i = 0; i < r; ++i) {
      auto v = P.zero_vec();
      for (std::size_t j = 0; j < P.dim(); ++j) v[j] = scalars[odo[std::size_t(i) * P.dim() + j]];
      if (acc.insert(v)) frontier.push_back(std::move(v));
    }
    // close under products to get the generated subalgebra
    std::vector<StructureAlgebra<PrimeField>::Vec> members = frontier;
    while (!frontier.empty()) {
      std::vector<StructureAlgebra<PrimeField>::Vec> next;
      for (const auto& a : frontier)
        for (const auto& b : members) {
          auto ab = P.mul(a, b);
          if (acc.insert(ab)) next.push_back(ab);
          auto ba = P.mul(b, a);
          if (acc.insert(ba)) next.push_back(ba);
        }
      for (const auto& v : next) members.push_back(v);
      frontier = std::move(next);
    }
    if (acc.rank() == free_rank_dim) ++free_count;
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
  return double(free_count) / double(total);
}

/// Samples a generic quotient: uniformly random floor(d/2)-dimensional
/// subspace of F^c, re-sampled until the stabilizer is scalar-only. Tiny ranks
/// can lack scalar-only subspaces altogether (commutative n=2, q=2 has none);
/// the sample with the smallest stabilizer seen is returned instead then.
struct GenericIdealSample {
  Subspace<PrimeField> ideal;
  bool scalar_only;
  uint64_t stabilizer_order;
};

inline GenericIdealSample sample_generic_ideal_full(const TopAction<PrimeField>& act,
                                                    const std::vector<Matrix<PrimeField>>& gl,
                                                    std::mt19937_64& rng, int max_tries = 200) {
  const PrimeField& fld = gl.front().field();
  std::size_t d = act.top_dim();
  std::optional<GenericIdealSample> best;
  for (int t = 0; t < max_tries; ++t) {
    auto K = random_subspace(fld, d, d / 2, rng);
    auto stab = stabilizer_in_gl(act, K, gl);
    if (stab.is_scalar_only) return {std::move(K), true, stab.elements.size()};
    if (!best || stab.elements.size() < best->stabilizer_order)
      best = GenericIdealSample{std::move(K), false, stab.elements.size()};
  }
  return *best;
}

inline Subspace<PrimeField> sample_generic_ideal(const TopAction<PrimeField>& act,
                                                 const std::vector<Matrix<PrimeField>>& gl,
                                                 std::mt19937_64& rng, int max_tries = 200) {
  return sample_generic_ideal_full(act, gl, rng, max_tries).ideal;
}

}  // namespace nilgen

#endif
