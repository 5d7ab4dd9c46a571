#ifndef NILGEN_SUBSPACE_HPP
#define NILGEN_SUBSPACE_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "nilgen/errors.hpp"
#include "nilgen/gaussian.hpp"
#include "nilgen/matrix.hpp"

namespace nilgen {

/// Incrementally maintained row space in reduced row echelon form.
/// insert() reduces a vector against the current rows and, if independent,
/// inserts it keeping the RREF shape. The workhorse behind every span here.
template <CoefficientField F>
class RrefAccumulator {
 public:
  using Elem = typename F::Elem;

  RrefAccumulator(F fld, std::size_t ambient)
      : fld_(std::move(fld)), ambient_(ambient) {}

  std::size_t ambient() const { return ambient_; }
  std::size_t rank() const { return rows_.size(); }

  /// Reduces v in place against the current rows; returns the first nonzero
  /// coordinate or nullopt if v reduced to zero.
  std::optional<std::size_t> reduce(std::vector<Elem>& v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      Elem f = v[pivots_[r]];
      if (f.is_zero()) continue;
      const auto& row = rows_[r];
      for (std::size_t j = pivots_[r]; j < ambient_; ++j)
        if (!row[j].is_zero()) v[j] = v[j] - f * row[j];
    }
    for (std::size_t j = 0; j < ambient_; ++j)
      if (!v[j].is_zero()) return j;
    return std::nullopt;
  }

  bool contains(std::vector<Elem> v) const { return !reduce(v).has_value(); }

  /// Returns true if the vector enlarged the span.
  bool insert(std::vector<Elem> v) {
    auto lead = reduce(v);
    if (!lead) return false;
    std::size_t c = *lead;
    Elem inv = v[c].inverse();
    for (std::size_t j = c; j < ambient_; ++j) v[j] = v[j] * inv;
    // clear column c in existing rows
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      Elem f = rows_[r][c];
      if (f.is_zero()) continue;
      for (std::size_t j = c; j < ambient_; ++j)
        rows_[r][j] = rows_[r][j] - f * v[j];
    }
    // keep rows sorted by pivot
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < c) ++pos;
    pivots_.insert(pivots_.begin() + pos, c);
    rows_.insert(rows_.begin() + pos, std::move(v));
    return true;
  }

  const std::vector<std::vector<Elem>>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  Matrix<F> to_matrix() const {
    Matrix<F> m(fld_, rows_.size(), ambient_);
    for (std::size_t i = 0; i < rows_.size(); ++i) m.set_row(i, rows_[i]);
    return m;
  }

 private:
  F fld_;
  std::size_t ambient_;
  std::vector<std::vector<Elem>> rows_;
  std::vector<std::size_t> pivots_;
};

/// Subspace of F^d held as the unique RREF basis of its row space.
/// Two subspaces are equal iff their RREF matrices are identical.
template <CoefficientField F>
class Subspace {
 public:
  using Elem = typename F::Elem;

  explicit Subspace(F fld, std::size_t ambient)
      : fld_(std::move(fld)), ambient_(ambient), basis_(fld_, 0, ambient) {}

  /// Row space of an arbitrary spanning matrix.
  static Subspace span(const Matrix<F>& m) {
    Subspace s(m.field(), m.cols());
    RrefAccumulator<F> acc(m.field(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) acc.insert(m.row(i));
    s.basis_ = acc.to_matrix();
    return s;
  }
  static Subspace zero(F fld, std::size_t ambient) { return Subspace(std::move(fld), ambient); }
  static Subspace full(F fld, std::size_t ambient) {
    Subspace s(fld, ambient);
    s.basis_ = Matrix<F>::identity(std::move(fld), ambient);
    return s;
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix<F>& basis() const { return basis_; }
  const F& field() const { return fld_; }

  bool contains(std::vector<Elem> v) const {
    RrefAccumulator<F> acc = accumulator();
    return acc.contains(std::move(v));
  }
  bool contains(const Subspace& other) const {
    check_ambient(other);
    RrefAccumulator<F> acc = accumulator();
    for (std::size_t i = 0; i < other.dim(); ++i)
      if (!acc.contains(other.basis_.row(i))) return false;
    return true;
  }
  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

  Subspace sum(const Subspace& other) const {
    check_ambient(other);
    return span(vstack(basis_, other.basis_));
  }

  /// Zassenhaus-style intersection via combined null space.
  Subspace intersect(const Subspace& other) const {
    check_ambient(other);
    // x in A∩B  <=>  x = u·basisA = v·basisB. Solve [basisA^T | -basisB^T] kernel.
    std::size_t ra = dim(), rb = other.dim();
    if (ra == 0 || rb == 0) return zero(fld_, ambient_);
    Matrix<F> sys(fld_, ambient_, ra + rb);
    for (std::size_t j = 0; j < ra; ++j)
      for (std::size_t i = 0; i < ambient_; ++i) sys(i, j) = basis_(j, i);
    for (std::size_t j = 0; j < rb; ++j)
      for (std::size_t i = 0; i < ambient_; ++i) sys(i, ra + j) = -other.basis_(j, i);
    Matrix<F> ker = sys.null_space();
    Matrix<F> vecs(fld_, ker.rows(), ambient_);
    for (std::size_t k = 0; k < ker.rows(); ++k)
      for (std::size_t i = 0; i < ambient_; ++i) {
        Elem x = fld_.zero();
        for (std::size_t j = 0; j < ra; ++j) x = x + ker(k, j) * basis_(j, i);
        vecs(k, i) = x;
      }
    return span(vecs);
  }

  RrefAccumulator<F> accumulator() const {
    RrefAccumulator<F> acc(fld_, ambient_);
    for (std::size_t i = 0; i < dim(); ++i) acc.insert(basis_.row(i));
    return acc;
  }

  /// Image under a linear map (vectors are rows; map acts as v -> v * M^T,
  /// i.e. M is applied to column vectors).
  Subspace apply(const Matrix<F>& m) const {
    Matrix<F> img(fld_, dim(), m.rows());
    for (std::size_t i = 0; i < dim(); ++i) {
      auto v = m.apply(basis_.row(i));
      img.set_row(i, v);
    }
    return span(img);
  }

 private:
  void check_ambient(const Subspace& o) const {
    if (ambient_ != o.ambient_) throw precondition_error("ambient dimension mismatch");
  }

  F fld_;
  std::size_t ambient_;
  Matrix<F> basis_;
};

/// Deterministic, resumable stream over all m-dimensional subspaces of F_q^d.
/// Pivot-column patterns are iterated lexicographically; for each pattern the
/// free entries run in row-major odometer order.
class SubspaceStream {
 public:
  SubspaceStream(PrimeField fld, std::size_t d, std::size_t m, uint64_t guard = 100000000ull)
      : fld_(fld), d_(d), m_(m) {
    if (m > d) throw precondition_error("subspace dimension exceeds ambient");
    uint64_t total = 0;
    if (!fits_u64(gaussian_binomial(d, m, fld.p()), &total) || total > guard)
      throw guard_error("subspace enumeration count exceeds guard (" + std::to_string(guard) + ")");
    total_ = total;
    pattern_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) pattern_[i] = i;
    init_pattern();
  }

  uint64_t total() const { return total_; }

  std::optional<Subspace<PrimeField>> next() {
    if (done_) return std::nullopt;
    Subspace<PrimeField> s = current();
    advance();
    return s;
  }

  /// Current pivot pattern (for partitioning work across threads).
  const std::vector<std::size_t>& pattern() const { return pattern_; }

  /// Builds the matrix for the current (pattern, odometer) state.
  Subspace<PrimeField> current() const {
    Matrix<PrimeField> b(fld_, m_, d_);
    std::size_t fi = 0;
    for (std::size_t r = 0; r < m_; ++r) {
      b(r, pattern_[r]) = fld_.one();
      for (std::size_t c = pattern_[r] + 1; c < d_; ++c) {
        if (is_pivot_[c]) continue;
        b(r, c) = fld_.element(odometer_[fi++]);
      }
    }
    return Subspace<PrimeField>::span(b);  // already RREF; span() normalizes cheaply
  }

  bool done() const { return done_; }

 private:
  void init_pattern() {
    is_pivot_.assign(d_, false);
    for (auto c : pattern_) is_pivot_[c] = true;
    std::size_t free_count = 0;
    for (std::size_t r = 0; r < m_; ++r)
      for (std::size_t c = pattern_[r] + 1; c < d_; ++c)
        if (!is_pivot_[c]) ++free_count;
    odometer_.assign(free_count, 0);
    if (m_ == 0) { /* single zero subspace */ }
  }

  void advance() {
    // odometer over free entries, row-major
    for (std::size_t i = odometer_.size(); i-- > 0;) {
      if (++odometer_[i] < fld_.p()) return;
      odometer_[i] = 0;
    }
    // next pivot pattern (lexicographic combination)
    std::size_t i = m_;
    while (i-- > 0) {
      if (pattern_[i] + (m_ - i) <= d_ - 1) {
        ++pattern_[i];
        for (std::size_t j = i + 1; j < m_; ++j) pattern_[j] = pattern_[j - 1] + 1;
        init_pattern();
        return;
      }
    }
    done_ = true;
  }

  PrimeField fld_;
  std::size_t d_, m_;
  uint64_t total_ = 0;
  std::vector<std::size_t> pattern_;
  std::vector<bool> is_pivot_;
  std::vector<uint32_t> odometer_;
  bool done_ = false;
};

/// Uniformly random m-dimensional subspace: random m×d matrices, rejected
/// until full rank (row space is then uniform on the Grassmannian).
inline Subspace<PrimeField> random_subspace(PrimeField fld, std::size_t d, std::size_t m,
                                            std::mt19937_64& rng) {
  if (m > d) throw precondition_error("subspace dimension exceeds ambient");
  std::uniform_int_distribution<uint32_t> dist(0, fld.p() - 1);
  for (;;) {
    Matrix<PrimeField> mat(fld, m, d);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < d; ++j) mat(i, j) = fld.element(dist(rng));
    if (mat.rank() == m) return Subspace<PrimeField>::span(mat);
  }
}

}  // namespace nilgen

#endif
