#ifndef NILGEN_MONOMIAL_HPP
#define NILGEN_MONOMIAL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nilgen/errors.hpp"

namespace nilgen {

/// Multidegree of a monomial: leaf count per generator (1-based generators).
using MultiDegree = std::map<int, int>;

/// Interned nonassociative monomials of degree <= c in generators x1..xn,
/// i.e. binary trees with labeled leaves, in a fixed canonical order:
/// by degree, then recursively (left subtree, right subtree), leaves by label.
/// Indices are dense: 0..size()-1; index order IS the canonical order, and
/// the product of two interned monomials is one arithmetic lookup.
class MonomialContext {
 public:
  static constexpr int kZero = -1;  // degree overflow marker

  MonomialContext(int n, int c, std::size_t basis_guard = 50000);

  int generators() const { return n_; }
  int nil_class() const { return c_; }
  std::size_t size() const { return nodes_.size(); }

  int degree(int idx) const { return nodes_[idx].deg; }
  bool is_leaf(int idx) const { return nodes_[idx].left < 0; }
  int leaf_var(int idx) const { return nodes_[idx].var; }  // 1-based
  int left(int idx) const { return nodes_[idx].left; }
  int right(int idx) const { return nodes_[idx].right; }

  /// First index of the given degree block (monomials of equal degree are contiguous).
  std::size_t degree_offset(int deg) const { return offsets_[deg - 1]; }
  std::size_t degree_count(int deg) const { return counts_[deg - 1]; }

  int generator(int var) const { return var - 1; }  // x_var, 1-based

  /// Grafted tree (u)(v), or kZero when the degree exceeds c.
  int product(int u, int v) const;

  MultiDegree multidegree(int idx) const;

  std::string str(int idx) const;
  /// Parses the same fully parenthesized grammar str() emits, e.g. "((x1 x2) x2)".
  int parse(const std::string& s) const;

 private:
  struct Node {
    int deg;
    int left, right;  // -1,-1 for leaves
    int var;          // leaf label, 1-based; 0 for internal
  };

  int n_, c_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> counts_;   // per degree 1..c
  std::vector<std::size_t> offsets_;  // per degree 1..c
  // split_start_[k-1][i-1]: offset inside degree-k block where the (i, k-i) split begins
  std::vector<std::vector<std::size_t>> split_start_;
};

/// One term of an identity: integer coefficient times a binary tree over
/// formal variables y1..y9 (leaf labels are 1-based variable indices).
struct IdentityTerm {
  long long coeff;
  int tree;  // node index into the owning Identity's arena
};

/// A nonassociative polynomial identity in formal variables, with integer
/// coefficients. Terms are kept merged and sorted in a canonical tree order.
class Identity {
 public:
  struct Node {
    int var;          // 1-based for leaves, 0 for internal
    int left, right;  // -1 for leaves
    int deg;
  };

  Identity() = default;

  /// Grammar: expr := ['-'] term (('+'|'-') term)*;
  ///          term := [int '*'] mono | int;
  ///          mono := yK | '(' mono '*' mono ')'.
  static Identity parse(const std::string& text);

  bool is_zero() const { return terms_.empty(); }
  int num_variables() const { return nvars_; }
  int degree() const;                      // max term degree
  int pervar_degree(int var) const;        // degree in variable `var` (1-based)
  int max_pervar_degree() const;
  bool is_multilinear() const;
  bool is_multihomogeneous() const;        // all terms share one multidegree
  std::vector<int> term_multidegree(int term_idx) const;  // size nvars_
  bool has_linear_part() const;            // some term of degree 1

  const std::vector<IdentityTerm>& terms() const { return terms_; }
  const std::vector<Node>& arena() const { return arena_; }
  const Node& node(int i) const { return arena_[i]; }

  /// All multihomogeneous components of the full polarization (each variable
  /// split into deg-many fresh ones), canonically renamed and deduplicated.
  /// Coefficients stay integral; reduce them in the target field at use time.
  std::vector<Identity> polarize() const;

  std::string str() const;

  /// Builder API used by parse()/polarize() and programmatic construction.
  int add_leaf(int var);
  int add_product(int l, int r);
  void add_term(long long coeff, int tree);
  void canonicalize();  // sort + merge terms, recompute nvars

 private:
  int tree_degree(int t) const { return arena_[t].deg; }
  int compare_trees(int a, int b) const;
  std::string tree_str(int t) const;

  std::vector<Node> arena_;
  std::vector<IdentityTerm> terms_;
  int nvars_ = 0;
};

}  // namespace nilgen

#endif
