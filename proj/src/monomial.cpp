#include "nilgen/monomial.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace nilgen {

MonomialContext::MonomialContext(int n, int c, std::size_t basis_guard) : n_(n), c_(c) {
  if (n < 1 || c < 1) throw input_error("need n >= 1 generators and class c >= 1");
  counts_.assign(c, 0);
  offsets_.assign(c, 0);
  split_start_.assign(c, {});

  // count(k) = sum_i count(i)*count(k-i), count(1) = n  (Catalan(k-1) * n^k)
  counts_[0] = static_cast<std::size_t>(n);
  std::size_t total = counts_[0];
  for (int k = 2; k <= c; ++k) {
    split_start_[k - 1].assign(k - 1, 0);
    std::size_t cnt = 0;
    for (int i = 1; i < k; ++i) {
      split_start_[k - 1][i - 1] = cnt;
      cnt += counts_[i - 1] * counts_[k - i - 1];
    }
    counts_[k - 1] = cnt;
    total += cnt;
    if (total > basis_guard)
      throw guard_error("free algebra basis size exceeds guard (" + std::to_string(basis_guard) +
                        ") at degree " + std::to_string(k));
  }
  for (int k = 2; k <= c; ++k) offsets_[k - 1] = offsets_[k - 2] + counts_[k - 2];

  nodes_.reserve(total);
  for (int v = 1; v <= n_; ++v) nodes_.push_back({1, -1, -1, v});
  for (int k = 2; k <= c; ++k)
    for (int i = 1; i < k; ++i)
      for (std::size_t u = 0; u < counts_[i - 1]; ++u)
        for (std::size_t v = 0; v < counts_[k - i - 1]; ++v)
          nodes_.push_back({k, static_cast<int>(offsets_[i - 1] + u),
                            static_cast<int>(offsets_[k - i - 1] + v), 0});
}

int MonomialContext::product(int u, int v) const {
  int k = nodes_[u].deg + nodes_[v].deg;
  if (k > c_) return kZero;
  int i = nodes_[u].deg;
  std::size_t ru = u - offsets_[i - 1];
  std::size_t rv = v - offsets_[nodes_[v].deg - 1];
  return static_cast<int>(offsets_[k - 1] + split_start_[k - 1][i - 1] +
                          ru * counts_[k - i - 1] + rv);
}

MultiDegree MonomialContext::multidegree(int idx) const {
  MultiDegree md;
  std::function<void(int)> walk = [&](int t) {
    if (is_leaf(t)) {
      ++md[leaf_var(t)];
      return;
    }
    walk(left(t));
    walk(right(t));
  };
  walk(idx);
  return md;
}

std::string MonomialContext::str(int idx) const {
  if (is_leaf(idx)) return "x" + std::to_string(leaf_var(idx));
  return "(" + str(left(idx)) + " " + str(right(idx)) + ")";
}

namespace {
void skip_ws(const std::string& s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}
}  // namespace

int MonomialContext::parse(const std::string& s) const {
  std::size_t pos = 0;
  std::function<int()> mono = [&]() -> int {
    skip_ws(s, pos);
    if (pos >= s.size()) throw input_error("unexpected end of monomial: " + s);
    if (s[pos] == '(') {
      ++pos;
      int l = mono();
      int r = mono();
      skip_ws(s, pos);
      if (pos >= s.size() || s[pos] != ')') throw input_error("expected ')': " + s);
      ++pos;
      int p = product(l, r);
      if (p == kZero) throw input_error("monomial degree exceeds class: " + s);
      return p;
    }
    if (s[pos] == 'x') {
      ++pos;
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) throw input_error("expected generator index: " + s);
      int v = std::stoi(s.substr(start, pos - start));
      if (v < 1 || v > n_) throw input_error("generator out of range: x" + std::to_string(v));
      return generator(v);
    }
    throw input_error("unexpected character in monomial: " + s);
  };
  int r = mono();
  skip_ws(s, pos);
  if (pos != s.size()) throw input_error("trailing characters in monomial: " + s);
  return r;
}

// ---------------------------------------------------------------------------
// Identity

int Identity::add_leaf(int var) {
  arena_.push_back({var, -1, -1, 1});
  nvars_ = std::max(nvars_, var);
  return static_cast<int>(arena_.size()) - 1;
}

int Identity::add_product(int l, int r) {
  arena_.push_back({0, l, r, arena_[l].deg + arena_[r].deg});
  return static_cast<int>(arena_.size()) - 1;
}

void Identity::add_term(long long coeff, int tree) { terms_.push_back({coeff, tree}); }

int Identity::compare_trees(int a, int b) const {
  const Node &x = arena_[a], &y = arena_[b];
  if (x.deg != y.deg) return x.deg < y.deg ? -1 : 1;
  if (x.left < 0 && y.left < 0) return x.var == y.var ? 0 : (x.var < y.var ? -1 : 1);
  // equal degree: both internal (a leaf has degree 1 and so does a leaf)
  if (x.left < 0) return -1;
  if (y.left < 0) return 1;
  int c = compare_trees(x.left, y.left);
  if (c != 0) return c;
  return compare_trees(x.right, y.right);
}

void Identity::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), [&](const IdentityTerm& a, const IdentityTerm& b) {
    return compare_trees(a.tree, b.tree) < 0;
  });
  std::vector<IdentityTerm> merged;
  for (const auto& t : terms_) {
    if (!merged.empty() && compare_trees(merged.back().tree, t.tree) == 0)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(t);
  }
  terms_.clear();
  for (const auto& t : merged)
    if (t.coeff != 0) terms_.push_back(t);
  nvars_ = 0;
  std::function<void(int)> scan = [&](int t) {
    if (arena_[t].left < 0) {
      nvars_ = std::max(nvars_, arena_[t].var);
      return;
    }
    scan(arena_[t].left);
    scan(arena_[t].right);
  };
  for (const auto& t : terms_) scan(t.tree);
}

int Identity::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, arena_[t.tree].deg);
  return d;
}

std::vector<int> Identity::term_multidegree(int term_idx) const {
  std::vector<int> md(nvars_, 0);
  std::function<void(int)> walk = [&](int t) {
    if (arena_[t].left < 0) {
      ++md[arena_[t].var - 1];
      return;
    }
    walk(arena_[t].left);
    walk(arena_[t].right);
  };
  walk(terms_[term_idx].tree);
  return md;
}

int Identity::pervar_degree(int var) const {
  int d = 0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    auto md = term_multidegree(static_cast<int>(i));
    if (var <= nvars_) d = std::max(d, md[var - 1]);
  }
  return d;
}

int Identity::max_pervar_degree() const {
  int d = 0;
  for (int v = 1; v <= nvars_; ++v) d = std::max(d, pervar_degree(v));
  return d;
}

bool Identity::is_multilinear() const {
  if (terms_.empty()) return true;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    auto md = term_multidegree(static_cast<int>(i));
    for (int x : md)
      if (x > 1) return false;
    if (md != term_multidegree(0)) return false;
  }
  return true;
}

bool Identity::is_multihomogeneous() const {
  if (terms_.empty()) return true;
  auto first = term_multidegree(0);
  for (std::size_t i = 1; i < terms_.size(); ++i)
    if (term_multidegree(static_cast<int>(i)) != first) return false;
  return true;
}

bool Identity::has_linear_part() const {
  for (const auto& t : terms_)
    if (arena_[t.tree].deg == 1) return true;
  return false;
}

std::vector<Identity> Identity::polarize() const {
  // fresh variable ids: (v, j) -> per-variable block, j = 0..deg_v-1
  std::vector<int> degs(nvars_, 0);
  for (int v = 1; v <= nvars_; ++v) degs[v - 1] = pervar_degree(v);
  std::vector<int> base(nvars_, 0);
  int nfresh = 0;
  for (int v = 0; v < nvars_; ++v) {
    base[v] = nfresh;
    nfresh += std::max(degs[v], 1);
  }

  // expand each term over all leaf assignments; group by fresh multidegree
  std::map<std::vector<int>, Identity> groups;
  for (const auto& term : terms_) {
    // collect leaves in preorder
    std::vector<int> leaf_vars;
    std::function<void(int)> collect = [&](int t) {
      if (arena_[t].left < 0) {
        leaf_vars.push_back(arena_[t].var);
        return;
      }
      collect(arena_[t].left);
      collect(arena_[t].right);
    };
    collect(term.tree);

    std::vector<int> choice(leaf_vars.size(), 0);
    for (;;) {
      std::vector<int> md(nfresh, 0);
      for (std::size_t i = 0; i < leaf_vars.size(); ++i)
        ++md[base[leaf_vars[i] - 1] + choice[i]];
      Identity& g = groups[md];
      // rebuild the tree with fresh labels in g's arena
      std::size_t leaf_pos = 0;
      std::function<int(int)> rebuild = [&](int t) -> int {
        if (arena_[t].left < 0) {
          int fresh = base[leaf_vars[leaf_pos] - 1] + choice[leaf_pos] + 1;
          ++leaf_pos;
          return g.add_leaf(fresh);
        }
        int l = rebuild(arena_[t].left);
        int r = rebuild(arena_[t].right);
        return g.add_product(l, r);
      };
      g.add_term(term.coeff, rebuild(term.tree));

      // odometer over leaf choices (bounded by the variable's degree)
      std::size_t i = choice.size();
      bool carry = true;
      while (i-- > 0) {
        int cap = std::max(degs[leaf_vars[i] - 1], 1);
        if (++choice[i] < cap) {
          carry = false;
          break;
        }
        choice[i] = 0;
      }
      if (carry) break;
    }
  }

  // canonical renaming by first occurrence in the canonicalized term list, then dedupe
  std::vector<Identity> out;
  for (auto& [md, g] : groups) {
    g.canonicalize();
    if (g.is_zero()) continue;
    std::map<int, int> rename;
    std::function<void(const Identity&, int)> visit = [&](const Identity& id, int t) {
      if (id.node(t).left < 0) {
        if (!rename.count(id.node(t).var))
          rename[id.node(t).var] = static_cast<int>(rename.size()) + 1;
        return;
      }
      visit(id, id.node(t).left);
      visit(id, id.node(t).right);
    };
    for (const auto& t : g.terms()) visit(g, t.tree);
    Identity renamed;
    for (const auto& t : g.terms()) {
      std::function<int(int)> rebuild = [&](int nd) -> int {
        if (g.node(nd).left < 0) return renamed.add_leaf(rename[g.node(nd).var]);
        int l = rebuild(g.node(nd).left);
        int r = rebuild(g.node(nd).right);
        return renamed.add_product(l, r);
      };
      renamed.add_term(t.coeff, rebuild(t.tree));
    }
    renamed.canonicalize();
    bool dup = false;
    for (const auto& prev : out)
      if (prev.str() == renamed.str()) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(renamed));
  }
  return out;
}

std::string Identity::tree_str(int t) const {
  if (arena_[t].left < 0) return "y" + std::to_string(arena_[t].var);
  return "(" + tree_str(arena_[t].left) + "*" + tree_str(arena_[t].right) + ")";
}

std::string Identity::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    long long c = terms_[i].coeff;
    if (i == 0) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    long long a = c < 0 ? -c : c;
    if (a != 1) s += std::to_string(a) + "*";
    s += tree_str(terms_[i].tree);
  }
  return s;
}

Identity Identity::parse(const std::string& text) {
  Identity id;
  std::size_t pos = 0;
  auto peek = [&]() -> char {
    skip_ws(text, pos);
    return pos < text.size() ? text[pos] : '\0';
  };
  std::function<int()> mono = [&]() -> int {
    skip_ws(text, pos);
    if (pos >= text.size()) throw input_error("unexpected end of identity: " + text);
    if (text[pos] == '(') {
      ++pos;
      int l = mono();
      skip_ws(text, pos);
      if (pos >= text.size() || text[pos] != '*')
        throw input_error("expected '*' in product: " + text);
      ++pos;
      int r = mono();
      skip_ws(text, pos);
      if (pos >= text.size() || text[pos] != ')') throw input_error("expected ')': " + text);
      ++pos;
      return id.add_product(l, r);
    }
    if (text[pos] == 'y') {
      ++pos;
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (start == pos) throw input_error("expected variable index: " + text);
      int v = std::stoi(text.substr(start, pos - start));
      if (v < 1 || v > 9) throw input_error("variables are y1..y9: " + text);
      return id.add_leaf(v);
    }
    throw input_error("unexpected character in identity: " + text);
  };

  bool first = true;
  for (;;) {
    char c = peek();
    if (c == '\0') break;
    long long sign = 1;
    if (c == '+' || c == '-') {
      sign = c == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      throw input_error("expected '+' or '-' between terms: " + text);
    }
    skip_ws(text, pos);
    long long coeff = 1;
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      coeff = std::stoll(text.substr(start, pos - start));
      skip_ws(text, pos);
      if (pos >= text.size() || text[pos] != '*')
        throw input_error("coefficient must be followed by '*': " + text);
      ++pos;
    }
    id.add_term(sign * coeff, mono());
    first = false;
  }
  if (first) throw input_error("empty identity: " + text);
  id.canonicalize();
  if (id.is_zero()) throw input_error("identity is identically zero: " + text);
  return id;
}

}  // namespace nilgen
