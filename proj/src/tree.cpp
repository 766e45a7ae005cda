#include "apriori/tree.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

namespace apriori {

namespace {

bool edge_less(const Edge& a, const Edge& b) {
  if (a.deriv != b.deriv) return a.deriv < b.deriv;
  return a.sub.key < b.sub.key;
}

std::string build_key(const Tree& t) {
  std::string s;
  if (!t.poly.is_zero()) s += "X^" + to_string(t.poly) + " ";
  s += "Xi_" + std::to_string(t.noise);
  if (!t.children.empty()) {
    s += " [";
    for (std::size_t i = 0; i < t.children.size(); ++i) {
      if (i) s += ", ";
      s += to_string(t.children[i].deriv) + ":" + t.children[i].sub.key;
    }
    s += "]";
  }
  return s;
}

}  // namespace

Tree make_tree(MultiIndex poly, int noise, std::vector<Edge> children) {
  if (noise < 0) throw std::invalid_argument("negative noise label");
  for (const auto& e : children)
    if (e.deriv.dim() != poly.dim() || e.sub.dim() != poly.dim())
      throw std::invalid_argument("tree dimension mismatch");
  Tree t;
  t.poly = std::move(poly);
  t.noise = noise;
  t.children = std::move(children);
  std::sort(t.children.begin(), t.children.end(), edge_less);
  t.key = build_key(t);
  return t;
}

Tree noise_leaf(std::size_t d, int j) { return make_tree(MultiIndex::zero(d), j); }
Tree unit_tree(std::size_t d) { return make_tree(MultiIndex::zero(d), 0); }
Tree poly_tree(const MultiIndex& k) { return make_tree(k, 0); }

Tree canonicalize(const Tree& t) {
  std::vector<Edge> ch;
  ch.reserve(t.children.size());
  for (const auto& e : t.children) ch.push_back(Edge{e.deriv, canonicalize(e.sub)});
  return make_tree(t.poly, t.noise, std::move(ch));
}

std::string serialize(const Tree& t) { return t.key; }

namespace {

struct Parser {
  const std::string& s;
  std::size_t d;
  std::size_t pos = 0;

  void ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool peek(char c) {
    ws();
    return pos < s.size() && s[pos] == c;
  }
  void expect(const std::string& lit) {
    ws();
    if (s.compare(pos, lit.size(), lit) != 0)
      throw std::invalid_argument("tree parse error at " + std::to_string(pos) + ": expected '" + lit + "'");
    pos += lit.size();
  }
  int integer() {
    ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw std::invalid_argument("tree parse error at " + std::to_string(pos) + ": expected integer");
    return std::stoi(s.substr(start, pos - start));
  }
  MultiIndex multi() {
    expect("(");
    std::vector<int> v;
    if (!peek(')')) {
      v.push_back(integer());
      while (peek(',')) {
        expect(",");
        v.push_back(integer());
      }
    }
    expect(")");
    if (v.size() != d) throw std::invalid_argument("multi-index of wrong dimension in tree text");
    return MultiIndex(v);
  }
  Tree tree() {
    MultiIndex poly = MultiIndex::zero(d);
    ws();
    if (s.compare(pos, 2, "X^") == 0) {
      pos += 2;
      poly = multi();
    }
    expect("Xi_");
    int j = integer();
    std::vector<Edge> ch;
    if (peek('[')) {
      expect("[");
      do {
        if (!ch.empty()) expect(",");
        MultiIndex k = multi();
        expect(":");
        ch.push_back(Edge{k, tree()});
      } while (peek(','));
      expect("]");
    }
    return make_tree(poly, j, std::move(ch));
  }
};

}  // namespace

Tree parse_tree(const std::string& text, std::size_t d) {
  Parser p{text, d};
  Tree t = p.tree();
  p.ws();
  if (p.pos != text.size()) throw std::invalid_argument("trailing characters in tree text");
  return t;
}

Tree tree_product(const Tree& a, const Tree& b) {
  if (a.noise != 0 && b.noise != 0) throw std::invalid_argument("product of two noise-rooted trees");
  std::vector<Edge> ch = a.children;
  ch.insert(ch.end(), b.children.begin(), b.children.end());
  return make_tree(a.poly + b.poly, a.noise + b.noise, std::move(ch));
}

Tree with_poly(const Tree& t, const MultiIndex& poly) { return make_tree(poly, t.noise, t.children); }
Tree with_noise(const Tree& t, int noise) { return make_tree(t.poly, noise, t.children); }

Tree add_child(const Tree& t, const MultiIndex& deriv, const Tree& sub) {
  std::vector<Edge> ch = t.children;
  ch.push_back(Edge{deriv, sub});
  return make_tree(t.poly, t.noise, std::move(ch));
}

BigInt tree_factorial(const Tree& t) {
  BigInt r = mi_factorial(t.poly);
  std::size_t i = 0;
  while (i < t.children.size()) {
    std::size_t j = i;
    while (j < t.children.size() && t.children[j].deriv == t.children[i].deriv &&
           t.children[j].sub.key == t.children[i].sub.key)
      ++j;
    BigInt f = tree_factorial(t.children[i].sub);
    BigInt fp;
    mpz_pow_ui(fp.get_mpz_t(), f.get_mpz_t(), j - i);
    r *= factorial(static_cast<long>(j - i)) * fp;
    i = j;
  }
  return r;
}

BigInt inner_product(const Tree& a, const Tree& b) { return a.key == b.key ? tree_factorial(a) : BigInt(0); }

BigInt inner_product_recursive(const Tree& a, const Tree& b) {
  if (a.noise != b.noise || a.poly != b.poly || a.children.size() != b.children.size()) return 0;
  const std::size_t l = a.children.size();
  std::vector<bool> used(l, false);
  std::function<BigInt(std::size_t)> rec = [&](std::size_t i) -> BigInt {
    if (i == l) return 1;
    BigInt total = 0;
    for (std::size_t j = 0; j < l; ++j) {
      if (used[j] || a.children[i].deriv != b.children[j].deriv) continue;
      BigInt v = inner_product_recursive(a.children[i].sub, b.children[j].sub);
      if (v == 0) continue;
      used[j] = true;
      total += v * rec(i + 1);
      used[j] = false;
    }
    return total;
  };
  return mi_factorial(a.poly) * rec(0);
}

Rational homogeneity(const Tree& t, const Rational& beta, const Scaling& s) {
  Rational h = scaled_norm(t.poly, s);
  if (t.noise >= 1) h += beta;
  for (const auto& e : t.children) h += homogeneity(e.sub, beta, s) + 2 - scaled_norm(e.deriv, s);
  return h;
}

Rational critical_homogeneity(const Tree& t, const Rational& alpha, const Scaling& s) {
  return homogeneity(t, -alpha - 2, s);
}

int noise_count(const Tree& t) {
  int c = t.noise >= 1 ? 1 : 0;
  for (const auto& e : t.children) c += noise_count(e.sub);
  return c;
}

int vertex_count(const Tree& t) {
  int c = 1;
  for (const auto& e : t.children) c += vertex_count(e.sub);
  return c;
}

int polynomial_leaf_count(const Tree& t) {
  int c = 0;
  for (const auto& e : t.children) {
    if (e.sub.children.empty() && e.sub.noise == 0)
      ++c;
    else
      c += polynomial_leaf_count(e.sub);
  }
  return c;
}

bool is_polynomial(const Tree& t) { return t.noise == 0 && t.children.empty(); }

std::vector<Tree> branches(const Tree& t) {
  std::vector<Tree> out{t};
  for (const auto& e : t.children) {
    auto sub = branches(e.sub);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

int drift_vertex_count(const Tree& t) {
  int c = t.noise == 0 ? 1 : 0;
  for (const auto& e : t.children) c += drift_vertex_count(e.sub);
  return c;
}

HForest HForest::planted(const MultiIndex& k, const Tree& sigma) {
  return HForest{make_tree(MultiIndex::zero(k.dim()), 0, {Edge{k, sigma}})};
}

HForest HForest::from(const MultiIndex& a, std::vector<Edge> planted) {
  return HForest{make_tree(a, 0, std::move(planted))};
}

HForest forest_product(const HForest& a, const HForest& b) { return HForest{tree_product(a.root, b.root)}; }

BigInt forest_factorial(const HForest& h) { return tree_factorial(h.root); }

std::string serialize(const HForest& h) { return h.root.key; }

std::string to_string(const TreeSum& s) {
  if (s.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, tc] : s.terms()) {
    if (!first) out += " + ";
    first = false;
    out += to_string(tc.second) + " * {" + k + "}";
  }
  return out;
}

}  // namespace apriori
