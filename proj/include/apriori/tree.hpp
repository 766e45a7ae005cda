#pragma once
/// @file tree.hpp
/// @brief Labelled rooted trees in canonical form, planted forests and formal sums.

#include "apriori/multiindex.hpp"
#include "apriori/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace apriori {

struct Edge;

/// X^poly Xi_noise prod I^{deriv}[sub]. Always canonical when built by make_tree.
struct Tree {
  MultiIndex poly;
  int noise = 0;
  std::vector<Edge> children;
  std::string key;

  std::size_t dim() const { return poly.dim(); }
  bool operator==(const Tree& o) const { return key == o.key; }
  auto operator<=>(const Tree& o) const { return key <=> o.key; }
};

struct Edge {
  MultiIndex deriv;
  Tree sub;
};

Tree make_tree(MultiIndex poly, int noise, std::vector<Edge> children = {});
Tree noise_leaf(std::size_t d, int j);
Tree unit_tree(std::size_t d);
Tree poly_tree(const MultiIndex& k);

/// Re-sorts every child list and rebuilds keys, bottom-up.
Tree canonicalize(const Tree& t);

std::string serialize(const Tree& t);
Tree parse_tree(const std::string& text, std::size_t d);

/// Root product; at most one factor may carry a noise label.
Tree tree_product(const Tree& a, const Tree& b);
Tree with_poly(const Tree& t, const MultiIndex& poly);
Tree with_noise(const Tree& t, int noise);
Tree add_child(const Tree& t, const MultiIndex& deriv, const Tree& sub);

BigInt tree_factorial(const Tree& t);
BigInt inner_product(const Tree& a, const Tree& b);
/// Permanent-style recursion over matchings of children.
BigInt inner_product_recursive(const Tree& a, const Tree& b);

Rational homogeneity(const Tree& t, const Rational& beta, const Scaling& s);
Rational critical_homogeneity(const Tree& t, const Rational& alpha, const Scaling& s);

int noise_count(const Tree& t);
int vertex_count(const Tree& t);
/// Non-root vertices of degree one with noise label 0.
int polynomial_leaf_count(const Tree& t);
bool is_polynomial(const Tree& t);
std::vector<Tree> branches(const Tree& t);
/// Count of vertices carrying noise label 0.
int drift_vertex_count(const Tree& t);

/// Element X^a prod I^{k_i}[sigma_i] of the planted forest algebra, stored as a tree with root noise 0.
struct HForest {
  Tree root;

  static HForest unit(std::size_t d) { return HForest{unit_tree(d)}; }
  static HForest poly(const MultiIndex& a) { return HForest{poly_tree(a)}; }
  static HForest planted(const MultiIndex& k, const Tree& sigma);
  static HForest from(const MultiIndex& a, std::vector<Edge> planted);

  const MultiIndex& poly_part() const { return root.poly; }
  const std::vector<Edge>& planted_part() const { return root.children; }
  bool is_unit() const { return root.poly.is_zero() && root.children.empty(); }
  const std::string& key() const { return root.key; }
  bool operator==(const HForest& o) const { return root.key == o.root.key; }
};

HForest forest_product(const HForest& a, const HForest& b);
BigInt forest_factorial(const HForest& h);
std::string serialize(const HForest& h);

/// Left factor (x) right factor of the coproduct.
struct TensorTerm {
  HForest left;
  Tree right;
  std::string key() const { return left.key() + " (x) " + right.key; }
};

inline const std::string& key_of(const Tree& t) { return t.key; }
inline const std::string& key_of(const HForest& h) { return h.key(); }
inline std::string key_of(const TensorTerm& t) { return t.key(); }

/// Finite formal sum with exact coefficients; zero coefficients are never stored.
template <class T>
class LinComb {
 public:
  using Map = std::map<std::string, std::pair<T, Rational>>;

  LinComb() = default;
  LinComb(const T& t, const Rational& c = 1) { add(t, c); }

  void add(const T& t, const Rational& c) {
    if (c == 0) return;
    std::string k = key_of(t);
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      terms_.emplace(std::move(k), std::make_pair(t, c));
      return;
    }
    it->second.second += c;
    if (it->second.second == 0) terms_.erase(it);
  }
  void add(const LinComb& o, const Rational& scale = 1) {
    for (const auto& [k, tc] : o.terms_) add(tc.first, tc.second * scale);
  }
  LinComb& operator+=(const LinComb& o) {
    add(o);
    return *this;
  }
  LinComb& operator-=(const LinComb& o) {
    add(o, Rational(-1));
    return *this;
  }
  LinComb scaled(const Rational& c) const {
    LinComb r;
    r.add(*this, c);
    return r;
  }
  Rational coefficient(const T& t) const {
    auto it = terms_.find(key_of(t));
    return it == terms_.end() ? Rational(0) : it->second.second;
  }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Map& terms() const { return terms_; }
  typename Map::const_iterator begin() const { return terms_.begin(); }
  typename Map::const_iterator end() const { return terms_.end(); }
  bool operator==(const LinComb& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (auto a = terms_.begin(), b = o.terms_.begin(); a != terms_.end(); ++a, ++b)
      if (a->first != b->first || a->second.second != b->second.second) return false;
    return true;
  }

 private:
  Map terms_;
};

using TreeSum = LinComb<Tree>;
using ForestSum = LinComb<HForest>;
using TensorSum = LinComb<TensorTerm>;

std::string to_string(const TreeSum& s);

}  // namespace apriori
