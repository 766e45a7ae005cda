#include "apriori/tree_ops.hpp"

#include <algorithm>
#include <stdexcept>

namespace apriori {

namespace {

/// Applies `at_vertex` to every vertex of tau, rebuilding the path to the root.
template <class F>
TreeSum over_vertices(const Tree& tau, const F& at_vertex) {
  TreeSum out = at_vertex(tau);
  for (std::size_t i = 0; i < tau.children.size(); ++i) {
    TreeSum inner = over_vertices(tau.children[i].sub, at_vertex);
    for (const auto& [key, tc] : inner.terms()) {
      std::vector<Edge> ch = tau.children;
      ch[i].sub = tc.first;
      out.add(make_tree(tau.poly, tau.noise, std::move(ch)), tc.second);
    }
  }
  return out;
}

MultiIndex component_min(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex m = a;
  for (std::size_t i = 0; i < a.dim(); ++i) m.k[i] = std::min(a.k[i], b.k[i]);
  return m;
}

/// Replaces each planted tree of h in turn by the terms of op(tree).
template <class F>
ForestSum derivation_on_planted(const HForest& h, const F& op) {
  ForestSum out;
  const auto& planted = h.planted_part();
  for (std::size_t j = 0; j < planted.size(); ++j) {
    TreeSum inner = op(planted[j].sub);
    for (const auto& [key, tc] : inner.terms()) {
      std::vector<Edge> ch = planted;
      ch[j].sub = tc.first;
      out.add(HForest::from(h.poly_part(), std::move(ch)), tc.second);
    }
  }
  return out;
}

struct Split {
  bool planted;       // peel a planted factor, else a single X^i
  std::size_t index;  // planted index or direction
};

std::vector<Split> split_options(const HForest& sigma) {
  std::vector<Split> opts;
  for (std::size_t i = 0; i < sigma.poly_part().dim(); ++i)
    if (sigma.poly_part()[i] > 0) opts.push_back({false, i});
  if (!opts.empty()) return opts;
  for (std::size_t j = 0; j < sigma.planted_part().size(); ++j) {
    if (j > 0 && sigma.planted_part()[j].deriv == sigma.planted_part()[j - 1].deriv &&
        sigma.planted_part()[j].sub == sigma.planted_part()[j - 1].sub)
      continue;
    opts.push_back({true, j});
  }
  return opts;
}

/// sigma = first * rest according to the chosen split.
std::pair<HForest, HForest> split_forest(const HForest& sigma, const Split& sp) {
  const std::size_t d = sigma.poly_part().dim();
  if (sp.planted) {
    std::vector<Edge> rest = sigma.planted_part();
    Edge e = rest[sp.index];
    rest.erase(rest.begin() + static_cast<long>(sp.index));
    return {HForest::planted(e.deriv, e.sub), HForest::from(sigma.poly_part(), std::move(rest))};
  }
  MultiIndex ei = MultiIndex::unit(d, sp.index);
  return {HForest::poly(ei), HForest::from(sigma.poly_part() - ei, sigma.planted_part())};
}

bool is_generator(const HForest& sigma) {
  const auto& pl = sigma.planted_part();
  int deg = sigma.poly_part().total();
  return (deg == 0 && pl.size() == 1) || (deg == 1 && pl.empty());
}

}  // namespace

TreeSum graft(const Tree& sigma, const MultiIndex& k, const Tree& tau) {
  return over_vertices(tau, [&](const Tree& v) {
    TreeSum out;
    for (const auto& q : all_below(component_min(k, v.poly))) {
      std::vector<Edge> ch = v.children;
      ch.push_back(Edge{k - q, sigma});
      out.add(make_tree(v.poly - q, v.noise, std::move(ch)), Rational(mi_binomial(v.poly, q)));
    }
    return out;
  });
}

TreeSum raise(std::size_t i, const Tree& tau) {
  const MultiIndex ei = MultiIndex::unit(tau.dim(), i);
  return over_vertices(tau, [&](const Tree& v) { return TreeSum(make_tree(v.poly + ei, v.noise, v.children)); });
}

ForestSum m_plus(const HForest& sigma, const HForest& tau, unsigned choice, MCache* cache) {
  if (sigma.is_unit()) return ForestSum(tau);
  std::string memo_key;
  if (cache) {
    memo_key = sigma.key() + " # " + tau.key() + " # " + std::to_string(choice);
    if (auto it = cache->plus.find(memo_key); it != cache->plus.end()) return it->second;
  }
  if (tau.is_unit()) return {};
  if (is_generator(sigma)) {
    if (!sigma.planted_part().empty()) {
      const Edge& e = sigma.planted_part().front();
      return derivation_on_planted(tau, [&](const Tree& t) { return graft(e.sub, e.deriv, t); });
    }
    std::size_t i = 0;
    while (sigma.poly_part()[i] == 0) ++i;
    return derivation_on_planted(tau, [&](const Tree& t) { return raise(i, t); });
  }
  auto opts = split_options(sigma);
  auto [first, rest] = split_forest(sigma, opts[choice % opts.size()]);
  ForestSum out;
  for (const auto& [k1, tc] : m_plus(rest, tau, choice, cache))
    out.add(m_plus(first, tc.first, choice, cache), tc.second);
  for (const auto& [k1, tc] : m_plus(first, rest, choice, cache))
    out.add(m_plus(tc.first, tau, choice, cache), -tc.second);
  if (cache) cache->plus.emplace(memo_key, out);
  return out;
}

TreeSum m_map(const HForest& sigma, const Tree& tau, unsigned choice, MCache* cache) {
  if (sigma.is_unit()) return TreeSum(tau);
  std::string memo_key;
  if (cache) {
    memo_key = sigma.key() + " # " + tau.key + " # " + std::to_string(choice);
    if (auto it = cache->map.find(memo_key); it != cache->map.end()) return it->second;
  }
  if (is_generator(sigma)) {
    if (!sigma.planted_part().empty()) {
      const Edge& e = sigma.planted_part().front();
      return graft(e.sub, e.deriv, tau);
    }
    std::size_t i = 0;
    while (sigma.poly_part()[i] == 0) ++i;
    return raise(i, tau);
  }
  auto opts = split_options(sigma);
  auto [first, rest] = split_forest(sigma, opts[choice % opts.size()]);
  TreeSum out;
  for (const auto& [k1, tc] : m_map(rest, tau, choice, cache)) out.add(m_map(first, tc.first, choice, cache), tc.second);
  for (const auto& [k1, tc] : m_plus(first, rest, choice, cache))
    out.add(m_map(tc.first, tau, choice, cache), -tc.second);
  if (cache) cache->map.emplace(memo_key, out);
  return out;
}

TreeSum m_map(const ForestSum& sigma, const TreeSum& tau, unsigned choice) {
  TreeSum out;
  for (const auto& [ks, sc] : sigma.terms())
    for (const auto& [kt, tc] : tau.terms()) out.add(m_map(sc.first, tc.first, choice), sc.second * tc.second);
  return out;
}

namespace {

struct ForestPair {
  HForest left;
  HForest right;
};

std::string key_of(const ForestPair& p) { return p.left.key() + " (x) " + p.right.key(); }

using PairSum = LinComb<ForestPair>;

PairSum pair_product(const PairSum& a, const PairSum& b) {
  PairSum out;
  for (const auto& [ka, ta] : a.terms())
    for (const auto& [kb, tb] : b.terms())
      out.add(ForestPair{forest_product(ta.first.left, tb.first.left), forest_product(ta.first.right, tb.first.right)},
              ta.second * tb.second);
  return out;
}

PairSum planted_coproduct(const MultiIndex& k, const Tree& sigma, const Rational& beta, const Scaling& s);

PairSum tree_coproduct(const Tree& tau, const Rational& beta, const Scaling& s) {
  PairSum acc;
  for (const auto& q : all_below(tau.poly))
    acc.add(ForestPair{HForest::poly(q), HForest::poly(tau.poly - q)}, Rational(mi_binomial(tau.poly, q)));
  for (const auto& e : tau.children) acc = pair_product(acc, planted_coproduct(e.deriv, e.sub, beta, s));
  return acc;
}

PairSum planted_coproduct(const MultiIndex& k, const Tree& sigma, const Rational& beta, const Scaling& s) {
  PairSum out;
  for (const auto& [key, tc] : tree_coproduct(sigma, beta, s)) {
    const HForest& r = tc.first.right;
    Tree right_tree = make_tree(r.poly_part(), sigma.noise, r.planted_part());
    out.add(ForestPair{tc.first.left, HForest::planted(k, right_tree)}, tc.second);
  }
  Rational cutoff = homogeneity(sigma, beta, s) + 2 - scaled_norm(k, s);
  for (const auto& l : all_with_norm(s, cutoff, true))
    out.add(ForestPair{HForest::planted(k + l, sigma), HForest::poly(l)}, Rational(1) / Rational(mi_factorial(l)));
  return out;
}

}  // namespace

TensorSum coproduct(const Tree& tau, const Rational& beta, const Scaling& s) {
  TensorSum out;
  for (const auto& [key, tc] : tree_coproduct(tau, beta, s)) {
    const HForest& r = tc.first.right;
    out.add(TensorTerm{tc.first.left, make_tree(r.poly_part(), tau.noise, r.planted_part())}, tc.second);
  }
  return out;
}

BigInt pair_with_coproduct(const HForest& sigma, const Tree& tau, const TensorSum& delta_eta) {
  Rational total = 0;
  for (const auto& [key, tc] : delta_eta.terms())
    if (tc.first.left == sigma && tc.first.right == tau) total += tc.second;
  total *= Rational(forest_factorial(sigma) * tree_factorial(tau));
  if (!is_integer(total)) throw std::logic_error("non-integer duality pairing");
  return total.get_num();
}

Rational pair_tree_sum(const TreeSum& s, const Tree& eta) { return s.coefficient(eta) * Rational(tree_factorial(eta)); }

}  // namespace apriori
