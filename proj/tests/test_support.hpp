#pragma once

#include "apriori/tree.hpp"

#include <functional>
#include <random>

namespace apriori::testing {

/// Random canonical tree with at most `max_vertices` vertices.
inline Tree random_tree(std::mt19937_64& rng, std::size_t d, int max_vertices, int max_noise = 2, int max_poly = 1,
                        int max_edge = 1) {
  std::uniform_int_distribution<int> vert(1, max_vertices);
  int budget = vert(rng);
  auto mi = [&](int bound) {
    std::uniform_int_distribution<int> c(0, bound);
    MultiIndex m = MultiIndex::zero(d);
    for (std::size_t i = 0; i < d; ++i) m.k[i] = c(rng) == bound ? c(rng) : 0;
    return m;
  };
  std::function<Tree(int)> build = [&](int n) -> Tree {
    std::uniform_int_distribution<int> noise(0, max_noise);
    std::vector<Edge> ch;
    int left = n - 1;
    while (left > 0) {
      std::uniform_int_distribution<int> take(1, left);
      int s = take(rng);
      ch.push_back(Edge{mi(max_edge), build(s)});
      left -= s;
    }
    return make_tree(mi(max_poly), noise(rng), std::move(ch));
  };
  return build(budget);
}

/// Rebuilds a tree with children in reversed order, bypassing canonical sorting.
inline Tree scrambled(const Tree& t) {
  Tree r = t;
  r.children.clear();
  for (auto it = t.children.rbegin(); it != t.children.rend(); ++it) r.children.push_back(Edge{it->deriv, scrambled(it->sub)});
  r.key.clear();
  return r;
}

}  // namespace apriori::testing
