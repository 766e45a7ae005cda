#pragma once
/// @file tree_ops.hpp
/// @brief Grafting, raising, the maps M and M+, and the coproduct.

#include "apriori/tree.hpp"

namespace apriori {

/// sigma grafted onto every vertex of tau through an edge labelled k.
TreeSum graft(const Tree& sigma, const MultiIndex& k, const Tree& tau);

/// Sum over vertices of tau with the polynomial label raised by e_i.
TreeSum raise(std::size_t i, const Tree& tau);

/// Memo table for repeated evaluations of M and M+ over a fixed basis.
struct MCache {
  std::map<std::string, TreeSum> map;
  std::map<std::string, ForestSum> plus;
};

/// `choice` selects which factor the product recursions peel off; results do not depend on it.
ForestSum m_plus(const HForest& sigma, const HForest& tau, unsigned choice = 0, MCache* cache = nullptr);
TreeSum m_map(const HForest& sigma, const Tree& tau, unsigned choice = 0, MCache* cache = nullptr);
TreeSum m_map(const ForestSum& sigma, const TreeSum& tau, unsigned choice = 0);

/// Coproduct on the free span; the cut-off |l|_s < |I^k sigma| uses (beta, s).
TensorSum coproduct(const Tree& tau, const Rational& beta, const Scaling& s);

/// <sigma (x) tau, Delta eta> with forest factorials on the left.
BigInt pair_with_coproduct(const HForest& sigma, const Tree& tau, const TensorSum& delta_eta);

/// <M(sigma,tau), eta>.
Rational pair_tree_sum(const TreeSum& s, const Tree& eta);

}  // namespace apriori
