#pragma once
/// @file multiindex.hpp
/// @brief Multi-indices over N^d with an anisotropic scaling.

#include "apriori/rational.hpp"

#include <compare>
#include <string>
#include <vector>

namespace apriori {

struct MultiIndex {
  std::vector<int> k;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : k(std::move(entries)) {}

  static MultiIndex zero(std::size_t d) { return MultiIndex(std::vector<int>(d, 0)); }
  static MultiIndex unit(std::size_t d, std::size_t i);

  std::size_t dim() const { return k.size(); }
  int operator[](std::size_t i) const { return k[i]; }
  bool is_zero() const;
  int total() const;

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;
};

/// Scaling vector, e.g. (2,1,...,1) for the heat operator, (1) for ODEs.
using Scaling = std::vector<int>;

Scaling parabolic_scaling(std::size_t d);

int scaled_norm(const MultiIndex& k, const Scaling& s);
MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);
bool leq(const MultiIndex& a, const MultiIndex& b);
BigInt mi_factorial(const MultiIndex& k);
BigInt mi_binomial(const MultiIndex& n, const MultiIndex& q);

/// All q with q <= bound componentwise.
std::vector<MultiIndex> all_below(const MultiIndex& bound);

/// All k in N^d with |k|_s <= max_norm (or < max_norm when strict).
std::vector<MultiIndex> all_with_norm(const Scaling& s, const Rational& max_norm, bool strict);

std::string to_string(const MultiIndex& k);

/// Sorted multiset of multi-indices.
using MultiSet = std::vector<MultiIndex>;

/// Product of multiplicity factorials.
BigInt multiset_factorial(const MultiSet& ks);

int multiset_norm(const MultiSet& ks, const Scaling& s);

}  // namespace apriori
