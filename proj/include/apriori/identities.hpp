#pragma once
/// @file identities.hpp
/// @brief Exhaustive and randomized checks of the exact tree and elementary-differential identities.

#include "apriori/elem_diff.hpp"
#include "apriori/rule.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace apriori {

struct IdentityStats {
  std::string name;
  std::size_t checked = 0;
  std::size_t failures = 0;
  /// Coproduct terms whose factors fall outside H+ (x) T<=2.
  std::size_t escaping = 0;
  double seconds = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
};

/// Trees of T<=2 (W_{<0}, U and X^k with |k|_s <= 2) with at most `max_vertices` vertices.
std::vector<Tree> t2_basis(const Enumeration& e, int max_vertices);

/// Elements X^a prod I^{k_i}[sigma_i] of H+ with |a|_s <= 2 and at most `max_vertices` vertices in the planted trees.
std::vector<HForest> hplus_basis(const Enumeration& e, int max_vertices);

/// <M(sigma,tau),eta> = <sigma (x) tau, Delta eta> over the bases above.
IdentityStats duality_suite(const Rule& rule, int max_vertices = 5);

/// Pre-Lie morphism residuals on random forests, trees and rational jets.
IdentityStats morphism_suite(std::size_t instances, std::uint64_t seed);

/// Taylor re-expansion residuals on random characters, trees in W_{<=0} and rational jets.
IdentityStats taylor_suite(std::size_t instances, std::uint64_t seed);

/// Critical scaling law on random trees with lambda a rational power.
IdentityStats scaling_suite(std::size_t instances, std::uint64_t seed);

struct StructuralConfig {
  RuleCase kind;
  Rational beta;
  int d;
  int n;
  int p;
  bool gradient_drift;
};

/// Six parameter sets spanning the three rule cases.
std::vector<StructuralConfig> representative_configs();

/// Minimal homogeneity, noise-zero structure, lower bound for D^k Upsilon^tau, branch monotonicity,
/// vanishing of second-order slots on W_{<=0}, and the constant-noise degree bound.
IdentityStats structural_suite(const StructuralConfig& cfg, std::uint64_t seed);

}  // namespace apriori
