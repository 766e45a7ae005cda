#pragma once
/// @file rule.hpp
/// @brief Rules, conforming trees and their enumeration up to a homogeneity cut-off.

#include "apriori/tree.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace apriori {

enum class RuleCase { f_constant, f_phi_only, f_gradient };

std::string to_string(RuleCase c);
RuleCase parse_rule_case(const std::string& s);

struct Rule {
  RuleCase kind = RuleCase::f_phi_only;
  Rational beta;
  Scaling s;
  int n = 1;  ///< noise components
  int p = 3;  ///< drift degree
  /// Multisets k with D^k P != 0, each sorted.
  std::vector<MultiSet> drift_multisets;

  std::size_t dim() const { return s.size(); }
  Rational alpha() const {
    Rational a(2, p - 1);
    a.canonicalize();
    return a;
  }
  bool allows(int noise, const MultiSet& ks) const;
};

/// Drift F(phi^p) + B(grad phi, phi^q), q = (p-1)/2; the gradient part only when `gradient_drift`.
Rule make_rule(RuleCase kind, const Rational& beta, const Scaling& s, int n, int p, bool gradient_drift = false);

/// Multisets of zeros of size <= p, plus {e_i} with up to q zeros for spatial i when `gradient_drift`.
std::vector<MultiSet> standard_drift_multisets(const Scaling& s, int p, bool gradient_drift);

class SubcriticalityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EnumerationLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws SubcriticalityError when the case bound on beta fails.
void check_subcritical(const Rule& rule);

bool is_conforming(const Tree& t, const Rule& rule);

struct EnumerationLimits {
  int max_noise_leaves = 12;
  std::size_t max_trees = 400000;
};

/// All conforming trees with homogeneity <= omega, sorted by (homogeneity, key).
std::vector<Tree> conforming_up_to(const Rule& rule, const Rational& omega, const EnumerationLimits& lim = {});

struct TreeInfo {
  Tree tree;
  Rational hom;
  int L = 0;
};

struct Enumeration {
  Rule rule;
  Rational omega_max;
  std::vector<TreeInfo> conforming;  ///< all conforming trees with |tau| <= max(omega_max, 0)
  std::vector<TreeInfo> W;           ///< no polynomial leaves, -2 < |tau| <= omega_max
  std::vector<TreeInfo> W_neg;       ///< no polynomial leaves, -2 < |tau| < 0
  std::vector<TreeInfo> U;           ///< planted I^k[sigma], sigma in W_neg, |.| in (0,2)
  Rational min_hom;                  ///< over conforming trees
  std::vector<Tree> argmin;
  bool non_integer_ok = true;        ///< no non-unit tree in W_{<=0} has integer homogeneity
  std::vector<Tree> integer_violations;

  Rational hom(const Tree& t) const { return homogeneity(t, rule.beta, rule.s); }
  bool in_W_neg(const Tree& t) const;
  bool in_W_le0(const Tree& t) const;
  bool in_U(const Tree& t) const;
  bool in_T2(const Tree& t) const;
  /// X^a prod I^{k_i}[sigma_i] with every planted factor in U.
  bool in_Hplus(const HForest& h) const;
  std::vector<Tree> W_le0() const;

 private:
  friend Enumeration enumerate_conforming(const Rule&, const Rational&, const EnumerationLimits&);
  std::set<std::string> w_neg_keys_, w_le0_keys_, u_keys_;
};

Enumeration enumerate_conforming(const Rule& rule, const Rational& omega_max, const EnumerationLimits& lim = {});

}  // namespace apriori
