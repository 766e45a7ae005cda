#pragma once
/// @file elem_diff.hpp
/// @brief Elementary differentials of trees for polynomial and black-box nonlinearities.

#include "apriori/poly.hpp"
#include "apriori/rule.hpp"
#include "apriori/taylor.hpp"
#include "apriori/tree.hpp"

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace apriori {

using Vec = std::vector<Rational>;
using VecD = std::vector<double>;

/// Drift P and noise coefficients f_1..f_n, each a polynomial map from jets to R^m.
struct PolyNonlinearity {
  std::size_t m = 1;
  std::size_t n = 1;
  std::size_t d = 1;
  PolyVec drift;
  std::vector<PolyVec> noise;

  /// j = 0 is the drift, j >= 1 the j-th noise coefficient.
  const PolyVec& base(int j) const;
};

/// Sum over component tuples c of d^a(D_{(c_1,k_1)} ... D_{(c_r,k_r)} g) * prod_i args_i[c_i].
PolyVec apply_diff(const PolyVec& g, const MultiIndex& a, const MultiSet& ks, const std::vector<PolyVec>& args);

/// Memoised symbolic elementary differentials for one polynomial nonlinearity.
class Upsilon {
 public:
  /// With a rule, non-conforming trees evaluate to zero; without one the recursion is applied verbatim.
  explicit Upsilon(PolyNonlinearity nl, std::optional<Rule> rule = std::nullopt);

  const PolyNonlinearity& nonlinearity() const { return nl_; }
  const PolyVec& poly(const Tree& t);
  Vec at(const Tree& t, const Jet& jet);
  Vec at(const TreeSum& s, const Jet& jet);
  /// (d^a D^{k_1} ... D^{k_r} Upsilon^t)(jet)(dirs_1, ..., dirs_r).
  Vec derivative(const Tree& t, const MultiIndex& a, const MultiSet& ks, const std::vector<Vec>& dirs, const Jet& jet);
  /// Symbolic D^{k_1} ... D^{k_r} Upsilon^t in coordinate directions; entry (component) list per slot.
  const PolyVec& partial(const Tree& t, const MultiIndex& a, const std::vector<JetVar>& vars);

 private:
  PolyNonlinearity nl_;
  std::optional<Rule> rule_;
  std::map<std::string, PolyVec> memo_;
  std::map<std::string, PolyVec> partial_memo_;
};

Vec upsilon(const Tree& t, const PolyNonlinearity& nl, const Jet& jet);
Vec d_upsilon(const Tree& t, const MultiSet& ks, const std::vector<Vec>& dirs, const PolyNonlinearity& nl,
              const Jet& jet);

class DerivativeOrderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads jet slot (component, index) as a Taylor number.
using JetAccess = std::function<TaylorNum(const JetVar&)>;

/// Black-box nonlinearity evaluated in truncated Taylor arithmetic.
struct SmoothNonlinearity {
  std::size_t m = 1;
  std::size_t n = 1;
  std::size_t d = 1;
  /// Highest derivative order the evaluator supports.
  int max_order = 4;
  /// Returns the m components of the drift (j = 0) or of f_j.
  std::function<std::vector<TaylorNum>(int j, const JetAccess&)> eval;
};

VecD upsilon_smooth(const Tree& t, const SmoothNonlinearity& nl, const JetD& jet);
VecD d_upsilon_smooth(const Tree& t, const MultiSet& ks, const std::vector<VecD>& dirs, const SmoothNonlinearity& nl,
                      const JetD& jet);

/// The polynomial nonlinearity viewed as a black box.
SmoothNonlinearity as_smooth(const PolyNonlinearity& nl, int max_order = 8);

/// Multiplicative functional on the planted forests generated by X^i and planted trees.
struct Character {
  std::vector<Rational> x;                  ///< g(X^i)
  std::map<std::string, Rational> planted;  ///< g(I^k[sigma]) by planted-forest key

  /// Throws std::out_of_range for a planted factor without a value.
  Rational operator()(const HForest& h) const;
};

/// Character with g(X^i) = 0 and every planted value 0.
Character identity_character(const Enumeration& e);

/// Random polynomial nonlinearity whose derivative pattern respects the rule.
PolyNonlinearity sample_nonlinearity(const Rule& rule, std::size_t m, std::mt19937_64& rng);

/// Random rational jet with every slot of scaled order <= max_order filled.
Jet sample_jet(std::size_t m, const Scaling& s, int max_order, std::mt19937_64& rng);

/// Upsilon^{M(sigma,tau)} - (d^a D^{k_1} ... D^{k_r} Upsilon^tau)(Upsilon^{sigma_1}, ...).
Vec verify_morphism(const HForest& sigma, const Tree& tau, Upsilon& ups, const Jet& jet);

/// Coproduct data for re-expansion: for each tau in W_{<=0}, the terms c h (x) tau of Delta sigma, sigma in W_{<=0}.
struct ReexpansionTable {
  struct Entry {
    Tree sigma;
    HForest left;
    Rational coefficient;
  };
  Rational beta;
  Scaling s;
  std::map<std::string, std::vector<Entry>> by_tau;
  /// Planted factors I^k[sigma] of U with |k|_s < 2.
  std::vector<Edge> planted;
};

ReexpansionTable reexpansion_table(const Enumeration& e);

/// Difference of the two sides of the Taylor re-expansion formula for tau in W_{<=0}.
Vec taylor_residual(const Tree& tau, const Character& g, Upsilon& ups, const Jet& jet, const ReexpansionTable& table);

/// Upsilon^tau(Q_lambda jet) - lambda^{-2-alpha-c(tau)} Upsilon_lambda^tau(jet) with lambda = t^{den(alpha)}.
Vec crit_scaling_residual(const Tree& tau, const PolyNonlinearity& nl, const Rule& rule, const Rational& t,
                          const Jet& jet);

}  // namespace apriori
