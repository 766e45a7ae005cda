#pragma once
/// @file poly.hpp
/// @brief Sparse multivariate polynomials over jet variables with rational coefficients.

#include "apriori/multiindex.hpp"
#include "apriori/rational.hpp"

#include <map>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

namespace apriori {

/// Component `comp` of the jet slot nabla^idx phi.
struct JetVar {
  int comp = 0;
  MultiIndex idx;
  auto operator<=>(const JetVar&) const = default;
  bool operator==(const JetVar&) const = default;
};

std::string to_string(const JetVar& v);
JetVar parse_jet_var(const std::string& s, std::size_t d);

/// Sorted (variable, exponent) pairs with positive exponents.
using Monomial = std::vector<std::pair<JetVar, int>>;

class Poly {
 public:
  using Map = std::map<Monomial, Rational>;

  Poly() = default;
  static Poly constant(const Rational& c);
  static Poly var(const JetVar& v, int power = 1);

  bool is_zero() const { return terms_.empty(); }
  const Map& terms() const { return terms_; }
  void add_term(const Monomial& m, const Rational& c);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rational& c) const;
  Poly& operator+=(const Poly& o);
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  Poly derivative(const JetVar& v) const;
  /// d^i: sum over variables of (dp/dphi_{c,l}) * phi_{c,l+e_i}.
  Poly total_derivative(std::size_t i) const;
  Poly total_derivative(const MultiIndex& a) const;

  std::vector<JetVar> variables() const;
  int degree() const;

  template <class Jet>
  auto evaluate(const Jet& jet) const;

 private:
  Map terms_;
};

using PolyVec = std::vector<Poly>;

PolyVec operator+(const PolyVec& a, const PolyVec& b);
PolyVec scale(const PolyVec& a, const Poly& p);
bool is_zero(const PolyVec& v);

/// Exact jet: unspecified variables are zero.
using Jet = std::map<JetVar, Rational>;
using JetD = std::map<JetVar, double>;

template <class Jet>
auto Poly::evaluate(const Jet& jet) const {
  using V = typename Jet::mapped_type;
  V total = V(0);
  for (const auto& [mono, c] : terms_) {
    V term = V(c.get_d());
    if constexpr (std::is_same_v<V, Rational>) term = c;
    for (const auto& [v, e] : mono) {
      auto it = jet.find(v);
      if (it == jet.end()) {
        term = V(0);
        break;
      }
      for (int k = 0; k < e; ++k) term *= it->second;
    }
    total += term;
  }
  return total;
}

template <class Jet>
auto evaluate(const PolyVec& v, const Jet& jet) {
  std::vector<typename Jet::mapped_type> out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back(p.evaluate(jet));
  return out;
}

}  // namespace apriori
