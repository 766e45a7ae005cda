#pragma once
/// @file taylor.hpp
/// @brief Sparse truncated multivariate Taylor numbers for forward-mode derivatives of black-box functions.
///
/// Every variable carries an exponent cap; monomials exceeding a cap are dropped.

#include <memory>
#include <utility>
#include <vector>

namespace apriori {

/// Registry of Taylor variables and their exponent caps.
class TaylorContext {
 public:
  std::size_t add_variable(int cap) {
    caps_.push_back(cap);
    return caps_.size() - 1;
  }
  int cap(std::size_t v) const { return caps_.at(v); }
  std::size_t size() const { return caps_.size(); }

 private:
  std::vector<int> caps_;
};

/// Sorted (variable, exponent) pairs.
using TaylorMonomial = std::vector<std::pair<std::size_t, int>>;

class TaylorNum {
 public:
  TaylorNum() = default;
  TaylorNum(double c);  // NOLINT: constants promote implicitly
  static TaylorNum variable(std::shared_ptr<const TaylorContext> ctx, std::size_t v, double value);

  double value() const;
  double coefficient(const TaylorMonomial& m) const;
  const std::vector<std::pair<TaylorMonomial, double>>& terms() const { return terms_; }
  /// Coefficient of the monomial `m` as a Taylor number in the remaining variables.
  TaylorNum extract(const TaylorMonomial& m) const;
  /// Upper bound on the total degree of the non-constant part.
  int max_degree() const;

  TaylorNum operator+(const TaylorNum& o) const;
  TaylorNum operator-(const TaylorNum& o) const;
  TaylorNum operator*(const TaylorNum& o) const;
  TaylorNum operator-() const;
  TaylorNum& operator+=(const TaylorNum& o);

  /// g(x) from the derivative sequence g^{(k)}(x0), k = 0..max_degree().
  TaylorNum compose(const std::vector<double>& derivs) const;

 private:
  std::shared_ptr<const TaylorContext> ctx_;
  std::vector<std::pair<TaylorMonomial, double>> terms_;  // sorted by monomial, no zeros
  void normalize();
  void adopt(const TaylorNum& o);
};

inline TaylorNum operator+(double c, const TaylorNum& x) { return TaylorNum(c) + x; }
inline TaylorNum operator-(double c, const TaylorNum& x) { return TaylorNum(c) - x; }
inline TaylorNum operator*(double c, const TaylorNum& x) { return TaylorNum(c) * x; }

TaylorNum sin(const TaylorNum& x);
TaylorNum cos(const TaylorNum& x);
TaylorNum exp(const TaylorNum& x);
/// Requires a positive constant term.
TaylorNum log(const TaylorNum& x);
/// x^p; requires a positive constant term unless p is a nonnegative integer.
TaylorNum pow(const TaylorNum& x, double p);

}  // namespace apriori
