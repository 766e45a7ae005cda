#include "apriori/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace apriori {

TaylorNum::TaylorNum(double c) {
  if (c != 0.0) terms_.push_back({{}, c});
}

TaylorNum TaylorNum::variable(std::shared_ptr<const TaylorContext> ctx, std::size_t v, double value) {
  TaylorNum t(value);
  t.ctx_ = std::move(ctx);
  if (t.ctx_->cap(v) >= 1) t.terms_.push_back({{{v, 1}}, 1.0});
  t.normalize();
  return t;
}

void TaylorNum::normalize() {
  std::sort(terms_.begin(), terms_.end());
  std::vector<std::pair<TaylorMonomial, double>> out;
  for (auto& t : terms_) {
    if (!out.empty() && out.back().first == t.first)
      out.back().second += t.second;
    else
      out.push_back(std::move(t));
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& t) { return t.second == 0.0; }), out.end());
  terms_ = std::move(out);
}

void TaylorNum::adopt(const TaylorNum& o) {
  if (!ctx_) ctx_ = o.ctx_;
  if (o.ctx_ && ctx_ != o.ctx_) throw std::invalid_argument("mixing Taylor contexts");
}

double TaylorNum::value() const { return coefficient({}); }

double TaylorNum::coefficient(const TaylorMonomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const auto& t, const TaylorMonomial& key) { return t.first < key; });
  return it != terms_.end() && it->first == m ? it->second : 0.0;
}

TaylorNum TaylorNum::extract(const TaylorMonomial& m) const {
  TaylorNum r;
  r.ctx_ = ctx_;
  for (const auto& [mono, c] : terms_) {
    TaylorMonomial rest;
    std::size_t matched = 0;
    bool ok = true;
    for (const auto& [v, e] : mono) {
      auto it = std::find_if(m.begin(), m.end(), [&](const auto& p) { return p.first == v; });
      if (it == m.end()) {
        rest.push_back({v, e});
      } else if (it->second == e) {
        ++matched;
      } else {
        ok = false;
        break;
      }
    }
    if (ok && matched == m.size()) r.terms_.push_back({rest, c});
  }
  r.normalize();
  return r;
}

int TaylorNum::max_degree() const {
  if (!ctx_) return 0;
  std::map<std::size_t, int> caps;
  for (const auto& [mono, c] : terms_)
    for (const auto& [v, e] : mono) caps[v] = ctx_->cap(v);
  int total = 0;
  for (const auto& [v, cap] : caps) total += cap;
  return total;
}

TaylorNum& TaylorNum::operator+=(const TaylorNum& o) {
  adopt(o);
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  normalize();
  return *this;
}

TaylorNum TaylorNum::operator+(const TaylorNum& o) const {
  TaylorNum r = *this;
  r += o;
  return r;
}

TaylorNum TaylorNum::operator-() const {
  TaylorNum r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

TaylorNum TaylorNum::operator-(const TaylorNum& o) const { return *this + (-o); }

TaylorNum TaylorNum::operator*(const TaylorNum& o) const {
  TaylorNum r;
  r.ctx_ = ctx_;
  r.adopt(o);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      TaylorMonomial prod;
      auto ia = ma.begin(), ib = mb.begin();
      bool ok = true;
      while (ia != ma.end() || ib != mb.end()) {
        if (ib == mb.end() || (ia != ma.end() && ia->first < ib->first)) {
          prod.push_back(*ia++);
        } else if (ia == ma.end() || ib->first < ia->first) {
          prod.push_back(*ib++);
        } else {
          int e = ia->second + ib->second;
          if (e > r.ctx_->cap(ia->first)) {
            ok = false;
            break;
          }
          prod.push_back({ia->first, e});
          ++ia;
          ++ib;
        }
      }
      if (ok) r.terms_.push_back({std::move(prod), ca * cb});
    }
  }
  r.normalize();
  return r;
}

TaylorNum TaylorNum::compose(const std::vector<double>& derivs) const {
  TaylorNum u = *this - TaylorNum(value());
  TaylorNum result(derivs.at(0));
  result.ctx_ = ctx_;
  TaylorNum power(1.0);
  double fact = 1.0;
  for (std::size_t k = 1; k < derivs.size(); ++k) {
    power = power * u;
    if (power.terms_.empty()) break;
    fact *= static_cast<double>(k);
    result += power * TaylorNum(derivs[k] / fact);
  }
  return result;
}

TaylorNum sin(const TaylorNum& x) {
  std::vector<double> d;
  for (int k = 0; k <= x.max_degree(); ++k) d.push_back(std::sin(x.value() + k * std::numbers::pi / 2));
  return x.compose(d);
}

TaylorNum cos(const TaylorNum& x) {
  std::vector<double> d;
  for (int k = 0; k <= x.max_degree(); ++k) d.push_back(std::cos(x.value() + k * std::numbers::pi / 2));
  return x.compose(d);
}

TaylorNum exp(const TaylorNum& x) {
  return x.compose(std::vector<double>(static_cast<std::size_t>(x.max_degree()) + 1, std::exp(x.value())));
}

TaylorNum log(const TaylorNum& x) {
  const double x0 = x.value();
  if (x0 <= 0) throw std::domain_error("log of a Taylor number with non-positive value");
  std::vector<double> d{std::log(x0)};
  double f = 1.0;
  for (int k = 1; k <= x.max_degree(); ++k) {
    d.push_back((k % 2 ? 1.0 : -1.0) * f / std::pow(x0, k));
    f *= k;
  }
  return x.compose(d);
}

TaylorNum pow(const TaylorNum& x, double p) {
  const double x0 = x.value();
  const bool integral = p >= 0 && std::floor(p) == p;
  if (!integral && x0 <= 0) throw std::domain_error("non-integer power of a Taylor number with non-positive value");
  std::vector<double> d;
  double coef = 1.0;
  for (int k = 0; k <= x.max_degree(); ++k) {
    d.push_back(coef == 0.0 ? 0.0 : coef * std::pow(x0, p - k));
    coef *= (p - k);
  }
  return x.compose(d);
}

}  // namespace apriori
