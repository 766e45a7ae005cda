#include "apriori/multiindex.hpp"

#include <algorithm>
#include <stdexcept>

namespace apriori {

MultiIndex MultiIndex::unit(std::size_t d, std::size_t i) {
  MultiIndex m = zero(d);
  m.k.at(i) = 1;
  return m;
}

bool MultiIndex::is_zero() const {
  return std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
}

int MultiIndex::total() const {
  int t = 0;
  for (int v : k) t += v;
  return t;
}

Scaling parabolic_scaling(std::size_t d) {
  Scaling s(d, 1);
  if (d > 0) s[0] = 2;
  return s;
}

int scaled_norm(const MultiIndex& k, const Scaling& s) {
  if (k.dim() != s.size()) throw std::invalid_argument("scaling dimension mismatch");
  int n = 0;
  for (std::size_t i = 0; i < s.size(); ++i) n += k.k[i] * s[i];
  return n;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("multi-index dimension mismatch");
  MultiIndex r = a;
  for (std::size_t i = 0; i < a.dim(); ++i) r.k[i] += b.k[i];
  return r;
}

MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("multi-index dimension mismatch");
  MultiIndex r = a;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    r.k[i] -= b.k[i];
    if (r.k[i] < 0) throw std::invalid_argument("negative multi-index");
  }
  return r;
}

bool leq(const MultiIndex& a, const MultiIndex& b) {
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a.k[i] > b.k[i]) return false;
  return true;
}

BigInt mi_factorial(const MultiIndex& k) {
  BigInt r = 1;
  for (int v : k.k) r *= factorial(v);
  return r;
}

BigInt mi_binomial(const MultiIndex& n, const MultiIndex& q) {
  BigInt r = 1;
  for (std::size_t i = 0; i < n.dim(); ++i) r *= binomial(n.k[i], q.k[i]);
  return r;
}

std::vector<MultiIndex> all_below(const MultiIndex& bound) {
  std::vector<MultiIndex> out{MultiIndex::zero(bound.dim())};
  for (std::size_t i = 0; i < bound.dim(); ++i) {
    std::vector<MultiIndex> next;
    for (const auto& m : out)
      for (int v = 0; v <= bound.k[i]; ++v) {
        MultiIndex c = m;
        c.k[i] = v;
        next.push_back(c);
      }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MultiIndex> all_with_norm(const Scaling& s, const Rational& max_norm, bool strict) {
  auto ok = [&](int n) { return strict ? Rational(n) < max_norm : Rational(n) <= max_norm; };
  std::vector<MultiIndex> out;
  if (!ok(0)) return out;
  std::vector<std::pair<MultiIndex, int>> acc{{MultiIndex::zero(s.size()), 0}};
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<std::pair<MultiIndex, int>> next;
    for (const auto& [m, n] : acc)
      for (int v = 0; ok(n + v * s[i]); ++v) {
        MultiIndex c = m;
        c.k[i] = v;
        next.emplace_back(c, n + v * s[i]);
      }
    acc = std::move(next);
  }
  for (auto& [m, n] : acc) out.push_back(m);
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(const MultiIndex& k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k.dim(); ++i) {
    if (i) s += ",";
    s += std::to_string(k.k[i]);
  }
  return s + ")";
}

BigInt multiset_factorial(const MultiSet& ks) {
  MultiSet sorted = ks;
  std::sort(sorted.begin(), sorted.end());
  BigInt r = 1;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    r *= factorial(static_cast<long>(j - i));
    i = j;
  }
  return r;
}

int multiset_norm(const MultiSet& ks, const Scaling& s) {
  int n = 0;
  for (const auto& k : ks) n += scaled_norm(k, s);
  return n;
}

}  // namespace apriori
