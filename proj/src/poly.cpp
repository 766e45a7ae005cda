#include "apriori/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace apriori {

std::string to_string(const JetVar& v) { return std::to_string(v.comp) + ":" + to_string(v.idx); }

JetVar parse_jet_var(const std::string& s, std::size_t d) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("jet slot must look like c:(k1,...): " + s);
  JetVar v;
  v.comp = std::stoi(s.substr(0, colon));
  std::string rest = s.substr(colon + 1);
  if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')')
    throw std::invalid_argument("bad multi-index in jet slot: " + s);
  std::vector<int> k;
  std::string body = rest.substr(1, rest.size() - 2);
  std::size_t pos = 0;
  while (pos < body.size()) {
    auto comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    k.push_back(std::stoi(body.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (k.size() != d) throw std::invalid_argument("jet slot of wrong dimension: " + s);
  v.idx = MultiIndex(k);
  return v;
}

Poly Poly::constant(const Rational& c) {
  Poly p;
  p.add_term({}, c);
  return p;
}

Poly Poly::var(const JetVar& v, int power) {
  Poly p;
  if (power == 0)
    p.add_term({}, 1);
  else
    p.add_term({{v, power}}, 1);
  return p;
}

void Poly::add_term(const Monomial& raw, const Rational& c) {
  if (c == 0) return;
  Monomial m;
  if (std::adjacent_find(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return !(a.first < b.first); }) ==
      raw.end()) {
    m = raw;
  } else {
    Monomial sorted = raw;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& ve : sorted) {
      if (!m.empty() && m.back().first == ve.first)
        m.back().second += ve.second;
      else
        m.push_back(ve);
    }
  }
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r += o;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly Poly::operator-(const Poly& o) const { return *this + o * Rational(-1); }

namespace {

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      r.push_back(*i++);
    } else if (i == a.end() || j->first < i->first) {
      r.push_back(*j++);
    } else {
      r.push_back({i->first, i->second + j->second});
      ++i;
      ++j;
    }
  }
  return r;
}

}  // namespace

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(multiply(ma, mb), ca * cb);
  return r;
}

Poly Poly::operator*(const Rational& c) const {
  Poly r;
  if (c == 0) return r;
  for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
  return r;
}

Poly Poly::derivative(const JetVar& v) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    auto it = std::find_if(m.begin(), m.end(), [&](const auto& pe) { return pe.first == v; });
    if (it == m.end()) continue;
    Monomial nm = m;
    auto& slot = nm[static_cast<std::size_t>(it - m.begin())];
    int e = slot.second;
    if (e == 1)
      nm.erase(nm.begin() + (it - m.begin()));
    else
      slot.second = e - 1;
    r.add_term(nm, c * e);
  }
  return r;
}

Poly Poly::total_derivative(std::size_t i) const {
  Poly r;
  for (const auto& v : variables()) {
    Poly dv = derivative(v);
    JetVar shifted = v;
    shifted.idx.k.at(i) += 1;
    r += dv * var(shifted);
  }
  return r;
}

Poly Poly::total_derivative(const MultiIndex& a) const {
  Poly r = *this;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (int t = 0; t < a[i]; ++t) r = r.total_derivative(i);
  return r;
}

std::vector<JetVar> Poly::variables() const {
  std::vector<JetVar> vs;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m) vs.push_back(v);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

int Poly::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    int t = 0;
    for (const auto& [v, e] : m) t += e;
    d = std::max(d, t);
  }
  return d;
}

PolyVec operator+(const PolyVec& a, const PolyVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
  PolyVec r = a;
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

PolyVec scale(const PolyVec& a, const Poly& p) {
  PolyVec r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(x * p);
  return r;
}

bool is_zero(const PolyVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Poly& p) { return p.is_zero(); });
}

}  // namespace apriori
