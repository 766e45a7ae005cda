#include "apriori/rational.hpp"

#include <cctype>

namespace apriori {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

Rational parse_rational(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + raw);
    Rational r = num / den;
    r.canonicalize();
    return r;
  }
  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    exp10 = std::stol(s.substr(epos + 1));
    s = s.substr(0, epos);
  }
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  std::string digits;
  bool seen_dot = false;
  for (; i < s.size(); ++i) {
    if (s[i] == '.') {
      if (seen_dot) throw std::invalid_argument("bad rational: " + raw);
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits.push_back(s[i]);
      if (seen_dot) --exp10;
    } else {
      throw std::invalid_argument("bad rational: " + raw);
    }
  }
  if (digits.empty()) throw std::invalid_argument("bad rational: " + raw);
  Rational r{BigInt(digits)};
  BigInt ten = 10;
  BigInt p;
  mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 >= 0)
    r *= p;
  else
    r /= p;
  if (neg) r = -r;
  r.canonicalize();
  return r;
}

Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

BigInt floor_of(const Rational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational frac_of(const Rational& q) { return q - Rational(floor_of(q)); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Rational pow_int(const Rational& q, long e) {
  if (e < 0) {
    if (q == 0) throw std::domain_error("zero to a negative power");
    return pow_int(Rational(1) / q, -e);
  }
  BigInt n, d;
  mpz_pow_ui(n.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(e));
  Rational r(n, d);
  r.canonicalize();
  return r;
}

namespace {
std::optional<BigInt> exact_root(const BigInt& z, unsigned long k) {
  if (z < 0 && k % 2 == 0) return std::nullopt;
  BigInt r;
  if (mpz_root(r.get_mpz_t(), z.get_mpz_t(), k) == 0) return std::nullopt;
  return r;
}
}  // namespace

std::optional<Rational> pow_exact(const Rational& q, const Rational& e) {
  if (!e.get_den().fits_ulong_p() || !e.get_num().fits_slong_p()) return std::nullopt;
  unsigned long k = e.get_den().get_ui();
  long m = e.get_num().get_si();
  if (q == 0) {
    if (m > 0) return Rational(0);
    return std::nullopt;
  }
  auto n = exact_root(q.get_num(), k);
  auto d = exact_root(q.get_den(), k);
  if (!n || !d) return std::nullopt;
  return pow_int(Rational(*n, *d), m);
}

double to_double(const Rational& q) { return q.get_d(); }

BigInt factorial(long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

BigInt binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace apriori
