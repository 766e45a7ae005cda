#include "apriori/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace apriori {

std::string to_string(EquationCase c) { return c == EquationCase::ode ? "ODE" : "PDE"; }

EquationCase parse_equation_case(const std::string& s) {
  if (s == "ODE" || s == "ode") return EquationCase::ode;
  if (s == "PDE" || s == "pde") return EquationCase::pde;
  throw std::invalid_argument("unknown equation case: " + s);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "not_applicable";
  }
  return "?";
}

Rational alpha(const Rational& p, EquationCase c) {
  if (p <= 1) throw std::invalid_argument("alpha: p must exceed 1");
  Rational a = (c == EquationCase::pde ? Rational(2) : Rational(1)) / (p - 1);
  a.canonicalize();
  return a;
}

Rational classical_rho(const Rational& a, const Rational& beta) {
  Rational den = a + 2 + beta;
  if (den <= 0) throw SupercriticalError("classical_rho: alpha + 2 + beta = " + to_string(den) + " is not positive");
  Rational r = a / den;
  r.canonicalize();
  return r;
}

YoungExponents young_exponents(const Rational& a, const Rational& gamma, const Rational& theta,
                               const std::optional<Rational>& eta) {
  if (!(gamma > Rational(1, 2) && gamma <= 1)) throw std::invalid_argument("young_exponents: gamma outside (1/2, 1]");
  if (!(theta > 1 / gamma - 1 && theta <= 1)) throw std::invalid_argument("young_exponents: theta outside (1/gamma - 1, 1]");
  YoungExponents y;
  Rational den_simple = a + gamma - a * theta;
  if (den_simple <= 0) throw SupercriticalError("young_exponents: alpha + gamma - alpha theta <= 0");
  y.simple = a / den_simple;
  y.sharp = a / (gamma * (1 + a));
  if (eta) {
    Rational den = a + gamma - a * *eta;
    if (den <= 0) throw SupercriticalError("young_exponents: alpha + gamma - alpha eta <= 0");
    y.weighted = a / den;
  }
  return y;
}

GrowthDescriptor GrowthDescriptor::linear_ode(const Rational& eta, const Rational& q) {
  GrowthDescriptor g;
  g.mode = Mode::linear_ode;
  g.eta = eta;
  g.q = q;
  return g;
}

GrowthDescriptor GrowthDescriptor::linear_pde(const Rational& eta, const Rational& q) {
  GrowthDescriptor g;
  g.mode = Mode::linear_pde;
  g.eta = eta;
  g.q = q;
  return g;
}

std::string to_string(GrowthDescriptor::Mode m) {
  switch (m) {
    case GrowthDescriptor::Mode::per_tree: return "per_tree";
    case GrowthDescriptor::Mode::linear_ode: return "linear_ode";
    case GrowthDescriptor::Mode::linear_pde: return "linear_pde";
  }
  return "?";
}

GrowthDescriptor::Mode parse_growth_mode(const std::string& s) {
  if (s == "per_tree") return GrowthDescriptor::Mode::per_tree;
  if (s == "linear_ode") return GrowthDescriptor::Mode::linear_ode;
  if (s == "linear_pde") return GrowthDescriptor::Mode::linear_pde;
  throw std::invalid_argument("unknown growth mode: " + s);
}

// ---------------------------------------------------------------------------
// Butcher forests

std::vector<ButcherForest> butcher_forests(int n, int max_size) {
  if (n < 1) throw std::invalid_argument("butcher_forests: n must be positive");
  std::vector<std::vector<std::string>> forests_by_size{{"1"}};
  std::vector<ButcherForest> trees;  // all trees so far, sorted by key

  for (int s = 1; s <= max_size; ++s) {
    for (const auto& f : forests_by_size[s - 1])
      for (int i = 1; i <= n; ++i)
        trees.push_back({"[" + (f == "1" ? std::string() : f) + "]_" + std::to_string(i), s});
    std::sort(trees.begin(), trees.end(), [](const ButcherForest& a, const ButcherForest& b) { return a.key < b.key; });

    std::vector<std::string> out;
    std::function<void(std::size_t, int, std::string)> rec = [&](std::size_t from, int left, std::string acc) {
      if (left == 0) {
        out.push_back(acc);
        return;
      }
      for (std::size_t t = from; t < trees.size(); ++t)
        if (trees[t].size <= left) rec(t, left - trees[t].size, acc + trees[t].key);
    };
    rec(0, s, "");
    std::sort(out.begin(), out.end());
    forests_by_size.push_back(std::move(out));
  }

  std::vector<ButcherForest> all;
  for (int s = 0; s <= max_size; ++s)
    for (const auto& k : forests_by_size[s]) all.push_back({k, s});
  return all;
}

// ---------------------------------------------------------------------------
// Rough ODE exponents

namespace {

void add_verdict(std::vector<VerdictEntry>& out, const std::string& name, bool ok, const std::string& detail) {
  out.push_back({name, ok ? Verdict::pass : Verdict::fail, ok ? std::string() : detail});
}

std::string delta_key(const std::string& tau, int l) { return tau + "|" + std::to_string(l); }

}  // namespace

RpExponents rp_exponents(const Rational& p, const Rational& gamma, int n, const GrowthDescriptor& desc,
                         bool f_constant) {
  if (!(gamma > 0 && gamma <= 1)) throw std::invalid_argument("rp_exponents: gamma outside (0, 1]");
  if (desc.mode == GrowthDescriptor::Mode::linear_pde)
    throw std::invalid_argument("rp_exponents: linear_pde descriptor given for an ODE");

  RpExponents r;
  r.alpha = alpha(p, EquationCase::ode);
  r.gamma = gamma;
  r.N = static_cast<int>(floor_of(1 / gamma).get_si());
  const Rational& a = r.alpha;
  const bool gamma_is_reciprocal = gamma * r.N == 1;

  const auto forests = butcher_forests(n, r.N - 1);
  std::vector<std::string> missing;
  std::map<std::string, RpDeltaRow> delta_of;

  auto eta_of = [&](const ButcherForest& tau, int l) -> std::optional<Rational> {
    if (desc.mode == GrowthDescriptor::Mode::linear_ode) return Rational((tau.size + l) * desc.q + (tau.size + 1) * desc.eta);
    auto it = desc.per_tree.find(delta_key(tau.key, l));
    if (it == desc.per_tree.end()) return std::nullopt;
    return it->second.eta;
  };

  for (const auto& tau : forests)
    for (int l = 0; l <= r.N - tau.size; ++l) {
      RpDeltaRow row;
      row.tau = tau.key;
      row.size = tau.size;
      row.l = l;
      row.vanishes = f_constant && !(tau.size == 0 && l == 0);
      auto e = eta_of(tau, l);
      if (!e) {
        if (!row.vanishes) missing.push_back(delta_key(tau.key, l));
        continue;
      }
      row.eta = *e;
      row.delta = gamma * (tau.size + 1) + a * (1 - l - row.eta);
      row.delta.canonicalize();
      delta_of[delta_key(tau.key, l)] = row;
      r.delta.push_back(row);
    }

  bool delta_ok = true;
  std::string delta_detail;
  for (const auto& tau : forests) {
    auto it = delta_of.find(delta_key(tau.key, 0));
    if (it == delta_of.end()) continue;
    const auto& row = it->second;
    if (row.delta <= 0) {
      if (!row.vanishes) {
        delta_ok = false;
        delta_detail = "Delta(" + tau.key + ",0) = " + to_string(row.delta);
      }
      continue;
    }
    RpRhoRow rr{tau.key, tau.size, a / row.delta, row.vanishes};
    rr.rho.canonicalize();
    r.rho_tau.push_back(rr);
  }

  bool zeta_ok = true;
  for (const auto& tau : forests)
    for (int l = 1; l <= r.N - tau.size; ++l) {
      auto tl = delta_of.find(delta_key(tau.key, l));
      if (tl == delta_of.end()) continue;
      for (const auto& sigma : forests) {
        if (gamma_is_reciprocal && sigma.size == r.N - 1) continue;
        auto s0 = delta_of.find(delta_key(sigma.key, 0));
        if (s0 == delta_of.end()) continue;
        RpTripleRow t;
        t.tau = tau.key;
        t.l = l;
        t.sigma = sigma.key;
        t.k = tau.size;
        t.j = sigma.size;
        t.vanishes = tl->second.vanishes || s0->second.vanishes;
        t.zeta = ((tau.size + 1) * gamma + l - 1) / (1 - (sigma.size + 1) * gamma);
        t.zeta.canonicalize();
        if (t.zeta <= 0) zeta_ok = false;
        Rational den = tl->second.delta + t.zeta * s0->second.delta;
        if (den <= 0) {
          if (!t.vanishes) {
            delta_ok = false;
            delta_detail = "Delta(" + tau.key + "," + std::to_string(l) + ") + zeta Delta(" + sigma.key + ",0) = " +
                           to_string(den);
          }
          continue;
        }
        t.rho = a / den;
        t.rho.canonicalize();
        t.collapsed = (t.k + 1 + t.zeta * (t.j + 1)) * t.rho;
        t.collapsed.canonicalize();
        r.triples.push_back(t);
      }
    }

  if (desc.mode == GrowthDescriptor::Mode::per_tree)
    add_verdict(r.verdicts, "descriptor_complete", missing.empty(),
                missing.empty() ? "" : "missing entry " + missing.front());
  add_verdict(r.verdicts, "zeta_positive", zeta_ok, "some zeta <= 0");
  add_verdict(r.verdicts, "delta_positive", delta_ok, delta_detail);

  if (desc.mode == GrowthDescriptor::Mode::linear_ode) {
    Rational den = gamma + gamma / a - desc.q * (1 - gamma) - desc.eta;
    add_verdict(r.verdicts, "linear_condition", den > 0, "gamma/alpha + gamma - q(1-gamma) - eta = " + to_string(den));
    if (den != 0) {
      r.closed_form = 1 / den;
      r.closed_form->canonicalize();
      bool agree = true;
      std::string detail;
      for (const auto& t : r.triples)
        if (!t.vanishes && t.collapsed != *r.closed_form) {
          agree = false;
          detail = "(" + t.tau + "," + std::to_string(t.l) + "," + t.sigma + "): " + to_string(t.collapsed);
        }
      add_verdict(r.verdicts, "closed_form", agree, detail);
      if (desc.q >= -1) {
        bool lower = true;
        for (const auto& row : r.delta)
          if (row.l == 0 && !row.vanishes && row.delta / (a * (row.size + 1)) < gamma / a + gamma - desc.q * (1 - gamma) - desc.eta)
            lower = false;
        add_verdict(r.verdicts, "level1_exponent_bound", lower, "Delta(tau,0)/(alpha(|tau|+1)) below the linear bound");
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// PDE exponents

std::string multiset_key(const MultiSet& ks) {
  std::string s = "{";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (i) s += ";";
    s += to_string(ks[i]);
  }
  return s + "}";
}

namespace {

Rational random_coefficient(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(1, 9), den(1, 5), sign(0, 1);
  Rational c(num(rng) * (sign(rng) ? 1 : -1), den(rng));
  c.canonicalize();
  return c;
}

Poly random_univariate(const JetVar& v, int degree, std::mt19937_64& rng) {
  Poly p;
  for (int e = 0; e <= degree; ++e) p += Poly::var(v, e) * random_coefficient(rng);
  return p;
}

bool rule_has_gradient_drift(const Rule& rule) {
  for (const auto& ks : rule.drift_multisets)
    for (const auto& k : ks)
      if (!k.is_zero()) return true;
  return false;
}

int floor_int(const Rational& q) { return static_cast<int>(floor_of(q).get_si()); }

}  // namespace

PolyNonlinearity zero_pattern_nonlinearity(const Rule& rule, const GrowthDescriptor& desc) {
  std::mt19937_64 rng(0x5eedULL);
  PolyNonlinearity nl;
  nl.m = 1;
  nl.n = static_cast<std::size_t>(rule.n);
  nl.d = rule.dim();
  const JetVar phi{0, MultiIndex::zero(nl.d)};
  std::vector<JetVar> grads;
  for (std::size_t i = 0; i < nl.d; ++i)
    if (rule.s[i] == 1) grads.push_back(JetVar{0, MultiIndex::unit(nl.d, i)});

  Poly drift = Poly::var(phi, rule.p) * Rational(-1);
  if (rule_has_gradient_drift(rule)) {
    const int q = (rule.p - 1) / 2;
    for (const auto& g : grads) drift += Poly::var(g) * Poly::var(phi, q) * random_coefficient(rng);
  }
  nl.drift = {drift};

  const bool linear = desc.mode == GrowthDescriptor::Mode::linear_pde;
  const Rational a = rule.alpha();
  int N = 1;
  if (rule.beta > -2) N = floor_int(2 / (2 + rule.beta));
  for (int j = 1; j <= rule.n; ++j) {
    Poly f;
    switch (rule.kind) {
      case RuleCase::f_constant:
        f = Poly::constant(random_coefficient(rng));
        break;
      case RuleCase::f_phi_only: {
        int deg = linear ? std::max(0, floor_int(desc.eta)) : N + 1;
        f = random_univariate(phi, deg, rng);
        break;
      }
      case RuleCase::f_gradient: {
        const Rational theta = (a + 1) / a;
        int deg_g = linear ? std::max(0, floor_int(desc.eta)) : 3;
        int deg_h = linear ? floor_int(desc.eta - theta) : 2;
        f = random_univariate(phi, deg_g, rng);
        if (deg_h >= 0)
          for (const auto& g : grads) f += Poly::var(g) * random_univariate(phi, deg_h, rng);
        break;
      }
    }
    nl.noise.push_back({f});
  }
  return nl;
}

PdeExponents pde_exponents(const Rule& rule, const GrowthDescriptor& desc, const std::optional<PolyNonlinearity>& nl_in) {
  if (desc.mode == GrowthDescriptor::Mode::linear_ode)
    throw std::invalid_argument("pde_exponents: linear_ode descriptor given for a PDE");
  PdeExponents r;
  r.alpha = rule.alpha();
  r.beta = rule.beta;
  r.kind = rule.kind;
  const Rational& a = r.alpha;
  const Scaling& s = rule.s;
  const std::size_t d = rule.dim();
  if (rule.kind == RuleCase::f_phi_only && rule.beta > -2) r.N = floor_int(2 / (2 + rule.beta));

  Enumeration E;
  try {
    E = enumerate_conforming(rule, Rational(1));
  } catch (const SubcriticalityError& e) {
    add_verdict(r.verdicts, "subcritical", false, e.what());
    return r;
  }
  add_verdict(r.verdicts, "subcritical", true, "");
  add_verdict(r.verdicts, "non_integer", E.non_integer_ok,
              E.integer_violations.empty() ? "" : "integer homogeneity at " + serialize(E.integer_violations.front()));

  const auto slots = all_with_norm(s, Rational(2), true);
  for (const auto& k : slots) r.gamma_k[k] = Rational(1);
  for (const auto& u : E.U) {
    const auto& k = u.tree.children.front().deriv;
    if (u.hom < r.gamma_k[k]) r.gamma_k[k] = u.hom;
  }

  bool have_zeta = false;
  for (const auto& w : E.W) {
    if (w.hom >= 1 || w.tree == unit_tree(d)) continue;
    Rational fr = frac_of(w.hom);
    if (!have_zeta || fr < r.zeta) r.zeta = fr;
    have_zeta = true;
  }
  add_verdict(r.verdicts, "zeta_in_unit_interval", have_zeta && r.zeta > 0 && r.zeta < 1,
              "zeta = " + to_string(r.zeta));

  Upsilon ups(nl_in ? *nl_in : zero_pattern_nonlinearity(rule, desc), rule);
  const MultiIndex zero = MultiIndex::zero(d);
  auto derivative = [&](const Tree& t, const MultiSet& ks) -> const PolyVec& {
    std::vector<JetVar> vars;
    for (const auto& k : ks) vars.push_back(JetVar{0, k});
    return ups.partial(t, zero, vars);
  };

  const bool linear = desc.mode == GrowthDescriptor::Mode::linear_pde;
  const Rational theta = (a + 1) / a;
  bool descriptor_ok = true, supported = true, eta_ok = true, assump1 = true, assump2 = true, schauder = true;
  std::string descriptor_detail, eta_detail, assump1_detail, assump2_detail, schauder_detail;

  for (const auto& w : E.W_neg) {
    const Tree& tau = w.tree;
    const int L = noise_count(tau);
    const Rational bound = r.zeta - w.hom;

    std::vector<MultiSet> interior;
    std::set<std::string> interior_keys;
    std::function<void(MultiSet&, std::size_t, const Rational&)> grow = [&](MultiSet& cur, std::size_t from,
                                                                             const Rational& g) {
      if (is_zero(derivative(tau, cur))) return;
      interior.push_back(cur);
      interior_keys.insert(multiset_key(cur));
      for (std::size_t i = from; i < slots.size(); ++i) {
        Rational g2 = g + r.gamma_k[slots[i]];
        if (g2 >= bound) continue;
        cur.push_back(slots[i]);
        grow(cur, i, g2);
        cur.pop_back();
      }
    };
    MultiSet start;
    grow(start, 0, Rational(0));

    std::vector<std::pair<MultiSet, bool>> members;
    for (const auto& ks : interior) members.push_back({ks, true});
    std::set<std::string> boundary_keys;
    for (const auto& ks : interior)
      for (const auto& k : slots) {
        MultiSet next = ks;
        next.push_back(k);
        std::sort(next.begin(), next.end());
        const std::string key = multiset_key(next);
        if (interior_keys.count(key) || boundary_keys.count(key)) continue;
        bool faces = true;
        for (std::size_t i = 0; i < next.size() && faces; ++i) {
          MultiSet face = next;
          face.erase(face.begin() + static_cast<long>(i));
          faces = interior_keys.count(multiset_key(face)) > 0;
        }
        if (!faces || is_zero(derivative(tau, next))) continue;
        boundary_keys.insert(key);
        members.push_back({next, false});
      }

    for (const auto& [ks, inner] : members) {
      PdeRow row;
      row.tau = tau;
      row.hom = w.hom;
      row.L = L;
      row.ks = ks;
      row.interior = inner;
      for (const auto& p : derivative(tau, ks))
        for (const auto& v : p.variables())
          if (!v.idx.is_zero()) row.depends_on_gradient = true;
      const int kcount = static_cast<int>(ks.size());
      const int knorm = multiset_norm(ks, s);

      if (desc.mode == GrowthDescriptor::Mode::per_tree) {
        auto it = desc.per_tree.find(serialize(tau) + "|" + multiset_key(ks));
        if (it == desc.per_tree.end()) {
          descriptor_ok = false;
          descriptor_detail = "missing entry " + serialize(tau) + "|" + multiset_key(ks);
          continue;
        }
        row.eta = it->second.eta;
        row.grad_eta = it->second.grad_eta;
        row.bar_eta = it->second.bar_eta;
      } else {
        // Scaling count: f_j has weight alpha*eta, the jet slot of order l weight alpha+|l|_s.
        const Rational f_eta = rule.kind == RuleCase::f_constant ? Rational(0) : desc.eta;
        if (rule.kind == RuleCase::f_gradient && desc.q != -1) {
          supported = false;
          continue;
        }
        row.eta = (2 + a + critical_homogeneity(tau, a, s) + a * f_eta * L - kcount * a - knorm) / a;
        if (rule.kind == RuleCase::f_phi_only) row.eta += (desc.q + 1) * (L - 1 + kcount);
        if (row.depends_on_gradient) {
          row.grad_eta = 1;
          row.bar_eta = row.eta - theta;
        } else {
          row.grad_eta = 0;
          row.bar_eta = row.eta;
        }
      }
      row.eta.canonicalize();
      row.grad_eta.canonicalize();
      row.bar_eta.canonicalize();

      const std::string where = serialize(tau) + " " + multiset_key(ks);
      if (row.eta < 0 || row.grad_eta < 0 || row.bar_eta < 0) {
        eta_ok = false;
        eta_detail = "negative growth exponent at " + where;
      }
      if (a * row.eta != (a + 1) * row.grad_eta + a * row.bar_eta) {
        assump2 = false;
        assump2_detail = "unbalanced growth exponents at " + where;
      }
      if (!(w.hom + 2 - knorm > row.grad_eta)) {
        schauder = false;
        schauder_detail = "Schauder condition fails at " + where;
      }
      row.delta = a - a * kcount + w.hom + 2 - knorm - a * row.eta;
      row.delta.canonicalize();
      if (row.delta <= 0) {
        assump1 = false;
        assump1_detail = "Delta = " + to_string(row.delta) + " at " + where;
      } else {
        row.rho = a / row.delta;
        row.rho.canonicalize();
        row.L_rho = row.rho * L;
        row.L_rho.canonicalize();
      }
      r.rows.push_back(row);
    }
  }

  for (const auto& u : E.U) {
    const Tree& sigma = u.tree.children.front().sub;
    for (const auto& row : r.rows)
      if (row.tau == sigma && row.ks.empty() && row.delta > 0) r.u_rows.push_back({u.tree, sigma, u.hom, row.rho});
  }

  if (desc.mode == GrowthDescriptor::Mode::per_tree)
    add_verdict(r.verdicts, "descriptor_complete", descriptor_ok, descriptor_detail);
  if (!supported)
    add_verdict(r.verdicts, "descriptor_supported", false, "gradient case requires q = -1");
  add_verdict(r.verdicts, "eta_nonnegative", eta_ok, eta_detail);
  add_verdict(r.verdicts, "scaling_balance", assump2, assump2_detail);
  add_verdict(r.verdicts, "schauder", schauder, schauder_detail);
  add_verdict(r.verdicts, "delta_positive", assump1, assump1_detail);

  std::optional<Rational> den;
  if (rule.kind == RuleCase::f_constant && desc.mode != GrowthDescriptor::Mode::per_tree) den = r.beta + a + 2;
  if (rule.kind != RuleCase::f_constant && linear) {
    den = r.beta + 2 + a - a * desc.eta;
    add_verdict(r.verdicts, "linear_condition", a * (desc.eta - 1) < r.beta + 2,
                "alpha(eta - 1) >= beta + 2");
  }
  if (den && *den != 0) {
    r.closed_form = a / *den;
    r.closed_form->canonicalize();
    bool agree = true;
    std::string detail;
    for (const auto& row : r.rows)
      if (row.delta != row.L * *den) {
        agree = false;
        detail = "Delta = " + to_string(row.delta) + " at " + serialize(row.tau) + " " + multiset_key(row.ks);
      }
    add_verdict(r.verdicts, "closed_form", agree, detail);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Abstract constants

AbstractConstants abstract_constants(const Rational& a, const Rational& delta) {
  if (a <= 0) throw std::invalid_argument("abstract_constants: alpha must be positive");
  if (delta <= 0) throw std::invalid_argument("abstract_constants: delta must be positive");
  AbstractConstants c;
  Rational e = -1 / a;
  e.canonicalize();
  c.theta.exact = pow_exact(1 + delta, e);
  c.theta.value = std::pow(to_double(1 + delta), to_double(e));
  if (c.theta.exact) {
    c.nu_min_exact = 1 / (1 - *c.theta.exact);
    c.nu_min_exact->canonicalize();
    c.nu_min = to_double(*c.nu_min_exact);
  } else {
    c.nu_min = 1 / (1 - c.theta.value);
  }
  return c;
}

CorollaryConstants corollary_constants(const Rational& a, const Rational& eps, const Rational& kappa, const Rational& r) {
  if (!(kappa > 0 && kappa < eps)) throw std::invalid_argument("corollary_constants: need 0 < kappa < eps");
  if (r <= 0) throw std::invalid_argument("corollary_constants: r must be positive");
  CorollaryConstants c;
  c.delta = kappa / (eps - kappa);
  c.delta.canonicalize();
  c.abstract = abstract_constants(a, c.delta);
  c.solution_prefactor = eps / (1 + c.delta);
  c.solution_prefactor.canonicalize();
  c.driver_prefactor = 1 / r;
  c.driver_prefactor.canonicalize();
  return c;
}

// ---------------------------------------------------------------------------
// Full report

bool ExponentReport::all_pass() const {
  auto ok = [](const std::vector<VerdictEntry>& v) {
    return std::none_of(v.begin(), v.end(), [](const VerdictEntry& e) { return e.verdict == Verdict::fail; });
  };
  return ok(verdicts) && (!rp || ok(rp->verdicts)) && (!pde || ok(pde->verdicts));
}

ExponentReport compute_exponents(const EquationSpec& spec) {
  ExponentReport rep;
  rep.spec = spec;
  rep.alpha = alpha(spec.p, spec.eq_case);
  if (spec.eq_case == EquationCase::pde) {
    try {
      rep.rho_classical = classical_rho(rep.alpha, spec.beta);
      add_verdict(rep.verdicts, "classical_subcritical", true, "");
    } catch (const SupercriticalError& e) {
      add_verdict(rep.verdicts, "classical_subcritical", false, e.what());
    }
    if (!is_integer(spec.p)) throw std::invalid_argument("compute_exponents: PDE rules need integer p");
    Rule rule = make_rule(spec.kind, spec.beta, parabolic_scaling(static_cast<std::size_t>(spec.d)), spec.n,
                          static_cast<int>(spec.p.get_num().get_si()), spec.gradient_drift);
    rep.pde = pde_exponents(rule, spec.growth);
    return rep;
  }

  if (spec.gamma > Rational(1, 2) && spec.gamma <= 1 && spec.theta) {
    std::optional<Rational> eta;
    if (spec.growth.mode == GrowthDescriptor::Mode::linear_ode) eta = spec.growth.eta;
    try {
      rep.young = young_exponents(rep.alpha, spec.gamma, *spec.theta, eta);
      add_verdict(rep.verdicts, "young_regime", true, "");
    } catch (const std::invalid_argument& e) {
      add_verdict(rep.verdicts, "young_regime", false, e.what());
    }
  } else {
    rep.verdicts.push_back({"young_regime", Verdict::not_applicable, "needs gamma in (1/2, 1] and theta"});
  }
  rep.rp = rp_exponents(spec.p, spec.gamma, spec.n, spec.growth, spec.f_constant);
  return rep;
}

}  // namespace apriori
