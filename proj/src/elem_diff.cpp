#include "apriori/elem_diff.hpp"

#include "apriori/tree_ops.hpp"

#include <algorithm>
#include <functional>

namespace apriori {

const PolyVec& PolyNonlinearity::base(int j) const {
  if (j == 0) return drift;
  if (j < 0 || static_cast<std::size_t>(j) > noise.size()) throw std::out_of_range("noise index out of range");
  return noise[static_cast<std::size_t>(j) - 1];
}

PolyVec apply_diff(const PolyVec& g, const MultiIndex& a, const MultiSet& ks, const std::vector<PolyVec>& args) {
  if (args.size() != ks.size()) throw std::invalid_argument("apply_diff: one argument per derivative slot");
  const std::size_t m = g.size();
  PolyVec out(m);
  std::function<void(std::size_t, const PolyVec&, const Poly&)> rec = [&](std::size_t i, const PolyVec& cur,
                                                                            const Poly& weight) {
    if (i == ks.size()) {
      for (std::size_t c = 0; c < m; ++c) out[c] += cur[c].total_derivative(a) * weight;
      return;
    }
    for (std::size_t c = 0; c < args[i].size(); ++c) {
      if (args[i][c].is_zero()) continue;
      const JetVar v{static_cast<int>(c), ks[i]};
      PolyVec next(m);
      for (std::size_t o = 0; o < m; ++o) next[o] = cur[o].derivative(v);
      if (is_zero(next)) continue;
      rec(i + 1, next, weight * args[i][c]);
    }
  };
  rec(0, g, Poly::constant(1));
  return out;
}

Upsilon::Upsilon(PolyNonlinearity nl, std::optional<Rule> rule) : nl_(std::move(nl)), rule_(std::move(rule)) {}

const PolyVec& Upsilon::poly(const Tree& t) {
  auto it = memo_.find(t.key);
  if (it != memo_.end()) return it->second;
  PolyVec value(nl_.m);
  if (!rule_ || is_conforming(t, *rule_)) {
    MultiSet ks;
    std::vector<PolyVec> args;
    for (const auto& e : t.children) {
      ks.push_back(e.deriv);
      args.push_back(poly(e.sub));
    }
    value = apply_diff(nl_.base(t.noise), t.poly, ks, args);
  }
  return memo_.emplace(t.key, std::move(value)).first->second;
}

Vec Upsilon::at(const Tree& t, const Jet& jet) { return evaluate(poly(t), jet); }

Vec Upsilon::at(const TreeSum& s, const Jet& jet) {
  Vec out(nl_.m, Rational(0));
  for (const auto& [k, tc] : s) {
    Vec v = at(tc.first, jet);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += tc.second * v[c];
  }
  return out;
}

const PolyVec& Upsilon::partial(const Tree& t, const MultiIndex& a, const std::vector<JetVar>& vars) {
  std::vector<JetVar> sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  std::string key = t.key + "|" + to_string(a);
  for (const auto& v : sorted) key += "|" + to_string(v);
  auto it = partial_memo_.find(key);
  if (it != partial_memo_.end()) return it->second;
  PolyVec cur = poly(t);
  for (const auto& v : sorted)
    for (auto& p : cur) p = p.derivative(v);
  for (auto& p : cur) p = p.total_derivative(a);
  return partial_memo_.emplace(std::move(key), std::move(cur)).first->second;
}

Vec Upsilon::derivative(const Tree& t, const MultiIndex& a, const MultiSet& ks, const std::vector<Vec>& dirs,
                        const Jet& jet) {
  if (dirs.size() != ks.size()) throw std::invalid_argument("derivative: one direction per slot");
  Vec out(nl_.m, Rational(0));
  std::vector<JetVar> vars;
  std::function<void(std::size_t, const Rational&)> rec = [&](std::size_t i, const Rational& w) {
    if (i == ks.size()) {
      Vec v = evaluate(partial(t, a, vars), jet);
      for (std::size_t c = 0; c < out.size(); ++c) out[c] += w * v[c];
      return;
    }
    for (std::size_t c = 0; c < dirs[i].size(); ++c) {
      if (dirs[i][c] == 0) continue;
      vars.push_back(JetVar{static_cast<int>(c), ks[i]});
      rec(i + 1, w * dirs[i][c]);
      vars.pop_back();
    }
  };
  rec(0, Rational(1));
  return out;
}

Vec upsilon(const Tree& t, const PolyNonlinearity& nl, const Jet& jet) {
  Upsilon u(nl);
  return u.at(t, jet);
}

Vec d_upsilon(const Tree& t, const MultiSet& ks, const std::vector<Vec>& dirs, const PolyNonlinearity& nl,
              const Jet& jet) {
  Upsilon u(nl);
  return u.derivative(t, MultiIndex::zero(nl.d), ks, dirs, jet);
}

namespace {

using Ctx = std::shared_ptr<TaylorContext>;

std::vector<TaylorNum> smooth_vertex(const Tree& t, const SmoothNonlinearity& nl, const Ctx& ctx,
                                     const JetAccess& base, int outer) {
  std::vector<std::vector<TaylorNum>> args;
  for (const auto& e : t.children) args.push_back(smooth_vertex(e.sub, nl, ctx, base, outer));
  const MultiIndex& a = t.poly;
  const int order = a.total() + static_cast<int>(t.children.size()) + outer;
  if (order > nl.max_order)
    throw DerivativeOrderError("derivative order " + std::to_string(order) + " exceeds declared maximum " +
                               std::to_string(nl.max_order));

  TaylorMonomial target;
  std::vector<std::optional<std::size_t>> y(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a[i] > 0) {
      y[i] = ctx->add_variable(a[i]);
      target.push_back({*y[i], a[i]});
    }
  std::vector<std::size_t> eps;
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    eps.push_back(ctx->add_variable(1));
    target.push_back({eps.back(), 1});
  }
  std::sort(target.begin(), target.end());

  const auto shifts = all_below(a);
  JetAccess access = [&](const JetVar& v) {
    TaylorNum total;
    for (const auto& m : shifts) {
      TaylorNum term = base(JetVar{v.comp, v.idx + m});
      for (std::size_t i = 0; i < m.dim(); ++i)
        for (int e = 0; e < m[i]; ++e) term = term * TaylorNum::variable(ctx, *y[i], 0.0);
      total += term * TaylorNum(1.0 / mi_factorial(m).get_d());
    }
    for (std::size_t i = 0; i < t.children.size(); ++i)
      if (t.children[i].deriv == v.idx)
        total += TaylorNum::variable(ctx, eps[i], 0.0) * args[i].at(static_cast<std::size_t>(v.comp));
    return total;
  };
  std::vector<TaylorNum> out = nl.eval(t.noise, access);
  if (out.size() != nl.m) throw std::invalid_argument("nonlinearity returned the wrong number of components");
  const double afact = mi_factorial(a).get_d();
  for (auto& o : out) o = o.extract(target) * TaylorNum(afact);
  return out;
}

JetAccess constant_access(const JetD& jet) {
  return [&jet](const JetVar& v) {
    auto it = jet.find(v);
    return TaylorNum(it == jet.end() ? 0.0 : it->second);
  };
}

}  // namespace

VecD upsilon_smooth(const Tree& t, const SmoothNonlinearity& nl, const JetD& jet) {
  auto ctx = std::make_shared<TaylorContext>();
  auto out = smooth_vertex(t, nl, ctx, constant_access(jet), 0);
  VecD v;
  for (const auto& o : out) v.push_back(o.value());
  return v;
}

VecD d_upsilon_smooth(const Tree& t, const MultiSet& ks, const std::vector<VecD>& dirs, const SmoothNonlinearity& nl,
                      const JetD& jet) {
  if (dirs.size() != ks.size()) throw std::invalid_argument("d_upsilon_smooth: one direction per slot");
  auto ctx = std::make_shared<TaylorContext>();
  std::vector<std::size_t> delta;
  TaylorMonomial target;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    delta.push_back(ctx->add_variable(1));
    target.push_back({delta.back(), 1});
  }
  JetAccess base = [&](const JetVar& v) {
    auto it = jet.find(v);
    TaylorNum total(it == jet.end() ? 0.0 : it->second);
    for (std::size_t i = 0; i < ks.size(); ++i)
      if (ks[i] == v.idx && dirs[i].at(static_cast<std::size_t>(v.comp)) != 0.0)
        total += TaylorNum::variable(ctx, delta[i], 0.0) * TaylorNum(dirs[i][static_cast<std::size_t>(v.comp)]);
    return total;
  };
  auto out = smooth_vertex(t, nl, ctx, base, static_cast<int>(ks.size()));
  VecD v;
  for (const auto& o : out) v.push_back(o.extract(target).value());
  return v;
}

SmoothNonlinearity as_smooth(const PolyNonlinearity& nl, int max_order) {
  SmoothNonlinearity s;
  s.m = nl.m;
  s.n = nl.n;
  s.d = nl.d;
  s.max_order = max_order;
  s.eval = [nl](int j, const JetAccess& access) {
    std::vector<TaylorNum> out;
    for (const auto& p : nl.base(j)) {
      TaylorNum total;
      for (const auto& [mono, c] : p.terms()) {
        TaylorNum term(c.get_d());
        for (const auto& [v, e] : mono) {
          TaylorNum x = access(v);
          for (int k = 0; k < e; ++k) term = term * x;
        }
        total += term;
      }
      out.push_back(total);
    }
    return out;
  };
  return s;
}

Rational Character::operator()(const HForest& h) const {
  Rational v = 1;
  const MultiIndex& a = h.poly_part();
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a[i] > 0) v *= pow_int(x.at(i), a[i]);
  for (const auto& e : h.planted_part()) {
    auto it = planted.find(HForest::planted(e.deriv, e.sub).key());
    if (it == planted.end()) throw std::out_of_range("character has no value on " + serialize(HForest::planted(e.deriv, e.sub)));
    v *= it->second;
  }
  return v;
}

Character identity_character(const Enumeration& e) {
  Character g;
  g.x.assign(e.rule.dim(), Rational(0));
  for (const auto& u : e.U) g.planted[HForest{u.tree}.key()] = 0;
  return g;
}

namespace {

Rational small_rational(std::mt19937_64& rng, bool nonzero) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  int a = num(rng);
  while (nonzero && a == 0) a = num(rng);
  Rational r(a, den(rng));
  r.canonicalize();
  return r;
}

/// All monomials of exact degree `deg` in the given variables.
std::vector<Monomial> monomials_of_degree(const std::vector<JetVar>& vars, int deg) {
  std::vector<Monomial> out;
  Monomial cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == vars.size()) {
      if (left == 0) out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      if (e > 0) cur.push_back({vars[i], e});
      rec(i + 1, left - e);
      if (e > 0) cur.pop_back();
    }
  };
  rec(0, deg);
  return out;
}

PolyVec random_poly_vec(const std::vector<JetVar>& vars, int max_deg, std::size_t m, std::mt19937_64& rng) {
  PolyVec out(m);
  std::bernoulli_distribution keep(0.6);
  for (int deg = 0; deg <= max_deg; ++deg)
    for (const auto& mono : monomials_of_degree(vars, deg))
      for (std::size_t c = 0; c < m; ++c)
        if (keep(rng)) out[c].add_term(mono, small_rational(rng, true));
  return out;
}

}  // namespace

PolyNonlinearity sample_nonlinearity(const Rule& rule, std::size_t m, std::mt19937_64& rng) {
  PolyNonlinearity nl;
  nl.m = m;
  nl.n = static_cast<std::size_t>(rule.n);
  nl.d = rule.dim();
  const MultiIndex zero = MultiIndex::zero(nl.d);
  std::vector<JetVar> values, gradients;
  for (std::size_t c = 0; c < m; ++c) values.push_back(JetVar{static_cast<int>(c), zero});
  for (const auto& k : all_with_norm(rule.s, Rational(1), false))
    if (!k.is_zero())
      for (std::size_t c = 0; c < m; ++c) gradients.push_back(JetVar{static_cast<int>(c), k});

  for (int j = 1; j <= rule.n; ++j) {
    switch (rule.kind) {
      case RuleCase::f_constant:
        nl.noise.push_back(random_poly_vec({}, 0, m, rng));
        break;
      case RuleCase::f_phi_only:
        nl.noise.push_back(random_poly_vec(values, 2, m, rng));
        break;
      case RuleCase::f_gradient: {
        std::vector<JetVar> all = values;
        all.insert(all.end(), gradients.begin(), gradients.end());
        nl.noise.push_back(random_poly_vec(all, 2, m, rng));
        break;
      }
    }
  }

  nl.drift.assign(m, Poly());
  for (const auto& mono : monomials_of_degree(values, rule.p))
    for (std::size_t c = 0; c < m; ++c) nl.drift[c].add_term(mono, small_rational(rng, true));
  bool gradient_drift = false;
  for (const auto& ks : rule.drift_multisets)
    for (const auto& k : ks)
      if (!k.is_zero()) gradient_drift = true;
  if (gradient_drift) {
    const int q = (rule.p - 1) / 2;
    for (const auto& g : gradients) {
      if (scaled_norm(g.idx, rule.s) != 1) continue;
      for (const auto& mono : monomials_of_degree(values, q)) {
        Monomial full = mono;
        full.push_back({g, 1});
        std::sort(full.begin(), full.end());
        for (std::size_t c = 0; c < m; ++c) nl.drift[c].add_term(full, small_rational(rng, true));
      }
    }
  }
  return nl;
}

Jet sample_jet(std::size_t m, const Scaling& s, int max_order, std::mt19937_64& rng) {
  Jet jet;
  for (const auto& k : all_with_norm(s, Rational(max_order), false))
    for (std::size_t c = 0; c < m; ++c) jet[JetVar{static_cast<int>(c), k}] = small_rational(rng, true);
  return jet;
}

Vec verify_morphism(const HForest& sigma, const Tree& tau, Upsilon& ups, const Jet& jet) {
  Vec lhs = ups.at(m_map(sigma, tau), jet);
  MultiSet ks;
  std::vector<Vec> dirs;
  for (const auto& e : sigma.planted_part()) {
    ks.push_back(e.deriv);
    dirs.push_back(ups.at(e.sub, jet));
  }
  Vec rhs = ups.derivative(tau, sigma.poly_part(), ks, dirs, jet);
  for (std::size_t c = 0; c < lhs.size(); ++c) lhs[c] -= rhs[c];
  return lhs;
}

Vec crit_scaling_residual(const Tree& tau, const PolyNonlinearity& nl, const Rule& rule, const Rational& t,
                          const Jet& jet) {
  const Rational alpha = rule.alpha();
  const long den = alpha.get_den().get_si();
  const long num = alpha.get_num().get_si();
  auto slot_factor = [&](const MultiIndex& k) { return pow_int(t, -(num + den * scaled_norm(k, rule.s))); };

  Jet scaled;
  for (const auto& [v, x] : jet) scaled[v] = x * slot_factor(v.idx);

  PolyNonlinearity rescaled = nl;
  for (auto& f : rescaled.noise)
    for (auto& p : f) {
      Poly q;
      for (const auto& [mono, c] : p.terms()) {
        Rational w = c;
        for (const auto& [v, e] : mono) w *= pow_int(slot_factor(v.idx), e);
        q.add_term(mono, w);
      }
      p = q;
    }

  const Rational expo = (Rational(-2) - alpha - critical_homogeneity(tau, alpha, rule.s)) * den;
  if (!is_integer(expo)) throw std::logic_error("scaling exponent is not an integer multiple of 1/den(alpha)");
  const Rational factor = pow_int(t, expo.get_num().get_si());

  Vec lhs = upsilon(tau, nl, scaled);
  Vec rhs = upsilon(tau, rescaled, jet);
  for (std::size_t c = 0; c < lhs.size(); ++c) lhs[c] -= factor * rhs[c];
  return lhs;
}

}  // namespace apriori

namespace apriori {

ReexpansionTable reexpansion_table(const Enumeration& e) {
  ReexpansionTable table;
  table.beta = e.rule.beta;
  table.s = e.rule.s;
  for (const auto& sigma : e.W_le0())
    for (const auto& [k, tc] : coproduct(sigma, e.rule.beta, e.rule.s))
      table.by_tau[tc.first.right.key].push_back({sigma, tc.first.left, tc.second});
  for (const auto& u : e.U) {
    const Edge& edge = u.tree.children.front();
    if (scaled_norm(edge.deriv, e.rule.s) < 2) table.planted.push_back(edge);
  }
  return table;
}

Vec taylor_residual(const Tree& tau, const Character& g, Upsilon& ups, const Jet& jet, const ReexpansionTable& table) {
  const std::size_t m = ups.nonlinearity().m;
  const std::size_t d = table.s.size();
  Vec lhs(m, Rational(0));
  const Rational tau_fact(tree_factorial(tau));
  if (auto it = table.by_tau.find(tau.key); it != table.by_tau.end()) {
    for (const auto& entry : it->second) {
      const Rational w = entry.coefficient * g(entry.left) * tau_fact / Rational(tree_factorial(entry.sigma));
      if (w == 0) continue;
      Vec v = ups.at(entry.sigma, jet);
      for (std::size_t c = 0; c < m; ++c) lhs[c] += w * v[c];
    }
  }

  const Rational tau_hom = homogeneity(tau, table.beta, table.s);
  std::vector<MultiIndex> low = all_with_norm(table.s, Rational(1), false);  // |m|_s < 2
  std::vector<MultiIndex> shifts;
  for (const auto& a : all_with_norm(table.s, -tau_hom, false))
    if (!a.is_zero()) shifts.push_back(a);

  struct Slot {
    MultiIndex k;
    Vec dir;
    Rational weight;
    Rational hom;
  };
  std::vector<Slot> a_slots, b_slots;
  for (const auto& edge : table.planted) {
    const HForest h = HForest::planted(edge.deriv, edge.sub);
    const Rational w = g(h) / Rational(tree_factorial(edge.sub));
    a_slots.push_back({edge.deriv, ups.at(edge.sub, jet), w,
                       homogeneity(edge.sub, table.beta, table.s) + 2 - scaled_norm(edge.deriv, table.s)});
  }
  for (const auto& mm : low)
    for (const auto& a : shifts) {
      Rational w = Rational(1) / Rational(mi_factorial(a));
      for (std::size_t i = 0; i < d; ++i)
        if (a[i] > 0) w *= pow_int(g.x.at(i), a[i]);
      Vec dir(m, Rational(0));
      for (std::size_t c = 0; c < m; ++c) {
        auto it = jet.find(JetVar{static_cast<int>(c), mm + a});
        if (it != jet.end()) dir[c] = it->second;
      }
      b_slots.push_back({mm, dir, w, Rational(scaled_norm(a, table.s))});
    }

  Vec rhs(m, Rational(0));
  MultiSet ks;
  std::vector<Vec> dirs;
  const MultiIndex zero = MultiIndex::zero(d);
  std::function<void(bool, std::size_t, std::size_t, const Rational&, const Rational&)> rec =
      [&](bool in_b, std::size_t l, std::size_t b, const Rational& hom, const Rational& w) {
        if (w == 0) return;
        {
          Vec v = ups.derivative(tau, zero, ks, dirs, jet);
          const Rational scale = w / (Rational(factorial(static_cast<long>(l))) * Rational(factorial(static_cast<long>(b))));
          for (std::size_t c = 0; c < m; ++c) rhs[c] += scale * v[c];
        }
        if (!in_b) {
          for (const auto& slot : a_slots) {
            if (hom + slot.hom > 0) continue;
            ks.push_back(slot.k);
            dirs.push_back(slot.dir);
            rec(false, l + 1, b, hom + slot.hom, w * slot.weight);
            ks.pop_back();
            dirs.pop_back();
          }
        }
        for (const auto& slot : b_slots) {
          if (hom + slot.hom > 0) continue;
          ks.push_back(slot.k);
          dirs.push_back(slot.dir);
          rec(true, l, b + 1, hom + slot.hom, w * slot.weight);
          ks.pop_back();
          dirs.pop_back();
        }
      };
  rec(false, 0, 0, tau_hom, Rational(1));

  for (std::size_t c = 0; c < m; ++c) lhs[c] -= rhs[c];
  return lhs;
}

}  // namespace apriori
