#include "apriori/rule.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace apriori {

std::string to_string(RuleCase c) {
  switch (c) {
    case RuleCase::f_constant: return "f_constant";
    case RuleCase::f_phi_only: return "f_phi_only";
    case RuleCase::f_gradient: return "f_gradient";
  }
  return "?";
}

RuleCase parse_rule_case(const std::string& s) {
  if (s == "f_constant") return RuleCase::f_constant;
  if (s == "f_phi_only") return RuleCase::f_phi_only;
  if (s == "f_gradient") return RuleCase::f_gradient;
  throw std::invalid_argument("unknown rule case: " + s);
}

namespace {

std::vector<MultiIndex> spatial_units(const Scaling& s) {
  std::vector<MultiIndex> out;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == 1) out.push_back(MultiIndex::unit(s.size(), i));
  return out;
}

/// Labels a noise vertex may carry on its outgoing edges.
std::vector<MultiIndex> noise_edge_labels(const Rule& r) {
  switch (r.kind) {
    case RuleCase::f_constant: return {};
    case RuleCase::f_phi_only: return {MultiIndex::zero(r.dim())};
    case RuleCase::f_gradient: return all_with_norm(r.s, 1, false);
  }
  return {};
}

}  // namespace

std::vector<MultiSet> standard_drift_multisets(const Scaling& s, int p, bool gradient_drift) {
  const std::size_t d = s.size();
  std::set<MultiSet> out;
  for (int l = 0; l <= p; ++l) out.insert(MultiSet(static_cast<std::size_t>(l), MultiIndex::zero(d)));
  if (gradient_drift) {
    if ((p - 1) % 2 != 0) throw std::invalid_argument("gradient drift needs odd p");
    int q = (p - 1) / 2;
    for (const auto& e : spatial_units(s))
      for (int r = 0; r <= q; ++r) {
        MultiSet m(static_cast<std::size_t>(r), MultiIndex::zero(d));
        m.push_back(e);
        std::sort(m.begin(), m.end());
        out.insert(m);
      }
  }
  return {out.begin(), out.end()};
}

Rule make_rule(RuleCase kind, const Rational& beta, const Scaling& s, int n, int p, bool gradient_drift) {
  if (p < 2) throw std::invalid_argument("drift degree p must be at least 2");
  if (n < 1) throw std::invalid_argument("noise dimension must be positive");
  Rule r;
  r.kind = kind;
  r.beta = beta;
  r.s = s;
  r.n = n;
  r.p = p;
  r.drift_multisets = standard_drift_multisets(s, p, gradient_drift);
  return r;
}

bool Rule::allows(int noise, const MultiSet& ks_in) const {
  if (ks_in.empty()) return true;
  MultiSet ks = ks_in;
  std::sort(ks.begin(), ks.end());
  if (noise == 0) return std::find(drift_multisets.begin(), drift_multisets.end(), ks) != drift_multisets.end();
  switch (kind) {
    case RuleCase::f_constant: return false;
    case RuleCase::f_phi_only:
      return std::all_of(ks.begin(), ks.end(), [](const MultiIndex& k) { return k.is_zero(); });
    case RuleCase::f_gradient:
      return std::all_of(ks.begin(), ks.end(), [&](const MultiIndex& k) { return scaled_norm(k, s) <= 1; });
  }
  return false;
}

void check_subcritical(const Rule& rule) {
  Rational bound;
  switch (rule.kind) {
    case RuleCase::f_constant: bound = -rule.alpha() - 2; break;
    case RuleCase::f_phi_only: bound = -2; break;
    case RuleCase::f_gradient: bound = -1; break;
  }
  if (!(rule.beta > bound))
    throw SubcriticalityError("not subcritical: case " + to_string(rule.kind) + " needs beta > " + to_string(bound) +
                              ", got " + to_string(rule.beta));
  if (rule.beta > 0) throw SubcriticalityError("beta must be <= 0");
}

bool is_conforming(const Tree& t, const Rule& rule) {
  if (t.noise > rule.n) return false;
  MultiSet ks;
  for (const auto& e : t.children) {
    if (!is_conforming(e.sub, rule)) return false;
    ks.push_back(e.deriv);
  }
  return rule.allows(t.noise, ks);
}

namespace {

struct Generator {
  const Rule& rule;
  const EnumerationLimits& lim;
  Rational m;  // lower bound on conforming homogeneities
  std::map<Rational, std::vector<TreeInfo>> memo;

  Rational vertex_increment(int j, const MultiSet& ks) const {
    Rational d = (j >= 1 ? rule.beta : Rational(0)) - m;
    for (const auto& k : ks) d += m + 2 - scaled_norm(k, rule.s);
    return d;
  }

  /// Nonempty multisets a vertex with noise j may carry whose cheapest completion fits in `budget`.
  std::vector<MultiSet> candidate_multisets(int j, const Rational& budget) const {
    std::vector<MultiSet> out;
    if (j == 0) {
      for (const auto& ks : rule.drift_multisets)
        if (!ks.empty() && vertex_increment(0, ks) + m <= budget) out.push_back(ks);
      return out;
    }
    auto labels = noise_edge_labels(rule);
    MultiSet cur;
    std::function<void(std::size_t, Rational)> rec = [&](std::size_t from, Rational cost) {
      if (!cur.empty()) out.push_back(cur);
      for (std::size_t i = from; i < labels.size(); ++i) {
        Rational c = cost + m + 2 - scaled_norm(labels[i], rule.s);
        if (c > budget) continue;
        if (c <= cost) throw EnumerationLimitError("non-positive edge increment: rule is not subcritical");
        cur.push_back(labels[i]);
        rec(i, c);
        cur.pop_back();
      }
    };
    rec(0, rule.beta);
    return out;
  }

  Rational min_increment() const {
    std::vector<Rational> incs;
    if (rule.n >= 1)
      for (const auto& k : noise_edge_labels(rule)) incs.push_back(vertex_increment(1, {k}));
    for (const auto& ks : rule.drift_multisets)
      if (!ks.empty()) incs.push_back(vertex_increment(0, ks));
    if (incs.empty()) return 1;
    return *std::min_element(incs.begin(), incs.end());
  }

  void emit(std::vector<TreeInfo>& out, const Tree& base, const Rational& hom, const Rational& omega) {
    for (const auto& k : all_with_norm(rule.s, omega - hom, false)) {
      Tree t = with_poly(base, k);
      int L = noise_count(t);
      if (L > lim.max_noise_leaves)
        throw EnumerationLimitError("enumeration exceeded " + std::to_string(lim.max_noise_leaves) +
                                    " noise leaves (tree " + t.key + "); lower omega or check the rule");
      out.push_back({t, hom + scaled_norm(k, rule.s), L});
      if (out.size() > lim.max_trees)
        throw EnumerationLimitError("enumeration exceeded " + std::to_string(lim.max_trees) + " trees");
    }
  }

  const std::vector<TreeInfo>& gen(const Rational& omega, const Rational& delta_min) {
    auto it = memo.find(omega);
    if (it != memo.end()) return it->second;
    std::vector<TreeInfo> out;
    if (omega >= m) {
      const std::vector<TreeInfo> pool = gen(omega - delta_min, delta_min);
      const std::size_t d = rule.dim();
      for (int j = 0; j <= rule.n; ++j) {
        Rational root = j >= 1 ? rule.beta : Rational(0);
        if (root <= omega) emit(out, noise_leaf(d, j), root, omega);
        for (const auto& ks : candidate_multisets(j, omega)) {
          Rational base = root;
          for (const auto& k : ks) base += 2 - scaled_norm(k, rule.s);
          std::vector<Edge> edges;
          std::function<void(std::size_t, std::size_t, Rational)> pick = [&](std::size_t slot, std::size_t from,
                                                                            Rational hom) {
            if (slot == ks.size()) {
              emit(out, make_tree(MultiIndex::zero(d), j, edges), hom, omega);
              return;
            }
            std::size_t start = (slot > 0 && ks[slot] == ks[slot - 1]) ? from : 0;
            Rational rest = Rational(static_cast<long>(ks.size() - slot - 1)) * m;
            for (std::size_t c = start; c < pool.size(); ++c) {
              Rational h = hom + pool[c].hom;
              if (h + rest > omega) break;
              edges.push_back(Edge{ks[slot], pool[c].tree});
              pick(slot + 1, c, h);
              edges.pop_back();
            }
          };
          pick(0, 0, base);
        }
      }
      std::sort(out.begin(), out.end(), [](const TreeInfo& a, const TreeInfo& b) {
        if (a.hom != b.hom) return a.hom < b.hom;
        return a.tree.key < b.tree.key;
      });
    }
    return memo.emplace(omega, std::move(out)).first->second;
  }
};

}  // namespace

std::vector<Tree> conforming_up_to(const Rule& rule, const Rational& omega, const EnumerationLimits& lim) {
  check_subcritical(rule);
  Generator g{rule, lim, rule.beta < 0 ? rule.beta : Rational(0), {}};
  Rational dmin = g.min_increment();
  if (dmin <= 0) throw EnumerationLimitError("vertex increment " + to_string(dmin) + " is not positive");
  std::vector<Tree> out;
  for (const auto& ti : g.gen(omega, dmin)) out.push_back(ti.tree);
  return out;
}

bool Enumeration::in_W_neg(const Tree& t) const { return w_neg_keys_.count(t.key) > 0; }
bool Enumeration::in_W_le0(const Tree& t) const { return w_le0_keys_.count(t.key) > 0; }
bool Enumeration::in_U(const Tree& t) const { return u_keys_.count(t.key) > 0; }

bool Enumeration::in_T2(const Tree& t) const {
  if (in_W_neg(t) || in_U(t)) return true;
  return is_polynomial(t) && scaled_norm(t.poly, rule.s) <= 2;
}

bool Enumeration::in_Hplus(const HForest& h) const {
  for (const auto& e : h.planted_part())
    if (!in_U(make_tree(MultiIndex::zero(rule.dim()), 0, {e}))) return false;
  return true;
}

std::vector<Tree> Enumeration::W_le0() const {
  std::vector<Tree> out;
  for (const auto& ti : W)
    if (ti.hom <= 0) out.push_back(ti.tree);
  return out;
}

Enumeration enumerate_conforming(const Rule& rule, const Rational& omega_max, const EnumerationLimits& lim) {
  check_subcritical(rule);
  Enumeration e;
  e.rule = rule;
  e.omega_max = omega_max;
  Rational inner = omega_max > 0 ? omega_max : Rational(0);
  for (const auto& t : conforming_up_to(rule, inner, lim))
    e.conforming.push_back({t, homogeneity(t, rule.beta, rule.s), noise_count(t)});
  bool first = true;
  for (const auto& ti : e.conforming) {
    if (first || ti.hom < e.min_hom) {
      e.min_hom = ti.hom;
      e.argmin.clear();
      first = false;
    }
    if (ti.hom == e.min_hom) e.argmin.push_back(ti.tree);
    if (polynomial_leaf_count(ti.tree) > 0 || !(ti.hom > -2)) continue;
    if (ti.hom <= omega_max) e.W.push_back(ti);
    if (ti.hom < 0) {
      e.W_neg.push_back(ti);
      e.w_neg_keys_.insert(ti.tree.key);
    }
    if (ti.hom <= 0) {
      e.w_le0_keys_.insert(ti.tree.key);
      if (ti.tree != unit_tree(rule.dim()) && is_integer(ti.hom)) {
        e.non_integer_ok = false;
        e.integer_violations.push_back(ti.tree);
      }
    }
  }
  for (const auto& w : e.W_neg)
    for (const auto& k : all_with_norm(rule.s, w.hom + 2, true)) {
      Tree u = make_tree(MultiIndex::zero(rule.dim()), 0, {Edge{k, w.tree}});
      Rational h = w.hom + 2 - scaled_norm(k, rule.s);
      if (h > 0) {
        e.U.push_back({u, h, w.L});
        e.u_keys_.insert(u.key);
      }
    }
  std::sort(e.U.begin(), e.U.end(), [](const TreeInfo& a, const TreeInfo& b) {
    if (a.hom != b.hom) return a.hom < b.hom;
    return a.tree.key < b.tree.key;
  });
  return e;
}

}  // namespace apriori
