#include "apriori/identities.hpp"

#include "apriori/tree_ops.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <set>

namespace apriori {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void fail(IdentityStats& st, const std::string& what) {
  ++st.failures;
  if (st.first_failure.empty()) st.first_failure = what;
}

bool all_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

Rule young_type_rule() { return make_rule(RuleCase::f_phi_only, Rational(-6, 5), parabolic_scaling(2), 1, 3); }

Rule rule_of(const StructuralConfig& c) {
  return make_rule(c.kind, c.beta, parabolic_scaling(static_cast<std::size_t>(c.d)), c.n, c.p, c.gradient_drift);
}

}  // namespace

std::vector<Tree> t2_basis(const Enumeration& e, int max_vertices) {
  std::vector<Tree> out;
  for (const auto& ti : e.W_neg)
    if (vertex_count(ti.tree) <= max_vertices) out.push_back(ti.tree);
  for (const auto& ti : e.U)
    if (vertex_count(ti.tree) <= max_vertices) out.push_back(ti.tree);
  for (const auto& k : all_with_norm(e.rule.s, Rational(2), false)) out.push_back(poly_tree(k));
  return out;
}

std::vector<HForest> hplus_basis(const Enumeration& e, int max_vertices) {
  std::vector<Edge> gens;
  std::vector<int> sizes;
  for (const auto& ti : e.U) {
    gens.push_back(ti.tree.children.front());
    sizes.push_back(vertex_count(gens.back().sub));
  }
  std::vector<std::vector<Edge>> products;
  std::vector<Edge> cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int left) {
    products.push_back(cur);
    for (std::size_t i = from; i < gens.size(); ++i) {
      if (sizes[i] > left) continue;
      cur.push_back(gens[i]);
      rec(i, left - sizes[i]);
      cur.pop_back();
    }
  };
  rec(0, max_vertices);
  std::vector<HForest> out;
  for (const auto& a : all_with_norm(e.rule.s, Rational(2), false))
    for (const auto& pl : products) out.push_back(HForest::from(a, pl));
  return out;
}

IdentityStats duality_suite(const Rule& rule, int max_vertices) {
  const auto t0 = Clock::now();
  IdentityStats st;
  st.name = "duality";
  Enumeration e = enumerate_conforming(rule, 0);
  const auto trees = t2_basis(e, max_vertices);
  const auto forests = hplus_basis(e, max_vertices);
  std::vector<TensorSum> deltas;
  for (const auto& eta : trees) {
    deltas.push_back(coproduct(eta, rule.beta, rule.s));
    for (const auto& [k, tc] : deltas.back())
      if (!e.in_Hplus(tc.first.left) || !e.in_T2(tc.first.right)) ++st.escaping;
  }
  MCache cache;
  for (const auto& sigma : forests) {
    const Rational sigma_fact(forest_factorial(sigma));
    for (const auto& tau : trees) {
      const TreeSum prod = m_map(sigma, tau, 0, &cache);
      const Rational tau_fact(tree_factorial(tau));
      for (std::size_t j = 0; j < trees.size(); ++j) {
        const Rational lhs = pair_tree_sum(prod, trees[j]);
        const Rational rhs = deltas[j].coefficient(TensorTerm{sigma, tau}) * sigma_fact * tau_fact;
        ++st.checked;
        if (lhs != rhs || !is_integer(lhs))
          fail(st, serialize(sigma) + " | " + serialize(tau) + " | " + serialize(trees[j]) + ": " + to_string(lhs) +
                       " vs " + to_string(rhs));
      }
    }
  }
  st.seconds = since(t0);
  return st;
}

IdentityStats morphism_suite(std::size_t instances, std::uint64_t seed) {
  const auto t0 = Clock::now();
  IdentityStats st;
  st.name = "pre_lie_morphism";
  std::mt19937_64 rng(seed);
  const Rule rule = make_rule(RuleCase::f_gradient, Rational(-4, 5), parabolic_scaling(2), 2, 3, true);
  std::vector<Upsilon> ups;
  for (int i = 0; i < 4; ++i) ups.emplace_back(sample_nonlinearity(rule, i % 2 ? 2 : 1, rng));
  std::uniform_int_distribution<int> coin(0, 1), npl(0, 2), pick(0, 3), verts(1, 3);

  std::function<Tree(int)> random_small = [&](int size) -> Tree {
    std::vector<Edge> ch;
    int left = size - 1;
    while (left > 0) {
      std::uniform_int_distribution<int> take(1, left);
      int s = take(rng);
      MultiIndex k = MultiIndex::zero(2);
      k.k[1] = coin(rng);
      ch.push_back(Edge{k, random_small(s)});
      left -= s;
    }
    MultiIndex a = MultiIndex::zero(2);
    a.k[1] = coin(rng) * coin(rng);
    std::uniform_int_distribution<int> noise(0, 2);
    return make_tree(a, noise(rng), std::move(ch));
  };

  for (std::size_t i = 0; i < instances; ++i) {
    Upsilon& u = ups[static_cast<std::size_t>(pick(rng))];
    Tree tau = random_small(verts(rng));
    std::vector<Edge> planted;
    for (int k = npl(rng); k > 0; --k) {
      MultiIndex edge = MultiIndex::zero(2);
      edge.k[1] = coin(rng);
      planted.push_back(Edge{edge, random_small(verts(rng) % 2 + 1)});
    }
    MultiIndex a = MultiIndex::zero(2);
    a.k[1] = coin(rng);
    a.k[0] = coin(rng) * coin(rng);
    HForest sigma = HForest::from(a, planted);
    Jet jet = sample_jet(u.nonlinearity().m, rule.s, 5, rng);
    ++st.checked;
    if (!all_zero(verify_morphism(sigma, tau, u, jet))) fail(st, serialize(sigma) + " -> " + tau.key);
  }
  st.seconds = since(t0);
  return st;
}

IdentityStats taylor_suite(std::size_t instances, std::uint64_t seed) {
  const auto t0 = Clock::now();
  IdentityStats st;
  st.name = "taylor_reexpansion";
  std::mt19937_64 rng(seed);
  struct Setup {
    Enumeration e;
    ReexpansionTable table;
    std::vector<Tree> trees;
    std::vector<Upsilon> ups;
  };
  std::vector<Setup> setups;
  for (const auto& r : {young_type_rule(), make_rule(RuleCase::f_gradient, Rational(-4, 5), parabolic_scaling(2), 1, 3, true),
                        make_rule(RuleCase::f_constant, Rational(-5, 4), parabolic_scaling(2), 1, 3),
                        make_rule(RuleCase::f_phi_only, Rational(-6, 5), parabolic_scaling(2), 2, 3)}) {
    Setup s{enumerate_conforming(r, 0), {}, {}, {}};
    s.table = reexpansion_table(s.e);
    s.trees = s.e.W_le0();
    for (int i = 0; i < 2; ++i) s.ups.emplace_back(sample_nonlinearity(r, static_cast<std::size_t>(i + 1), rng), r);
    setups.push_back(std::move(s));
  }
  std::uniform_int_distribution<std::size_t> which(0, setups.size() - 1);
  std::uniform_int_distribution<int> num(-3, 3), den(1, 3), two(0, 1);
  for (std::size_t i = 0; i < instances; ++i) {
    Setup& s = setups[which(rng)];
    std::uniform_int_distribution<std::size_t> tree_pick(0, s.trees.size() - 1);
    const Tree& tau = s.trees[tree_pick(rng)];
    Upsilon& u = s.ups[static_cast<std::size_t>(two(rng))];
    Character g = identity_character(s.e);
    for (auto& x : g.x) x = Rational(num(rng), den(rng));
    for (auto& [k, v] : g.planted) v = Rational(num(rng), den(rng));
    for (auto& x : g.x) x.canonicalize();
    for (auto& [k, v] : g.planted) v.canonicalize();
    Jet jet = sample_jet(u.nonlinearity().m, s.e.rule.s, 5, rng);
    ++st.checked;
    try {
      if (!all_zero(taylor_residual(tau, g, u, jet, s.table))) fail(st, tau.key);
    } catch (const std::out_of_range& ex) {
      ++st.escaping;
      fail(st, tau.key + ": " + ex.what());
    }
  }
  st.seconds = since(t0);
  return st;
}

IdentityStats scaling_suite(std::size_t instances, std::uint64_t seed) {
  const auto t0 = Clock::now();
  IdentityStats st;
  st.name = "critical_scaling";
  std::mt19937_64 rng(seed);
  std::vector<Rule> rules{young_type_rule(), make_rule(RuleCase::f_gradient, Rational(-4, 5), parabolic_scaling(2), 1, 3, true),
                          make_rule(RuleCase::f_phi_only, Rational(-6, 5), parabolic_scaling(2), 1, 5)};
  std::vector<PolyNonlinearity> nls;
  for (const auto& r : rules) nls.push_back(sample_nonlinearity(r, 1, rng));
  std::uniform_int_distribution<std::size_t> which(0, rules.size() - 1);
  std::uniform_int_distribution<int> num(1, 5), den(1, 4);
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t w = which(rng);
    Enumeration e = enumerate_conforming(rules[w], 0);
    const auto trees = e.W_le0();
    std::uniform_int_distribution<std::size_t> pick(0, trees.size() - 1);
    const Tree& tau = trees[pick(rng)];
    Rational t(num(rng), den(rng));
    t.canonicalize();
    Jet jet = sample_jet(1, rules[w].s, 5, rng);
    ++st.checked;
    if (!all_zero(crit_scaling_residual(tau, nls[w], rules[w], t, jet))) fail(st, tau.key);
  }
  st.seconds = since(t0);
  return st;
}

std::vector<StructuralConfig> representative_configs() {
  return {
      {RuleCase::f_constant, Rational(-251, 100), 4, 1, 3, false},
      {RuleCase::f_constant, Rational(-5, 4), 2, 2, 3, false},
      {RuleCase::f_phi_only, Rational(-6, 5), 2, 1, 3, false},
      {RuleCase::f_phi_only, Rational(-9, 10), 2, 2, 5, true},
      {RuleCase::f_gradient, Rational(-4, 5), 2, 1, 3, true},
      {RuleCase::f_gradient, Rational(-3, 5), 3, 1, 5, false},
  };
}

IdentityStats structural_suite(const StructuralConfig& cfg, std::uint64_t seed) {
  const auto t0 = Clock::now();
  IdentityStats st;
  const Rule rule = rule_of(cfg);
  st.name = "structural[" + to_string(cfg.kind) + ",beta=" + to_string(cfg.beta) + ",p=" + std::to_string(cfg.p) + "]";
  Enumeration e = enumerate_conforming(rule, 1);
  const std::size_t d = rule.dim();
  const MultiIndex zero = MultiIndex::zero(d);

  // Minimal homogeneity is beta, attained exactly at the noise leaves.
  ++st.checked;
  std::set<std::string> leaves, argmin;
  for (int j = 1; j <= rule.n; ++j) leaves.insert(noise_leaf(d, j).key);
  for (const auto& t : e.argmin) argmin.insert(t.key);
  if (e.min_hom != rule.beta || argmin != leaves) fail(st, "minimal homogeneity " + to_string(e.min_hom));

  // Branches of conforming trees have strictly smaller homogeneity.
  for (const auto& ti : e.conforming)
    for (const auto& b : branches(ti.tree)) {
      if (b.key == ti.tree.key) continue;
      ++st.checked;
      if (!(homogeneity(b, rule.beta, rule.s) < ti.hom)) fail(st, "branch " + b.key + " of " + ti.tree.key);
    }

  // At most one drift vertex in W_{<0}, with exactly one outgoing edge of scaled length one.
  if (rule.beta > -2) {
    std::function<void(const Tree&, int&, bool&)> scan = [&](const Tree& t, int& count, bool& good) {
      if (t.noise == 0) {
        ++count;
        int unit_edges = 0;
        for (const auto& c : t.children)
          if (scaled_norm(c.deriv, rule.s) == 1) ++unit_edges;
        if (unit_edges != 1) good = false;
      }
      for (const auto& c : t.children) scan(c.sub, count, good);
    };
    for (const auto& ti : e.W_neg) {
      int count = 0;
      bool good = true;
      scan(ti.tree, count, good);
      ++st.checked;
      if (count > 1 || (count == 1 && !good)) fail(st, "drift vertices in " + ti.tree.key);
    }
  }

  // Lower bound |tau| + |k|(beta+2) - |k|_s >= beta whenever D^k Upsilon^tau != 0.
  std::mt19937_64 rng(seed);
  Upsilon ups(sample_nonlinearity(rule, 1, rng), rule);
  for (const auto& ti : e.conforming) {
    const PolyVec& base = ups.poly(ti.tree);
    if (is_zero(base)) continue;
    std::vector<JetVar> vars;
    for (const auto& p : base)
      for (const auto& v : p.variables()) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::vector<JetVar> chosen;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      const PolyVec& dk = ups.partial(ti.tree, zero, chosen);
      if (is_zero(dk)) return;
      Rational lhs = ti.hom;
      for (const auto& v : chosen) lhs += rule.beta + 2 - scaled_norm(v.idx, rule.s);
      const bool leaf = chosen.empty() && ti.tree.children.empty() && ti.tree.noise > 0 && ti.tree.poly.is_zero();
      ++st.checked;
      if (lhs < rule.beta || ((lhs == rule.beta) != leaf)) fail(st, "lower bound at " + ti.tree.key);
      if (chosen.size() >= 3) return;
      for (std::size_t i = from; i < vars.size(); ++i) {
        chosen.push_back(vars[i]);
        rec(i);
        chosen.pop_back();
      }
    };
    rec(0);
  }

  // Second-order slots do not enter Upsilon^tau for tau in W_{<=0}.
  for (const auto& t : e.W_le0())
    for (const auto& p : ups.poly(t))
      for (const auto& v : p.variables()) {
        ++st.checked;
        if (scaled_norm(v.idx, rule.s) >= 2) fail(st, "second-order slot in " + t.key);
      }

  // Constant noise: D^k Upsilon^tau vanishes when the degree budget is negative and is affine in the gradient.
  if (rule.kind == RuleCase::f_constant) {
    const Rational alpha = rule.alpha();
    for (const auto& ti : e.conforming) {
      const Rational c = critical_homogeneity(ti.tree, alpha, rule.s);
      for (const auto& p : ups.poly(ti.tree)) {
        for (const auto& [mono, coef] : p.terms()) {
          Rational degree = 0;
          int gradient_power = 0;
          for (const auto& [v, ex] : mono) {
            degree += (alpha + scaled_norm(v.idx, rule.s)) * ex;
            if (!v.idx.is_zero()) gradient_power += ex;
          }
          ++st.checked;
          if (degree != 2 + alpha + c || gradient_power > 1) fail(st, "homogeneous degree of " + ti.tree.key);
        }
      }
    }
  }
  st.seconds = since(t0);
  return st;
}

}  // namespace apriori
