#include "apriori/exponents.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace apriori;

namespace {

Rational Q(long a, long b = 1) { return make_rational(a, b); }

const VerdictEntry* find_verdict(const std::vector<VerdictEntry>& v, const std::string& name) {
  for (const auto& e : v)
    if (e.name == name) return &e;
  return nullptr;
}

Verdict verdict_of(const std::vector<VerdictEntry>& v, const std::string& name) {
  auto e = find_verdict(v, name);
  return e ? e->verdict : Verdict::not_applicable;
}

struct GridPoint {
  Rational gamma, p, q, eta;
};

std::vector<GridPoint> linear_grid() {
  return {{Q(1, 3), Q(2), Q(0), Q(0)},      {Q(2, 5), Q(3), Q(0), Q(0)},     {Q(1, 2), Q(3), Q(-1), Q(1)},
          {Q(3, 4), Q(2), Q(0), Q(1, 2)},   {Q(1, 4), Q(3), Q(-1), Q(1)},    {Q(3, 10), Q(5), Q(1, 2), Q(0)},
          {Q(1, 2), Q(2), Q(1), Q(-1)},     {Q(2, 3), Q(4), Q(-1), Q(3, 2)}, {Q(1, 3), Q(3, 2), Q(-1, 2), Q(1, 3)},
          {Q(9, 20), Q(3), Q(-1), Q(7, 5)}, {Q(7, 10), Q(3), Q(2), Q(1)},       {Q(1, 5), Q(2), Q(0), Q(-1)}};
}

Rule rule_of(RuleCase kind, const Rational& beta, std::size_t d, int n, int p, bool grad = false) {
  return make_rule(kind, beta, parabolic_scaling(d), n, p, grad);
}

}  // namespace

TEST(Alpha, PlugIn) {
  EXPECT_EQ(alpha(Q(3), EquationCase::pde), Q(1));
  EXPECT_EQ(alpha(Q(2), EquationCase::ode), Q(1));
  EXPECT_EQ(alpha(Q(5), EquationCase::pde), Q(1, 2));
  EXPECT_EQ(alpha(Q(3), EquationCase::ode), Q(1, 2));
  EXPECT_THROW(alpha(Q(1), EquationCase::pde), std::invalid_argument);
  EXPECT_THROW(alpha(Q(1, 2), EquationCase::ode), std::invalid_argument);
}

TEST(ClassicalRho, PlugInAndBoundary) {
  EXPECT_EQ(classical_rho(Q(1), Q(0)), Q(1, 3));
  EXPECT_EQ(classical_rho(Q(1), Q(-1)), Q(1, 2));
  EXPECT_THROW(classical_rho(Q(1), Q(-3)), SupercriticalError);
  EXPECT_THROW(classical_rho(Q(1), Q(-4)), SupercriticalError);
}

TEST(YoungExponents, PlugIn) {
  auto y = young_exponents(Q(1), Q(1), Q(1));
  EXPECT_EQ(y.sharp, Q(1, 2));
  EXPECT_EQ(y.simple, Q(1));
  EXPECT_FALSE(y.weighted);

  auto w0 = young_exponents(Q(1, 2), Q(3, 4), Q(1, 2), Q(0));
  ASSERT_TRUE(w0.weighted);
  EXPECT_EQ(*w0.weighted, Q(1, 2) / (Q(1, 2) + Q(3, 4)));

  auto w1 = young_exponents(Q(1), Q(3, 4), Q(1), Q(1));
  EXPECT_EQ(*w1.weighted, Q(4, 3));
}

TEST(YoungExponents, RejectsBadRegimes) {
  EXPECT_THROW(young_exponents(Q(1), Q(1, 2), Q(1)), std::invalid_argument);
  EXPECT_THROW(young_exponents(Q(1), Q(3, 4), Q(1, 4)), std::invalid_argument);
  EXPECT_THROW(young_exponents(Q(1), Q(3, 4), Q(1), Q(2)), SupercriticalError);
}

TEST(ButcherForests, CountsMatchRootedTrees) {
  // forests with s vertices <-> rooted trees with s+1 vertices
  const std::vector<int> rooted{1, 1, 2, 4, 9, 20};
  auto f = butcher_forests(1, 5);
  std::map<int, int> by_size;
  for (const auto& x : f) ++by_size[x.size];
  for (int s = 0; s <= 5; ++s) EXPECT_EQ(by_size[s], rooted[s]) << s;

  auto f2 = butcher_forests(2, 2);
  std::map<int, int> by2;
  for (const auto& x : f2) ++by2[x.size];
  EXPECT_EQ(by2[1], 2);
  EXPECT_EQ(by2[2], 7);  // [[]_j]_i (4) and products of two vertices (3)
}

TEST(ButcherForests, KeysAreUnique) {
  auto f = butcher_forests(2, 4);
  std::set<std::string> keys;
  for (const auto& x : f) EXPECT_TRUE(keys.insert(x.key).second) << x.key;
  EXPECT_EQ(f.front().key, "1");
}

TEST(RpExponents, LinearDescriptorReproducesEta) {
  auto r = rp_exponents(Q(3), Q(1, 3), 1, GrowthDescriptor::linear_ode(Q(1, 2), Q(-1, 3)));
  EXPECT_EQ(r.N, 3);
  ASSERT_FALSE(r.delta.empty());
  for (const auto& row : r.delta) {
    EXPECT_EQ(row.eta, (row.size + row.l) * Q(-1, 3) + (row.size + 1) * Q(1, 2));
    EXPECT_EQ(row.delta, Q(1, 3) * (row.size + 1) + r.alpha * (1 - row.l - row.eta));
  }
}

TEST(RpExponents, CollapsedExponentOnGrid) {
  for (const auto& g : linear_grid()) {
    auto r = rp_exponents(g.p, g.gamma, 1, GrowthDescriptor::linear_ode(g.eta, g.q));
    ASSERT_TRUE(r.closed_form);
    Rational expected = 1 / (g.gamma + g.gamma / r.alpha - g.q * (1 - g.gamma) - g.eta);
    EXPECT_EQ(*r.closed_form, expected);
    EXPECT_EQ(verdict_of(r.verdicts, "linear_condition"), Verdict::pass);
    EXPECT_EQ(verdict_of(r.verdicts, "closed_form"), Verdict::pass);
    EXPECT_EQ(verdict_of(r.verdicts, "delta_positive"), Verdict::pass);
    EXPECT_EQ(verdict_of(r.verdicts, "zeta_positive"), Verdict::pass);
    EXPECT_FALSE(r.triples.empty()) << to_string(g.gamma);
    for (const auto& t : r.triples) EXPECT_EQ(t.collapsed, expected);
  }
}

TEST(RpExponents, ExclusionWhenGammaIsReciprocal) {
  auto r = rp_exponents(Q(3), Q(1, 2), 1, GrowthDescriptor::linear_ode(Q(0), Q(0)));
  EXPECT_EQ(r.N, 2);
  for (const auto& t : r.triples) EXPECT_LT(t.j, 1);
  auto r2 = rp_exponents(Q(3), Q(2, 5), 1, GrowthDescriptor::linear_ode(Q(0), Q(0)));
  bool has_top = false;
  for (const auto& t : r2.triples) has_top = has_top || t.j == 1;
  EXPECT_TRUE(has_top);
  // gamma = N = 1: no triple survives
  EXPECT_TRUE(rp_exponents(Q(3), Q(1), 1, GrowthDescriptor::linear_ode(Q(0), Q(0))).triples.empty());
}

TEST(RpExponents, ConstantFOnlyLevelOne) {
  auto r = rp_exponents(Q(3), Q(2, 5), 2, GrowthDescriptor::linear_ode(Q(0), Q(0)), true);
  int live = 0;
  for (const auto& row : r.delta)
    if (!row.vanishes) {
      ++live;
      EXPECT_EQ(row.tau, "1");
      EXPECT_EQ(row.l, 0);
    }
  EXPECT_EQ(live, 1);
  for (const auto& t : r.triples) EXPECT_TRUE(t.vanishes);
}

TEST(RpExponents, LinearConditionEquivalentToDeltaAssumption) {
  for (int e = -4; e <= 8; ++e) {
    auto r = rp_exponents(Q(3), Q(2, 5), 1, GrowthDescriptor::linear_ode(Q(e, 4), Q(0)));
    EXPECT_EQ(verdict_of(r.verdicts, "linear_condition"), verdict_of(r.verdicts, "delta_positive")) << e;
  }
}

TEST(RpExponents, PerTreeDescriptor) {
  GrowthDescriptor desc;
  desc.mode = GrowthDescriptor::Mode::per_tree;
  auto forests = butcher_forests(1, 1);
  for (const auto& f : forests)
    for (int l = 0; l <= 2 - f.size; ++l) desc.per_tree[f.key + "|" + std::to_string(l)] = {Q(0), Q(0), Q(0)};
  auto r = rp_exponents(Q(3), Q(2, 5), 1, desc);
  EXPECT_EQ(verdict_of(r.verdicts, "descriptor_complete"), Verdict::pass);
  auto lin = rp_exponents(Q(3), Q(2, 5), 1, GrowthDescriptor::linear_ode(Q(0), Q(0)));
  ASSERT_EQ(r.triples.size(), lin.triples.size());
  for (std::size_t i = 0; i < r.triples.size(); ++i) EXPECT_EQ(r.triples[i].rho, lin.triples[i].rho);

  desc.per_tree.erase("[]_1|1");
  auto broken = rp_exponents(Q(3), Q(2, 5), 1, desc);
  EXPECT_EQ(verdict_of(broken.verdicts, "descriptor_complete"), Verdict::fail);
}

TEST(PdeExponents, GammaZeroRegimes) {
  auto low = pde_exponents(rule_of(RuleCase::f_phi_only, Q(-6, 5), 2, 1, 3), GrowthDescriptor::linear_pde(Q(1)));
  EXPECT_EQ(low.gamma_k.at(MultiIndex::zero(2)), Q(4, 5));
  ASSERT_TRUE(low.N);
  EXPECT_EQ(*low.N, 2);

  auto high = pde_exponents(rule_of(RuleCase::f_phi_only, Q(-9, 10), 2, 1, 3), GrowthDescriptor::linear_pde(Q(1)));
  EXPECT_EQ(high.gamma_k.at(MultiIndex::zero(2)), Q(1));
  EXPECT_EQ(*high.N, 1);
}

TEST(PdeExponents, GammaDependsOnlyOnScaledNorm) {
  auto r = pde_exponents(rule_of(RuleCase::f_phi_only, Q(-6, 5), 3, 1, 3), GrowthDescriptor::linear_pde(Q(1)));
  const Rational g1 = r.gamma_k.at(MultiIndex::unit(3, 1));
  EXPECT_EQ(r.gamma_k.at(MultiIndex::unit(3, 2)), g1);
}

TEST(PdeExponents, ConstantCaseCollapses) {
  Rule rule = rule_of(RuleCase::f_constant, Q(-251, 100), 4, 1, 3);
  auto r = pde_exponents(rule, GrowthDescriptor::linear_pde(Q(0)));
  ASSERT_FALSE(r.rows.empty());
  ASSERT_TRUE(r.closed_form);
  EXPECT_EQ(*r.closed_form, r.alpha / (r.beta + r.alpha + 2));
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.delta, row.L * (r.beta + r.alpha + 2)) << serialize(row.tau);
    EXPECT_EQ(row.L_rho, *r.closed_form);
  }
  EXPECT_EQ(verdict_of(r.verdicts, "closed_form"), Verdict::pass);
  EXPECT_EQ(verdict_of(r.verdicts, "non_integer"), Verdict::pass);
  EXPECT_EQ(verdict_of(r.verdicts, "zeta_in_unit_interval"), Verdict::pass);
  EXPECT_EQ(verdict_of(r.verdicts, "scaling_balance"), Verdict::pass);
}

TEST(PdeExponents, PhiOnlyClosedForm) {
  Rule rule = rule_of(RuleCase::f_phi_only, Q(-6, 5), 2, 1, 3);
  auto r = pde_exponents(rule, GrowthDescriptor::linear_pde(Q(1)));
  ASSERT_TRUE(r.closed_form);
  EXPECT_EQ(*r.closed_form, Q(5, 4));
  ASSERT_FALSE(r.rows.empty());
  for (const auto& row : r.rows) EXPECT_EQ(row.L_rho, Q(5, 4)) << serialize(row.tau) << multiset_key(row.ks);
  for (const auto& v : r.verdicts) EXPECT_NE(v.verdict, Verdict::fail) << v.name << " " << v.detail;
}

TEST(PdeExponents, PhiOnlyWithGradientDrift) {
  Rule rule = rule_of(RuleCase::f_phi_only, Q(-9, 10), 2, 2, 5, true);
  auto r = pde_exponents(rule, GrowthDescriptor::linear_pde(Q(2)));
  ASSERT_TRUE(r.closed_form);
  EXPECT_EQ(*r.closed_form, r.alpha / (r.beta + 2 + r.alpha - 2 * r.alpha));
  for (const auto& row : r.rows) EXPECT_EQ(row.L_rho, *r.closed_form);
  EXPECT_EQ(verdict_of(r.verdicts, "closed_form"), Verdict::pass);
}

TEST(PdeExponents, InteriorSetOnlyZerosBelowN) {
  for (auto beta : {Q(-6, 5), Q(-3, 2), Q(-9, 10)}) {
    Rule rule = rule_of(RuleCase::f_phi_only, beta, 2, 1, 3);
    auto r = pde_exponents(rule, GrowthDescriptor::linear_pde(Q(3)));
    for (const auto& row : r.rows) {
      if (!row.interior) continue;
      for (const auto& k : row.ks) EXPECT_TRUE(k.is_zero());
      EXPECT_LE(static_cast<int>(row.ks.size()), *r.N - 1);
    }
  }
}

TEST(PdeExponents, GradientClosedForm) {
  Rule rule = rule_of(RuleCase::f_gradient, Q(-7, 10), 2, 1, 3, true);
  auto r = pde_exponents(rule, GrowthDescriptor::linear_pde(Q(2)));
  ASSERT_TRUE(r.closed_form);
  EXPECT_EQ(*r.closed_form, Q(10, 3));
  ASSERT_FALSE(r.rows.empty());
  for (const auto& row : r.rows) {
    EXPECT_LE(row.ks.size(), 1u);
    EXPECT_EQ(row.L_rho, Q(10, 3));
  }
  for (const auto& v : r.verdicts) EXPECT_NE(v.verdict, Verdict::fail) << v.name << " " << v.detail;
}

TEST(PdeExponents, DeltaPositiveIffLinearCondition) {
  for (auto beta : {Q(-6, 5), Q(-3, 2)}) {
    Rule rule = rule_of(RuleCase::f_phi_only, beta, 2, 1, 3);
    for (int e = 0; e <= 12; ++e) {
      auto r = pde_exponents(rule, GrowthDescriptor::linear_pde(Q(e, 4)));
      bool cond = r.alpha * (Q(e, 4) - 1) < beta + 2;
      bool all_positive = true;
      for (const auto& row : r.rows) all_positive = all_positive && row.delta > 0;
      EXPECT_EQ(cond, all_positive) << to_string(beta) << " eta=" << e << "/4";
    }
  }
}

TEST(PdeExponents, URowsReuseRhoOfBranch) {
  auto r = pde_exponents(rule_of(RuleCase::f_phi_only, Q(-6, 5), 2, 1, 3), GrowthDescriptor::linear_pde(Q(1)));
  ASSERT_FALSE(r.u_rows.empty());
  for (const auto& u : r.u_rows) EXPECT_EQ(u.rho * noise_count(u.sigma), Q(5, 4));
}

TEST(PdeExponents, SubcriticalityIsAVerdict) {
  auto r = pde_exponents(rule_of(RuleCase::f_phi_only, Q(-5, 2), 2, 1, 3), GrowthDescriptor::linear_pde(Q(1)));
  EXPECT_EQ(verdict_of(r.verdicts, "subcritical"), Verdict::fail);
}

TEST(AbstractConstants, PlugIn) {
  auto c = abstract_constants(Q(1), Q(1));
  ASSERT_TRUE(c.theta.exact);
  EXPECT_EQ(*c.theta.exact, Q(1, 2));
  EXPECT_EQ(*c.nu_min_exact, Q(2));

  auto half = abstract_constants(Q(1, 2), Q(1));
  EXPECT_EQ(*half.theta.exact, Q(1, 4));

  auto irr = abstract_constants(Q(2), Q(1));
  EXPECT_FALSE(irr.theta.exact);
  EXPECT_NEAR(irr.theta.value, 1 / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(abstract_constants(Q(1), Q(0)), std::invalid_argument);
}

TEST(CorollaryConstants, PlugInAndLimit) {
  auto c = corollary_constants(Q(1), Q(2), Q(1), Q(1, 2));
  EXPECT_EQ(c.delta + 1, Q(2));
  EXPECT_EQ(*c.abstract.theta.exact, Q(1, 2));
  EXPECT_EQ(c.solution_prefactor, Q(1));
  EXPECT_EQ(c.driver_prefactor, Q(2));

  double prev_theta = 0, prev_nu = 0;
  for (long k = 512; k >= 1; k /= 2) {
    auto cc = corollary_constants(Q(1), Q(1), Q(k, 1024), Q(1));
    if (prev_theta > 0) {
      EXPECT_LT(cc.delta, Q(k * 2, 1024) / (1 - Q(k * 2, 1024)));
      EXPECT_GT(cc.abstract.theta.value, prev_theta);
      EXPECT_GT(cc.abstract.nu_min, prev_nu);
    }
    prev_theta = cc.abstract.theta.value;
    prev_nu = cc.abstract.nu_min;
  }
  EXPECT_GT(prev_theta, 0.99);
  EXPECT_THROW(corollary_constants(Q(1), Q(1), Q(1), Q(1)), std::invalid_argument);
}

TEST(ComputeExponents, OdeAndPdeReports) {
  EquationSpec ode;
  ode.eq_case = EquationCase::ode;
  ode.p = Q(2);
  ode.gamma = Q(3, 4);
  ode.theta = Q(1);
  ode.growth = GrowthDescriptor::linear_ode(Q(1), Q(-1));
  auto r = compute_exponents(ode);
  ASSERT_TRUE(r.young);
  EXPECT_EQ(*r.young->weighted, Q(4, 3));
  ASSERT_TRUE(r.rp);
  EXPECT_EQ(*r.rp->closed_form, Q(4, 3));
  EXPECT_TRUE(r.all_pass());

  EquationSpec pde;
  pde.eq_case = EquationCase::pde;
  pde.p = Q(3);
  pde.d = 4;
  pde.kind = RuleCase::f_constant;
  pde.beta = Q(-251, 100);
  pde.growth = GrowthDescriptor::linear_pde(Q(0));
  auto rp = compute_exponents(pde);
  ASSERT_TRUE(rp.rho_classical);
  EXPECT_EQ(*rp.rho_classical, Q(100, 49));
  EXPECT_TRUE(rp.all_pass());
}
