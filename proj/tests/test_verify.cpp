#include "apriori/exponents.hpp"
#include "apriori/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace apriori;

namespace {

BoundSpec young_spec(BoundId id, double gamma) {
  BoundSpec s = make_bound_spec(id, 3.0);
  s.gamma = gamma;
  return s;
}

SampledPath flat_path(int grid) {
  return path_from_function(grid, 1, [](double) { return Eigen::VectorXd::Zero(1); });
}

}  // namespace

TEST(BoundExponents, MatchExactTables) {
  const Rational p(3), g(7, 10), th(1);
  const auto a = alpha(p, EquationCase::ode);
  const auto y = young_exponents(a, g, th, Rational(1, 2));
  BoundSpec s = young_spec(BoundId::young_simple, 0.7);
  s.eta = 0.5;
  EXPECT_NEAR(bound_rho(s), y.simple.get_d(), 1e-15);
  s.id = BoundId::young_sharp;
  EXPECT_NEAR(bound_rho(s), y.sharp.get_d(), 1e-15);
  s.id = BoundId::young_weighted;
  EXPECT_NEAR(bound_rho(s), y.weighted->get_d(), 1e-15);

  BoundSpec c = make_bound_spec(BoundId::classical, 3.0);
  c.beta = -0.5;
  EXPECT_NEAR(bound_rho(c), classical_rho(alpha(p, EquationCase::pde), Rational(-1, 2)).get_d(), 1e-15);
  EXPECT_DOUBLE_EQ(c.fraction, 0.25);
  EXPECT_EQ(parse_bound_id("rp_linear"), BoundId::rp_linear);
  EXPECT_THROW(parse_bound_id("nope"), std::invalid_argument);
}

TEST(BoundExponents, RoughTablesAgreeWithLinearDescriptor) {
  BoundSpec s = young_spec(BoundId::rp_general, 0.45);
  const ForcingChoice poly = forcing_catalog("polynomial", s);
  const RpBoundExponents e = rp_bound_exponents(s, poly.norms);
  const RpExponents ref = rp_exponents(Rational(3), Rational(9, 20), 1,
                                       GrowthDescriptor::linear_ode(Rational(1), Rational(-1)));
  ASSERT_EQ(e.N, ref.N);
  ASSERT_EQ(e.rho_triple.size(), ref.triples.size());
  for (const auto& row : ref.triples) {
    const auto key = std::make_tuple(row.k, row.l, row.j);
    ASSERT_TRUE(e.rho_triple.count(key)) << row.k << row.l << row.j;
    EXPECT_NEAR(e.rho_triple.at(key), row.rho.get_d(), 1e-12);
    EXPECT_NEAR(e.zeta.at(key), row.zeta.get_d(), 1e-12);
  }
  BoundSpec lin = s;
  lin.id = BoundId::rp_linear;
  lin.eta = 1.0;
  lin.q = -1.0;
  ASSERT_TRUE(ref.closed_form.has_value());
  EXPECT_NEAR(bound_rho(lin), ref.closed_form->get_d(), 1e-12);

  BoundSpec too_rough = s;
  too_rough.gamma = 0.3;
  EXPECT_THROW(rp_bound_exponents(too_rough, poly.norms), std::invalid_argument);
}

TEST(ForcingCatalog, NormsMatchNumericalEstimates) {
  const BoundSpec s = young_spec(BoundId::young_sharp, 0.7);
  const ForcingChoice b = forcing_catalog("bounded", s);
  // |x|_0 = 2, so the weighted sup of sin at eta = 0 is half the plain sup
  const auto sup = weighted_norms([](double x) { return std::sin(x); }, 1.0, 0.0).first;
  EXPECT_LE(2 * sup, b.norms.sup + 1e-12);
  EXPECT_GT(2 * sup, 0.99 * b.norms.sup);

  BoundSpec w = young_spec(BoundId::young_weighted, 0.7);
  w.eta = 1.0;
  const ForcingChoice poly = forcing_catalog("polynomial", w);
  const auto [psup, psemi] = weighted_norms([](double x) { return x; }, 1.0, 1.0);
  EXPECT_LE(psup, poly.norms.sup + 1e-12);
  EXPECT_GT(psup, 0.99);
  EXPECT_LE(psemi, 0.5 + 1e-12);
  EXPECT_GT(psemi, 0.49);
  EXPECT_THROW(forcing_catalog("cubic", s), std::invalid_argument);
}

TEST(RhsYoung, ZeroDriverLeavesDistanceTerm) {
  const BoundSpec s = young_spec(BoundId::young_sharp, 0.7);
  const ForcingChoice b = forcing_catalog("bounded", s);
  const SampledPath X = flat_path(257);
  const RhsTerms t = rhs_young(s, b.norms, X, 128, 3.0);
  EXPECT_EQ(t.driver, 0.0);
  EXPECT_NEAR(t.dist, std::pow(0.5, -0.5), 1e-12);
  EXPECT_EQ(t.rhs(), t.dist);
}

TEST(RhsYoung, DoublingForcingScalesByPowerRho) {
  const BoundSpec s = young_spec(BoundId::young_simple, 0.7);
  ForcingNorms f;
  f.sup = 1.0;
  f.holder = 1.5;
  ForcingNorms f2 = f;
  f2.sup *= 2;
  f2.holder *= 2;
  const SampledPath X = sample_fbm(0.75, 1025, 1, 7);
  const RhsTerms a = rhs_young(s, f, X, 800, 2.0), b = rhs_young(s, f2, X, 800, 2.0);
  EXPECT_NEAR(b.driver / a.driver, std::pow(2.0, bound_rho(s)), 1e-12);
}

TEST(RhsYoung, LocalisedToWindow) {
  for (BoundId id : {BoundId::young_simple, BoundId::young_sharp, BoundId::young_weighted}) {
    const BoundSpec s = young_spec(id, 0.7);
    const ForcingChoice b = forcing_catalog("bounded", s);
    const SampledPath X = sample_fbm(0.75, 1025, 1, 11);
    const int iz = 700;
    const Window w = bound_window(s, X, iz, 4.0);
    const SampledPath Y = frozen_outside(X, w.i0, w.i1);
    const RhsTerms a = rhs_young(s, b.norms, X, iz, 4.0), c = rhs_young(s, b.norms, Y, iz, 4.0);
    EXPECT_EQ(a.driver, c.driver);
    EXPECT_EQ(a.dist, c.dist);
  }
}

TEST(RhsYoung, HomogeneousInDriver) {
  const BoundSpec s = young_spec(BoundId::young_sharp, 0.7);
  const ForcingChoice b = forcing_catalog("bounded", s);
  const SampledPath X = sample_fbm(0.75, 1025, 1, 3);
  const double rho = bound_rho(s);
  const RhsTerms base = rhs_young(s, b.norms, X, 900, 1.5);
  for (double c : {0.25, 4.0, 64.0}) {
    const RhsTerms t = rhs_young(s, b.norms, scaled(X, c), 900, 1.5);
    EXPECT_NEAR(t.driver / base.driver, std::pow(c, rho), 1e-13 * std::pow(c, rho));
  }
}

TEST(BoundWindow, LambdaAndWidening) {
  const BoundSpec s = young_spec(BoundId::young_sharp, 0.7);
  const SampledPath X = flat_path(1025);
  Window w = bound_window(s, X, 512, 0.0);
  EXPECT_NEAR(w.lambda, 0.25, 1e-15);
  EXPECT_FALSE(w.widened);
  w = bound_window(s, X, 512, 1e2);
  EXPECT_NEAR(w.lambda, 1e-4, 1e-15);
  EXPECT_TRUE(w.widened);
  EXPECT_EQ(w.i1 - w.i0, s.min_gap);
  EXPECT_THROW(bound_window(s, X, 1, 1.0), std::invalid_argument);
}

TEST(RhsRough, ConstantForcingUsesLevelOneOnly) {
  BoundSpec s = young_spec(BoundId::rp_general, 0.45);
  ForcingNorms f;
  f.rp_norm = {{{0, 0}, 1.0}};
  f.rp_eta = {{{0, 0}, 0.0}};
  const BranchedLift2 lift = lift_level2(sample_fbm(0.5, 1025, 1, 5));
  const RhsTerms t = rhs_rp(s, f, lift, 900, 2.0);
  const Window w = bound_window(s, lift.base, 900, 2.0);
  const double xn = holder_norm(lift.base, 0.45, w.i0, w.i1).value;
  const RpBoundExponents e = rp_bound_exponents(s, f);
  EXPECT_NEAR(t.driver, std::pow(xn, e.rho_tau.at(0)), 1e-12 * t.driver);
}

TEST(RhsRough, LinearBoundUsesLevelTwo) {
  BoundSpec s = young_spec(BoundId::rp_linear, 0.45);
  s.eta = 1.0;
  s.q = -1.0;
  const ForcingChoice poly = forcing_catalog("polynomial", s);
  const SampledPath X = sample_fbm(0.5, 1025, 1, 9);
  const RhsTerms full = rhs_rp(s, poly.norms, lift_level2(X), 900, 2.0);
  const RhsTerms flat = rhs_rp(s, poly.norms, zero_second_level(X), 900, 2.0);
  EXPECT_GE(full.driver, flat.driver);
  EXPECT_GT(flat.driver, 0.0);
}

TEST(RhsClassical, ZeroNoiseAndDistance) {
  BoundSpec s = make_bound_spec(BoundId::classical, 3.0);
  const GridField xi = make_grid_field(2, 65, 65);
  const SpaceTimePoint z{0.0, 0.5, 0.0};
  EXPECT_NEAR(parabolic_dist(z, 2), 0.5, 1e-15);
  EXPECT_NEAR(parabolic_dist({-0.75, 0.0, 0.0}, 2), 0.5, 1e-15);
  const RhsTerms t = rhs_classical(s, xi, z, 10.0);
  EXPECT_EQ(t.driver, 0.0);
  EXPECT_NEAR(t.dist, std::pow(0.5, -1.0), 1e-12);
  EXPECT_THROW(rhs_classical(s, xi, {0.0, 1.0, 0.0}, 1.0), std::invalid_argument);
}

TEST(RhsClassical, InterpolationInequality) {
  const GridField xi = mollified_noise(-0.5, 0.125, 2, 129, 129, 4, 1.0);
  EXPECT_TRUE(interpolation_holds(xi, -0.75, -0.25, {0.0, 0.0, 0.0}, 0.25, 2));
}

TEST(EmpiricalConstant, MaxAndQuantiles) {
  BoundReport a, b;
  for (int k = 1; k <= 100; ++k) {
    BoundRecord r;
    r.ratio = k / 100.0;
    (k % 2 ? a : b).records.push_back(r);
  }
  BoundRecord nan;
  nan.ratio = std::nan("");
  nan.flags = "blowup";
  a.records.push_back(nan);
  const ConstantSummary s = empirical_constant({a, b}), t = empirical_constant({b, a});
  EXPECT_EQ(s.count, 100u);
  EXPECT_DOUBLE_EQ(s.c_star, 1.0);
  EXPECT_DOUBLE_EQ(s.quantiles.at("q50"), 0.5);
  EXPECT_DOUBLE_EQ(s.quantiles.at("q90"), 0.9);
  EXPECT_EQ(s.quantiles, t.quantiles);
  summarize(a);
  EXPECT_EQ(a.blowups, 1);
  EXPECT_THROW(empirical_constant({}), std::invalid_argument);
}

TEST(Sweep, ZeroForcingMeetsDriftDecay) {
  OdeExperiment ex;
  ex.bound = young_spec(BoundId::young_sharp, 0.7);
  ex.forcing = "zero";
  ex.grid_size = 257;
  const SweepResult r = sweep_coming_down(ex, {"initial", {1.0, 1e2, 1e4}}, 2, 1, 2);
  ASSERT_EQ(r.reports.size(), 3u);
  for (const auto& rep : r.reports) {
    EXPECT_EQ(rep.blowups, 0);
    EXPECT_LE(rep.max_ratio, 1.05 * std::pow(2.0, -0.5));
  }
}

TEST(Sweep, DeterministicAcrossThreads) {
  OdeExperiment ex;
  ex.bound = young_spec(BoundId::young_sharp, 0.7);
  ex.grid_size = 257;
  const SweepResult a = sweep_coming_down(ex, {"amplitude", {1.0, 4.0}}, 3, 42, 1);
  const SweepResult b = sweep_coming_down(ex, {"amplitude", {1.0, 4.0}}, 3, 42, 3);
  std::ostringstream sa, sb;
  write_report_csv(sa, a.reports);
  write_report_csv(sb, b.reports);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().substr(0, 8), "bound_id");
}

TEST(Sweep, PdeTrialRuns) {
  PdeExperiment ex;
  ex.nt = 33;
  ex.nx = 33;
  ex.z_stride = 8;
  ex.noise_eps = 0.25;
  ex.samples_per_axis = 2;
  const BoundReport rep = run_pde_trial(ex, {"boundary", {1.0}}, 10.0, 0, 1);
  EXPECT_FALSE(rep.records.empty());
  EXPECT_EQ(rep.blowups, 0);
  EXPECT_GT(rep.max_ratio, 0.0);
  EXPECT_EQ(rep.records.front().z.find(';') != std::string::npos, true);
}

TEST(RhsRough, ZeroLiftLeavesDistanceTerm) {
  const BoundSpec s = young_spec(BoundId::rp_general, 0.45);
  const ForcingChoice b = forcing_catalog("bounded", s);
  const RhsTerms t = rhs_rp(s, b.norms, zero_second_level(flat_path(513)), 256, 1.0);
  EXPECT_EQ(t.driver, 0.0);
  EXPECT_NEAR(t.rhs(), std::pow(0.5, -0.5), 1e-12);
}

TEST(RhsClassical, AmplitudeScalesByPowerRho) {
  const BoundSpec s = make_bound_spec(BoundId::classical, 3.0);
  const GridField a = mollified_noise(-0.5, 0.25, 2, 65, 65, 2, 1.0);
  const GridField b = mollified_noise(-0.5, 0.25, 2, 65, 65, 2, 2.0);
  const SpaceTimePoint z{-0.25, 0.0, 0.0};
  const RhsTerms ta = rhs_classical(s, a, z, 1.0, 2), tb = rhs_classical(s, b, z, 1.0, 2);
  EXPECT_NEAR(tb.driver / ta.driver, std::pow(2.0, bound_rho(s)), 1e-12);
}

TEST(Sweep, TinyDriverCloseToZeroForcing) {
  OdeExperiment ex;
  ex.bound = young_spec(BoundId::young_sharp, 0.7);
  ex.grid_size = 257;
  ex.amplitude = 1e-6;
  OdeExperiment zero = ex;
  zero.forcing = "zero";
  const SweepAxis axis{"initial", {1.0, 1e2}};
  const SweepResult a = sweep_coming_down(ex, axis, 2, 5), b = sweep_coming_down(zero, axis, 2, 5);
  for (std::size_t k = 0; k < a.reports.size(); ++k)
    EXPECT_NEAR(a.reports[k].max_ratio, b.reports[k].max_ratio, 0.1 * b.reports[k].max_ratio);
}
