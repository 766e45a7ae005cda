#include "apriori/solvers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace apriori;

namespace {

Eigen::VectorXd vec1(double v) { return Eigen::VectorXd::Constant(1, v); }

SampledPath smooth_square(int grid) {
  return path_from_function(grid, 1, [](double t) { return vec1(t * t); });
}

Forcing identity_forcing() {
  return Forcing::scalar([](double x) { return x; }, [](double) { return 1.0; });
}

/// Self-convergence reference by Richardson-free refinement of a classical RK4 on phi' = -phi^p + g(phi) X'.
double rk4_reference(double p, double phi0, const std::function<double(double)>& g,
                     const std::function<double(double)>& dX, int steps) {
  double phi = phi0, t = -1.0;
  const double h = 1.0 / steps;
  auto rhs = [&](double s, double x) { return -std::pow(std::abs(x), p - 1) * x + g(x) * dX(s); };
  for (int k = 0; k < steps; ++k) {
    const double k1 = rhs(t, phi), k2 = rhs(t + h / 2, phi + h / 2 * k1);
    const double k3 = rhs(t + h / 2, phi + h / 2 * k2), k4 = rhs(t + h, phi + h * k3);
    phi += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return phi;
}

}  // namespace

TEST(ExactDrift, ClosedForm) {
  EXPECT_NEAR(exact_drift(3, 1, 0, 1), 1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(exact_drift(3, 1e300, -1, 0), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(exact_drift(3, 2.5, 0.3, 0.3), 2.5);
  EXPECT_EQ(exact_drift(3, -2.0, 0, 1), -exact_drift(3, 2.0, 0, 1));
  EXPECT_THROW(exact_drift(3, 1, 0, -1), std::invalid_argument);
}

TEST(DriftFlow, KeepsDirection) {
  Eigen::VectorXd v(2);
  v << 3.0, 4.0;
  Eigen::VectorXd w = drift_flow(3, v, 0.1);
  EXPECT_NEAR(w.norm(), exact_drift(3, 5.0, 0, 0.1), 1e-14);
  EXPECT_NEAR(w[0] / w[1], 0.75, 1e-15);
}

TEST(YoungSolve, ZeroNoiseMatchesExactDrift) {
  SampledPath X = path_from_function(4097, 1, [](double) { return vec1(0.0); });
  ODESolution e = young_solve(Forcing::zero(1, 1), 3, X, vec1(10.0), DriftScheme::explicit_euler);
  const double exact = exact_drift(3, 10.0, -1, 0);
  EXPECT_NEAR(e.endpoint()[0], exact, 0.01 * exact);
  ODESolution s = young_solve(Forcing::zero(1, 1), 3, X, vec1(10.0));
  EXPECT_NEAR(s.endpoint()[0], exact, 1e-12 * exact);
}

TEST(YoungSolve, ZeroIsFixedPoint) {
  SampledPath X = sample_fbm(0.7, 257, 1, 1);
  ODESolution s = young_solve(identity_forcing(), 3, X, vec1(0.0));
  EXPECT_TRUE(s.values.isZero());
}

TEST(YoungSolve, ComingDownFromInfinity) {
  SampledPath X = path_from_function(4097, 1, [](double) { return vec1(0.0); });
  for (double p : {2.0, 3.0, 5.0})
    for (double phi0 : {1.0, 10.0, 1e3, 1e6}) {
      ODESolution s = young_solve(Forcing::zero(1, 1), p, X, vec1(phi0));
      const double bound = std::pow(p - 1, -1 / (p - 1));
      EXPECT_LE(std::abs(s.endpoint()[0]), 1.01 * bound);
      EXPECT_NEAR(s.endpoint()[0], exact_drift(p, phi0, -1, 0), 0.01 * exact_drift(p, phi0, -1, 0));
    }
}

TEST(YoungSolve, SmoothDriverAgainstReference) {
  SampledPath X = path_from_function(4097, 1, [](double t) { return vec1(t); });
  Forcing one = Forcing::scalar([](double) { return 1.0; }, [](double) { return 0.0; });
  ODESolution s = young_solve(one, 2, X, vec1(1.0));
  const double ref = rk4_reference(2, 1.0, [](double) { return 1.0; }, [](double) { return 1.0; }, 1 << 14);
  EXPECT_NEAR(s.endpoint()[0], ref, 1e-4);
}

TEST(YoungSolve, BlowupMarker) {
  SampledPath X = path_from_function(65, 1, [](double t) { return vec1(1e3 * t); });
  Forcing cube = Forcing::scalar([](double x) { return x * x * x; }, [](double x) { return 3 * x * x; });
  ODESolution s = young_solve(cube, 2, X, vec1(10.0), DriftScheme::explicit_euler);
  ASSERT_TRUE(s.blew_up());
  EXPECT_TRUE(std::isnan(s.endpoint()[0]));
  EXPECT_EQ(s.times.size(), 65u);
}

TEST(YoungSolve, ScalingEquivariance) {
  // psi(t) = lambda^alpha phi(z + lambda t) solves the equation driven by R_{z,lambda}(f, X)
  const double p = 3, alpha = 0.5;
  SampledPath X = sample_fbm(0.75, 1025, 1, 17);
  auto g = [](double x) { return std::sin(x) + 0.5; };
  Forcing f = Forcing::scalar(g, [](double x) { return std::cos(x); });
  ODESolution full = young_solve(f, p, X, vec1(2.0), DriftScheme::explicit_euler);
  const int i0 = 512, i1 = 768;
  const double lambda = (i1 - i0) * X.h, la = std::pow(lambda, alpha);
  SampledPath Y = scaled(rescaled_window(X, i0, i1), la);
  Forcing fl = Forcing::scalar([=](double x) { return g(x / la); }, [=](double x) { return std::cos(x / la) / la; });
  ODESolution part = young_solve(fl, p, Y, vec1(la * full.values(i0, 0)), DriftScheme::explicit_euler);
  for (int k = 0; k <= i1 - i0; k += 32) EXPECT_NEAR(part.values(k, 0), la * full.values(i0 + k, 0), 1e-10);
}

TEST(RdeDavie, ZeroSecondLevelReducesToYoung) {
  SampledPath X = sample_fbm(0.6, 513, 1, 4);
  Forcing f = identity_forcing();
  ODESolution y = young_solve(f, 3, X, vec1(1.5));
  ODESolution d = rde_solve_davie(f, 3, zero_second_level(X), vec1(1.5));
  EXPECT_EQ(y.values, d.values);
}

TEST(RdeDavie, ConstantForcingEqualsEuler) {
  SampledPath X = sample_fbm(0.6, 513, 2, 4);
  Eigen::MatrixXd A(1, 2);
  A << 0.3, -1.2;
  Forcing f = Forcing::constant_matrix(A);
  EXPECT_EQ(young_solve(f, 3, X, vec1(2.0)).values, rde_solve_davie(f, 3, lift_level2(X), vec1(2.0)).values);
}

TEST(RdeDavie, DecompositionIsExact) {
  SampledPath X = sample_fbm(0.6, 65, 2, 8);
  BranchedLift2 lift = lift_level2(X);
  Forcing f;
  f.m = 1;
  f.n = 2;
  f.value = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd F(1, 2);
    F << x[0], std::sin(x[0]);
    return F;
  };
  f.jacobian = [](const Eigen::VectorXd& x, int i) {
    return Eigen::MatrixXd::Constant(1, 1, i == 0 ? 1.0 : std::cos(x[0]));
  };
  Eigen::VectorXd phi = vec1(0.7);
  Eigen::MatrixXd X2 = lift.level2(3, 9);
  NoiseIncrement a = noise_increment(f, phi, X.increment(3, 9), &X2);
  NoiseIncrement b = noise_increment(f, phi, X.increment(3, 9), nullptr);
  EXPECT_EQ(a.level1, b.level1);
  EXPECT_TRUE(b.level2.isZero());
  const double expect = X2(0, 0) * 0.7 + X2(0, 1) * std::sin(0.7) + std::cos(0.7) * (X2(1, 0) * 0.7 + X2(1, 1) * std::sin(0.7));
  EXPECT_NEAR(a.level2[0], expect, 1e-15);
}

TEST(RdeDavie, OrderOnSmoothDriver) {
  BranchedLift2 lift = lift_level2(smooth_square(4097));
  Forcing f = identity_forcing();
  ConvergenceProbe davie = sewing_convergence_probe(f, 3, lift, vec1(1.0), 1.0, 4, true);
  ConvergenceProbe euler = sewing_convergence_probe(f, 3, lift, vec1(1.0), 1.0, 4, false);
  EXPECT_NEAR(davie.slope, 2.0, 0.2);
  EXPECT_NEAR(euler.slope, 1.0, 0.2);
  EXPECT_GE(davie.slope, 1.8);
}

TEST(RdeDavie, RoughDriverSlope) {
  const double gamma = 0.75;
  Forcing f = Forcing::scalar([](double x) { return std::sin(x) + 1; }, [](double x) { return std::cos(x); });
  std::vector<ConvergenceProbe> probes;
  for (std::uint64_t k = 0; k < 16; ++k) {
    BranchedLift2 lift = lift_level2(sample_fbm(gamma, 2049, 1, derive_seed(12, k)));
    probes.push_back(sewing_convergence_probe(f, 3, lift, vec1(1.0), gamma, 4, true, 2));
  }
  ConvergenceProbe probe = combine_probes(probes);
  ASSERT_FALSE(probe.degenerate);
  EXPECT_DOUBLE_EQ(probe.predicted_order, 3 * gamma - 1);
  EXPECT_GE(probe.slope, 2 * gamma - 1 - 0.2);
}

TEST(RdeDavie, ZeroNoiseProbeIsExact) {
  BranchedLift2 lift = lift_level2(path_from_function(1025, 1, [](double) { return vec1(0.0); }));
  ConvergenceProbe probe = sewing_convergence_probe(identity_forcing(), 3, lift, vec1(5.0), 0.5);
  EXPECT_TRUE(probe.exact);
}

TEST(PdeSolve, ZeroDataStaysZero) {
  GridField zero = make_grid_field(2, 33, 33);
  PdeSolution s = pde_fd_solve(3, zero, zero);
  for (double v : s.field.data) EXPECT_EQ(v, 0.0);
}

TEST(PdeSolve, RejectsCflViolation) {
  GridField zero = make_grid_field(2, 33, 33);
  EXPECT_THROW(pde_fd_solve(3, zero, zero, PdeOptions{1}), std::invalid_argument);
}

TEST(PdeSolve, OdeComparison) {
  for (double M : {1.0, 10.0, 1000.0}) {
    // initial slice M, sides following the ODE trajectory: the solution is spatially constant
    GridField xi = make_grid_field(2, 65, 65), bd = make_grid_field(2, 65, 65, M);
    for (int it = 0; it < bd.nt; ++it)
      for (int ix = 0; ix < bd.nx; ++ix) bd.at(it, ix) = exact_drift(3, M, -1, bd.t(it));
    const double ode = exact_drift(3, M, -1, 0);
    EXPECT_NEAR(pde_fd_solve(3, xi, bd).field.at(64, 32), ode, 0.02 * ode);
    // sides below the trajectory give a subsolution at the centre
    GridField low = make_grid_field(2, 65, 65);
    for (int ix = 0; ix < low.nx; ++ix) low.at(0, ix) = M;
    const double center = pde_fd_solve(3, xi, low).field.at(64, 32);
    EXPECT_LE(center, ode * 1.02);
    EXPECT_GT(center, 0.0);
  }
}

TEST(PdeSolve, MaximumPrinciple) {
  GridField xi = make_grid_field(2, 65, 65), bd = make_grid_field(2, 65, 65);
  for (int it = 0; it < bd.nt; ++it)
    for (int ix = 0; ix < bd.nx; ++ix) bd.at(it, ix) = 50.0 * std::sin(7 * bd.x(ix) + 3 * bd.t(it));
  PdeSolution s = pde_fd_solve(3, xi, bd);
  for (int it = 0; it < bd.nt; ++it) {
    double bmax = 0, umax = 0;
    for (int k = 0; k <= it; ++k) bmax = std::max({bmax, std::abs(bd.at(k, 0)), std::abs(bd.at(k, bd.nx - 1))});
    for (int ix = 0; ix < bd.nx; ++ix) bmax = std::max(bmax, std::abs(bd.at(0, ix)));
    for (int ix = 0; ix < bd.nx; ++ix) umax = std::max(umax, std::abs(s.field.at(it, ix)));
    EXPECT_LE(umax, bmax);
  }
}

TEST(PdeSolve, FirstOrderInTime) {
  GridField xi = mollified_noise(-0.5, 0.25, 2, 33, 33, 3);
  GridField bd = make_grid_field(2, 33, 33, 2.0);
  const int base = static_cast<int>(std::ceil(xi.dt / cfl_limit(xi)));
  const double ref = pde_fd_solve(3, xi, bd, PdeOptions{base * 64}).field.at(32, 16);
  const double e1 = std::abs(pde_fd_solve(3, xi, bd, PdeOptions{base}).field.at(32, 16) - ref);
  const double e2 = std::abs(pde_fd_solve(3, xi, bd, PdeOptions{base * 2}).field.at(32, 16) - ref);
  EXPECT_NEAR(e1 / e2, 2.0, 0.3);
}

TEST(PdeSolve, ThreeDimensionalRuns) {
  GridField xi = make_grid_field(3, 9, 17), bd = make_grid_field(3, 9, 17, 4.0);
  PdeSolution s = pde_fd_solve(3, xi, bd);
  EXPECT_LT(s.field.at(8, 8, 8), 4.0);
  EXPECT_LE(s.internal_dt, cfl_limit(xi));
}

TEST(MollifiedNoise, DeterministicAndLinear) {
  GridField a = mollified_noise(-0.5, 0.125, 2, 129, 129, 5);
  GridField b = mollified_noise(-0.5, 0.125, 2, 129, 129, 5);
  EXPECT_EQ(a.data, b.data);
  GridField c = mollified_noise(-0.5, 0.125, 2, 129, 129, 5, 2.0);
  const SpaceTimePoint z{-0.3, 0.0};
  EXPECT_DOUBLE_EQ(besov_norm_field(c, -0.5, z, 0.5).value, 2.0 * besov_norm_field(a, -0.5, z, 0.5).value);
  EXPECT_THROW(mollified_noise(-0.5, 1e-3, 2, 129, 129, 5), std::invalid_argument);
}

TEST(MollifiedNoise, SingleScaleIsOneBumpLayer) {
  GridField a = mollified_noise(-0.5, 1.0, 2, 65, 65, 5);
  GridField b = mollified_noise(-1.5, 1.0, 2, 65, 65, 5);
  EXPECT_EQ(a.data, b.data);
}

TEST(MollifiedNoise, NormStableAcrossSeeds) {
  double lo = 1e300, hi = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    GridField f = mollified_noise(-0.5, 0.125, 2, 257, 257, seed);
    const double v = besov_norm_local(f, -0.5, SpaceTimePoint{-0.25, 0.0}, 0.5, 3).value;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LT(hi / lo, 2.0);
}

TEST(SolverIo, FieldRoundTrip) {
  GridField f = mollified_noise(-0.5, 0.5, 2, 17, 17, 1);
  std::stringstream ss;
  write_field(ss, f);
  GridField g = read_field(ss);
  EXPECT_EQ(g.data, f.data);
  EXPECT_EQ(g.nt, 17);
}
