#include "apriori/paths.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace apriori;

namespace {

double lag1_correlation(double H, int paths, int grid) {
  double sxy = 0, sxx = 0;
  for (int k = 0; k < paths; ++k) {
    SampledPath p = sample_fbm(H, grid, 1, derive_seed(1234, k));
    for (int i = 0; i + 2 < p.size(); ++i) {
      const double a = p.values(i + 1, 0) - p.values(i, 0);
      const double b = p.values(i + 2, 0) - p.values(i + 1, 0);
      sxy += a * b;
      sxx += a * a;
    }
  }
  return sxy / sxx;
}

SampledPath linear_path(int grid) {
  return path_from_function(grid, 1, [](double t) { return Eigen::VectorXd::Constant(1, t); });
}

GridField smooth_field(int nt, int nx) {
  GridField f = make_grid_field(2, nt, nx);
  for (int it = 0; it < nt; ++it)
    for (int ix = 0; ix < nx; ++ix) {
      const double t = f.t(it), x = f.x(ix);
      f.at(it, ix) = 1.0 + std::sin(3.0 * x + 1.0) * std::cos(2.0 * t) + 0.5 * x * t;
    }
  return f;
}

}  // namespace

TEST(SampleFbm, SameSeedSamePath) {
  SampledPath a = sample_fbm(0.6, 257, 2, 7), b = sample_fbm(0.6, 257, 2, 7);
  EXPECT_EQ(a.values, b.values);
  SampledPath c = sample_fbm(0.6, 257, 2, 8);
  EXPECT_NE(a.values, c.values);
  EXPECT_DOUBLE_EQ(a.values(0, 0), 0.0);
}

TEST(SampleFbm, BrownianIncrementsUncorrelated) {
  // 1600 paths x 63 lag pairs ~ 1e5 draws
  EXPECT_NEAR(lag1_correlation(0.5, 1600, 65), 0.0, 0.01);
}

TEST(SampleFbm, PersistentIncrementsCorrelation) {
  EXPECT_NEAR(lag1_correlation(0.75, 1600, 65), std::pow(2.0, 0.5) - 1.0, 0.02);
}

TEST(SampleFbm, RejectsBadInput) {
  EXPECT_THROW(sample_fbm(1.0, 10, 1, 0), std::invalid_argument);
  EXPECT_THROW(sample_fbm(0.5, 1, 1, 0), std::invalid_argument);
  EXPECT_THROW(sample_fbm(0.5, 5000, 1, 0), std::invalid_argument);
}

TEST(LiftLevel2, LinearPathIteratedIntegral) {
  BranchedLift2 lift = lift_level2(linear_path(101));
  for (auto [s, t] : {std::pair{0, 100}, {10, 55}, {40, 41}}) {
    const double len = (t - s) * lift.base.h;
    EXPECT_NEAR(lift.level2(s, t)(0, 0), len * len / 2, 1e-14);
  }
}

TEST(LiftLevel2, IntegrationByParts) {
  BranchedLift2 lift = lift_level2(sample_fbm(0.4, 513, 3, 11));
  for (auto [s, t] : {std::pair{0, 512}, {17, 300}, {100, 103}}) {
    Eigen::MatrixXd L = lift.level2(s, t);
    Eigen::VectorXd d = lift.base.increment(s, t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(L(i, j) + L(j, i), d[i] * d[j], 1e-12);
  }
}

TEST(LiftLevel2, ChenRelation) {
  BranchedLift2 lift = lift_level2(sample_fbm(0.6, 4096, 2, 3));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> node(0, 4095);
  for (int k = 0; k < 100; ++k) {
    int a[3] = {node(rng), node(rng), node(rng)};
    std::sort(a, a + 3);
    EXPECT_LE(chen_residual(lift, a[0], a[1], a[2]), 1e-12);
  }
  EXPECT_LE(chen_residual(lift, 0, 2048, 4095), 1e-12);
}

TEST(LiftLevel2, ZeroSecondLevel) {
  BranchedLift2 lift = zero_second_level(sample_fbm(0.6, 65, 2, 3));
  EXPECT_TRUE(lift.level2(0, 64).isZero());
}

TEST(HolderNorm, TrivialPaths) {
  SampledPath c = path_from_function(33, 2, [](double) { return Eigen::VectorXd::Constant(2, 4.0); });
  EXPECT_EQ(holder_norm(c, 0.5, 0, 32).value, 0.0);
  EXPECT_NEAR(holder_norm(linear_path(33), 1.0, 0, 32).value, 1.0, 1e-12);
  EXPECT_THROW(holder_norm(c, 0.5, 3, 4), std::invalid_argument);
}

TEST(HolderNorm, MonotoneUnderInclusion) {
  SampledPath p = sample_fbm(0.7, 257, 2, 21);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> node(0, 256);
  for (int k = 0; k < 100; ++k) {
    int a[4] = {node(rng), node(rng), node(rng), node(rng)};
    std::sort(a, a + 4);
    if (a[2] - a[1] < 2) continue;
    EXPECT_LE(holder_norm(p, 0.6, a[1], a[2]).value, holder_norm(p, 0.6, a[0], a[3]).value);
  }
}

TEST(HolderNorm, TimeRescaling) {
  SampledPath p = sample_fbm(0.7, 513, 1, 2);
  const int i0 = 256, i1 = 384;
  const double lambda = (i1 - i0) * p.h;
  for (double gamma : {0.5, 0.7}) {
    const double direct = std::pow(lambda, gamma) * holder_norm(p, gamma, i0, i1).value;
    const double rescaled = holder_norm(rescaled_window(p, i0, i1), gamma, 0, i1 - i0).value;
    EXPECT_NEAR(rescaled, direct, 1e-13 * direct);
  }
}

TEST(HolderNorm, LevelTwoOfLinearPath) {
  BranchedLift2 lift = lift_level2(linear_path(65));
  EXPECT_NEAR(holder_norm_level2(lift, 1.0, 0, 64).value, 0.5, 1e-12);
}

TEST(BesovNorm, ZeroAndConstantFields) {
  GridField zero = make_grid_field(2, 129, 129);
  SpaceTimePoint z{-0.2, 0.1};
  EXPECT_EQ(besov_norm_field(zero, -0.5, z, 0.5).value, 0.0);
  GridField c = make_grid_field(2, 129, 129, -3.0);
  NormEstimate e = besov_norm_field(c, 0.0, z, 0.4);
  EXPECT_NEAR(e.value, 3.0 * bump_integral(2), 3e-3 * e.value);
  NormEstimate e2 = besov_norm_field(c, 0.0, z, 0.2);
  EXPECT_NEAR(e2.value, e.value, 1e-12);
}

TEST(BesovNorm, LinearInField) {
  GridField f = smooth_field(129, 129), g = f;
  for (double& v : g.data) v *= 2.0;
  SpaceTimePoint z{-0.3, 0.2};
  EXPECT_DOUBLE_EQ(besov_norm_field(g, -0.5, z, 0.5).value, 2.0 * besov_norm_field(f, -0.5, z, 0.5).value);
}

TEST(BesovNorm, RescalingConsistency) {
  GridField f = smooth_field(1025, 257);
  const SpaceTimePoint z{-0.3, 0.1};
  const double lambda = 0.5, beta = -0.5;
  GridField g = make_grid_field(2, 1025, 257);
  for (int it = 0; it < g.nt; ++it)
    for (int ix = 0; ix < g.nx; ++ix)
      g.at(it, ix) = f.sample(z.t + lambda * lambda * g.t(it), z.x + lambda * g.x(ix));
  const double lhs = besov_norm_field(g, beta, SpaceTimePoint{0.0, 0.0}, 1.0).value;
  const double rhs = std::pow(lambda, beta) * besov_norm_field(f, beta, z, lambda).value;
  EXPECT_NEAR(lhs, rhs, 0.02 * rhs);
}

TEST(BesovNorm, InterpolationInequality) {
  GridField f = smooth_field(257, 257);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  for (double& v : f.data) v += 0.3 * n(rng);
  const SpaceTimePoint z{-0.4, 0.0};
  const double h = 0.5;
  for (auto [beta, gamma] : {std::pair{-1.0, -0.5}, {-0.5, 0.0}, {-1.5, -0.2}}) {
    const double lhs = besov_norm_field(f, beta, z, h).value;
    const double rhs = std::pow(h, gamma - beta) * besov_norm_field(f, gamma, z, h).value;
    EXPECT_LE(lhs, rhs * (1 + 1e-12));
  }
}

TEST(BesovNorm, CapsBelowResolution) {
  GridField f = smooth_field(65, 65);
  NormEstimate e = besov_norm_field(f, -0.5, SpaceTimePoint{-0.5, 0.0}, 1e-3);
  EXPECT_TRUE(e.caveat);
  EXPECT_DOUBLE_EQ(e.lambda, resolution_floor(f));
}

TEST(PathIo, BinaryRoundTrip) {
  SampledPath p = sample_fbm(0.6, 129, 2, 99);
  std::stringstream ss;
  write_path_binary(ss, p);
  SampledPath q = read_path_binary(ss);
  EXPECT_EQ(q.values, p.values);
  EXPECT_EQ(q.seed, 99u);
  EXPECT_DOUBLE_EQ(q.hurst, 0.6);
  EXPECT_DOUBLE_EQ(q.h, p.h);

  std::stringstream sl;
  write_lift_binary(sl, lift_level2(p));
  SampledPath r = read_path_binary(sl);
  EXPECT_EQ(r.values, p.values);

  std::stringstream bad("garbage");
  EXPECT_THROW(read_path_binary(bad), std::runtime_error);
}

TEST(PathIo, CsvHeader) {
  std::stringstream ss;
  write_path_csv(ss, linear_path(3));
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "t,x1");
  std::getline(ss, line);
  EXPECT_EQ(line, "-1,-1");
}
