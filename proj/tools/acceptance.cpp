// Acceptance run: one PASS/FAIL line per criterion.

#include "apriori/exponents.hpp"
#include "apriori/identities.hpp"
#include "apriori/paths.hpp"
#include "apriori/solvers.hpp"
#include "apriori/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace apriori;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int report(int id, double limit_s, const std::function<Outcome()>& run) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = secs < limit_s;
  const bool pass = o.pass && in_time;
  std::printf("criterion %2d: %s  %s  [%.1f s, limit %.0f s]\n", id, pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
              limit_s);
  std::fflush(stdout);
  return pass ? 0 : 1;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome stats_outcome(const std::vector<IdentityStats>& all) {
  std::ostringstream os;
  bool ok = true;
  for (const auto& s : all) {
    os << s.name << "=" << s.checked << "/" << s.failures << " ";
    if (!s.ok()) {
      ok = false;
      os << "(" << s.first_failure << ") ";
    }
  }
  return {ok, os.str() + "(checked/failures)"};
}

Outcome c1() {
  const Rule young_type = make_rule(RuleCase::f_phi_only, Rational(-6, 5), parabolic_scaling(2), 1, 3);
  return stats_outcome({duality_suite(young_type, 5)});
}

Outcome c2() { return stats_outcome({morphism_suite(500, 2024), taylor_suite(500, 2025)}); }

Outcome c3() {
  std::vector<IdentityStats> all;
  std::uint64_t seed = 30;
  for (const auto& cfg : representative_configs()) all.push_back(structural_suite(cfg, seed++));
  Outcome o = stats_outcome(all);
  o.pass = o.pass && all.size() == 6;
  return o;
}

Outcome c4() {
  using Q = Rational;
  struct P {
    Q gamma, p, q, eta;
  };
  const std::vector<P> grid{{Q(1, 3), Q(2), Q(0), Q(0)},      {Q(2, 5), Q(3), Q(0), Q(0)},
                            {Q(1, 2), Q(3), Q(-1), Q(1)},     {Q(3, 4), Q(2), Q(0), Q(1, 2)},
                            {Q(1, 4), Q(3), Q(-1), Q(1)},     {Q(3, 10), Q(5), Q(1, 2), Q(0)},
                            {Q(1, 2), Q(2), Q(1), Q(-1)},     {Q(2, 3), Q(4), Q(-1), Q(3, 2)},
                            {Q(1, 3), Q(3, 2), Q(-1, 2), Q(1, 3)}, {Q(9, 20), Q(3), Q(-1), Q(7, 5)},
                            {Q(7, 10), Q(3), Q(2), Q(1)},     {Q(1, 5), Q(2), Q(0), Q(-1)}};
  std::size_t triples = 0, bad = 0;
  for (auto g : grid) {
    g.gamma.canonicalize();
    const RpExponents r = rp_exponents(g.p, g.gamma, 1, GrowthDescriptor::linear_ode(g.eta, g.q));
    Q target = 1 / (g.gamma + g.gamma / r.alpha - g.q * (1 - g.gamma) - g.eta);
    if (r.triples.empty()) ++bad;
    for (const auto& t : r.triples) {
      ++triples;
      if ((t.k + 1 + t.zeta * (t.j + 1)) * t.rho != target) ++bad;
    }
  }
  return {bad == 0, fmt("%.0f grid points, %.0f triples, %.0f mismatches", double(grid.size()), double(triples),
                        double(bad))};
}

Outcome c5() {
  std::size_t rows = 0, bad = 0;
  {
    const Rule rule = make_rule(RuleCase::f_constant, Rational(-251, 100), parabolic_scaling(4), 1, 3);
    const PdeExponents r = pde_exponents(rule, GrowthDescriptor::linear_pde(Rational(0)));
    const Rational target = r.alpha / (r.beta + r.alpha + 2);
    if (!r.closed_form || *r.closed_form != target || r.rows.empty()) ++bad;
    for (const auto& row : r.rows) {
      ++rows;
      if (row.L_rho != target || row.delta != row.L * (r.beta + r.alpha + 2)) ++bad;
    }
  }
  {
    const Rational eta(1);
    const Rule rule = make_rule(RuleCase::f_phi_only, Rational(-6, 5), parabolic_scaling(2), 1, 3);
    const PdeExponents r = pde_exponents(rule, GrowthDescriptor::linear_pde(eta));
    const Rational target = r.alpha / (r.beta + 2 + r.alpha - r.alpha * eta);
    if (!r.closed_form || *r.closed_form != target || r.rows.empty()) ++bad;
    for (const auto& row : r.rows) {
      ++rows;
      if (row.L_rho != target) ++bad;
    }
  }
  return {bad == 0, fmt("%.0f per-tree rows over 2 cases, %.0f mismatches", double(rows), double(bad))};
}

Outcome c6() {
  double worst = 0;
  std::mt19937_64 rng(6);
  for (int grid : {65, 1025, 4096}) {
    const BranchedLift2 lift = lift_level2(sample_fbm(0.4, grid, 2, 60 + grid));
    std::uniform_int_distribution<int> pick(0, grid - 1);
    for (int k = 0; k < 200; ++k) {
      int a = pick(rng), b = pick(rng), c = pick(rng);
      if (a > b) std::swap(a, b);
      if (b > c) std::swap(b, c);
      if (a > b) std::swap(a, b);
      worst = std::max(worst, chen_residual(lift, a, b, c));
    }
    worst = std::max(worst, chen_residual(lift, 0, grid / 2, grid - 1));
  }
  return {worst <= 1e-12, fmt("max relative Chen residual %.3g (tol 1e-12, grids up to 4096)", worst)};
}

Outcome c7() {
  const SampledPath X = path_from_function(4097, 1, [](double) { return Eigen::VectorXd::Zero(1); });
  double worst_bound = 0, worst_rel = 0;
  for (double p : {2.0, 3.0, 5.0})
    for (double phi0 : {1.0, 10.0, 1e3, 1e6}) {
      const ODESolution s = young_solve(Forcing::zero(1, 1), p, X, Eigen::VectorXd::Constant(1, phi0));
      const double end = s.endpoint()(0), bound = std::pow(p - 1, -1 / (p - 1));
      const double exact = exact_drift(p, phi0, -1, 0);
      worst_bound = std::max(worst_bound, std::abs(end) / bound);
      worst_rel = std::max(worst_rel, std::abs(end - exact) / exact);
    }
  return {worst_bound <= 1.01 && worst_rel <= 0.01,
          fmt("max |phi(0)|/(p-1)^(-1/(p-1)) = %.6f (<= 1.01), max rel. error vs closed form %.2g (<= 0.01)",
              worst_bound, worst_rel)};
}

Outcome c8() {
  const BranchedLift2 lift =
      lift_level2(path_from_function(4097, 1, [](double t) { return Eigen::VectorXd::Constant(1, t * t); }));
  const Forcing f = Forcing::scalar([](double x) { return x; }, [](double) { return 1.0; });
  const Eigen::VectorXd phi0 = Eigen::VectorXd::Constant(1, 1.0);
  const ConvergenceProbe davie = sewing_convergence_probe(f, 3, lift, phi0, 1.0, 4, true);
  const ConvergenceProbe euler = sewing_convergence_probe(f, 3, lift, phi0, 1.0, 4, false);
  const bool ok = std::abs(davie.slope - 2.0) <= 0.2 && std::abs(euler.slope - 1.0) <= 0.2;
  return {ok, fmt("Davie slope %.3f (2 +- 0.2), Euler slope %.3f (1 +- 0.2)", davie.slope, euler.slope)};
}

Outcome c9() {
  bool ok = true;
  std::ostringstream os;
  for (double H : {0.6, 0.75})
    for (const std::string forcing : {"bounded", "polynomial"}) {
      OdeExperiment ex;
      ex.bound = make_bound_spec(forcing == "bounded" ? BoundId::young_sharp : BoundId::young_weighted, 3.0);
      ex.bound.gamma = H - 0.05;
      if (forcing == "polynomial") ex.bound.eta = 1.0;
      ex.forcing = forcing;
      ex.hurst = H;
      for (const SweepAxis& axis : {SweepAxis{"amplitude", {1, 4, 16}}, SweepAxis{"initial", {1, 1e2, 1e4}}}) {
        const SweepResult r = sweep_coming_down(ex, axis, 100, 9000);
        bool finite = true;
        for (const auto& rep : r.reports) finite = finite && std::isfinite(rep.max_ratio) && rep.max_ratio > 0;
        const bool pass = finite && r.growth < 1.5;
        ok = ok && pass;
        os << "H=" << H << "/" << forcing << "/" << axis.name << ":R0=" << fmt("%.3g", r.reports.front().max_ratio)
           << ",growth=" << fmt("%.3f", r.growth) << (pass ? "" : "(!)") << " ";
      }
    }
  return {ok, os.str() + "(growth < 1.5)"};
}

Outcome c10() {
  PdeExperiment ex;
  ex.bound = make_bound_spec(BoundId::classical, 3.0);
  ex.bound.beta = -0.5;
  ex.nt = ex.nx = 256;
  const SweepResult r = sweep_coming_down(ex, SweepAxis{"boundary", {1, 10, 100, 1000}}, 2, 10000);
  std::ostringstream os;
  double hi = 0, lo_tail = INFINITY;
  for (std::size_t k = 0; k < r.reports.size(); ++k) {
    os << fmt("%.3g", r.reports[k].max_ratio) << " ";
    hi = std::max(hi, r.reports[k].max_ratio);
    if (k > 0) lo_tail = std::min(lo_tail, r.reports[k].max_ratio);
  }
  const bool sweep_ok = r.spread < 1.5;
  os << fmt("(spread over 10^1..10^3 alone: %.3f) ", hi / lo_tail);

  double worst = 0;
  bool sub_ok = true;
  for (double M : {1.0, 10.0, 1000.0}) {
    const GridField xi = make_grid_field(2, 256, 256);
    GridField bd = make_grid_field(2, 256, 256);
    for (int it = 0; it < bd.nt; ++it)
      for (int ix = 0; ix < bd.nx; ++ix) bd.at(it, ix) = exact_drift(3, M, -1, bd.t(it));
    const double ode = exact_drift(3, M, -1, 0);
    const PdeSolution s = pde_fd_solve(3, xi, bd);
    worst = std::max(worst, std::abs(s.field.at(255, 128) - ode) / ode);
    GridField low = make_grid_field(2, 256, 256);
    for (int ix = 0; ix < low.nx; ++ix) low.at(0, ix) = M;
    const double centre = pde_fd_solve(3, xi, low).field.at(255, 128);
    sub_ok = sub_ok && centre <= 1.02 * ode && centre > 0;
  }
  const bool ode_ok = worst <= 0.02 && sub_ok;
  return {sweep_ok && ode_ok, "max ratios per boundary value " + os.str() +
                                  fmt("spread %.3f (< 1.5); xi=0 ODE comparison rel. error %.2g (<= 0.02)",
                                      r.spread, worst) +
                                  (sub_ok ? "" : ", zero-side run above ODE")};
}

// Zero outside the support reached from B_z(h): sample offsets up to h, test functions up to max(h, floor).
GridField frozen_field(const GridField& xi, const SpaceTimePoint& z, double h) {
  GridField out = xi;
  const double l = std::max(h, resolution_floor(xi));
  const double t_lo = z.t - h * h - l * l - 2 * xi.dt, x_lo = z.x - h - l - 2 * xi.dx, x_hi = z.x + h + l + 2 * xi.dx;
  for (int it = 0; it < xi.nt; ++it)
    for (int ix = 0; ix < xi.nx; ++ix) {
      const double t = xi.t(it), x = xi.x(ix);
      if (t < t_lo || t > z.t + xi.dt || x < x_lo || x > x_hi) out.at(it, ix) = 0.0;
    }
  return out;
}

Outcome c11() {
  int checks = 0, failures = 0;
  double worst_pow = 0;
  auto expect = [&](bool ok) {
    ++checks;
    if (!ok) ++failures;
  };
  const SampledPath X = sample_fbm(0.75, 1025, 1, 1111);
  const SampledPath Xr = sample_fbm(0.45, 1025, 1, 2222);
  for (BoundId id : {BoundId::young_simple, BoundId::young_sharp, BoundId::young_weighted, BoundId::rp_general,
                     BoundId::rp_linear}) {
    const bool rough = id == BoundId::rp_general || id == BoundId::rp_linear;
    BoundSpec s = make_bound_spec(id, 3.0);
    s.gamma = rough ? 0.4 : 0.7;
    if (id == BoundId::rp_linear) s.eta = 1.0;
    const ForcingChoice fc = forcing_catalog(rough ? "polynomial" : "bounded", s);
    const SampledPath& P = rough ? Xr : X;
    auto rhs = [&](const SampledPath& Y, int iz, double phi) {
      return rough ? rhs_rp(s, fc.norms, lift_level2(Y), iz, phi) : rhs_young(s, fc.norms, Y, iz, phi);
    };
    const double rho = bound_rho(s);
    for (int iz : {100, 512, 1000})
      for (double phi : {0.5, 3.0, 40.0}) {
        const Window w = bound_window(s, P, iz, phi);
        const RhsTerms a = rhs(P, iz, phi), b = rhs(frozen_outside(P, w.i0, w.i1), iz, phi);
        expect(a.driver == b.driver && a.dist == b.dist);
        if (id == BoundId::rp_general) continue;
        for (double c : {0.25, 4.0, 32.0}) {
          const RhsTerms t = rhs(scaled(P, c), iz, phi);
          expect(t.base == c * a.base);
          worst_pow = std::max(worst_pow, std::abs(t.driver / (a.driver * std::pow(c, rho)) - 1));
        }
      }
  }
  {
    const BoundSpec s = make_bound_spec(BoundId::classical, 3.0);
    const double rho = bound_rho(s);
    const GridField xi = mollified_noise(-0.5, 0.125, 2, 129, 129, 77, 1.0);
    for (const SpaceTimePoint z : {SpaceTimePoint{-0.25, 0.0, 0.0}, SpaceTimePoint{0.0, 0.5, 0.0}})
      for (double phi : {2.0, 30.0}) {
        const RhsTerms a = rhs_classical(s, xi, z, phi, 2);
        const RhsTerms b = rhs_classical(s, frozen_field(xi, z, a.lambda), z, phi, 2);
        expect(a.driver == b.driver);
        GridField xi4 = xi;
        for (double& v : xi4.data) v *= 4.0;
        const RhsTerms t = rhs_classical(s, xi4, z, phi, 2);
        expect(t.base == 4.0 * a.base);
        worst_pow = std::max(worst_pow, std::abs(t.driver / (a.driver * std::pow(4.0, rho)) - 1));
      }
  }
  const bool ok = failures == 0 && worst_pow <= 1e-14;
  return {ok, fmt("%.0f bit-exact checks, %.0f failures; driver/c^rho relative deviation %.2g (pow rounding, <= 1e-14)",
                  checks, failures, worst_pow)};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  struct Item {
    int id;
    double limit;
    Outcome (*run)();
  };
  const Item items[] = {{1, 60, c1},  {2, 120, c2}, {3, 60, c3},  {4, 10, c4},   {5, 10, c5},  {6, 30, c6},
                        {7, 10, c7},  {8, 60, c8},  {9, 600, c9}, {10, 600, c10}, {11, 60, c11}};
  int failed = 0;
  for (const auto& it : items)
    if (only == 0 || only == it.id) failed += report(it.id, it.limit, it.run);
  std::printf("%s: %d criteria failed\n", failed ? "FAIL" : "PASS", failed);
  return failed ? 1 : 0;
}
