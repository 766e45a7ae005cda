#include "apriori/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace apriori {

std::string to_string(BoundId id) {
  switch (id) {
    case BoundId::classical: return "classical";
    case BoundId::young_simple: return "young_simple";
    case BoundId::young_sharp: return "young_sharp";
    case BoundId::young_weighted: return "young_weighted";
    case BoundId::rp_general: return "rp_general";
    case BoundId::rp_linear: return "rp_linear";
  }
  return "unknown";
}

BoundId parse_bound_id(const std::string& s) {
  for (BoundId id : {BoundId::classical, BoundId::young_simple, BoundId::young_sharp, BoundId::young_weighted,
                     BoundId::rp_general, BoundId::rp_linear})
    if (to_string(id) == s) return id;
  throw std::invalid_argument("unknown bound id: " + s);
}

BoundSpec make_bound_spec(BoundId id, double p) {
  BoundSpec s;
  s.id = id;
  s.p = p;
  s.fraction = id == BoundId::classical ? 0.25 : 0.5;
  return s;
}

double bound_alpha(const BoundSpec& spec) {
  if (!(spec.p > 1)) throw std::invalid_argument("p must exceed 1");
  return (spec.id == BoundId::classical ? 2.0 : 1.0) / (spec.p - 1.0);
}

namespace {

double positive_rho(double alpha, double den) {
  if (!(den > 0)) throw std::invalid_argument("bound exponent denominator is not positive");
  return alpha / den;
}

double eta_of(const ForcingNorms& f, int k, int l) {
  auto it = f.rp_eta.find({k, l});
  return it == f.rp_eta.end() ? 0.0 : it->second;
}

double norm_of(const ForcingNorms& f, int k, int l) {
  auto it = f.rp_norm.find({k, l});
  return it == f.rp_norm.end() ? 0.0 : it->second;
}

int level_count(double gamma) {
  const int N = static_cast<int>(std::floor(1.0 / gamma + 1e-12));
  if (N < 1) throw std::invalid_argument("gamma must lie in (0, 1]");
  return N;
}

}  // namespace

double bound_rho(const BoundSpec& spec) {
  const double a = bound_alpha(spec);
  const double g = spec.gamma;
  switch (spec.id) {
    case BoundId::classical: return positive_rho(a, a + 2.0 + spec.beta);
    case BoundId::young_simple: return positive_rho(a, a + g - a * spec.theta);
    case BoundId::young_sharp: return positive_rho(a, g * (1.0 + a));
    case BoundId::young_weighted: return positive_rho(a, a + g - a * spec.eta);
    case BoundId::rp_linear: return positive_rho(1.0, g + g / a - spec.q * (1.0 - g) - spec.eta);
    case BoundId::rp_general: return positive_rho(a, g + a * (1.0 - spec.eta));
  }
  return 0.0;
}

ForcingChoice forcing_catalog(const std::string& name, const BoundSpec& spec) {
  ForcingChoice c;
  c.name = name;
  const double theta = spec.theta;
  if (name == "zero") {
    c.f = Forcing::zero(1, 1);
    return c;
  }
  if (name == "bounded") {
    c.f = Forcing::scalar([](double x) { return std::sin(x); }, [](double x) { return std::cos(x); });
    c.norms.sup = 1.0;
    c.norms.holder = 1.0 + std::pow(2.0, 1.0 - theta);
    // eta = q = 0, and |x|_0 = 2
    c.norms.rp_norm = {{{0, 0}, 0.5}, {{0, 1}, 0.5}, {{0, 2}, 0.5}, {{1, 0}, 0.25}, {{1, 1}, 0.5}};
    c.norms.rp_eta = {{{0, 0}, 0.0}, {{0, 1}, 0.0}, {{0, 2}, 0.0}, {{1, 0}, 0.0}, {{1, 1}, 0.0}};
    c.norms.linear_norm = 1.0;
    return c;
  }
  if (name == "polynomial") {
    c.f = Forcing::scalar([](double x) { return x; }, [](double) { return 1.0; });
    // ||x||_{inf;1} = 1; [x]_{theta;1} = 1/2 at theta = 1, else 2^{1-theta}
    c.norms.sup = 1.0;
    c.norms.holder = 1.0 + (theta >= 1.0 ? 0.5 : std::pow(2.0, 1.0 - theta));
    // eta = 1, q = -1: eta(k, l) = 1 - l
    c.norms.rp_norm = {{{0, 0}, 1.0}, {{0, 1}, 0.5}, {{0, 2}, 0.0}, {{1, 0}, 1.0}, {{1, 1}, 0.5}};
    c.norms.rp_eta = {{{0, 0}, 1.0}, {{0, 1}, 0.0}, {{0, 2}, -1.0}, {{1, 0}, 1.0}, {{1, 1}, 0.0}};
    c.norms.linear_norm = 1.0;
    return c;
  }
  throw std::invalid_argument("unknown forcing: " + name);
}

std::pair<double, double> weighted_norms(const std::function<double(double)>& g, double theta, double eta,
                                         double radius, int samples) {
  auto weight = [](double x, double e) { return e >= 0 ? std::pow(std::abs(x), e) + 1.0 : std::pow(std::abs(x), e); };
  std::vector<double> xs;
  const double lo = -3.0, hi = std::log10(radius);
  const int half = samples / 2;
  for (int k = 0; k < half; ++k) {
    const double v = std::pow(10.0, lo + (hi - lo) * k / std::max(1, half - 1));
    xs.push_back(v);
    xs.push_back(-v);
  }
  if (eta >= 0) xs.push_back(0.0);
  double sup = 0.0, semi = 0.0;
  for (double x : xs) sup = std::max(sup, std::abs(g(x)) / weight(x, eta));
  for (double x : xs)
    for (double y : xs) {
      const double ax = std::abs(x), ay = std::abs(y);
      if (x == y || ay < 0.5 * ax || ay > ax || ax == 0.0) continue;
      semi = std::max(semi, std::abs(g(x) - g(y)) / (std::pow(std::abs(x - y), theta) * weight(x, eta - theta)));
    }
  return {sup, semi};
}

Window bound_window(const BoundSpec& spec, const SampledPath& X, int iz, double phi_z) {
  if (iz < spec.min_gap || iz >= X.size()) throw std::invalid_argument("bound point too close to the initial time");
  const double a = bound_alpha(spec);
  const double dist = X.time(iz) - X.t0;
  Window w;
  w.lambda = spec.fraction * dist;
  if (phi_z != 0.0) w.lambda = std::min(w.lambda, spec.C * std::pow(std::abs(phi_z), -1.0 / a));
  w.i1 = iz;
  w.i0 = window_indices(X, X.time(iz) - w.lambda, X.time(iz)).first;
  if (w.i1 - w.i0 < spec.min_gap) {
    w.i0 = iz - spec.min_gap;
    w.widened = true;
  }
  return w;
}

RhsTerms rhs_young(const BoundSpec& spec, const ForcingNorms& f, const SampledPath& X, int iz, double phi_z) {
  const double a = bound_alpha(spec), g = spec.gamma, rho = bound_rho(spec);
  const Window w = bound_window(spec, X, iz, phi_z);
  RhsTerms out;
  out.lambda = w.lambda;
  out.dist = std::pow(X.time(iz) - X.t0, -a);
  if (w.widened) out.flags.push_back("window_widened");
  const NormEstimate xn = holder_norm(X, g, w.i0, w.i1, spec.min_gap);
  if (xn.caveat) out.flags.push_back("holder_resolution");
  double fpart = 0.0;
  const double mix = (1.0 - g) / spec.theta;
  switch (spec.id) {
    case BoundId::young_simple: fpart = f.holder; break;
    case BoundId::young_sharp:
    case BoundId::young_weighted: fpart = std::pow(f.sup, 1.0 - mix) * std::pow(f.holder, mix); break;
    default: throw std::invalid_argument("rhs_young needs a Young bound");
  }
  out.base = fpart * xn.value;
  out.driver = std::pow(out.base, rho);
  return out;
}

RpBoundExponents rp_bound_exponents(const BoundSpec& spec, const ForcingNorms& f) {
  const double a = bound_alpha(spec), g = spec.gamma;
  RpBoundExponents e;
  e.N = level_count(g);
  if (e.N > 2) throw std::invalid_argument("the level-2 lift supports N <= 2 only");
  auto delta = [&](int k, int l) { return g * (k + 1) + a * (1.0 - l - eta_of(f, k, l)); };
  const bool boundary_case = std::abs(g - 1.0 / e.N) < 1e-12;
  for (int k = 0; k < e.N; ++k) e.rho_tau[k] = positive_rho(a, delta(k, 0));
  for (int k = 0; k < e.N; ++k)
    for (int l = 1; l <= e.N - k; ++l)
      for (int j = 0; j < e.N; ++j) {
        if (boundary_case && j == e.N - 1) continue;
        const double z = ((k + 1) * g + l - 1.0) / (1.0 - (j + 1) * g);
        e.zeta[{k, l, j}] = z;
        e.rho_triple[{k, l, j}] = positive_rho(a, delta(k, l) + z * delta(j, 0));
      }
  return e;
}

RhsTerms rhs_rp(const BoundSpec& spec, const ForcingNorms& f, const BranchedLift2& lift, int iz, double phi_z) {
  const SampledPath& X = lift.base;
  const double a = bound_alpha(spec), g = spec.gamma;
  const Window w = bound_window(spec, X, iz, phi_z);
  RhsTerms out;
  out.lambda = w.lambda;
  out.dist = std::pow(X.time(iz) - X.t0, -a);
  if (w.widened) out.flags.push_back("window_widened");
  const int N = level_count(g);
  if (N > 2) throw std::invalid_argument("the level-2 lift supports N <= 2 only");
  std::vector<double> xnorm;
  const NormEstimate l1 = holder_norm(X, g, w.i0, w.i1, spec.min_gap);
  xnorm.push_back(l1.value);
  bool caveat = l1.caveat;
  if (N == 2) {
    const NormEstimate l2 = holder_norm_level2(lift, g, w.i0, w.i1, spec.min_gap);
    xnorm.push_back(l2.value);
    caveat = caveat || l2.caveat;
  }
  if (caveat) out.flags.push_back("holder_resolution");

  if (spec.id == BoundId::rp_linear) {
    double triple = xnorm[0];
    if (N == 2) triple = std::max(triple, std::sqrt(xnorm[1]));
    out.base = f.linear_norm * triple;
    out.driver = std::pow(out.base, bound_rho(spec));
    return out;
  }
  if (spec.id != BoundId::rp_general) throw std::invalid_argument("rhs_rp needs a rough bound");
  const RpBoundExponents e = rp_bound_exponents(spec, f);
  std::vector<double> H(N);
  double term1 = 0.0, term2 = 0.0;
  for (int k = 0; k < N; ++k) {
    H[k] = norm_of(f, k, 0) * xnorm[k];
    term1 = std::max(term1, std::pow(H[k], e.rho_tau.at(k)));
  }
  for (const auto& [key, rho] : e.rho_triple) {
    const auto [k, l, j] = key;
    const double base = norm_of(f, k, l) * xnorm[k] * std::pow(H[j], e.zeta.at(key));
    term2 = std::max(term2, std::pow(base, rho));
  }
  out.base = std::numeric_limits<double>::quiet_NaN();
  out.driver = term1 + term2;
  return out;
}

double parabolic_dist(const SpaceTimePoint& z, int d) {
  double r = std::sqrt(std::max(0.0, z.t + 1.0));
  r = std::min(r, 1.0 - std::abs(z.x));
  if (d == 3) r = std::min(r, 1.0 - std::abs(z.y));
  return std::max(r, 0.0);
}

RhsTerms rhs_classical(const BoundSpec& spec, const GridField& xi, const SpaceTimePoint& z, double phi_z,
                       int samples_per_axis) {
  const double a = bound_alpha(spec), rho = bound_rho(spec);
  const double dist = parabolic_dist(z, xi.d);
  if (!(dist > 0)) throw std::invalid_argument("rhs_classical: z must be interior");
  RhsTerms out;
  out.dist = std::pow(dist, -a);
  out.lambda = spec.fraction * dist;
  if (phi_z != 0.0) out.lambda = std::min(out.lambda, spec.C * std::pow(std::abs(phi_z), -1.0 / a));
  const NormEstimate n = besov_norm_local(xi, spec.beta, z, out.lambda, samples_per_axis);
  if (n.caveat) out.flags.push_back("besov_resolution");
  out.base = n.value;
  out.driver = std::pow(out.base, rho);
  return out;
}

bool interpolation_holds(const GridField& xi, double beta, double gamma, const SpaceTimePoint& z, double h,
                         int samples_per_axis) {
  if (!(beta <= gamma && gamma <= 0)) throw std::invalid_argument("need beta <= gamma <= 0");
  const double lhs = besov_norm_local(xi, beta, z, h, samples_per_axis).value;
  const double rhs = std::pow(h, gamma - beta) * besov_norm_local(xi, gamma, z, h, samples_per_axis).value;
  return lhs <= rhs * (1 + 1e-12);
}

void summarize(BoundReport& report) {
  report.max_ratio = 0.0;
  report.caveats = 0;
  report.blowups = 0;
  for (const auto& r : report.records) {
    if (r.flags.find("blowup") != std::string::npos) {
      ++report.blowups;
      continue;
    }
    if (!r.flags.empty()) ++report.caveats;
    if (std::isfinite(r.ratio)) report.max_ratio = std::max(report.max_ratio, r.ratio);
  }
}

ConstantSummary empirical_constant(const std::vector<BoundReport>& reports) {
  std::vector<double> ratios;
  for (const auto& rep : reports)
    for (const auto& r : rep.records)
      if (std::isfinite(r.ratio)) ratios.push_back(r.ratio);
  if (ratios.empty()) throw std::invalid_argument("empirical_constant: no finite records");
  std::sort(ratios.begin(), ratios.end());
  ConstantSummary s;
  s.count = ratios.size();
  s.max_ratio = ratios.back();
  s.c_star = s.max_ratio;
  auto q = [&](double f) {
    const auto idx = static_cast<std::size_t>(std::ceil(f * ratios.size())) - 1;
    return ratios[std::min(idx, ratios.size() - 1)];
  };
  s.quantiles = {{"q50", q(0.5)}, {"q90", q(0.9)}, {"q99", q(0.99)}};
  return s;
}

namespace {

std::string join(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) out += (out.empty() ? "" : "|") + f;
  return out;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

bool is_rough(BoundId id) { return id == BoundId::rp_general || id == BoundId::rp_linear; }

std::vector<int> stride_nodes(int first, int last, int stride) {
  std::vector<int> out;
  for (int k = first; k <= last; k += stride) out.push_back(k);
  if (out.empty() || out.back() != last) out.push_back(last);
  return out;
}

}  // namespace

BoundReport run_ode_trial(const OdeExperiment& ex, const SweepAxis& axis, double value, int trial,
                          std::uint64_t seed) {
  if (ex.bound.id == BoundId::classical) throw std::invalid_argument("ODE experiment with the classical bound");
  const ForcingChoice fc = forcing_catalog(ex.forcing, ex.bound);
  const double amp = ex.amplitude * (axis.name == "amplitude" ? value : 1.0);
  const double init = ex.initial * (axis.name == "initial" ? value : 1.0);
  const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(trial));
  const SampledPath X = scaled(sample_fbm(ex.hurst, ex.grid_size, 1, s), amp);
  const BranchedLift2 lift = lift_level2(X);
  const Eigen::VectorXd phi0 = Eigen::VectorXd::Constant(1, init);
  const ODESolution sol = is_rough(ex.bound.id) ? rde_solve_davie(fc.f, ex.bound.p, lift, phi0)
                                                : young_solve(fc.f, ex.bound.p, X, phi0);
  BoundReport rep;
  rep.bound_id = to_string(ex.bound.id);
  rep.axis = axis.name;
  rep.axis_value = value;
  for (int iz : stride_nodes(std::max(ex.z_stride, ex.bound.min_gap), X.size() - 1, ex.z_stride)) {
    BoundRecord r;
    r.bound_id = rep.bound_id;
    r.trial = trial;
    r.seed = s;
    r.z = format_number(X.time(iz));
    if (sol.blew_up() && iz >= sol.blowup_index) {
      r.lhs = r.ratio = std::numeric_limits<double>::quiet_NaN();
      r.flags = "blowup";
      rep.records.push_back(r);
      continue;
    }
    const double phi_z = sol.values.row(iz).norm();
    const RhsTerms t = is_rough(ex.bound.id) ? rhs_rp(ex.bound, fc.norms, lift, iz, phi_z)
                                             : rhs_young(ex.bound, fc.norms, X, iz, phi_z);
    r.lhs = phi_z;
    r.rhs_driver = t.driver;
    r.rhs_dist = t.dist;
    r.ratio = phi_z / t.rhs();
    r.flags = join(t.flags);
    rep.records.push_back(r);
  }
  summarize(rep);
  return rep;
}

BoundReport run_pde_trial(const PdeExperiment& ex, const SweepAxis& axis, double value, int trial,
                          std::uint64_t seed) {
  if (ex.bound.id != BoundId::classical) throw std::invalid_argument("PDE experiment needs the classical bound");
  const double amp = ex.amplitude * (axis.name == "amplitude" ? value : 1.0);
  const double bval = ex.boundary * (axis.name == "boundary" ? value : 1.0);
  const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(trial));
  const GridField xi = amp == 0.0 ? make_grid_field(ex.d, ex.nt, ex.nx)
                                  : mollified_noise(ex.bound.beta, ex.noise_eps, ex.d, ex.nt, ex.nx, s, amp);
  GridField bd = make_grid_field(ex.d, ex.nt, ex.nx);
  const int ny = bd.ny();
  for (int it = 0; it < bd.nt; ++it)
    for (int ix = 0; ix < bd.nx; ++ix)
      for (int iy = 0; iy < ny; ++iy) {
        const bool side = ix == 0 || ix == bd.nx - 1 || (ex.d == 3 && (iy == 0 || iy == bd.nx - 1));
        if (it == 0 || side) bd.at(it, ix, iy) = bval;
      }
  const PdeSolution sol = pde_fd_solve(ex.bound.p, xi, bd);
  BoundReport rep;
  rep.bound_id = to_string(ex.bound.id);
  rep.axis = axis.name;
  rep.axis_value = value;
  const std::vector<int> ts = stride_nodes(ex.z_stride, ex.nt - 1, ex.z_stride);
  std::vector<int> xs;
  for (int ix = ex.z_stride; ix <= ex.nx - 1 - ex.z_stride; ix += ex.z_stride) xs.push_back(ix);
  const std::vector<int> ys = ex.d == 3 ? xs : std::vector<int>{0};
  for (int it : ts)
    for (int ix : xs)
      for (int iy : ys) {
        const SpaceTimePoint z{sol.field.t(it), sol.field.x(ix), ex.d == 3 ? sol.field.x(iy) : 0.0};
        BoundRecord r;
        r.bound_id = rep.bound_id;
        r.trial = trial;
        r.seed = s;
        r.z = format_number(z.t) + ";" + format_number(z.x) + (ex.d == 3 ? ";" + format_number(z.y) : "");
        if (sol.blowup_slice >= 0 && it >= sol.blowup_slice) {
          r.lhs = r.ratio = std::numeric_limits<double>::quiet_NaN();
          r.flags = "blowup";
          rep.records.push_back(r);
          continue;
        }
        const double phi_z = std::abs(sol.field.at(it, ix, iy));
        const RhsTerms t = rhs_classical(ex.bound, xi, z, phi_z, ex.samples_per_axis);
        r.lhs = phi_z;
        r.rhs_driver = t.driver;
        r.rhs_dist = t.dist;
        r.ratio = phi_z / t.rhs();
        r.flags = join(t.flags);
        rep.records.push_back(r);
      }
  summarize(rep);
  return rep;
}

namespace {

template <class Experiment>
SweepResult sweep(const Experiment& ex, const SweepAxis& axis, int trials, std::uint64_t seed, int threads,
                  BoundReport (*run)(const Experiment&, const SweepAxis&, double, int, std::uint64_t)) {
  if (trials < 1 || axis.values.empty()) throw std::invalid_argument("sweep needs trials and axis values");
  const std::size_t jobs = axis.values.size() * static_cast<std::size_t>(trials);
  std::vector<BoundReport> parts(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs;) {
      try {
        parts[j] = run(ex, axis, axis.values[j / trials], static_cast<int>(j % trials), seed);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(jobs)));
  std::vector<std::thread> pool;
  for (int k = 1; k < nthreads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  SweepResult out;
  for (std::size_t v = 0; v < axis.values.size(); ++v) {
    BoundReport merged = parts[v * trials];
    for (int t = 1; t < trials; ++t) {
      const auto& more = parts[v * trials + t].records;
      merged.records.insert(merged.records.end(), more.begin(), more.end());
    }
    summarize(merged);
    out.reports.push_back(std::move(merged));
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : out.reports) {
    lo = std::min(lo, r.max_ratio);
    hi = std::max(hi, r.max_ratio);
  }
  const double first = out.reports.front().max_ratio;
  out.growth = first > 0 ? hi / first : std::numeric_limits<double>::infinity();
  out.spread = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  out.saturated = out.growth < 1.5;
  return out;
}

}  // namespace

SweepResult sweep_coming_down(const OdeExperiment& ex, const SweepAxis& axis, int trials, std::uint64_t seed,
                              int threads) {
  return sweep<OdeExperiment>(ex, axis, trials, seed, threads, &run_ode_trial);
}

SweepResult sweep_coming_down(const PdeExperiment& ex, const SweepAxis& axis, int trials, std::uint64_t seed,
                              int threads) {
  return sweep<PdeExperiment>(ex, axis, trials, seed, threads, &run_pde_trial);
}

void write_report_csv(std::ostream& os, const std::vector<BoundReport>& reports) {
  os << "bound_id,trial,seed,z,lhs,rhs_driver,rhs_dist,ratio,flags\n" << std::setprecision(17);
  for (const auto& rep : reports)
    for (const auto& r : rep.records)
      os << r.bound_id << "," << r.trial << "," << r.seed << "," << r.z << "," << r.lhs << "," << r.rhs_driver << ","
         << r.rhs_dist << "," << r.ratio << "," << r.flags << "\n";
}

}  // namespace apriori
