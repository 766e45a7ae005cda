#include "apriori/commands.hpp"

#include "apriori/identities.hpp"
#include "apriori/io.hpp"

#include <ostream>
#include <sstream>

namespace apriori {

namespace {

using io::Fields;
using io::Json;

struct Context {
  const CommandOptions& opts;
  Fields& top;
  std::uint64_t seed = 0;

  std::filesystem::path out(const std::string& name) const { return opts.out / name; }
};

Json rule_json(const Rule& r) {
  return {{"kind", to_string(r.kind)}, {"beta", to_string(r.beta)}, {"d", r.dim()}, {"n", r.n}, {"p", r.p}};
}

Rule parse_rule(const Json& j) {
  Fields f(j, "rule");
  RuleCase kind;
  try {
    kind = parse_rule_case(f.str("kind"));
  } catch (const std::invalid_argument& e) {
    throw io::SchemaError(std::string("rule.kind: ") + e.what());
  }
  const Rational beta = f.rational("beta");
  const long d = f.integer("d", 2), n = f.integer("n", 1), p = f.integer("p", 3);
  const bool grad = f.boolean("gradient_drift", false);
  f.finish();
  if (d < 1 || n < 1 || p < 2) throw io::SchemaError("rule: need d >= 1, n >= 1 and p >= 2");
  return make_rule(kind, beta, parabolic_scaling(static_cast<std::size_t>(d)), static_cast<int>(n),
                   static_cast<int>(p), grad);
}

int cmd_trees(Context& c) {
  const Rule rule = parse_rule(c.top.get("rule"));
  const Rational omega = c.top.rational("omega", Rational(0));
  EnumerationLimits lim;
  lim.max_trees = static_cast<std::size_t>(c.top.integer("max_trees", static_cast<long>(lim.max_trees)));
  c.top.finish();
  check_subcritical(rule);
  const Enumeration e = enumerate_conforming(rule, omega, lim);
  Json trees = Json::array();
  for (const auto& t : e.conforming)
    trees.push_back({{"key", t.tree.key},
                     {"hom", to_string(t.hom)},
                     {"L", t.L},
                     {"vertices", vertex_count(t.tree)},
                     {"noise", noise_count(t.tree)},
                     {"factorial", to_string(tree_factorial(t.tree))},
                     {"W_neg", e.in_W_neg(t.tree)},
                     {"U", e.in_U(t.tree)}});
  Json argmin = Json::array();
  for (const auto& t : e.argmin) argmin.push_back(t.key);
  Json out{{"schema_version", io::kSchemaVersion},
           {"rule", rule_json(rule)},
           {"omega", to_string(omega)},
           {"min_hom", to_string(e.min_hom)},
           {"argmin", argmin},
           {"non_integer_ok", e.non_integer_ok},
           {"trees", trees}};
  io::write_atomic(c.out("trees.json"), io::dump(out));
  return e.non_integer_ok ? io::kOk : io::kAssumption;
}

int cmd_exponents(Context& c) {
  const EquationSpec spec = io::parse_equation_spec(c.top.get("equation"));
  c.top.finish();
  const ExponentReport rep = compute_exponents(spec);
  io::write_atomic(c.out("exponents.json"), io::dump(io::to_json(rep)));
  return rep.all_pass() ? io::kOk : io::kAssumption;
}

int cmd_sample(Context& c) {
  const double hurst = c.top.num("hurst", 0.75);
  const long grid = c.top.integer("grid_size", 1025);
  const long dim = c.top.integer("dim", 1);
  const double amp = c.top.num("amplitude", 1.0);
  const bool lift = c.top.boolean("lift", false);
  c.top.finish();
  const SampledPath X = scaled(sample_fbm(hurst, static_cast<int>(grid), static_cast<int>(dim), c.seed), amp);
  std::ostringstream bin, csv;
  if (lift)
    write_lift_binary(bin, lift_level2(X));
  else
    write_path_binary(bin, X);
  write_path_csv(csv, X);
  io::write_atomic(c.out("path.bin"), bin.str());
  io::write_atomic(c.out("path.csv"), csv.str());
  return io::kOk;
}

int cmd_solve(Context& c) {
  const std::string kind = c.top.str("equation", "ode");
  const double p = c.top.num("p", 3.0);
  const double amp = c.top.num("amplitude", 1.0);
  if (kind == "ode") {
    BoundSpec dummy = make_bound_spec(BoundId::young_sharp, p);
    const ForcingChoice fc = forcing_catalog(c.top.str("forcing", "bounded"), dummy);
    const double hurst = c.top.num("hurst", 0.75);
    const long grid = c.top.integer("grid_size", 1025);
    const double init = c.top.num("initial", 1.0);
    const DriftScheme scheme = parse_drift_scheme(c.top.str("scheme", "split"));
    const bool rough = c.top.boolean("rough", false);
    c.top.finish();
    const SampledPath X = scaled(sample_fbm(hurst, static_cast<int>(grid), 1, c.seed), amp);
    const Eigen::VectorXd phi0 = Eigen::VectorXd::Constant(1, init);
    const ODESolution sol =
        rough ? rde_solve_davie(fc.f, p, lift_level2(X), phi0, scheme) : young_solve(fc.f, p, X, phi0, scheme);
    std::ostringstream csv;
    write_solution_csv(csv, sol);
    const double end = sol.blew_up() ? std::nan("") : sol.endpoint()(0);
    Json summary{{"schema_version", io::kSchemaVersion}, {"equation", "ode"}, {"scheme", sol.scheme},
                 {"seed", c.seed},     {"blowup_index", sol.blowup_index},   {"endpoint", end}};
    io::write_atomic(c.out("solution.csv"), csv.str());
    io::write_atomic(c.out("summary.json"), io::dump(summary));
    return io::kOk;
  }
  if (kind != "pde") throw io::SchemaError("solve.equation must be \"ode\" or \"pde\"");
  const long d = c.top.integer("d", 2), nt = c.top.integer("nt", 128), nx = c.top.integer("nx", 128);
  const double beta = c.top.num("beta", -0.5), eps = c.top.num("noise_eps", 0.125);
  const double boundary = c.top.num("boundary", 1.0);
  PdeOptions opts;
  opts.substeps = static_cast<int>(c.top.integer("substeps", 0));
  c.top.finish();
  const int di = static_cast<int>(d), nti = static_cast<int>(nt), nxi = static_cast<int>(nx);
  const GridField xi = amp == 0.0 ? make_grid_field(di, nti, nxi) : mollified_noise(beta, eps, di, nti, nxi, c.seed, amp);
  GridField bd = make_grid_field(di, nti, nxi, boundary);
  const PdeSolution sol = pde_fd_solve(p, xi, bd, opts);
  std::ostringstream bin;
  write_field(bin, sol.field);
  Json summary{{"schema_version", io::kSchemaVersion}, {"equation", "pde"},
               {"seed", c.seed},                     {"substeps", sol.substeps},
               {"internal_dt", sol.internal_dt},     {"blowup_slice", sol.blowup_slice}};
  io::write_atomic(c.out("field.bin"), bin.str());
  io::write_atomic(c.out("summary.json"), io::dump(summary));
  return io::kOk;
}

SweepAxis parse_axis(const Json& j) {
  Fields f(j, "axis");
  SweepAxis a;
  a.name = f.str("name");
  const Json& v = f.get("values");
  f.finish();
  if (!v.is_array() || v.empty()) throw io::SchemaError("axis.values: expected a non-empty array");
  a.values.clear();
  for (const auto& x : v) {
    if (!x.is_number()) throw io::SchemaError("axis.values: expected numbers");
    a.values.push_back(x.get<double>());
  }
  return a;
}

int cmd_verify(Context& c) {
  const BoundSpec bound = io::parse_bound_spec(c.top.get("bound"));
  const SweepAxis axis = parse_axis(c.top.get("axis"));
  const long trials = c.top.integer("trials", 10);
  Fields ex(c.top.get("experiment"), "experiment");
  SweepResult res;
  if (bound.id == BoundId::classical) {
    PdeExperiment e;
    e.bound = bound;
    e.d = static_cast<int>(ex.integer("d", e.d));
    e.nt = static_cast<int>(ex.integer("nt", e.nt));
    e.nx = static_cast<int>(ex.integer("nx", e.nx));
    e.noise_eps = ex.num("noise_eps", e.noise_eps);
    e.amplitude = ex.num("amplitude", e.amplitude);
    e.boundary = ex.num("boundary", e.boundary);
    e.z_stride = static_cast<int>(ex.integer("z_stride", e.z_stride));
    e.samples_per_axis = static_cast<int>(ex.integer("samples_per_axis", e.samples_per_axis));
    ex.finish();
    c.top.finish();
    res = sweep_coming_down(e, axis, static_cast<int>(trials), c.seed, c.opts.threads);
  } else {
    OdeExperiment e;
    e.bound = bound;
    e.forcing = ex.str("forcing", e.forcing);
    e.hurst = ex.num("hurst", e.hurst);
    e.grid_size = static_cast<int>(ex.integer("grid_size", e.grid_size));
    e.amplitude = ex.num("amplitude", e.amplitude);
    e.initial = ex.num("initial", e.initial);
    e.z_stride = static_cast<int>(ex.integer("z_stride", e.z_stride));
    ex.finish();
    c.top.finish();
    res = sweep_coming_down(e, axis, static_cast<int>(trials), c.seed, c.opts.threads);
  }
  std::ostringstream csv;
  write_report_csv(csv, res.reports);
  Json summary{{"schema_version", io::kSchemaVersion}, {"bound", io::to_json(bound)},
               {"axis", axis.name},                  {"trials", trials},
               {"seed", c.seed},                     {"sweep", io::to_json(res)},
               {"constant", io::to_json(empirical_constant(res.reports))}};
  io::write_atomic(c.out("report.csv"), csv.str());
  io::write_atomic(c.out("summary.json"), io::dump(summary));
  return io::kOk;
}

Json stats_json(const IdentityStats& s) {
  return {{"name", s.name},         {"checked", s.checked}, {"failures", s.failures},
          {"escaping", s.escaping}, {"ok", s.ok()},         {"first_failure", s.first_failure}};
}

int cmd_identity_suite(Context& c) {
  const long max_vertices = c.top.integer("max_vertices", 5);
  const long instances = c.top.integer("instances", 500);
  c.top.finish();
  if (max_vertices < 1 || instances < 1) throw io::SchemaError("identity_suite: need positive sizes");
  const auto n = static_cast<std::size_t>(instances);
  std::vector<IdentityStats> all;
  all.push_back(duality_suite(make_rule(RuleCase::f_phi_only, Rational(-6, 5), parabolic_scaling(2), 1, 3),
                              static_cast<int>(max_vertices)));
  all.push_back(morphism_suite(n, derive_seed(c.seed, 1)));
  all.push_back(taylor_suite(n, derive_seed(c.seed, 2)));
  all.push_back(scaling_suite(n, derive_seed(c.seed, 3)));
  std::uint64_t k = 4;
  for (const auto& cfg : representative_configs()) all.push_back(structural_suite(cfg, derive_seed(c.seed, k++)));
  Json suites = Json::array();
  bool ok = true;
  for (const auto& s : all) {
    suites.push_back(stats_json(s));
    ok = ok && s.ok();
  }
  io::write_atomic(c.out("identity.json"),
                   io::dump({{"schema_version", io::kSchemaVersion}, {"seed", c.seed}, {"ok", ok}, {"suites", suites}}));
  return ok ? io::kOk : io::kAssumption;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"trees", "exponents", "sample", "solve", "verify", "identity_suite"};
  return names;
}

int run_command(const std::string& name, const CommandOptions& opts, std::ostream& log) {
  try {
    const Json cfg = io::read_json_file(opts.config);
    Fields top(cfg, "config");
    const long version = top.integer("schema_version");
    if (version != io::kSchemaVersion) throw io::SchemaError("unsupported schema_version " + std::to_string(version));
    if (top.has("command") && top.str("command") != name)
      throw io::SchemaError("config is for command '" + cfg.at("command").get<std::string>() + "'");
    const auto seed = static_cast<std::uint64_t>(top.integer("seed", 0));
    Context c{opts, top, opts.seed.value_or(seed)};
    if (name == "trees") return cmd_trees(c);
    if (name == "exponents") return cmd_exponents(c);
    if (name == "sample") return cmd_sample(c);
    if (name == "solve") return cmd_solve(c);
    if (name == "verify") return cmd_verify(c);
    if (name == "identity_suite") return cmd_identity_suite(c);
    log << "unknown command: " << name << "\n";
    return io::kUsage;
  } catch (const io::IoError& e) {
    log << "io error: " << e.what() << "\n";
    return io::kIo;
  } catch (const io::SchemaError& e) {
    log << "schema error: " << e.what() << "\n";
    return io::kSchema;
  } catch (const SubcriticalityError& e) {
    log << "assumption failed: " << e.what() << "\n";
    return io::kAssumption;
  } catch (const SupercriticalError& e) {
    log << "assumption failed: " << e.what() << "\n";
    return io::kAssumption;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "io error: " << e.what() << "\n";
    return io::kIo;
  } catch (const std::invalid_argument& e) {
    log << "schema error: " << e.what() << "\n";
    return io::kSchema;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return io::kInternal;
  }
}

}  // namespace apriori
