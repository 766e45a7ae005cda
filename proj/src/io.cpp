#include "apriori/io.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

namespace apriori::io {

Fields::Fields(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
  if (!j_.is_object()) throw SchemaError(where_ + ": expected an object");
}

bool Fields::has(const std::string& key) const { return j_.contains(key); }

const Json* Fields::find(const std::string& key) {
  auto it = j_.find(key);
  if (it == j_.end()) return nullptr;
  used_.insert(key);
  return &*it;
}

const Json& Fields::get(const std::string& key) {
  const Json* v = find(key);
  if (!v) throw SchemaError(where_ + ": missing field '" + key + "'");
  return *v;
}

std::string Fields::str(const std::string& key, const std::optional<std::string>& def) {
  const Json* v = find(key);
  if (!v) {
    if (def) return *def;
    throw SchemaError(where_ + ": missing field '" + key + "'");
  }
  if (!v->is_string()) throw SchemaError(where_ + "." + key + ": expected a string");
  return v->get<std::string>();
}

double Fields::num(const std::string& key, const std::optional<double>& def) {
  const Json* v = find(key);
  if (!v) {
    if (def) return *def;
    throw SchemaError(where_ + ": missing field '" + key + "'");
  }
  if (!v->is_number()) throw SchemaError(where_ + "." + key + ": expected a number");
  return v->get<double>();
}

long Fields::integer(const std::string& key, const std::optional<long>& def) {
  const Json* v = find(key);
  if (!v) {
    if (def) return *def;
    throw SchemaError(where_ + ": missing field '" + key + "'");
  }
  if (!v->is_number_integer()) throw SchemaError(where_ + "." + key + ": expected an integer");
  return v->get<long>();
}

bool Fields::boolean(const std::string& key, const std::optional<bool>& def) {
  const Json* v = find(key);
  if (!v) {
    if (def) return *def;
    throw SchemaError(where_ + ": missing field '" + key + "'");
  }
  if (!v->is_boolean()) throw SchemaError(where_ + "." + key + ": expected a boolean");
  return v->get<bool>();
}

Rational Fields::rational(const std::string& key, const std::optional<Rational>& def) {
  const Json* v = find(key);
  if (!v) {
    if (def) return *def;
    throw SchemaError(where_ + ": missing field '" + key + "'");
  }
  if (v->is_number_integer()) return Rational(v->get<long>());
  if (!v->is_string()) throw SchemaError(where_ + "." + key + ": expected a rational string");
  try {
    return parse_rational(v->get<std::string>());
  } catch (const std::exception& e) {
    throw SchemaError(where_ + "." + key + ": " + e.what());
  }
}

void Fields::finish() const {
  for (auto it = j_.begin(); it != j_.end(); ++it)
    if (!used_.count(it.key())) throw SchemaError(where_ + ": unknown field '" + it.key() + "'");
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const std::filesystem::path tmp = path.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const Rational& q) { return to_string(q); }

namespace {

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? to_json(*v) : Json(nullptr);
}

Json growth_json(const GrowthDescriptor& g) {
  Json j;
  j["mode"] = to_string(g.mode);
  j["eta"] = to_json(g.eta);
  j["q"] = to_json(g.q);
  if (g.mode == GrowthDescriptor::Mode::per_tree) {
    Json t = Json::object();
    for (const auto& [key, e] : g.per_tree)
      t[key] = {{"eta", to_json(e.eta)}, {"grad_eta", to_json(e.grad_eta)}, {"bar_eta", to_json(e.bar_eta)}};
    j["per_tree"] = t;
  }
  return j;
}

GrowthDescriptor parse_growth(const Json& j) {
  Fields f(j, "growth");
  GrowthDescriptor g;
  try {
    g.mode = parse_growth_mode(f.str("mode"));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("growth.mode: ") + e.what());
  }
  g.eta = f.rational("eta", Rational(0));
  g.q = f.rational("q", Rational(-1));
  if (const Json* t = f.find("per_tree")) {
    if (!t->is_object()) throw SchemaError("growth.per_tree: expected an object");
    for (auto it = t->begin(); it != t->end(); ++it) {
      Fields e(it.value(), "growth.per_tree." + it.key());
      g.per_tree[it.key()] = {e.rational("eta"), e.rational("grad_eta", Rational(0)),
                              e.rational("bar_eta", Rational(0))};
      e.finish();
    }
  }
  f.finish();
  return g;
}

Json verdicts_json(const std::vector<VerdictEntry>& v) {
  Json out = Json::array();
  for (const auto& e : v) out.push_back({{"name", e.name}, {"verdict", to_string(e.verdict)}, {"detail", e.detail}});
  return out;
}

Json young_json(const YoungExponents& y) {
  return {{"simple", to_json(y.simple)}, {"sharp", to_json(y.sharp)}, {"weighted", optional_json(y.weighted)}};
}

Json rp_json(const RpExponents& rp) {
  Json j;
  j["alpha"] = to_json(rp.alpha);
  j["gamma"] = to_json(rp.gamma);
  j["N"] = rp.N;
  Json delta = Json::array(), rho = Json::array(), triples = Json::array();
  for (const auto& r : rp.delta)
    delta.push_back({{"tau", r.tau}, {"size", r.size}, {"l", r.l}, {"eta", to_json(r.eta)},
                     {"delta", to_json(r.delta)}, {"vanishes", r.vanishes}});
  for (const auto& r : rp.rho_tau)
    rho.push_back({{"tau", r.tau}, {"size", r.size}, {"rho", to_json(r.rho)}, {"vanishes", r.vanishes}});
  for (const auto& r : rp.triples)
    triples.push_back({{"tau", r.tau}, {"l", r.l}, {"sigma", r.sigma}, {"k", r.k}, {"j", r.j},
                       {"zeta", to_json(r.zeta)}, {"rho", to_json(r.rho)}, {"collapsed", to_json(r.collapsed)},
                       {"vanishes", r.vanishes}});
  j["delta"] = delta;
  j["rho_tau"] = rho;
  j["triples"] = triples;
  j["closed_form"] = optional_json(rp.closed_form);
  j["verdicts"] = verdicts_json(rp.verdicts);
  return j;
}

Json pde_json(const PdeExponents& pde) {
  Json j;
  j["alpha"] = to_json(pde.alpha);
  j["beta"] = to_json(pde.beta);
  j["kind"] = to_string(pde.kind);
  j["N"] = pde.N ? Json(*pde.N) : Json(nullptr);
  Json gk = Json::object();
  for (const auto& [k, g] : pde.gamma_k) gk[to_string(k)] = to_json(g);
  j["gamma_k"] = gk;
  j["zeta"] = to_json(pde.zeta);
  Json rows = Json::array(), urows = Json::array();
  for (const auto& r : pde.rows)
    rows.push_back({{"tau", r.tau.key}, {"hom", to_json(r.hom)}, {"L", r.L}, {"k", multiset_key(r.ks)},
                    {"interior", r.interior}, {"depends_on_gradient", r.depends_on_gradient},
                    {"eta", to_json(r.eta)}, {"grad_eta", to_json(r.grad_eta)}, {"bar_eta", to_json(r.bar_eta)},
                    {"delta", to_json(r.delta)}, {"rho", to_json(r.rho)}, {"L_rho", to_json(r.L_rho)}});
  for (const auto& r : pde.u_rows)
    urows.push_back({{"planted", r.planted.key}, {"sigma", r.sigma.key}, {"hom", to_json(r.hom)},
                     {"rho", to_json(r.rho)}});
  j["rows"] = rows;
  j["u_rows"] = urows;
  j["closed_form"] = optional_json(pde.closed_form);
  j["verdicts"] = verdicts_json(pde.verdicts);
  return j;
}

}  // namespace

Json to_json(const EquationSpec& s) {
  Json j;
  j["case"] = to_string(s.eq_case);
  j["p"] = to_json(s.p);
  j["m"] = s.m;
  j["n"] = s.n;
  if (s.eq_case == EquationCase::pde) {
    j["d"] = s.d;
    j["kind"] = to_string(s.kind);
    j["beta"] = to_json(s.beta);
    j["gradient_drift"] = s.gradient_drift;
  } else {
    j["gamma"] = to_json(s.gamma);
    j["theta"] = optional_json(s.theta);
    j["f_constant"] = s.f_constant;
  }
  j["growth"] = growth_json(s.growth);
  return j;
}

EquationSpec parse_equation_spec(const Json& j) {
  Fields f(j, "equation");
  EquationSpec s;
  try {
    s.eq_case = parse_equation_case(f.str("case"));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("equation.case: ") + e.what());
  }
  s.p = f.rational("p");
  s.m = static_cast<int>(f.integer("m", 1));
  s.n = static_cast<int>(f.integer("n", 1));
  if (s.eq_case == EquationCase::pde) {
    s.d = static_cast<int>(f.integer("d", 2));
    try {
      s.kind = parse_rule_case(f.str("kind"));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("equation.kind: ") + e.what());
    }
    s.beta = f.rational("beta");
    s.gradient_drift = f.boolean("gradient_drift", false);
    s.growth = GrowthDescriptor::linear_pde(Rational(0));
  } else {
    s.gamma = f.rational("gamma");
    if (const Json* t = f.find("theta"); t && !t->is_null()) s.theta = f.rational("theta");
    s.f_constant = f.boolean("f_constant", false);
    s.growth = GrowthDescriptor::linear_ode(Rational(0), Rational(0));
  }
  if (const Json* g = f.find("growth")) s.growth = parse_growth(*g);
  f.finish();
  if (s.m < 1 || s.n < 1) throw SchemaError("equation: m and n must be positive");
  return s;
}

Json to_json(const ExponentReport& rep) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["spec"] = to_json(rep.spec);
  j["alpha"] = to_json(rep.alpha);
  j["rho_classical"] = optional_json(rep.rho_classical);
  j["young"] = rep.young ? young_json(*rep.young) : Json(nullptr);
  j["rp"] = rep.rp ? rp_json(*rep.rp) : Json(nullptr);
  j["pde"] = rep.pde ? pde_json(*rep.pde) : Json(nullptr);
  j["verdicts"] = verdicts_json(rep.verdicts);
  j["all_pass"] = rep.all_pass();
  return j;
}

Json to_json(const BoundSpec& s) {
  return {{"id", to_string(s.id)}, {"p", s.p},         {"gamma", s.gamma}, {"theta", s.theta},
          {"eta", s.eta},          {"q", s.q},         {"beta", s.beta},   {"C", s.C},
          {"fraction", s.fraction}, {"min_gap", s.min_gap}};
}

BoundSpec parse_bound_spec(const Json& j) {
  Fields f(j, "bound");
  BoundSpec s;
  try {
    s = make_bound_spec(parse_bound_id(f.str("id")), f.num("p", 3.0));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("bound.id: ") + e.what());
  }
  s.gamma = f.num("gamma", s.gamma);
  s.theta = f.num("theta", s.theta);
  s.eta = f.num("eta", s.eta);
  s.q = f.num("q", s.q);
  s.beta = f.num("beta", s.beta);
  s.C = f.num("C", s.C);
  s.fraction = f.num("fraction", s.fraction);
  s.min_gap = static_cast<int>(f.integer("min_gap", s.min_gap));
  f.finish();
  if (!(s.p > 1) || !(s.C > 0) || !(s.fraction > 0) || s.min_gap < 1)
    throw SchemaError("bound: need p > 1, C > 0, fraction > 0 and min_gap >= 1");
  return s;
}

Json to_json(const SweepResult& r) {
  Json reports = Json::array();
  for (const auto& rep : r.reports)
    reports.push_back({{"bound_id", rep.bound_id},
                       {"axis", rep.axis},
                       {"axis_value", rep.axis_value},
                       {"records", rep.records.size()},
                       {"max_ratio", rep.max_ratio},
                       {"caveats", rep.caveats},
                       {"blowups", rep.blowups}});
  return {{"reports", reports}, {"growth", r.growth}, {"spread", r.spread}, {"saturated", r.saturated}};
}

Json to_json(const ConstantSummary& s) {
  Json q = Json::object();
  for (const auto& [k, v] : s.quantiles) q[k] = v;
  return {{"c_star", s.c_star}, {"max_ratio", s.max_ratio}, {"count", s.count}, {"quantiles", q}};
}

}  // namespace apriori::io
