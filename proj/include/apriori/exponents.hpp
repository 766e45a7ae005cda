#pragma once
/// @file exponents.hpp
/// @brief Exact a priori exponents for Young ODEs, rough ODEs and the PDE tree expansion.

#include "apriori/elem_diff.hpp"
#include "apriori/rational.hpp"
#include "apriori/rule.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace apriori {

enum class EquationCase { ode, pde };

std::string to_string(EquationCase c);
EquationCase parse_equation_case(const std::string& s);

/// Raised when a scaling denominator is not positive.
class SupercriticalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Verdict { pass, fail, not_applicable };

std::string to_string(Verdict v);

struct VerdictEntry {
  std::string name;
  Verdict verdict = Verdict::not_applicable;
  std::string detail;
};

/// PDE: 2/(p-1). ODE: 1/(p-1).
Rational alpha(const Rational& p, EquationCase c);

/// alpha / (alpha + 2 + beta).
Rational classical_rho(const Rational& alpha, const Rational& beta);

struct YoungExponents {
  Rational simple;                   ///< alpha / (alpha + gamma - alpha theta)
  Rational sharp;                    ///< alpha / (gamma (1 + alpha))
  std::optional<Rational> weighted;  ///< alpha / (alpha + gamma - alpha eta)
};

YoungExponents young_exponents(const Rational& alpha, const Rational& gamma, const Rational& theta,
                               const std::optional<Rational>& eta = std::nullopt);

/// Growth of f: explicit per-tree table, or the linear norms of the ODE / PDE sections.
struct GrowthDescriptor {
  enum class Mode { per_tree, linear_ode, linear_pde };
  struct Entry {
    Rational eta;
    Rational grad_eta;
    Rational bar_eta;
  };
  Mode mode = Mode::linear_ode;
  Rational eta;
  Rational q = Rational(-1);
  /// Keys: "forest|l" (ODE) or "tree|{k1;k2}" (PDE, see multiset_key).
  std::map<std::string, Entry> per_tree;

  static GrowthDescriptor linear_ode(const Rational& eta, const Rational& q);
  static GrowthDescriptor linear_pde(const Rational& eta, const Rational& q = Rational(-1));
};

std::string to_string(GrowthDescriptor::Mode m);
GrowthDescriptor::Mode parse_growth_mode(const std::string& s);

/// Labelled rooted forest in bracket notation: "1" is empty, "[]_1" a single vertex,
/// "[[]_2]_1[]_1" a product of two trees.
struct ButcherForest {
  std::string key;
  int size = 0;
};

/// All forests with labels 1..n and at most max_size vertices, sorted by (size, key).
std::vector<ButcherForest> butcher_forests(int n, int max_size);

struct RpDeltaRow {
  std::string tau;
  int size = 0;
  int l = 0;
  Rational eta;
  Rational delta;
  bool vanishes = false;  ///< D^l f^tau = 0 identically
};

struct RpRhoRow {
  std::string tau;
  int size = 0;
  Rational rho;
  bool vanishes = false;
};

struct RpTripleRow {
  std::string tau;
  int l = 0;
  std::string sigma;
  int k = 0;
  int j = 0;
  Rational zeta;
  Rational rho;
  Rational collapsed;  ///< (k + 1 + zeta (j + 1)) rho
  bool vanishes = false;
};

struct RpExponents {
  Rational alpha;
  Rational gamma;
  int N = 1;
  std::vector<RpDeltaRow> delta;
  std::vector<RpRhoRow> rho_tau;
  std::vector<RpTripleRow> triples;
  /// 1 / (gamma + gamma/alpha - q (1 - gamma) - eta) for linear descriptors.
  std::optional<Rational> closed_form;
  std::vector<VerdictEntry> verdicts;
};

/// Rough ODE exponents. `f_constant` marks every (tau, l) other than (1, 0) as vanishing.
RpExponents rp_exponents(const Rational& p, const Rational& gamma, int n, const GrowthDescriptor& desc,
                         bool f_constant = false);

/// "{}" for the empty multiset, else "{(0,1);(0,1)}".
std::string multiset_key(const MultiSet& ks);

struct PdeRow {
  Tree tau;
  Rational hom;
  int L = 0;
  MultiSet ks;
  bool interior = false;  ///< k in the interior set, otherwise in its boundary layer
  bool depends_on_gradient = false;
  Rational eta;
  Rational grad_eta;
  Rational bar_eta;
  Rational delta;
  Rational rho;
  Rational L_rho;  ///< L(tau) rho(tau, k)
};

struct PdeURow {
  Tree planted;
  Tree sigma;
  Rational hom;
  Rational rho;  ///< rho(sigma, 0)
};

struct PdeExponents {
  Rational alpha;
  Rational beta;
  RuleCase kind = RuleCase::f_phi_only;
  std::optional<int> N;  ///< floor(2 / (2 + beta)) when f depends on phi
  std::map<MultiIndex, Rational> gamma_k;
  Rational zeta;
  std::vector<PdeRow> rows;
  std::vector<PdeURow> u_rows;
  std::optional<Rational> closed_form;
  std::vector<VerdictEntry> verdicts;
};

/// Generic polynomial nonlinearity realising the zero pattern of the rule case and descriptor.
PolyNonlinearity zero_pattern_nonlinearity(const Rule& rule, const GrowthDescriptor& desc);

/// PDE exponents over W_{<0}. Without `nl`, the zero pattern comes from zero_pattern_nonlinearity.
PdeExponents pde_exponents(const Rule& rule, const GrowthDescriptor& desc,
                           const std::optional<PolyNonlinearity>& nl = std::nullopt);

/// theta = (1+delta)^(-1/alpha); exact when rational, else only `value`.
struct ThetaValue {
  std::optional<Rational> exact;
  double value = 0;
};

struct AbstractConstants {
  ThetaValue theta;
  std::optional<Rational> nu_min_exact;  ///< (1 - theta)^(-1)
  double nu_min = 0;
};

AbstractConstants abstract_constants(const Rational& alpha, const Rational& delta);

struct CorollaryConstants {
  Rational delta;  ///< kappa / (eps - kappa)
  AbstractConstants abstract;
  Rational solution_prefactor;  ///< eps / (1 + delta)
  Rational driver_prefactor;    ///< 1 / r
};

CorollaryConstants corollary_constants(const Rational& alpha, const Rational& eps, const Rational& kappa,
                                       const Rational& r);

/// Input of the exponents subcommand.
struct EquationSpec {
  EquationCase eq_case = EquationCase::pde;
  Rational p = Rational(3);
  int m = 1;
  int n = 1;
  int d = 2;                   ///< PDE space-time dimension
  RuleCase kind = RuleCase::f_constant;
  Rational beta;               ///< PDE noise regularity
  Rational gamma;              ///< ODE driver regularity
  std::optional<Rational> theta;
  bool gradient_drift = false;
  bool f_constant = false;     ///< ODE only
  GrowthDescriptor growth;
};

struct ExponentReport {
  EquationSpec spec;
  Rational alpha;
  std::optional<Rational> rho_classical;
  std::optional<YoungExponents> young;
  std::optional<RpExponents> rp;
  std::optional<PdeExponents> pde;
  std::vector<VerdictEntry> verdicts;

  bool all_pass() const;
};

ExponentReport compute_exponents(const EquationSpec& spec);

}  // namespace apriori
