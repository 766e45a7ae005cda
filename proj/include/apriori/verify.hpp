#pragma once
/// @file verify.hpp
/// @brief Left and right sides of the a priori bounds, data-magnitude sweeps and fitted constants.

#include "apriori/paths.hpp"
#include "apriori/solvers.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace apriori {

enum class BoundId { classical, young_simple, young_sharp, young_weighted, rp_general, rp_linear };

std::string to_string(BoundId id);
BoundId parse_bound_id(const std::string& s);

/// lambda_z = min(C |phi_z|^{-1/alpha}, fraction * dist(z)).
struct BoundSpec {
  BoundId id = BoundId::young_sharp;
  double p = 3.0;
  double gamma = 0.5;  ///< driver Hölder exponent (ODE bounds)
  double theta = 1.0;  ///< Hölder regularity of f (Young bounds)
  double eta = 0.0;    ///< weight exponent (young_weighted, rp_linear)
  double q = -1.0;     ///< derivative growth (rp_linear)
  double beta = -0.5;  ///< noise regularity (classical)
  double C = 1.0;
  double fraction = 0.5;
  int min_gap = 2;
};

/// Window fraction 1/4 for the classical bound, 1/2 otherwise.
BoundSpec make_bound_spec(BoundId id, double p);

/// ODE: 1/(p-1); classical: 2/(p-1).
double bound_alpha(const BoundSpec& spec);

/// Exponent of the driver term (for rp_general, that of the level-1 forest 1).
double bound_rho(const BoundSpec& spec);

/// Norms of f entering the bounds.
struct ForcingNorms {
  double sup = 0.0;     ///< ||f||_inf, or ||f||_{inf;eta} for the weighted bound
  double holder = 0.0;  ///< ||f||_{C^theta}, or ||f||_{C^theta;eta}
  /// ||D^l f^tau||_{inf;eta(tau,l)} and eta(tau,l), keyed by (|tau|, l), maximised over labels.
  std::map<std::pair<int, int>, double> rp_norm;
  std::map<std::pair<int, int>, double> rp_eta;
  double linear_norm = 0.0;  ///< ||f||_{eta,q}
};

/// Scalar forcing with analytically known norms: "zero", "bounded" (sin x) or "polynomial" (x).
struct ForcingChoice {
  std::string name;
  Forcing f;
  ForcingNorms norms;
};

ForcingChoice forcing_catalog(const std::string& name, const BoundSpec& spec);

/// Numerical ||g||_{inf;eta} and [g]_{theta;eta} of a scalar g over |x| <= radius.
std::pair<double, double> weighted_norms(const std::function<double(double)>& g, double theta, double eta,
                                         double radius = 1e3, int samples = 4001);

struct RhsTerms {
  double driver = 0.0;
  double base = 0.0;  ///< driver = base^rho for single-power bounds; NaN for rp_general
  double dist = 0.0;
  double lambda = 0.0;
  std::vector<std::string> flags;

  double rhs() const { return std::max(driver, dist); }
};

/// Window [z - lambda_z, z] as node indices, widened to min_gap steps when below resolution.
struct Window {
  int i0 = 0;
  int i1 = 0;
  double lambda = 0.0;
  bool widened = false;
};

Window bound_window(const BoundSpec& spec, const SampledPath& X, int iz, double phi_z);

/// Young bounds at node iz: driver term of the simple, sharp or weighted bound and |z+1|^{-alpha}.
RhsTerms rhs_young(const BoundSpec& spec, const ForcingNorms& f, const SampledPath& X, int iz, double phi_z);

/// Exponent tables of the general rough bound for a given eta(|tau|, l).
struct RpBoundExponents {
  int N = 1;
  std::map<int, double> rho_tau;                         ///< |tau| -> rho_tau
  std::map<std::tuple<int, int, int>, double> zeta;      ///< (|tau|, l, |sigma|)
  std::map<std::tuple<int, int, int>, double> rho_triple;
};

RpBoundExponents rp_bound_exponents(const BoundSpec& spec, const ForcingNorms& f);

/// Rough bounds (N <= 2): level-1 and level-2 terms of the general bound, or the linear closed form.
RhsTerms rhs_rp(const BoundSpec& spec, const ForcingNorms& f, const BranchedLift2& lift, int iz, double phi_z);

/// Parabolic distance to the boundary of Omega: min(sqrt(t+1), 1 - |x_i|).
double parabolic_dist(const SpaceTimePoint& z, int d);

/// Classical bound at z: ||xi||^rho_{C^beta;z;mu_z} and dist(z)^{-alpha}.
RhsTerms rhs_classical(const BoundSpec& spec, const GridField& xi, const SpaceTimePoint& z, double phi_z,
                       int samples_per_axis = 4);

/// ||xi||_{C^beta;z;h} <= h^{gamma-beta} ||xi||_{C^gamma;z;h} for beta <= gamma <= 0.
bool interpolation_holds(const GridField& xi, double beta, double gamma, const SpaceTimePoint& z, double h,
                         int samples_per_axis = 4);

struct BoundRecord {
  std::string bound_id;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string z;
  double lhs = 0.0;
  double rhs_driver = 0.0;
  double rhs_dist = 0.0;
  double ratio = 0.0;
  std::string flags;
};

struct BoundReport {
  std::string bound_id;
  std::string axis;
  double axis_value = 0.0;
  std::vector<BoundRecord> records;
  double max_ratio = 0.0;
  int caveats = 0;
  int blowups = 0;
};

/// Recompute max_ratio, caveat and blow-up counts from the records.
void summarize(BoundReport& report);

struct ConstantSummary {
  double c_star = 0.0;
  double max_ratio = 0.0;
  std::size_t count = 0;
  std::map<std::string, double> quantiles;  ///< "q50", "q90", "q99"
};

ConstantSummary empirical_constant(const std::vector<BoundReport>& reports);

struct OdeExperiment {
  BoundSpec bound;
  std::string forcing = "bounded";
  double hurst = 0.75;
  int grid_size = 1025;
  double amplitude = 1.0;
  double initial = 1.0;
  int z_stride = 16;
};

struct PdeExperiment {
  BoundSpec bound = make_bound_spec(BoundId::classical, 3.0);
  int d = 2;
  int nt = 256;
  int nx = 256;
  double noise_eps = 0.125;
  double amplitude = 1.0;
  double boundary = 1.0;
  int z_stride = 16;
  int samples_per_axis = 3;
};

/// Axis "initial" or "amplitude" (ODE), "boundary" or "amplitude" (PDE); values multiply the base setting.
struct SweepAxis {
  std::string name = "initial";
  std::vector<double> values{1.0};
};

struct SweepResult {
  std::vector<BoundReport> reports;  ///< one per axis value
  double growth = 0.0;               ///< max_k R_k / R_0 over per-value max ratios
  double spread = 0.0;               ///< max_k R_k / min_k R_k
  bool saturated = false;            ///< growth < 1.5
};

/// One trial of an ODE experiment at given axis multiplier.
BoundReport run_ode_trial(const OdeExperiment& ex, const SweepAxis& axis, double value, int trial,
                          std::uint64_t seed);
BoundReport run_pde_trial(const PdeExperiment& ex, const SweepAxis& axis, double value, int trial,
                          std::uint64_t seed);

SweepResult sweep_coming_down(const OdeExperiment& ex, const SweepAxis& axis, int trials, std::uint64_t seed,
                              int threads = 1);
SweepResult sweep_coming_down(const PdeExperiment& ex, const SweepAxis& axis, int trials, std::uint64_t seed,
                              int threads = 1);

/// CSV with header bound_id,trial,seed,z,lhs,rhs_driver,rhs_dist,ratio,flags.
void write_report_csv(std::ostream& os, const std::vector<BoundReport>& reports);

}  // namespace apriori
