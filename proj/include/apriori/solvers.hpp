#pragma once
/// @file solvers.hpp
/// @brief Coercive Young / level-2 rough ODE solvers and the explicit finite-difference heat solver.

#include "apriori/paths.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace apriori {

/// Blow-up threshold on |phi|.
inline constexpr double kBlowupThreshold = 1e12;

/// Solution of phi' = -phi^p from phi0 at t0, evaluated at t >= t0.
double exact_drift(double p, double phi0, double t0, double t);

/// Exact flow of phi' = -|phi|^{p-1} phi over time dt; keeps the direction of phi.
Eigen::VectorXd drift_flow(double p, const Eigen::VectorXd& phi, double dt);

/// f : R^m -> L(R^n, R^m) with the Jacobians of its columns.
struct Forcing {
  int m = 1;
  int n = 1;
  bool constant = false;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> value;          ///< m x n
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, int)> jacobian;  ///< D f_i, m x m

  static Forcing zero(int m, int n);
  static Forcing constant_matrix(const Eigen::MatrixXd& A);
  /// m = n = 1, f(x) = g(x).
  static Forcing scalar(std::function<double(double)> g, std::function<double(double)> dg);
};

/// Drift treatment: exact flow in a Strang splitting (default) or the left-point term -phi^p h.
enum class DriftScheme { split, explicit_euler };

std::string to_string(DriftScheme s);
DriftScheme parse_drift_scheme(const std::string& s);

struct ODESolution {
  std::vector<double> times;
  Eigen::MatrixXd values;  ///< rows follow `times`; NaN after blow-up
  double step = 0.0;
  std::string scheme;
  int blowup_index = -1;   ///< first row with |phi| > kBlowupThreshold or non-finite

  bool blew_up() const { return blowup_index >= 0; }
  Eigen::VectorXd endpoint() const { return values.row(values.rows() - 1).transpose(); }
};

/// Noise part of one step: level-1 term f(phi) dX and level-2 term sum_{i,j} (D f_i)(phi)(f_j(phi)) X^{[j]_i}.
struct NoiseIncrement {
  Eigen::VectorXd level1;
  Eigen::VectorXd level2;
};

NoiseIncrement noise_increment(const Forcing& f, const Eigen::VectorXd& phi, const Eigen::VectorXd& dX,
                               const Eigen::MatrixXd* X2);

/// Young ODE d phi = -phi^p dt + f(phi) dX on the nodes of X, stepping `stride` nodes at a time.
ODESolution young_solve(const Forcing& f, double p, const SampledPath& X, const Eigen::VectorXd& phi0,
                        DriftScheme scheme = DriftScheme::split, int stride = 1);

/// Davie scheme: adds the level-2 term of the lift to every step.
ODESolution rde_solve_davie(const Forcing& f, double p, const BranchedLift2& lift, const Eigen::VectorXd& phi0,
                            DriftScheme scheme = DriftScheme::split, int stride = 1);

struct ConvergenceProbe {
  double predicted_order = 0.0;  ///< (N+1) gamma - 1 with N = 2
  std::vector<double> steps;
  std::vector<double> errors;
  double slope = 0.0;
  bool exact = false;       ///< every error at machine precision
  bool degenerate = false;  ///< fewer than two usable points
};

/// Least-squares slope of log(error) against log(step).
double loglog_slope(const std::vector<double>& steps, const std::vector<double>& errors);

/// Endpoint error of the Davie (or Euler when `davie` is false) scheme at strides 2^k,
/// k = first_shift..first_shift+levels-1, against the Davie solution at stride 1.
ConvergenceProbe sewing_convergence_probe(const Forcing& f, double p, const BranchedLift2& lift,
                                          const Eigen::VectorXd& phi0, double gamma, int levels = 4,
                                          bool davie = true, int first_shift = 3);

/// Root-mean-square errors of probes over independent drivers, with the slope refitted.
ConvergenceProbe combine_probes(const std::vector<ConvergenceProbe>& probes);

struct PdeOptions {
  int substeps = 0;  ///< internal steps per stored time slice; 0 picks the smallest stable value
};

struct PdeSolution {
  GridField field;
  int substeps = 0;
  double internal_dt = 0.0;
  int blowup_slice = -1;
};

/// Largest stable internal step dx^2 / (2 (d-1)).
double cfl_limit(const GridField& grid);

/// L phi = -phi^p + xi on Omega, phi = boundary on the parabolic boundary. Each internal step applies the
/// exact drift flow, an explicit centred heat step and dt xi. Forcing and boundary data are linear in time
/// between stored slices.
PdeSolution pde_fd_solve(double p, const GridField& xi, const GridField& boundary, const PdeOptions& opts = {});

/// Sum over scales 2^{-k} >= eps_m of independent Gaussian bump layers with amplitude 2^{-k beta}.
GridField mollified_noise(double beta, double eps_m, int d, int nt, int nx, std::uint64_t seed,
                          double amplitude = 1.0);

void write_solution_csv(std::ostream& os, const ODESolution& sol);
/// Header line "gridfield v1 d nt nx dt dx", then little-endian float64 values in storage order.
void write_field(std::ostream& os, const GridField& f);
GridField read_field(std::istream& is);

}  // namespace apriori
