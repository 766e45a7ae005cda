#pragma once
/// @file paths.hpp
/// @brief Sampled drivers on [-1,0], piecewise-linear level-2 lifts, and localized Hölder / Besov-type norms.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace apriori {

/// Stateless seed mixing, so that trial k of a batch does not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial);

/// Values on the uniform grid t_k = t0 + k h, k = 0..size-1.
struct SampledPath {
  double t0 = -1.0;
  double h = 0.0;
  Eigen::MatrixXd values;  ///< size x n, row k is X_{t_k}
  double hurst = 0.0;
  std::uint64_t seed = 0;
  std::string generator;

  int size() const { return static_cast<int>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }
  double time(int k) const { return t0 + k * h; }
  Eigen::VectorXd increment(int s, int t) const { return (values.row(t) - values.row(s)).transpose(); }
};

/// Exact fractional Brownian motion with X_{-1} = 0 on grid_size nodes over [-1,0].
SampledPath sample_fbm(double H, int grid_size, int n, std::uint64_t seed);

/// Deterministic path t -> fn(t) on grid_size nodes over [t0, t1].
SampledPath path_from_function(int grid_size, int n, const std::function<Eigen::VectorXd(double)>& fn,
                               double t0 = -1.0, double t1 = 0.0);

/// c X.
SampledPath scaled(const SampledPath& path, double c);

/// Path frozen outside nodes [i0, i1]: increments vanish off the window.
SampledPath frozen_outside(const SampledPath& path, int i0, int i1);

/// Nodes i0..i1 reparametrised onto [-1,0]: t -> X(t_{i1} + lambda t), lambda = t_{i1} - t_{i0}.
SampledPath rescaled_window(const SampledPath& path, int i0, int i1);

/// Piecewise-linear lift; second level is evaluated on demand from the base path.
struct BranchedLift2 {
  SampledPath base;
  bool zero_second_level = false;

  /// Entry (i,j) is X^{[j]_i}_{s,t} = int_s^t (X^j_u - X^j_s) dX^i_u.
  Eigen::MatrixXd level2(int s, int t) const;
};

BranchedLift2 lift_level2(const SampledPath& path);

/// Lift with the same base and second level identically zero.
BranchedLift2 zero_second_level(const SampledPath& path);

/// max_{i,j} |X_{s,t} - X_{s,u} - X_{u,t} - X^j_{s,u} X^i_{u,t}|, relative to the size of the terms.
double chen_residual(const BranchedLift2& lift, int s, int u, int t);

struct NormEstimate {
  double value = 0.0;
  double exponent = 0.0;
  double window_start = 0.0;  ///< [s,t] for paths, (z_t - lambda^2, z_t) for fields
  double window_end = 0.0;
  double lambda = 0.0;        ///< field norms: scale attaining the sup
  bool caveat = false;        ///< resolution limited
};

/// Grid indices of the nodes inside [a, b].
std::pair<int, int> window_indices(const SampledPath& path, double a, double b);

/// sup |X_t - X_s| / |t-s|^gamma over nodes i0 <= s < t <= i1 with t - s >= min_gap steps.
NormEstimate holder_norm(const SampledPath& path, double gamma, int i0, int i1, int min_gap = 2);
NormEstimate holder_norm(const SampledPath& path, double gamma, double a, double b, int min_gap = 2);

/// Same for the second level with exponent 2 gamma, maximised over (i,j).
NormEstimate holder_norm_level2(const BranchedLift2& lift, double gamma, int i0, int i1, int min_gap = 2);

/// Scalar field on the space-time grid over cl Omega = [-1,0] x [-1,1]^{d-1}, node-centred.
struct GridField {
  int d = 2;
  int nt = 0;
  int nx = 0;
  double dt = 0.0;
  double dx = 0.0;
  std::vector<double> data;  ///< index ((it * nx) + ix) * ny + iy, ny = nx for d = 3 else 1

  int ny() const { return d == 3 ? nx : 1; }
  double t(int it) const { return -1.0 + it * dt; }
  double x(int ix) const { return -1.0 + ix * dx; }
  std::size_t index(int it, int ix, int iy = 0) const {
    return (static_cast<std::size_t>(it) * nx + ix) * ny() + iy;
  }
  double& at(int it, int ix, int iy = 0) { return data[index(it, ix, iy)]; }
  double at(int it, int ix, int iy = 0) const { return data[index(it, ix, iy)]; }
  /// Multilinear interpolation; zero outside cl Omega.
  double sample(double t, double x, double y = 0.0) const;
};

GridField make_grid_field(int d, int nt, int nx, double value = 0.0);

/// Space-time point (t, x[, y]).
struct SpaceTimePoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

/// Fixed test function: (1/6) b(2s+1) prod b(y_i), b(u) = (1-u^2)^3, supported in Omega.
double bump_profile(double s, double x, double y, int d);

/// Integral of bump_profile over Omega.
double bump_integral(int d);

/// Smallest scale with at least four space nodes and two time slices under the test function.
double resolution_floor(const GridField& field);

/// sup over lambda in {h, h/2, ...} of lambda^{-beta} |<field, psi^lambda_z>|, midpoint quadrature
/// with `quad` nodes per direction. Scales below the resolution floor are replaced by the floor.
NormEstimate besov_norm_field(const GridField& field, double beta, const SpaceTimePoint& z, double h, int quad = 24);

/// sup over sampled y in B_z(h) of besov_norm_field(field, beta, y, h).
NormEstimate besov_norm_local(const GridField& field, double beta, const SpaceTimePoint& z, double h,
                              int samples_per_axis = 4, int quad = 24);

/// Binary columnar format: magic, version, n, grid_size, H, seed, t0, h, ncols; then little-endian
/// float64 columns (values X^1..X^n, then for lifts X^{[j]_i}_{0,t} for i, j = 1..n).
void write_path_binary(std::ostream& os, const SampledPath& path);
void write_lift_binary(std::ostream& os, const BranchedLift2& lift);
SampledPath read_path_binary(std::istream& is);
void write_path_csv(std::ostream& os, const SampledPath& path);

}  // namespace apriori
