#include "apriori/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace apriori {

double exact_drift(double p, double phi0, double t0, double t) {
  if (!(p > 1)) throw std::invalid_argument("exact_drift: p must exceed 1");
  if (t < t0) throw std::invalid_argument("exact_drift: need t >= t0");
  if (phi0 == 0.0) return 0.0;
  const double a = std::abs(phi0);
  // (a^{1-p} + (p-1)(t-t0))^{-1/(p-1)} stays finite for huge a
  const double r = std::pow(std::pow(a, 1.0 - p) + (p - 1.0) * (t - t0), -1.0 / (p - 1.0));
  return std::copysign(r, phi0);
}

Eigen::VectorXd drift_flow(double p, const Eigen::VectorXd& phi, double dt) {
  const double r = phi.norm();
  if (r == 0.0 || !std::isfinite(r)) return phi;
  return phi * (exact_drift(p, r, 0.0, dt) / r);
}

Forcing Forcing::zero(int m, int n) {
  Forcing f = constant_matrix(Eigen::MatrixXd::Zero(m, n));
  return f;
}

Forcing Forcing::constant_matrix(const Eigen::MatrixXd& A) {
  Forcing f;
  f.m = static_cast<int>(A.rows());
  f.n = static_cast<int>(A.cols());
  f.constant = true;
  f.value = [A](const Eigen::VectorXd&) { return A; };
  const int m = f.m;
  f.jacobian = [m](const Eigen::VectorXd&, int) { return Eigen::MatrixXd::Zero(m, m); };
  return f;
}

Forcing Forcing::scalar(std::function<double(double)> g, std::function<double(double)> dg) {
  Forcing f;
  f.value = [g](const Eigen::VectorXd& x) { return Eigen::MatrixXd::Constant(1, 1, g(x[0])); };
  f.jacobian = [dg](const Eigen::VectorXd& x, int) { return Eigen::MatrixXd::Constant(1, 1, dg(x[0])); };
  return f;
}

std::string to_string(DriftScheme s) { return s == DriftScheme::split ? "split" : "explicit"; }

DriftScheme parse_drift_scheme(const std::string& s) {
  if (s == "split") return DriftScheme::split;
  if (s == "explicit") return DriftScheme::explicit_euler;
  throw std::invalid_argument("unknown drift scheme: " + s);
}

NoiseIncrement noise_increment(const Forcing& f, const Eigen::VectorXd& phi, const Eigen::VectorXd& dX,
                               const Eigen::MatrixXd* X2) {
  NoiseIncrement out;
  const Eigen::MatrixXd F = f.value(phi);
  out.level1 = F * dX;
  out.level2 = Eigen::VectorXd::Zero(f.m);
  if (X2 == nullptr || f.constant) return out;
  for (int i = 0; i < f.n; ++i) {
    const Eigen::MatrixXd J = f.jacobian(phi, i);
    for (int j = 0; j < f.n; ++j) {
      const double x = (*X2)(i, j);
      if (x != 0.0) out.level2 += J * F.col(j) * x;
    }
  }
  return out;
}

namespace {

double phi_power_norm(const Eigen::VectorXd& phi, double p) { return std::pow(phi.norm(), p - 1.0); }

ODESolution solve(const Forcing& f, double p, const BranchedLift2& lift, bool davie, const Eigen::VectorXd& phi0,
                  DriftScheme scheme, int stride) {
  const SampledPath& X = lift.base;
  if (stride < 1 || (X.size() - 1) % stride != 0) throw std::invalid_argument("stride must divide the grid");
  if (phi0.size() != f.m || X.dim() != f.n) throw std::invalid_argument("dimension mismatch between f, X and phi0");
  const int steps = (X.size() - 1) / stride;
  const double h = stride * X.h;
  ODESolution sol;
  sol.step = h;
  sol.scheme = std::string(davie ? "davie" : "euler") + "+" + to_string(scheme);
  sol.times.resize(steps + 1);
  sol.values.resize(steps + 1, f.m);
  Eigen::VectorXd phi = phi0;
  sol.times[0] = X.time(0);
  sol.values.row(0) = phi.transpose();
  for (int k = 0; k < steps; ++k) {
    const int s = k * stride, t = s + stride;
    const Eigen::VectorXd dX = X.increment(s, t);
    Eigen::MatrixXd X2;
    if (davie) X2 = lift.level2(s, t);
    if (scheme == DriftScheme::split) {
      phi = drift_flow(p, phi, 0.5 * h);
      NoiseIncrement inc = noise_increment(f, phi, dX, davie ? &X2 : nullptr);
      phi += inc.level1 + inc.level2;
      phi = drift_flow(p, phi, 0.5 * h);
    } else {
      NoiseIncrement inc = noise_increment(f, phi, dX, davie ? &X2 : nullptr);
      phi = phi - phi_power_norm(phi, p) * h * phi + inc.level1 + inc.level2;
    }
    sol.times[k + 1] = X.time(t);
    const double r = phi.norm();
    if (!std::isfinite(r) || r > kBlowupThreshold) {
      sol.blowup_index = k + 1;
      sol.values.bottomRows(steps - k).setConstant(std::numeric_limits<double>::quiet_NaN());
      for (int j = k + 2; j <= steps; ++j) sol.times[j] = X.time(j * stride);
      return sol;
    }
    sol.values.row(k + 1) = phi.transpose();
  }
  return sol;
}

}  // namespace

ODESolution young_solve(const Forcing& f, double p, const SampledPath& X, const Eigen::VectorXd& phi0,
                        DriftScheme scheme, int stride) {
  return solve(f, p, zero_second_level(X), false, phi0, scheme, stride);
}

ODESolution rde_solve_davie(const Forcing& f, double p, const BranchedLift2& lift, const Eigen::VectorXd& phi0,
                            DriftScheme scheme, int stride) {
  return solve(f, p, lift, true, phi0, scheme, stride);
}

double loglog_slope(const std::vector<double>& steps, const std::vector<double>& errors) {
  if (steps.size() != errors.size() || steps.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double x = std::log(steps[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceProbe sewing_convergence_probe(const Forcing& f, double p, const BranchedLift2& lift,
                                          const Eigen::VectorXd& phi0, double gamma, int levels, bool davie,
                                          int first_shift) {
  ConvergenceProbe probe;
  probe.predicted_order = 3.0 * gamma - 1.0;
  const ODESolution ref = rde_solve_davie(f, p, lift, phi0);
  const Eigen::VectorXd target = ref.endpoint();
  const double tiny = 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, target.norm());
  bool all_tiny = true;
  for (int k = first_shift; k < first_shift + levels; ++k) {
    const int stride = 1 << k;
    if ((lift.base.size() - 1) % stride != 0) break;
    const ODESolution sol = davie ? rde_solve_davie(f, p, lift, phi0, DriftScheme::split, stride)
                                  : young_solve(f, p, lift.base, phi0, DriftScheme::split, stride);
    if (sol.blew_up() || ref.blew_up()) continue;
    const double err = (sol.endpoint() - target).norm();
    if (err > tiny) all_tiny = false;
    probe.steps.push_back(sol.step);
    probe.errors.push_back(err);
  }
  if (probe.steps.empty()) {
    probe.degenerate = true;
    return probe;
  }
  if (all_tiny) {
    probe.exact = true;
    return probe;
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < probe.steps.size(); ++i)
    if (probe.errors[i] > tiny) {
      xs.push_back(probe.steps[i]);
      ys.push_back(probe.errors[i]);
    }
  if (xs.size() < 2) {
    probe.degenerate = true;
    return probe;
  }
  probe.slope = loglog_slope(xs, ys);
  return probe;
}

ConvergenceProbe combine_probes(const std::vector<ConvergenceProbe>& probes) {
  if (probes.empty()) throw std::invalid_argument("combine_probes: no probes");
  ConvergenceProbe out;
  out.predicted_order = probes.front().predicted_order;
  out.steps = probes.front().steps;
  out.errors.assign(out.steps.size(), 0.0);
  out.exact = true;
  for (const auto& p : probes) {
    if (p.steps != out.steps) throw std::invalid_argument("combine_probes: step sequences differ");
    for (std::size_t i = 0; i < p.errors.size(); ++i) out.errors[i] += p.errors[i] * p.errors[i];
    out.exact = out.exact && p.exact;
  }
  for (double& e : out.errors) e = std::sqrt(e / probes.size());
  if (out.exact) return out;
  if (out.steps.size() < 2) {
    out.degenerate = true;
    return out;
  }
  out.slope = loglog_slope(out.steps, out.errors);
  return out;
}

double cfl_limit(const GridField& grid) { return grid.dx * grid.dx / (2.0 * (grid.d - 1)); }

namespace {

bool same_shape(const GridField& a, const GridField& b) {
  return a.d == b.d && a.nt == b.nt && a.nx == b.nx;
}

bool on_side(const GridField& g, int ix, int iy) {
  if (ix == 0 || ix == g.nx - 1) return true;
  return g.d == 3 && (iy == 0 || iy == g.nx - 1);
}

}  // namespace

PdeSolution pde_fd_solve(double p, const GridField& xi, const GridField& boundary, const PdeOptions& opts) {
  if (!same_shape(xi, boundary)) throw std::invalid_argument("forcing and boundary grids differ");
  const double limit = cfl_limit(xi);
  int S = opts.substeps;
  if (S <= 0) S = std::max(1, static_cast<int>(std::ceil(xi.dt / limit * (1 + 1e-12))));
  const double dt = xi.dt / S;
  if (dt > limit * (1 + 1e-12)) throw std::invalid_argument("CFL violated: internal step exceeds dx^2/(2(d-1))");

  PdeSolution out;
  out.substeps = S;
  out.internal_dt = dt;
  out.field = make_grid_field(xi.d, xi.nt, xi.nx);
  GridField& u = out.field;
  const int nx = u.nx, ny = u.ny();
  const std::size_t slice = static_cast<std::size_t>(nx) * ny;
  std::vector<double> cur(boundary.data.begin(), boundary.data.begin() + slice), next(slice);
  std::copy(cur.begin(), cur.end(), u.data.begin());
  const double mu = dt / (u.dx * u.dx);
  const double inv = -1.0 / (p - 1.0);

  for (int it = 0; it + 1 < u.nt; ++it) {
    const double* xa = &xi.data[it * slice];
    const double* xb = &xi.data[(it + 1) * slice];
    const double* ba = &boundary.data[it * slice];
    const double* bb = &boundary.data[(it + 1) * slice];
    for (int s = 0; s < S; ++s) {
      const double w0 = static_cast<double>(s) / S, w1 = static_cast<double>(s + 1) / S;
      for (double& v : cur) {
        if (v != 0.0) v = std::copysign(std::pow(std::pow(std::abs(v), 1.0 - p) + (p - 1.0) * dt, inv), v);
      }
      for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
          const std::size_t k = static_cast<std::size_t>(ix) * ny + iy;
          if (on_side(u, ix, iy)) {
            next[k] = (1 - w1) * ba[k] + w1 * bb[k];
            continue;
          }
          double lap = cur[k + ny] + cur[k - ny] - 2.0 * cur[k];
          if (ny > 1) lap += cur[k + 1] + cur[k - 1] - 2.0 * cur[k];
          next[k] = cur[k] + mu * lap + dt * ((1 - w0) * xa[k] + w0 * xb[k]);
        }
      cur.swap(next);
    }
    bool bad = false;
    for (double v : cur) bad = bad || !std::isfinite(v) || std::abs(v) > kBlowupThreshold;
    if (bad) {
      out.blowup_slice = it + 1;
      std::fill(u.data.begin() + (it + 1) * slice, u.data.end(), std::numeric_limits<double>::quiet_NaN());
      return out;
    }
    std::copy(cur.begin(), cur.end(), u.data.begin() + (it + 1) * slice);
  }
  return out;
}

namespace {

double bump(double u) {
  if (u <= -1.0 || u >= 1.0) return 0.0;
  const double v = 1.0 - u * u;
  return v * v * v;
}

}  // namespace

GridField mollified_noise(double beta, double eps_m, int d, int nt, int nx, std::uint64_t seed, double amplitude) {
  if (!(beta > -2.0 && beta <= 0.0)) throw std::invalid_argument("mollified_noise: beta must lie in (-2, 0]");
  if (!(eps_m > 0.0 && eps_m <= 1.0)) throw std::invalid_argument("mollified_noise: eps_m must lie in (0, 1]");
  GridField f = make_grid_field(d, nt, nx);
  if (eps_m < resolution_floor(f)) throw std::invalid_argument("mollified_noise: eps_m below grid resolution");
  for (int k = 0; std::ldexp(1.0, -k) >= eps_m * (1 - 1e-12); ++k) {
    const double sig = std::ldexp(1.0, -k), tau = sig * sig;
    const double amp = amplitude * std::pow(2.0, -k * beta);
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    std::normal_distribution<double> normal(0.0, 1.0);
    const int na = static_cast<int>(std::ceil(1.0 / tau)), nb = static_cast<int>(std::ceil(2.0 / sig));
    const int ncy = d == 3 ? nb : -1;
    for (int a = -1; a <= na; ++a) {
      const double tc = -1.0 + (a + 0.5) * tau;
      for (int b = -1; b <= nb; ++b) {
        const double xc = -1.0 + (b + 0.5) * sig;
        for (int c = -1; c <= ncy; ++c) {
          const double yc = d == 3 ? -1.0 + (c + 0.5) * sig : 0.0;
          const double g = amp * normal(rng);
          const int it0 = std::max(0, static_cast<int>(std::floor((tc - tau + 1.0) / f.dt)));
          const int it1 = std::min(nt - 1, static_cast<int>(std::ceil((tc + tau + 1.0) / f.dt)));
          const int ix0 = std::max(0, static_cast<int>(std::floor((xc - sig + 1.0) / f.dx)));
          const int ix1 = std::min(nx - 1, static_cast<int>(std::ceil((xc + sig + 1.0) / f.dx)));
          int iy0 = 0, iy1 = 0;
          if (d == 3) {
            iy0 = std::max(0, static_cast<int>(std::floor((yc - sig + 1.0) / f.dx)));
            iy1 = std::min(nx - 1, static_cast<int>(std::ceil((yc + sig + 1.0) / f.dx)));
          }
          for (int it = it0; it <= it1; ++it) {
            const double bt = bump((f.t(it) - tc) / tau);
            if (bt == 0.0) continue;
            for (int ix = ix0; ix <= ix1; ++ix) {
              const double bx = bump((f.x(ix) - xc) / sig);
              if (bx == 0.0) continue;
              for (int iy = iy0; iy <= iy1; ++iy) {
                const double by = d == 3 ? bump((f.x(iy) - yc) / sig) : 1.0;
                f.data[f.index(it, ix, iy)] += g * bt * bx * by;
              }
            }
          }
        }
      }
    }
  }
  return f;
}

void write_solution_csv(std::ostream& os, const ODESolution& sol) {
  os << "t";
  for (int j = 0; j < sol.values.cols(); ++j) os << ",phi" << (j + 1);
  os << "\n" << std::setprecision(17);
  for (std::size_t k = 0; k < sol.times.size(); ++k) {
    os << sol.times[k];
    for (int j = 0; j < sol.values.cols(); ++j) os << "," << sol.values(static_cast<int>(k), j);
    os << "\n";
  }
}

void write_field(std::ostream& os, const GridField& f) {
  os << "gridfield v1 " << f.d << " " << f.nt << " " << f.nx << " " << std::setprecision(17) << f.dt << " " << f.dx
     << "\n";
  for (double v : f.data) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
  }
}

GridField read_field(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty field file");
  std::istringstream hs(line);
  std::string tag, version;
  int d = 0, nt = 0, nx = 0;
  double dt = 0, dx = 0;
  if (!(hs >> tag >> version >> d >> nt >> nx >> dt >> dx) || tag != "gridfield" || version != "v1")
    throw std::runtime_error("bad field header");
  GridField f = make_grid_field(d, nt, nx);
  for (double& v : f.data) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("truncated field file");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    v = std::bit_cast<double>(bits);
  }
  return f;
}

}  // namespace apriori
