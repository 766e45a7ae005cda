#include "apriori/paths.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <random>
#include <stdexcept>

namespace apriori {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial) {
  // splitmix64 finaliser over the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

/// Lower Cholesky factor of the unit-step fractional Gaussian noise covariance, cached per (H, m).
std::shared_ptr<const Eigen::MatrixXd> fgn_factor(double H, int m) {
  static std::mutex mu;
  static std::map<std::pair<double, int>, std::shared_ptr<const Eigen::MatrixXd>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(H, m);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const double e = 2.0 * H;
  auto autocov = [e](int k) {
    double a = std::abs(k + 1.0), b = std::abs(static_cast<double>(k)), c = std::abs(k - 1.0);
    return 0.5 * (std::pow(a, e) - 2.0 * std::pow(b, e) + std::pow(c, e));
  };
  std::vector<double> g(m);
  for (int k = 0; k < m; ++k) g[k] = autocov(k);
  Eigen::MatrixXd cov(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) cov(i, j) = g[std::abs(i - j)];
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw std::runtime_error("fBm increment covariance is not positive definite");
  auto L = std::make_shared<const Eigen::MatrixXd>(llt.matrixL());
  cache.emplace(key, L);
  return L;
}

double pow_gap(int k, double e) { return std::pow(static_cast<double>(k), e); }

}  // namespace

SampledPath sample_fbm(double H, int grid_size, int n, std::uint64_t seed) {
  if (!(H > 0.0 && H < 1.0)) throw std::invalid_argument("Hurst index must lie in (0,1)");
  if (grid_size < 2 || grid_size > 4096) throw std::invalid_argument("grid_size must lie in [2, 4096]");
  if (n < 1) throw std::invalid_argument("n must be positive");
  const int m = grid_size - 1;
  auto L = fgn_factor(H, m);
  SampledPath p;
  p.t0 = -1.0;
  p.h = 1.0 / m;
  p.hurst = H;
  p.seed = seed;
  p.generator = "fbm-cholesky";
  p.values = Eigen::MatrixXd::Zero(grid_size, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double step = std::pow(p.h, H);
  Eigen::VectorXd z(m);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < m; ++k) z[k] = normal(rng);
    Eigen::VectorXd inc = step * ((*L) * z);
    for (int k = 0; k < m; ++k) p.values(k + 1, j) = p.values(k, j) + inc[k];
  }
  return p;
}

SampledPath path_from_function(int grid_size, int n, const std::function<Eigen::VectorXd(double)>& fn, double t0,
                               double t1) {
  if (grid_size < 2) throw std::invalid_argument("grid_size must be at least 2");
  SampledPath p;
  p.t0 = t0;
  p.h = (t1 - t0) / (grid_size - 1);
  p.generator = "function";
  p.values.resize(grid_size, n);
  for (int k = 0; k < grid_size; ++k) {
    Eigen::VectorXd v = fn(p.time(k));
    if (v.size() != n) throw std::invalid_argument("path function returned wrong dimension");
    p.values.row(k) = v.transpose();
  }
  return p;
}

SampledPath scaled(const SampledPath& path, double c) {
  SampledPath p = path;
  p.values *= c;
  return p;
}

SampledPath frozen_outside(const SampledPath& path, int i0, int i1) {
  SampledPath p = path;
  for (int k = 0; k < p.size(); ++k) p.values.row(k) = path.values.row(std::clamp(k, i0, i1));
  return p;
}

SampledPath rescaled_window(const SampledPath& path, int i0, int i1) {
  if (i0 < 0 || i1 >= path.size() || i1 <= i0) throw std::invalid_argument("invalid window");
  SampledPath p = path;
  p.t0 = -1.0;
  p.h = 1.0 / (i1 - i0);
  p.values = path.values.middleRows(i0, i1 - i0 + 1);
  p.generator = path.generator + "+rescaled";
  return p;
}

Eigen::MatrixXd BranchedLift2::level2(int s, int t) const {
  const int n = base.dim();
  if (s < 0 || t >= base.size() || s > t) throw std::invalid_argument("level2: invalid node pair");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  if (zero_second_level) return out;
  std::vector<long double> acc(static_cast<std::size_t>(n) * n, 0.0L);
  for (int k = s; k < t; ++k) {
    for (int i = 0; i < n; ++i) {
      const long double di = base.values(k + 1, i) - base.values(k, i);
      for (int j = 0; j < n; ++j) {
        const long double dj = base.values(k + 1, j) - base.values(k, j);
        const long double yj = static_cast<long double>(base.values(k, j)) - base.values(s, j);
        acc[i * n + j] += yj * di + 0.5L * dj * di;
      }
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = static_cast<double>(acc[i * n + j]);
  return out;
}

BranchedLift2 lift_level2(const SampledPath& path) { return BranchedLift2{path, false}; }

BranchedLift2 zero_second_level(const SampledPath& path) { return BranchedLift2{path, true}; }

double chen_residual(const BranchedLift2& lift, int s, int u, int t) {
  if (!(s <= u && u <= t)) throw std::invalid_argument("chen_residual: need s <= u <= t");
  const Eigen::MatrixXd st = lift.level2(s, t), su = lift.level2(s, u), ut = lift.level2(u, t);
  const Eigen::VectorXd a = lift.base.increment(s, u), b = lift.base.increment(u, t);
  double worst = 0.0;
  for (int i = 0; i < st.rows(); ++i)
    for (int j = 0; j < st.cols(); ++j) {
      const double cross = lift.zero_second_level ? 0.0 : a[j] * b[i];
      const double res = std::abs(st(i, j) - su(i, j) - ut(i, j) - cross);
      const double scale = std::abs(st(i, j)) + std::abs(su(i, j)) + std::abs(ut(i, j)) + std::abs(cross);
      if (scale > 0) worst = std::max(worst, res / scale);
    }
  return worst;
}

std::pair<int, int> window_indices(const SampledPath& path, double a, double b) {
  const double eps = 1e-9;
  int i0 = static_cast<int>(std::ceil((a - path.t0) / path.h - eps));
  int i1 = static_cast<int>(std::floor((b - path.t0) / path.h + eps));
  return {std::max(i0, 0), std::min(i1, path.size() - 1)};
}

NormEstimate holder_norm(const SampledPath& path, double gamma, int i0, int i1, int min_gap) {
  if (min_gap < 1) throw std::invalid_argument("min_gap must be positive");
  if (i0 < 0 || i1 >= path.size() || i1 - i0 < min_gap) throw std::invalid_argument("empty Hölder window");
  std::vector<double> denom(i1 - i0 + 1);
  for (int k = 1; k <= i1 - i0; ++k) denom[k] = pow_gap(k, gamma);
  double best = 0.0;
  int best_gap = min_gap;
  for (int s = i0; s <= i1; ++s)
    for (int t = s + min_gap; t <= i1; ++t) {
      const double r = (path.values.row(t) - path.values.row(s)).norm() / denom[t - s];
      if (r > best) {
        best = r;
        best_gap = t - s;
      }
    }
  NormEstimate e;
  e.value = best / std::pow(path.h, gamma);
  e.exponent = gamma;
  e.window_start = path.time(i0);
  e.window_end = path.time(i1);
  e.caveat = best > 0 && best_gap == min_gap;
  return e;
}

NormEstimate holder_norm(const SampledPath& path, double gamma, double a, double b, int min_gap) {
  auto [i0, i1] = window_indices(path, a, b);
  return holder_norm(path, gamma, i0, i1, min_gap);
}

NormEstimate holder_norm_level2(const BranchedLift2& lift, double gamma, int i0, int i1, int min_gap) {
  const SampledPath& path = lift.base;
  if (min_gap < 1) throw std::invalid_argument("min_gap must be positive");
  if (i0 < 0 || i1 >= path.size() || i1 - i0 < min_gap) throw std::invalid_argument("empty Hölder window");
  NormEstimate e;
  e.exponent = 2 * gamma;
  e.window_start = path.time(i0);
  e.window_end = path.time(i1);
  if (lift.zero_second_level) return e;
  const int n = path.dim();
  std::vector<double> denom(i1 - i0 + 1);
  for (int k = 1; k <= i1 - i0; ++k) denom[k] = pow_gap(k, 2 * gamma);
  double best = 0.0;
  int best_gap = min_gap;
  std::vector<long double> acc(static_cast<std::size_t>(n) * n);
  for (int s = i0; s < i1; ++s) {
    std::fill(acc.begin(), acc.end(), 0.0L);
    for (int k = s; k < i1; ++k) {
      for (int i = 0; i < n; ++i) {
        const long double di = path.values(k + 1, i) - path.values(k, i);
        for (int j = 0; j < n; ++j) {
          const long double dj = path.values(k + 1, j) - path.values(k, j);
          const long double yj = static_cast<long double>(path.values(k, j)) - path.values(s, j);
          acc[i * n + j] += yj * di + 0.5L * dj * di;
        }
      }
      const int gap = k + 1 - s;
      if (gap < min_gap) continue;
      for (long double v : acc) {
        const double r = std::abs(static_cast<double>(v)) / denom[gap];
        if (r > best) {
          best = r;
          best_gap = gap;
        }
      }
    }
  }
  e.value = best / std::pow(path.h, 2 * gamma);
  e.caveat = best > 0 && best_gap == min_gap;
  return e;
}

double GridField::sample(double tt, double xx, double yy) const {
  const double eps = 1e-12;
  if (tt < -1.0 - eps || tt > eps || xx < -1.0 - eps || xx > 1.0 + eps) return 0.0;
  if (d == 3 && (yy < -1.0 - eps || yy > 1.0 + eps)) return 0.0;
  auto locate = [](double v, double step, int n, int& i, double& w) {
    double r = std::clamp((v + 1.0) / step, 0.0, static_cast<double>(n - 1));
    i = std::min(static_cast<int>(r), n - 2);
    w = r - i;
  };
  int it, ix, iy = 0;
  double wt, wx, wy = 0.0;
  locate(tt, dt, nt, it, wt);
  locate(xx, dx, nx, ix, wx);
  if (d == 3) locate(yy, dx, nx, iy, wy);
  double out = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double w2 = (a ? wt : 1 - wt) * (b ? wx : 1 - wx);
      if (d == 3) {
        out += w2 * ((1 - wy) * at(it + a, ix + b, iy) + wy * at(it + a, ix + b, iy + 1));
      } else {
        out += w2 * at(it + a, ix + b);
      }
    }
  return out;
}

GridField make_grid_field(int d, int nt, int nx, double value) {
  if (d != 2 && d != 3) throw std::invalid_argument("grid fields support d = 2 or d = 3");
  if (nt < 2 || nx < 3) throw std::invalid_argument("grid too small");
  if (d == 3 && static_cast<long long>(nt) * nx * nx > 64LL * 1024 * 1024)
    throw std::invalid_argument("d = 3 grid exceeds the size guard");
  GridField f;
  f.d = d;
  f.nt = nt;
  f.nx = nx;
  f.dt = 1.0 / (nt - 1);
  f.dx = 2.0 / (nx - 1);
  f.data.assign(static_cast<std::size_t>(nt) * nx * f.ny(), value);
  return f;
}

namespace {

double bump1(double u) {
  if (u <= -1.0 || u >= 1.0) return 0.0;
  const double v = 1.0 - u * u;
  return v * v * v;
}

}  // namespace

double bump_profile(double s, double x, double y, int d) {
  double v = bump1(2.0 * s + 1.0) * bump1(x) / 6.0;
  if (d == 3) v *= bump1(y);
  return v;
}

double bump_integral(int d) {
  double v = (16.0 / 35.0) * (32.0 / 35.0) / 6.0;
  if (d == 3) v *= 32.0 / 35.0;
  return v;
}

double resolution_floor(const GridField& field) { return std::max(2.0 * field.dx, std::sqrt(2.0 * field.dt)); }

namespace {

double pairing(const GridField& f, const SpaceTimePoint& z, double lambda, int q) {
  const double du = 1.0 / q, dv = 2.0 / q;
  const int qy = f.d == 3 ? q : 1;
  long double acc = 0.0L;
  for (int a = 0; a < q; ++a) {
    const double u = -1.0 + (a + 0.5) * du;
    for (int b = 0; b < q; ++b) {
      const double v = -1.0 + (b + 0.5) * dv;
      for (int c = 0; c < qy; ++c) {
        const double w = f.d == 3 ? -1.0 + (c + 0.5) * dv : 0.0;
        const double psi = bump_profile(u, v, w, f.d);
        if (psi == 0.0) continue;
        acc += psi * f.sample(z.t + lambda * lambda * u, z.x + lambda * v, z.y + lambda * w);
      }
    }
  }
  double cell = du * dv;
  if (f.d == 3) cell *= dv;
  return static_cast<double>(acc) * cell;
}

}  // namespace

NormEstimate besov_norm_field(const GridField& field, double beta, const SpaceTimePoint& z, double h, int quad) {
  if (!(h > 0)) throw std::invalid_argument("besov_norm_field: scale must be positive");
  NormEstimate e;
  e.exponent = beta;
  const double floor = resolution_floor(field);
  std::vector<double> scales;
  if (h < floor) {
    scales.push_back(floor);
    e.caveat = true;
  } else {
    for (double l = h; l >= floor; l *= 0.5) scales.push_back(l);
  }
  for (double l : scales) {
    const double v = std::pow(l, -beta) * std::abs(pairing(field, z, l, quad));
    if (e.lambda == 0.0 || v > e.value) {
      e.value = v;
      e.lambda = l;
    }
  }
  e.window_start = z.t - e.lambda * e.lambda;
  e.window_end = z.t;
  return e;
}

NormEstimate besov_norm_local(const GridField& field, double beta, const SpaceTimePoint& z, double h,
                              int samples_per_axis, int quad) {
  const int S = std::max(1, samples_per_axis);
  NormEstimate best = besov_norm_field(field, beta, z, h, quad);
  best.window_start = z.t - h * h;
  const int ylo = field.d == 3 ? -(S - 1) : 0, yhi = field.d == 3 ? S - 1 : 0;
  for (int a = 0; a < S; ++a)
    for (int b = -(S - 1); b <= S - 1; ++b)
      for (int c = ylo; c <= yhi; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        SpaceTimePoint y{z.t - h * h * a / S, z.x + h * b / S, z.y + h * c / S};
        NormEstimate e = besov_norm_field(field, beta, y, h, quad);
        if (e.value > best.value) {
          best.value = e.value;
          best.lambda = e.lambda;
        }
        best.caveat = best.caveat || e.caveat;
      }
  best.window_end = z.t;
  return best;
}

namespace {

constexpr char kMagic[8] = {'A', 'P', 'R', 'P', 'A', 'T', 'H', '1'};
constexpr std::uint64_t kFormatVersion = 1;

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("truncated path file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

void write_header(std::ostream& os, const SampledPath& p, std::uint64_t ncols) {
  os.write(kMagic, 8);
  put_u64(os, kFormatVersion);
  put_u64(os, static_cast<std::uint64_t>(p.dim()));
  put_u64(os, static_cast<std::uint64_t>(p.size()));
  put_f64(os, p.hurst);
  put_u64(os, p.seed);
  put_f64(os, p.t0);
  put_f64(os, p.h);
  put_u64(os, ncols);
}

}  // namespace

void write_path_binary(std::ostream& os, const SampledPath& path) {
  write_header(os, path, static_cast<std::uint64_t>(path.dim()));
  for (int j = 0; j < path.dim(); ++j)
    for (int k = 0; k < path.size(); ++k) put_f64(os, path.values(k, j));
}

void write_lift_binary(std::ostream& os, const BranchedLift2& lift) {
  const SampledPath& p = lift.base;
  const int n = p.dim(), N = p.size();
  write_header(os, p, static_cast<std::uint64_t>(n + n * n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < N; ++k) put_f64(os, p.values(k, j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      long double acc = 0.0L;
      put_f64(os, 0.0);
      for (int k = 0; k + 1 < N; ++k) {
        if (!lift.zero_second_level) {
          const long double di = p.values(k + 1, i) - p.values(k, i);
          const long double dj = p.values(k + 1, j) - p.values(k, j);
          acc += (static_cast<long double>(p.values(k, j)) - p.values(0, j)) * di + 0.5L * dj * di;
        }
        put_f64(os, static_cast<double>(acc));
      }
    }
}

SampledPath read_path_binary(std::istream& is) {
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("not a path file");
  if (get_u64(is) != kFormatVersion) throw std::runtime_error("unsupported path file version");
  SampledPath p;
  const auto n = static_cast<int>(get_u64(is));
  const auto N = static_cast<int>(get_u64(is));
  p.hurst = get_f64(is);
  p.seed = get_u64(is);
  p.t0 = get_f64(is);
  p.h = get_f64(is);
  const auto ncols = get_u64(is);
  if (ncols < static_cast<std::uint64_t>(n)) throw std::runtime_error("path file has too few columns");
  p.generator = "file";
  p.values.resize(N, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < N; ++k) p.values(k, j) = get_f64(is);
  return p;
}

void write_path_csv(std::ostream& os, const SampledPath& path) {
  os << "t";
  for (int j = 0; j < path.dim(); ++j) os << ",x" << (j + 1);
  os << "\n" << std::setprecision(17);
  for (int k = 0; k < path.size(); ++k) {
    os << path.time(k);
    for (int j = 0; j < path.dim(); ++j) os << "," << path.values(k, j);
    os << "\n";
  }
}

}  // namespace apriori
