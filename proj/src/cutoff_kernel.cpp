#include "ifcodec/cutoff_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

#include "ifcodec/error.hpp"

namespace ifcodec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr char kMagic[4] = {'I', 'F', 'C', 'K'};

double bump(double t) {
  const double d = 0.25 - t * t;
  return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
}

double bump_mass() {
  static const double mass = [] {
    constexpr int n = 4000;
    const double h = 1.0 / n;
    double acc = 0.0;
    for (int i = 1; i < n; ++i) acc += bump(-0.5 + h * i);
    return acc * h;
  }();
  return mass;
}

BumpTransform bump_transform_raw(double x, int points) {
  // Trapezoid over [-1/2, 1/2] with an even number of intervals; the bump is
  // flat to all orders at the ends.
  const int half = points / 2;
  const double h = 0.5 / half;
  double val = 0.5 * bump(0.0), der = 0.0;
  for (int i = 1; i < half; ++i) {
    const double t = h * i;
    const double v = bump(t);
    const double arg = 2.0 * kPi * x * t;
    val += v * std::cos(arg);
    der -= v * 2.0 * kPi * t * std::sin(arg);
  }
  const double c = 2.0 * h / bump_mass();
  return {val * c, der * c};
}

// sin(3 pi x) / (pi x) and its derivative.
std::pair<double, double> window_factor(double x) {
  constexpr double a = 3.0 * kPi;
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return {3.0 - a * a * a * x2 / (6.0 * kPi) + std::pow(a, 5) * x2 * x2 / (120.0 * kPi),
            -(a * a * a / (3.0 * kPi)) * x + std::pow(a, 5) * x2 * x / (30.0 * kPi)};
  }
  const double s = std::sin(a * x), c = std::cos(a * x);
  return {s / (kPi * x), (a * x * c - s) / (kPi * x * x)};
}

void check_build_args(double radius, double grid_step) {
  if (!(radius >= 50.0)) throw Error(ErrorCode::ConfigInvalid, "cut-off radius must be >= 50");
  if (!(grid_step > 0.0 && grid_step <= 1e-3)) throw Error(ErrorCode::ConfigInvalid, "cut-off grid_step must be in (0, 1e-3]");
}

void fill_row(double x, double& psi, double& dpsi) {
  const BumpTransform b = bump_transform_raw(x, 1000);
  const auto [s, ds] = window_factor(x);
  psi = b.value * s;
  dpsi = b.derivative * s + b.value * ds;
}

void check_convergence(double radius) {
  for (double x = 0.0; x <= radius; x += radius / 16.0) {
    const BumpTransform a = bump_transform_raw(x, 1000);
    const BumpTransform b = bump_transform_raw(x, 2000);
    if (std::abs(a.value - b.value) > 1e-13 || std::abs(a.derivative - b.derivative) > 1e-12)
      throw Error(ErrorCode::QuadratureFailure, "bump transform not converged at x = " + std::to_string(x));
  }
}

template <bool Parallel>
CutoffKernel build_impl(double radius, double grid_step) {
  check_build_args(radius, grid_step);
  check_convergence(radius);
  const auto half = static_cast<std::size_t>(std::llround(radius / grid_step));
  std::vector<double> psi(2 * half + 1), dpsi(2 * half + 1);
  const auto n = static_cast<long>(half);
  if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i <= n; ++i) fill_row(grid_step * static_cast<double>(i), psi[half + i], dpsi[half + i]);
  } else {
    for (long i = 0; i <= n; ++i) fill_row(grid_step * static_cast<double>(i), psi[half + i], dpsi[half + i]);
  }
  for (std::size_t i = 1; i <= half; ++i) {
    psi[half - i] = psi[half + i];
    dpsi[half - i] = -dpsi[half + i];
  }
  dpsi[half] = 0.0;
  return CutoffKernel::from_tables(static_cast<double>(half) * grid_step, grid_step, half, std::move(psi),
                                   std::move(dpsi));
}

}  // namespace

BumpTransform bump_transform(double x, int points) {
  if (points < 16) throw Error(ErrorCode::ConfigInvalid, "too few quadrature points");
  return bump_transform_raw(x, points);
}

double CutoffKernel::table_x(std::size_t i) const {
  return (static_cast<double>(i) - static_cast<double>(half_count_)) * grid_step_;
}

bool CutoffKernel::in_range(double x) const { return std::abs(x) <= radius_; }

double CutoffKernel::interpolate(const std::vector<double>& table, double x) const {
  if (!in_range(x) || table.size() < 4) return 0.0;
  const double u = x / grid_step_ + static_cast<double>(half_count_);
  auto i = static_cast<long>(std::floor(u));
  i = std::clamp(i, 1L, static_cast<long>(table.size()) - 3);
  const double s = u - static_cast<double>(i);
  const double p0 = table[i - 1], p1 = table[i], p2 = table[i + 1], p3 = table[i + 2];
  // Cubic Lagrange through nodes -1, 0, 1, 2.
  const double l0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
  const double l1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  const double l2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
  const double l3 = (s + 1.0) * s * (s - 1.0) / 6.0;
  return l0 * p0 + l1 * p1 + l2 * p2 + l3 * p3;
}

double CutoffKernel::psi(double x) const { return interpolate(psi_, x); }
double CutoffKernel::dpsi(double x) const { return interpolate(dpsi_, x); }

void CutoffKernel::fit_decay() {
  double c = 0.0;
  for (std::size_t i = 0; i < psi_.size(); ++i) {
    const double e = std::exp(std::sqrt(std::abs(table_x(i))));
    c = std::max({c, std::abs(psi_[i]) * e, std::abs(dpsi_[i]) * e});
  }
  decay_C_ = c;
}

CutoffKernel CutoffKernel::truncated(double new_radius) const {
  const auto keep = std::min(half_count_, static_cast<std::size_t>(std::floor(new_radius / grid_step_ + 1e-9)));
  CutoffKernel out;
  out.grid_step_ = grid_step_;
  out.radius_ = static_cast<double>(keep) * grid_step_;
  out.half_count_ = keep;
  const std::size_t first = half_count_ - keep, last = half_count_ + keep + 1;
  out.psi_.assign(psi_.begin() + first, psi_.begin() + last);
  out.dpsi_.assign(dpsi_.begin() + first, dpsi_.begin() + last);
  out.fit_decay();
  return out;
}

CutoffKernel build_cutoff(double radius, double grid_step) { return build_impl<true>(radius, grid_step); }

CutoffKernel build_cutoff_serial(double radius, double grid_step) { return build_impl<false>(radius, grid_step); }

CutoffKernel CutoffKernel::from_tables(double radius, double grid_step, std::size_t half, std::vector<double> psi,
                                       std::vector<double> dpsi) {
  CutoffKernel k;
  k.radius_ = radius;
  k.grid_step_ = grid_step;
  k.half_count_ = half;
  k.psi_ = std::move(psi);
  k.dpsi_ = std::move(dpsi);
  k.fit_decay();
  return k;
}

void CutoffKernel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write kernel cache " + path.string());
  const std::uint64_t count = half_count_;
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&radius_), sizeof radius_);
  out.write(reinterpret_cast<const char*>(&grid_step_), sizeof grid_step_);
  out.write(reinterpret_cast<const char*>(&decay_C_), sizeof decay_C_);
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  out.write(reinterpret_cast<const char*>(psi_.data()), static_cast<std::streamsize>(psi_.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(dpsi_.data()), static_cast<std::streamsize>(dpsi_.size() * sizeof(double)));
  if (!out) throw Error(ErrorCode::IoError, "failed writing kernel cache " + path.string());
}

CutoffKernel CutoffKernel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read kernel cache " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorCode::IoError, "bad kernel cache header");
  CutoffKernel k;
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&k.radius_), sizeof k.radius_);
  in.read(reinterpret_cast<char*>(&k.grid_step_), sizeof k.grid_step_);
  in.read(reinterpret_cast<char*>(&k.decay_C_), sizeof k.decay_C_);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!in || count > (1ULL << 28)) throw Error(ErrorCode::IoError, "bad kernel cache header");
  k.half_count_ = count;
  k.psi_.resize(2 * count + 1);
  k.dpsi_.resize(2 * count + 1);
  in.read(reinterpret_cast<char*>(k.psi_.data()), static_cast<std::streamsize>(k.psi_.size() * sizeof(double)));
  in.read(reinterpret_cast<char*>(k.dpsi_.data()), static_cast<std::streamsize>(k.dpsi_.size() * sizeof(double)));
  if (!in) throw Error(ErrorCode::IoError, "truncated kernel cache " + path.string());
  return k;
}

CutoffKernel load_or_build_cutoff(const std::filesystem::path& cache, double radius, double grid_step) {
  if (!cache.empty() && std::filesystem::exists(cache)) {
    try {
      CutoffKernel k = CutoffKernel::load(cache);
      if (k.grid_step() == grid_step && k.radius() == static_cast<double>(std::llround(radius / grid_step)) * grid_step)
        return k;
    } catch (const Error&) {
    }
  }
  CutoffKernel k = build_cutoff(radius, grid_step);
  if (!cache.empty()) k.save(cache);
  return k;
}

double eval_decoder_kernel(const CutoffKernel& k, double omega, double alpha0, double t, bool* truncated) {
  const double x = omega * t;
  if (!k.in_range(x)) {
    if (truncated) *truncated = true;
    return 0.0;
  }
  return alpha0 * omega * k.psi(x) + omega * omega * k.dpsi(x);
}

double cutoff_spectrum(const CutoffKernel& k, double xi) {
  const auto& psi = k.psi_table();
  const std::size_t half = k.half_count();
  const double h = k.grid_step();
  double acc = psi[half];
  for (std::size_t i = 1; i <= half; ++i) {
    const double w = (i == half) ? 1.0 : 2.0;
    acc += w * psi[half + i] * std::cos(2.0 * kPi * xi * h * static_cast<double>(i));
  }
  return acc * h;
}

CutoffReport verify_cutoff(const CutoffKernel& k, double tol, double xi_step) {
  CutoffReport r;
  r.decay_C = k.decay_C();
  const auto& psi = k.psi_table();
  const auto& dpsi = k.dpsi_table();
  const std::size_t half = k.half_count();

  r.evenness_ok = true;
  for (std::size_t i = 1; i <= half; ++i)
    if (psi[half + i] != psi[half - i] || dpsi[half + i] != -dpsi[half - i]) r.evenness_ok = false;

  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double env = k.decay_C() * std::exp(-std::sqrt(std::abs(k.table_x(i))));
    r.worst_decay_ratio = std::max({r.worst_decay_ratio, std::abs(psi[i]) / env, std::abs(dpsi[i]) / env});
  }
  r.decay_ok = std::isfinite(k.decay_C()) && r.worst_decay_ratio <= 1.0 + 1e-12;

  const auto steps = static_cast<long>(std::llround(4.0 / xi_step));
  std::vector<double> spec(steps + 1);
#pragma omp parallel for schedule(static)
  for (long i = 0; i <= steps; ++i) spec[i] = cutoff_spectrum(k, xi_step * static_cast<double>(i));
  for (long i = 0; i <= steps; ++i) {
    // psi is even, so psi^ on [-4, 0] mirrors [0, 4].
    const double xi = xi_step * static_cast<double>(i);
    const double v = spec[i];
    if (xi <= 1.0 + 1e-12) r.worst_flatness = std::max(r.worst_flatness, std::abs(v - 1.0));
    if (xi > 2.0 + 1e-12) r.worst_support = std::max(r.worst_support, std::abs(v));
    r.worst_bounded = std::max(r.worst_bounded, std::abs(v - 1.0));
  }
  r.flatness_ok = r.worst_flatness <= tol;
  r.support_ok = r.worst_support <= tol;
  r.bounded_ok = r.worst_bounded <= 1.0 + tol;
  return r;
}

}  // namespace ifcodec
