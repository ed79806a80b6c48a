#pragma once

// Smooth frequency cut-off psi with psi^ = 1 on [-1, 1] and psi^ = 0 outside [-2, 2].
//
// psi^ is the convolution of the normalised bump v(t) = c exp(-1/(1/4 - t^2)) on
// (-1/2, 1/2) with the indicator of [-3/2, 3/2], so in the time domain
//
//     psi(x) = v^(x) * sin(3 pi x) / (pi x).
//
// psi and psi' are tabulated once on a uniform grid and interpolated afterwards.

#include <filesystem>
#include <vector>

namespace ifcodec {

class CutoffKernel {
 public:
  double radius() const { return radius_; }
  double grid_step() const { return grid_step_; }
  double decay_C() const { return decay_C_; }
  const std::vector<double>& psi_table() const { return psi_; }
  const std::vector<double>& dpsi_table() const { return dpsi_; }
  std::size_t half_count() const { return half_count_; }
  double table_x(std::size_t i) const;

  /// Four-point cubic interpolation of psi / psi'. Zero outside the table.
  double psi(double x) const;
  double dpsi(double x) const;
  bool in_range(double x) const;

  /// Copy of this kernel with the tables cut to [-new_radius, new_radius].
  CutoffKernel truncated(double new_radius) const;

  void save(const std::filesystem::path& path) const;
  static CutoffKernel load(const std::filesystem::path& path);

  friend bool operator==(const CutoffKernel&, const CutoffKernel&) = default;

  /// Wraps precomputed tables (index half is x = 0) and fits decay_C.
  static CutoffKernel from_tables(double radius, double grid_step, std::size_t half, std::vector<double> psi,
                                  std::vector<double> dpsi);

 private:
  void fit_decay();
  double interpolate(const std::vector<double>& table, double x) const;

  double radius_ = 0.0;
  double grid_step_ = 0.0;
  double decay_C_ = 0.0;
  std::size_t half_count_ = 0;  // table index of x = 0
  std::vector<double> psi_;
  std::vector<double> dpsi_;
};

/// Builds the tables on [-radius, radius]. Requires radius >= 50, grid_step <= 1e-3.
/// Table rows are filled in parallel.
CutoffKernel build_cutoff(double radius = 50.0, double grid_step = 1e-3);
/// Same tables, single-threaded. Reference for the parallel fill.
CutoffKernel build_cutoff_serial(double radius = 50.0, double grid_step = 1e-3);

/// Loads a cached kernel when the header matches, otherwise builds and saves it.
CutoffKernel load_or_build_cutoff(const std::filesystem::path& cache, double radius, double grid_step);

/// v^(x) and its derivative: Fourier transform of the normalised bump.
struct BumpTransform {
  double value;
  double derivative;
};
BumpTransform bump_transform(double x, int points = 1000);

/// Decoder kernel K(t) = alpha0 Omega psi(Omega t) + Omega^2 psi'(Omega t).
/// Returns 0 and sets *truncated when Omega t falls outside the table.
double eval_decoder_kernel(const CutoffKernel& k, double omega, double alpha0, double t,
                           bool* truncated = nullptr);

struct CutoffReport {
  bool decay_ok = false;
  bool support_ok = false;    // |psi^| <= tol for |xi| > 2
  bool flatness_ok = false;   // |psi^ - 1| <= tol for |xi| <= 1
  bool bounded_ok = false;    // |psi^ - 1| <= 1 + tol everywhere
  double decay_C = 0.0;
  double worst_decay_ratio = 0.0;  // max |psi|, |psi'| / (C e^{-sqrt|x|}); <= 1 passes
  double worst_support = 0.0;
  double worst_flatness = 0.0;
  double worst_bounded = 0.0;
  bool evenness_ok = false;
  bool passed() const { return decay_ok && support_ok && flatness_ok && bounded_ok && evenness_ok; }
};

/// Recomputes psi^ on a grid of [-4, 4] by quadrature of the tables and checks
/// the four defining conditions.
CutoffReport verify_cutoff(const CutoffKernel& k, double tol = 1e-6, double xi_step = 0.01);

/// psi^(xi) by trapezoid quadrature of the table (psi is real and even).
double cutoff_spectrum(const CutoffKernel& k, double xi);

}  // namespace ifcodec
