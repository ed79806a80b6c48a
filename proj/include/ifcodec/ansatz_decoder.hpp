#pragma once

#include <span>
#include <vector>

#include "ifcodec/cutoff_kernel.hpp"
#include "ifcodec/if_encoder.hpp"
#include "ifcodec/signal_models.hpp"

namespace ifcodec {

/// Potential u(t) = theta sum_{k <= j(t)} q_k e^{alpha (t_k - t)}, the accumulator
/// history rebuilt from the spikes alone. Zero before the first spike.
class Potential {
 public:
  Potential(std::span<const double> times, std::span<const cplx> phases, double theta, double alpha);
  Potential(const SpikeTrain& train, double alpha);

  cplx operator()(double t) const;
  /// u at t_j, i.e. theta sum_{k <= j} q_k e^{alpha (t_k - t_j)}.
  const std::vector<cplx>& anchors() const { return anchors_; }
  const std::vector<double>& times() const { return times_; }
  double alpha() const { return alpha_; }
  double theta() const { return theta_; }
  double sup_norm() const;
  /// int_{-inf}^x |u| in closed form.
  double mass_before(double x) const;
  double total_mass() const { return mass_prefix_.back(); }

 private:
  double piece_mass(std::size_t j, double len) const;

  std::vector<double> times_;
  std::vector<cplx> anchors_;
  std::vector<double> mass_prefix_;
  double theta_;
  double alpha_;
};

cplx potential_eval(const SpikeTrain& train, double alpha, double t);

/// F_alpha(t) = int_{-inf}^t f(x) e^{alpha (x - t)} dx (lower limit truncated where
/// amp_bound e^{alpha (x - t)} / alpha < 1e-10).
cplx leaky_primitive(const SignalModel& m, double alpha, double t);

/// F_alpha on a sorted grid: per-cell integrals in parallel, then a sequential
/// damped prefix scan.
std::vector<cplx> leaky_primitive_on_grid(const SignalModel& m, double alpha, std::span<const double> grid);
/// Reference: one independent leaky_primitive call per grid point.
std::vector<cplx> leaky_primitive_on_grid_serial(const SignalModel& m, double alpha,
                                                 std::span<const double> grid);

struct InferenceWindow {
  double T1 = 0.0;
  double T2 = 0.0;
  double sigma = 0.0;
  bool empty() const { return T1 > T2; }
  double length() const { return T2 - T1; }
};

InferenceWindow inference_window(double theta, double omega, double alpha0, double delta_alpha,
                                 double delta_past, double delta_future, double T);

struct ReconstructedSignal {
  std::vector<double> grid;
  std::vector<cplx> values;
  std::vector<double> truncation_flag;
  double omega = 0.0;
  double alpha0 = 0.0;
};

struct DecoderOptions {
  double panel_width = 0.25;  // in units of 1/Omega
  int gauss_order = 8;
  double tail_cutoff = 1e-12;  // last interval truncated where e^{-alpha0 s} drops below this
};

/// Bandwidth-based Ansatz f_Omega = K * u with K = alpha0 psi_Omega + psi_Omega',
/// u the potential of the (possibly perturbed) train at leakage alpha0.
class AnsatzDecoder {
 public:
  AnsatzDecoder(const SpikeTrain& train, double alpha0, double omega, const CutoffKernel& kernel,
                DecoderOptions options = {});

  /// f_Omega(t); truncated mass (kernel tabulation edge x mass of |u| beyond it) in *flag.
  cplx operator()(double t, double* flag = nullptr) const;

  /// Evaluates on a grid in parallel. Throws KernelRadiusTooSmall if any point's
  /// truncation flag exceeds 1e-3 theta.
  ReconstructedSignal decode(std::span<const double> grid) const;
  /// Same values, one thread.
  ReconstructedSignal decode_serial(std::span<const double> grid) const;

  double omega() const { return omega_; }
  double alpha0() const { return alpha0_; }
  double theta() const { return potential_.theta(); }

 private:
  ReconstructedSignal finish(std::span<const double> grid, std::vector<cplx> values,
                             std::vector<double> flags) const;

  Potential potential_;
  const CutoffKernel* kernel_;
  double alpha0_;
  double omega_;
  DecoderOptions options_;
  double tail_length_;
  double edge_kernel_;
};

/// Convenience wrapper: decode a train on a grid.
ReconstructedSignal decode(const SpikeTrain& train, double alpha0, double omega, const CutoffKernel& kernel,
                           std::span<const double> grid);

/// Reference Ansatz: the double sum over (j, k) evaluated term by term, one
/// interval integral per pair. O(n^2) work per point; single-threaded.
cplx decode_reference_point(const SpikeTrain& train, double alpha0, double omega, const CutoffKernel& kernel,
                            double t, const DecoderOptions& options = {});

/// Uniform grid on the window at `per_unit` points per unit time (>= 2 points).
std::vector<double> window_grid(const InferenceWindow& w, double per_unit);

}  // namespace ifcodec
