#pragma once

#include <vector>

#include "ifcodec/quadrature.hpp"
#include "ifcodec/signal_models.hpp"

namespace ifcodec {

struct SamplerConfig {
  double theta = 0.01;     // firing threshold
  double alpha = 1.0;      // leakage intensity
  double T = 1.0;          // observation window [0, T]
  double time_tol = 0.0;   // 0 selects 1e-10 * T

  double effective_time_tol() const { return time_tol > 0.0 ? time_tol : 1e-10 * T; }
  void validate() const;
};

struct SpikeTrain {
  std::vector<double> times;
  std::vector<cplx> phases;
  SamplerConfig config;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  /// Checks ordering, window membership and unit phases; throws ConfigInvalid.
  void validate() const;
};

/// Leaky integrate-and-fire sampler. Integrates y' = f - alpha y with an adaptive
/// Dormand-Prince 5(4) scheme, locates each crossing of |y| = theta by bisection
/// (plus one secant step) and resets y to 0 at every spike.
SpikeTrain encode(const SignalModel& m, const SamplerConfig& cfg);

/// | |int_{t_{k-1}}^{t_k} f(x) e^{alpha (x - t_k)} dx| - theta | per spike, computed by
/// composite Gauss-Legendre quadrature (independent of the ODE path).
std::vector<double> firing_residuals(const SignalModel& m, const SpikeTrain& train);

/// 1 + (1/theta) int_0^T |f|.
double spike_count_bound(const SignalModel& m, const SamplerConfig& cfg);

/// Accumulator value int_{t0}^{t} f(x) e^{alpha (x - t)} dx by quadrature.
cplx leaky_integral(const SignalModel& m, double alpha, double t0, double t);

}  // namespace ifcodec
