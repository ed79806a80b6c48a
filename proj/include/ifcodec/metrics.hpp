#pragma once

#include <span>
#include <vector>

#include "ifcodec/ansatz_decoder.hpp"
#include "ifcodec/quadrature.hpp"
#include "ifcodec/signal_models.hpp"

namespace ifcodec {

struct WindowedDistance {
  double value = 0.0;
  double argmax_t = 0.0;
  double grid_step = 0.0;
};

/// max |a - b| over [T1, T2]: dense grid, then golden-section refinement around
/// the three best grid points.
WindowedDistance sup_norm_window(const ComplexFn& a, const ComplexFn& b, const InferenceWindow& window,
                                 double samples_per_unit);

/// Index-paired sum |t_j - t'_j|.
double spike_uncertainty(std::span<const double> a, std::span<const double> b);

/// Wasserstein-1 distance between the normalised counting measures of two
/// equal-size point sets (sorted matching).
double wasserstein1(std::span<const double> a, std::span<const double> b);

/// sup_x int_{x-1/2}^{x+1/2} |g| with window centres on a grid extended one unit
/// beyond the hint. Breakpoints (discontinuities of g) are inserted into the
/// integration grid so that jumps do not cost O(step) accuracy.
double amalgam_norm(const ComplexFn& g, Interval support_hint, double grid_step,
                    std::span<const double> breakpoints = {});

struct SpectralTail {
  double value = 0.0;      // quadrature of |f^| over |xi| > Omega up to the cut
  double remainder = 0.0;  // envelope bound on the discarded part
  double total() const { return value + remainder; }
};

/// int_{|xi| > Omega} |f^(xi)| d xi with closed-form spectra.
SpectralTail spectral_tail(const SignalModel& m, double omega);

}  // namespace ifcodec
