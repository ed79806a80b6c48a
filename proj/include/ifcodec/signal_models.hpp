#pragma once

// Test-signal families: finite sums of translated atoms
//
//     f(x) = sum_k c_k phi((x - lambda_k) / w)
//
// with a Gaussian, Fejer (sinc^2) or centred B-spline atom phi of width w,
// plus a test-only constant mode. Every family has a closed-form spectrum.

#include <optional>
#include <string>
#include <vector>

#include "ifcodec/quadrature.hpp"

namespace ifcodec {

enum class SignalKind { FejerAtomSum, GaussianAtomSum, ShiftInvariant, FreeNodeSpline, Constant };
enum class GeneratorFamily { Gaussian, BSpline, Fejer };

std::string to_string(SignalKind kind);
std::string to_string(GeneratorFamily family);
SignalKind signal_kind_from_string(const std::string& s);
GeneratorFamily generator_family_from_string(const std::string& s);

/// Generator atom together with its spectral envelope |phi^(xi)| <= D (1+|xi|)^(-s-1)
/// and the floor tau = min |phi^| on [-1/2, 1/2].
struct GeneratorSpec {
  GeneratorFamily family = GeneratorFamily::Gaussian;
  int order = 4;  // B-spline order m (degree m-1); ignored by other families
  double envelope_D = 0.0;
  double envelope_s = 0.0;
  double floor_tau = 0.0;
};

/// User-facing description, as read from a signal spec file.
struct SignalDescription {
  SignalKind kind = SignalKind::GaussianAtomSum;
  std::vector<cplx> coefficients;
  std::vector<double> nodes;
  GeneratorFamily family = GeneratorFamily::Gaussian;  // used by ShiftInvariant / FreeNodeSpline
  int order = 4;
  double scale = 1.0;
  std::optional<double> envelope_D;  // fitted when absent
  std::optional<double> envelope_s;  // family default when absent
  std::optional<Interval> clip;      // f vanishes outside the clip window
  bool normalize_l2 = false;         // rescale coefficients so that ||f||_2 = 1
};

struct ChargePair {
  double past = 0.0;
  double future = 0.0;
};

class SignalModel {
 public:
  SignalKind kind() const { return kind_; }
  const std::vector<cplx>& coefficients() const { return coefficients_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const GeneratorSpec& generator() const { return generator_; }
  double scale() const { return scale_; }
  double amp_bound() const { return amp_bound_; }
  const std::optional<Interval>& clip() const { return clip_; }

  cplx operator()(double t) const;
  cplx eval(double t) const { return (*this)(t); }
  cplx spectrum(double xi) const;
  bool has_spectrum() const { return kind_ != SignalKind::Constant && !clip_; }

  /// Width of the characteristic atom scale; infinity for the constant mode.
  double atom_width() const;
  /// Distance beyond which one atom of unit coefficient is below eps in modulus.
  double atom_radius(double eps) const;
  /// Interval outside of which |f| is below eps (clipped to the clip window).
  Interval effective_support(double eps) const;
  /// Half-width of the spectral support for the Fejer family, infinity otherwise.
  double spectral_support_radius() const;
  /// Smallest gap between consecutive nodes; infinity for fewer than two nodes.
  double min_node_gap() const;

  /// (1/Omega) f(x/Omega).
  SignalModel rescaled(double omega) const;
  /// e^{i phi} f.
  SignalModel phase_rotated(double phi) const;
  /// Same atoms, new coefficients. Re-certifies amp_bound.
  SignalModel with_coefficients(std::vector<cplx> coefficients) const;

 private:
  friend SignalModel build_signal(const SignalDescription&);
  friend SignalModel make_constant_signal(cplx, std::optional<Interval>);

  cplx atom(double y) const;
  cplx atom_spectrum(double xi) const;
  void certify_amp_bound();

  SignalKind kind_ = SignalKind::GaussianAtomSum;
  std::vector<cplx> coefficients_;
  std::vector<double> nodes_;
  GeneratorSpec generator_;
  double scale_ = 1.0;
  double amp_bound_ = 0.0;
  std::optional<Interval> clip_;
};

/// Validates the description, fits/verifies the generator envelope and
/// certifies amp_bound (dense grid maximum x 1.05).
SignalModel build_signal(const SignalDescription& desc);

/// Test-only constant signal f = c (optionally restricted to a window).
SignalModel make_constant_signal(cplx value, std::optional<Interval> clip = std::nullopt);

/// Closed-form atom spectrum for a generator family at width w.
double generator_spectrum(GeneratorFamily family, int order, double w, double xi);

/// Smallest D with |phi^(xi)| <= D (1+|xi|)^(-s-1) (fitted on a fine grid, 1% margin).
double fit_envelope_D(GeneratorFamily family, int order, double w, double s);
/// Largest violation ratio |phi^|/(D(1+xi)^(-s-1)) on a log grid of [0, 1e4]; <= 1 means the envelope holds.
double envelope_violation(GeneratorFamily family, int order, double w, double D, double s);
double default_envelope_s(GeneratorFamily family, int order);
double generator_floor_tau(GeneratorFamily family, int order, double w);
/// Riesz lower bound A = min_xi sum_k |phi^(xi+k)|^2 of the integer shifts.
double riesz_lower_bound(GeneratorFamily family, int order, double w);

double signal_charge(const SignalModel& m, double a, double b);
double l2_norm(const SignalModel& m);

/// Grid-search estimates of the exponentially damped past/future charges,
/// inflated by 1.05 and capped by the safe bound amp_bound / (alpha0 - dalpha).
ChargePair past_future_charge(const SignalModel& m, double alpha0, double delta_alpha, double t_last);

}  // namespace ifcodec
