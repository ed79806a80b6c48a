#pragma once

// Shared 1-D quadrature and search helpers.

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace ifcodec {

using cplx = std::complex<double>;
using RealFn = std::function<double(double)>;
using ComplexFn = std::function<cplx(double)>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

namespace quad {

/// Gauss-Legendre nodes and weights on [-1, 1]. Cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

/// Composite Gauss-Legendre over [a, b] with panels no wider than max_panel.
double gauss_panels(const RealFn& f, double a, double b, double max_panel, int order = 16);
cplx gauss_panels(const ComplexFn& f, double a, double b, double max_panel, int order = 16);

/// Adaptive Simpson with absolute tolerance on a single interval.
double adaptive_simpson(const RealFn& f, double a, double b, double abs_tol, int max_depth = 48);
cplx adaptive_simpson(const ComplexFn& f, double a, double b, double abs_tol, int max_depth = 48);

/// Splits [a, b] into panels of width <= max_panel and runs adaptive Simpson on
/// each, with absolute tolerance rel_tol * (coarse estimate of the integral of |f|).
double integrate(const RealFn& f, double a, double b, double max_panel, double rel_tol = 1e-8);
cplx integrate(const ComplexFn& f, double a, double b, double max_panel, double rel_tol = 1e-8);

/// Golden-section maximisation of a unimodal-ish function on [a, b].
/// Returns the abscissa of the best point seen.
double golden_max(const RealFn& f, double a, double b, double x_tol = 1e-11, int max_iter = 200);

/// Trapezoid rule on uniformly spaced samples.
double trapezoid(std::span<const double> samples, double step);

}  // namespace quad
}  // namespace ifcodec
