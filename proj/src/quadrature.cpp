#include "ifcodec/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>

namespace ifcodec::quad {

namespace {

GaussRule compute_gauss_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

template <class T, class F>
T gauss_panels_impl(const F& f, double a, double b, double max_panel, int order) {
  if (b <= a) return T{};
  const GaussRule& rule = gauss_legendre(order);
  const auto panels = static_cast<long>(std::max(1.0, std::ceil((b - a) / max_panel)));
  const double h = (b - a) / static_cast<double>(panels);
  T total{};
  for (long p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    T acc{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    total += 0.5 * h * acc;
  }
  return total;
}

template <class T, class F>
T simpson_recurse(const F& f, double a, double b, T fa, T fm, T fb, T whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const T flm = f(lm);
  const T frm = f(rm);
  const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const T diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_recurse<T>(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse<T>(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class T, class F>
T adaptive_simpson_impl(const F& f, double a, double b, double abs_tol, int max_depth) {
  if (b <= a) return T{};
  const double m = 0.5 * (a + b);
  const T fa = f(a), fm = f(m), fb = f(b);
  const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse<T>(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

template <class T, class F>
T integrate_impl(const F& f, double a, double b, double max_panel, double rel_tol) {
  if (b <= a) return T{};
  const double scale = gauss_panels_impl<double>([&](double x) { return std::abs(f(x)); }, a, b, max_panel, 8);
  const double floor = 1e-300;
  const auto panels = static_cast<long>(std::max(1.0, std::ceil((b - a) / max_panel)));
  const double h = (b - a) / static_cast<double>(panels);
  const double tol = std::max(rel_tol * scale, floor) / static_cast<double>(panels);
  T total{};
  for (long p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double hi = (p + 1 == panels) ? b : lo + h;
    total += adaptive_simpson_impl<T>(f, lo, hi, tol, 40);
  }
  return total;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_rule(order)).first;
  return it->second;
}

double gauss_panels(const RealFn& f, double a, double b, double max_panel, int order) {
  return gauss_panels_impl<double>(f, a, b, max_panel, order);
}

cplx gauss_panels(const ComplexFn& f, double a, double b, double max_panel, int order) {
  return gauss_panels_impl<cplx>(f, a, b, max_panel, order);
}

double adaptive_simpson(const RealFn& f, double a, double b, double abs_tol, int max_depth) {
  return adaptive_simpson_impl<double>(f, a, b, abs_tol, max_depth);
}

cplx adaptive_simpson(const ComplexFn& f, double a, double b, double abs_tol, int max_depth) {
  return adaptive_simpson_impl<cplx>(f, a, b, abs_tol, max_depth);
}

double integrate(const RealFn& f, double a, double b, double max_panel, double rel_tol) {
  return integrate_impl<double>(f, a, b, max_panel, rel_tol);
}

cplx integrate(const ComplexFn& f, double a, double b, double max_panel, double rel_tol) {
  return integrate_impl<cplx>(f, a, b, max_panel, rel_tol);
}

double golden_max(const RealFn& f, double a, double b, double x_tol, int max_iter) {
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  double best_x = fc >= fd ? c : d;
  double best_f = std::max(fc, fd);
  for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
      if (fc > best_f) best_f = fc, best_x = c;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
      if (fd > best_f) best_f = fd, best_x = d;
    }
  }
  return best_x;
}

double trapezoid(std::span<const double> samples, double step) {
  if (samples.size() < 2) return 0.0;
  double acc = 0.5 * (samples.front() + samples.back());
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) acc += samples[i];
  return acc * step;
}

}  // namespace ifcodec::quad
