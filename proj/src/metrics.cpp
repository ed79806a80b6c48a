#include "ifcodec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ifcodec/error.hpp"

namespace ifcodec {

WindowedDistance sup_norm_window(const ComplexFn& a, const ComplexFn& b, const InferenceWindow& window,
                                 double samples_per_unit) {
  if (window.empty()) throw Error(ErrorCode::EmptyWindow, "inference window is empty");
  const auto count = static_cast<std::size_t>(std::max(2.0, std::ceil(window.length() * samples_per_unit) + 1.0));
  const double step = window.length() / static_cast<double>(count - 1);
  auto dist = [&](double t) { return std::abs(a(t) - b(t)); };

  std::vector<double> grid(count), vals(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = (i + 1 == count) ? window.T2 : window.T1 + step * static_cast<double>(i);
    vals[i] = dist(grid[i]);
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t top = std::min<std::size_t>(3, count);
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(top), order.end(),
                    [&](std::size_t x, std::size_t y) { return vals[x] > vals[y]; });

  WindowedDistance out{vals[order[0]], grid[order[0]], step};
  for (std::size_t r = 0; r < top; ++r) {
    const std::size_t i = order[r];
    const double lo = grid[i == 0 ? 0 : i - 1];
    const double hi = grid[std::min(i + 1, count - 1)];
    if (hi <= lo) continue;
    const double x = quad::golden_max(dist, lo, hi, 1e-12 * std::max(1.0, std::abs(hi)));
    const double v = dist(x);
    if (v > out.value) out.value = v, out.argmax_t = x;
  }
  return out;
}

double spike_uncertainty(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "spike trains differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double wasserstein1(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "point sets differ in size");
  if (a.empty()) return 0.0;
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return spike_uncertainty(x, y) / static_cast<double>(x.size());
}

double amalgam_norm(const ComplexFn& g, Interval support_hint, double grid_step, std::span<const double> breakpoints) {
  if (!(grid_step > 0.0)) throw Error(ErrorCode::ConfigInvalid, "grid_step must be positive");
  // Node spacing divides 1 so that both window ends of every grid centre are nodes.
  const auto per_unit = static_cast<long>(std::ceil(1.0 / grid_step - 1e-9));
  const double h = 1.0 / static_cast<double>(per_unit);
  const double lo = support_hint.lo - 1.5, hi = support_hint.hi + 1.5;
  const auto cells = static_cast<long>(std::ceil((hi - lo) / h));

  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  std::sort(cuts.begin(), cuts.end());
  const auto& rule = quad::gauss_legendre(8);
  auto cell_integral = [&](double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * std::abs(g(mid + half * rule.nodes[i]));
    return half * acc;
  };

  std::vector<double> G(cells + 1, 0.0);
  for (long c = 0; c < cells; ++c) {
    const double a = lo + h * static_cast<double>(c), b = lo + h * static_cast<double>(c + 1);
    double acc = 0.0, left = a;
    for (auto it = std::upper_bound(cuts.begin(), cuts.end(), a); it != cuts.end() && *it < b; ++it) {
      acc += cell_integral(left, *it);
      left = *it;
    }
    acc += cell_integral(left, b);
    G[c + 1] = G[c] + acc;
  }
  double best = 0.0;
  for (long c = 0; c + per_unit <= cells; ++c) best = std::max(best, G[c + per_unit] - G[c]);
  return best;
}

SpectralTail spectral_tail(const SignalModel& m, double omega) {
  if (!m.has_spectrum()) throw Error(ErrorCode::SpectrumUnavailable, "spectral tail needs a closed-form spectrum");
  if (omega < 0.0) throw Error(ErrorCode::ConfigInvalid, "omega must be >= 0");
  const double w = m.scale();
  const auto& g = m.generator();
  double total_c = 0.0;
  for (const auto& c : m.coefficients()) total_c += std::abs(c);
  const double span = m.nodes().back() - m.nodes().front();
  const double panel = std::min(1.0 / (4.0 * (span + 1.0)), 0.1 / w);
  constexpr long kMaxPanels = 50000;

  // Analytic bound for int_{|xi| > X} |f^| from the generator.
  auto remainder = [&](double X) {
    switch (g.family) {
      case GeneratorFamily::Fejer: return 0.0;
      case GeneratorFamily::Gaussian: return total_c * std::erfc(std::sqrt(std::numbers::pi) * w * X);
      case GeneratorFamily::BSpline:
        return 2.0 * total_c * g.envelope_D * std::pow(1.0 + X, -g.envelope_s) / g.envelope_s;
    }
    return 0.0;
  };

  double cut = omega;
  if (g.family == GeneratorFamily::Fejer) {
    cut = std::max(omega, 1.0 / w);
  } else {
    double step = 1.0 / w;
    while (remainder(cut) > 1e-12 && cut - omega < panel * kMaxPanels) cut += step;
    cut = std::min(cut, omega + panel * kMaxPanels);
  }

  SpectralTail out;
  if (cut > omega) {
    const auto panels = static_cast<long>(std::ceil((cut - omega) / panel));
    const double h = (cut - omega) / static_cast<double>(panels);
    const auto& rule = quad::gauss_legendre(16);
    std::vector<double> parts(panels);
#pragma omp parallel for schedule(static)
    for (long p = 0; p < panels; ++p) {
      const double mid = omega + h * (static_cast<double>(p) + 0.5);
      double part = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double xi = mid + 0.5 * h * rule.nodes[i];
        part += rule.weights[i] * (std::abs(m.spectrum(xi)) + std::abs(m.spectrum(-xi)));
      }
      parts[p] = 0.5 * h * part;
    }
    out.value = std::accumulate(parts.begin(), parts.end(), 0.0);
  }
  out.remainder = remainder(cut);
  return out;
}

}  // namespace ifcodec
