#include "ifcodec/if_encoder.hpp"

#include <algorithm>
#include <cmath>

#include "ifcodec/error.hpp"

namespace ifcodec {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 - -92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

struct StepResult {
  cplx y;
  cplx err;
};

class Integrator {
 public:
  Integrator(const SignalModel& m, double alpha) : m_(m), alpha_(alpha) {}

  StepResult step(double t, cplx y, double h) const {
    auto rhs = [&](double s, cplx v) { return m_(s) - alpha_ * v; };
    const cplx k1 = rhs(t, y);
    const cplx k2 = rhs(t + h / 5, y + h * (a21 * k1));
    const cplx k3 = rhs(t + 3 * h / 10, y + h * (a31 * k1 + a32 * k2));
    const cplx k4 = rhs(t + 4 * h / 5, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const cplx k5 = rhs(t + 8 * h / 9, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const cplx k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const cplx y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const cplx k7 = rhs(t + h, y5);
    const cplx err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return {y5, err};
  }

 private:
  const SignalModel& m_;
  double alpha_;
};

double quad_panel(const SignalModel& m, double alpha) {
  const double w = m.atom_width();
  return std::isinf(w) ? 0.25 / alpha : std::min(0.25 * w, 0.25 / alpha);
}

std::vector<double> breakpoints(const SignalModel& m) {
  std::vector<double> out;
  if (m.clip()) out = {m.clip()->lo, m.clip()->hi};
  return out;
}

}  // namespace

void SamplerConfig::validate() const {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw Error(ErrorCode::ConfigInvalid, "theta must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::ConfigInvalid, "alpha must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorCode::ConfigInvalid, "T must be positive");
  if (time_tol < 0.0 || time_tol > 1e-9 * T)
    throw Error(ErrorCode::ConfigInvalid, "time_tol must lie in (0, 1e-9 T]");
}

void SpikeTrain::validate() const {
  if (times.size() != phases.size()) throw Error(ErrorCode::ConfigInvalid, "times and phases differ in length");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0 && times[k] <= config.T))
      throw Error(ErrorCode::ConfigInvalid, "spike time outside [0, T]");
    if (k > 0 && !(times[k] > times[k - 1])) throw Error(ErrorCode::ConfigInvalid, "spike times not increasing");
    if (std::abs(std::abs(phases[k]) - 1.0) > 1e-12) throw Error(ErrorCode::ConfigInvalid, "phase not unit modulus");
  }
}

cplx leaky_integral(const SignalModel& m, double alpha, double t0, double t) {
  if (t <= t0) return {};
  std::vector<double> cuts{t0};
  for (double b : breakpoints(m))
    if (b > t0 && b < t) cuts.push_back(b);
  cuts.push_back(t);
  const double panel = quad_panel(m, alpha);
  cplx acc{};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    acc += quad::gauss_panels([&](double x) { return m(x) * std::exp(alpha * (x - t)); }, cuts[i], cuts[i + 1],
                              panel, 16);
  return acc;
}

SpikeTrain encode(const SignalModel& m, const SamplerConfig& cfg) {
  cfg.validate();
  SpikeTrain train;
  train.config = cfg;
  if (cfg.time_tol == 0.0) train.config.time_tol = cfg.effective_time_tol();
  const double tol = train.config.time_tol;
  const double theta = cfg.theta, alpha = cfg.alpha, T = cfg.T;
  const double atol = 1e-10 * theta, rtol = 1e-10;
  const double w = m.atom_width();
  const double hmax = std::isinf(w) ? 0.05 / alpha : std::min(0.05 / alpha, 0.05 * w);
  const Integrator rk(m, alpha);

  std::vector<double> stops = breakpoints(m);
  stops.push_back(T);
  std::sort(stops.begin(), stops.end());

  double t = 0.0, h = hmax;
  cplx y{};
  while (t < T) {
    double cap = std::abs(y) > 0.9 * theta ? 0.5 * hmax : hmax;
    h = std::min(h, cap);
    for (double s : stops)
      if (s > t) {
        h = std::min(h, s - t);
        break;
      }
    const StepResult r = rk.step(t, y, h);
    const double scale = atol + rtol * std::max(std::abs(y), std::abs(r.y));
    const double err = std::abs(r.err) / scale;
    if (err > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < 1e-14 * std::max(1.0, T)) throw Error(ErrorCode::ResidualTooLarge, "step size underflow");
      continue;
    }
    if (std::abs(r.y) >= theta) {
      double lo = t, hi = t + h;
      cplx ylo = y, yhi = r.y;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const cplx ym = rk.step(t, y, mid - t).y;
        if (std::abs(ym) >= theta) hi = mid, yhi = ym;
        else lo = mid, ylo = ym;
      }
      const double glo = std::abs(ylo) - theta, ghi = std::abs(yhi) - theta;
      double tk = hi;
      if (ghi > glo) tk = std::clamp(lo - glo * (hi - lo) / (ghi - glo), lo, hi);
      if (tk <= t) tk = hi;
      const cplx yk = rk.step(t, y, tk - t).y;
      train.times.push_back(tk);
      train.phases.push_back(yk / std::abs(yk));
      t = tk;
      y = 0.0;
      h = hmax;
      continue;
    }
    t += h;
    y = r.y;
    h *= std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
  }

  const auto res = firing_residuals(m, train);
  for (std::size_t k = 0; k < res.size(); ++k)
    if (res[k] > 1e-6 * theta)
      throw Error(ErrorCode::ResidualTooLarge, "firing residual " + std::to_string(res[k] / theta) +
                                                   " theta at spike " + std::to_string(k));
  return train;
}

std::vector<double> firing_residuals(const SignalModel& m, const SpikeTrain& train) {
  std::vector<double> out;
  out.reserve(train.size());
  double prev = 0.0;
  for (double tk : train.times) {
    out.push_back(std::abs(std::abs(leaky_integral(m, train.config.alpha, prev, tk)) - train.config.theta));
    prev = tk;
  }
  return out;
}

double spike_count_bound(const SignalModel& m, const SamplerConfig& cfg) {
  cfg.validate();
  return 1.0 + signal_charge(m, 0.0, cfg.T) / cfg.theta;
}

}  // namespace ifcodec
