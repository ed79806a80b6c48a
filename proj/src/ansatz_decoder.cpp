#include "ifcodec/ansatz_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ifcodec/error.hpp"

namespace ifcodec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Potential::Potential(std::span<const double> times, std::span<const cplx> phases, double theta, double alpha)
    : times_(times.begin(), times.end()), theta_(theta), alpha_(alpha) {
  if (times.size() != phases.size()) throw Error(ErrorCode::LengthMismatch, "times and phases differ in length");
  if (!(alpha > 0.0)) throw Error(ErrorCode::ConfigInvalid, "potential needs alpha > 0");
  anchors_.resize(times_.size());
  mass_prefix_.assign(times_.size() + 1, 0.0);
  cplx acc{};
  for (std::size_t j = 0; j < times_.size(); ++j) {
    if (j > 0) acc *= std::exp(-alpha_ * (times_[j] - times_[j - 1]));
    acc += theta_ * phases[j];
    anchors_[j] = acc;
  }
  for (std::size_t j = 0; j < times_.size(); ++j)
    mass_prefix_[j + 1] = mass_prefix_[j] + piece_mass(j, j + 1 < times_.size() ? times_[j + 1] - times_[j] : kInf);
}

double Potential::piece_mass(std::size_t j, double len) const {
  return std::abs(anchors_[j]) * (std::isinf(len) ? 1.0 / alpha_ : -std::expm1(-alpha_ * len) / alpha_);
}

double Potential::mass_before(double x) const {
  if (times_.empty() || x <= times_.front()) return 0.0;
  const auto j = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), x) - times_.begin()) - 1;
  return mass_prefix_[j] + piece_mass(j, x - times_[j]);
}

Potential::Potential(const SpikeTrain& train, double alpha)
    : Potential(train.times, train.phases, train.config.theta, alpha) {}

cplx Potential::operator()(double t) const {
  if (times_.empty() || t < times_.front()) return {};
  const auto j = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin()) - 1;
  return anchors_[j] * std::exp(-alpha_ * (t - times_[j]));
}

double Potential::sup_norm() const {
  double s = 0.0;
  for (const auto& a : anchors_) s = std::max(s, std::abs(a));
  return s;
}

cplx potential_eval(const SpikeTrain& train, double alpha, double t) { return Potential(train, alpha)(t); }

cplx leaky_primitive(const SignalModel& m, double alpha, double t) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::ConfigInvalid, "leaky_primitive needs alpha > 0");
  const double amp = m.amp_bound();
  if (amp == 0.0) return {};
  double lower = t - std::max(0.0, std::log(amp / (alpha * 1e-10))) / alpha;
  std::vector<double> cuts;
  if (m.clip()) {
    if (t <= m.clip()->lo) return {};
    lower = std::max(lower, m.clip()->lo);
    if (m.clip()->hi > lower && m.clip()->hi < t) cuts.push_back(m.clip()->hi);
  }
  cuts.insert(cuts.begin(), lower);
  cuts.push_back(t);
  const double w = m.atom_width();
  const double panel = std::isinf(w) ? 0.25 / alpha : std::min(0.25 * w, 0.25 / alpha);
  cplx acc{};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    acc += quad::integrate([&](double x) { return m(x) * std::exp(alpha * (x - t)); }, cuts[i], cuts[i + 1], panel,
                           1e-10);
  return acc;
}

std::vector<cplx> leaky_primitive_on_grid(const SignalModel& m, double alpha, std::span<const double> grid) {
  std::vector<cplx> out(grid.size());
  if (grid.empty()) return out;
  const auto n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 1; i < n; ++i) out[i] = leaky_integral(m, alpha, grid[i - 1], grid[i]);
  out[0] = leaky_primitive(m, alpha, grid[0]);
  for (long i = 1; i < n; ++i) out[i] += out[i - 1] * std::exp(-alpha * (grid[i] - grid[i - 1]));
  return out;
}

std::vector<cplx> leaky_primitive_on_grid_serial(const SignalModel& m, double alpha,
                                                 std::span<const double> grid) {
  std::vector<cplx> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back(leaky_primitive(m, alpha, t));
  return out;
}

InferenceWindow inference_window(double theta, double omega, double alpha0, double delta_alpha,
                                 double delta_past, double delta_future, double T) {
  if (!(alpha0 - delta_alpha > 0.0)) throw Error(ErrorCode::LeakageSpecInvalid, "need alpha0 - delta_alpha > 0");
  if (!(theta > 0.0) || !(omega > 0.0)) throw Error(ErrorCode::ConfigInvalid, "theta and omega must be positive");
  InferenceWindow w;
  const double charge = std::max(delta_past, delta_future);
  w.sigma = charge > theta ? std::log(charge / theta) : 0.0;
  const double guard = 4.0 * w.sigma * w.sigma / omega;
  w.T1 = w.sigma / (alpha0 - delta_alpha) + guard;
  w.T2 = T - guard;
  return w;
}

AnsatzDecoder::AnsatzDecoder(const SpikeTrain& train, double alpha0, double omega, const CutoffKernel& kernel,
                             DecoderOptions options)
    : potential_(train, alpha0), kernel_(&kernel), alpha0_(alpha0), omega_(omega), options_(options) {
  if (!(omega > 0.0)) throw Error(ErrorCode::ConfigInvalid, "omega must be positive");
  tail_length_ = std::log(1.0 / options_.tail_cutoff) / alpha0_;
  // Largest kernel magnitude over the outermost unit of the table stands in for
  // the discarded tail.
  const auto& psi = kernel.psi_table();
  const auto& dpsi = kernel.dpsi_table();
  const auto edge = std::min(psi.size(), static_cast<std::size_t>(std::ceil(1.0 / kernel.grid_step())) + 1);
  edge_kernel_ = 0.0;
  for (std::size_t i = 0; i < edge; ++i)
    edge_kernel_ = std::max(edge_kernel_, alpha0_ * omega_ * std::abs(psi[i]) + omega_ * omega_ * std::abs(dpsi[i]));
}

cplx AnsatzDecoder::operator()(double t, double* flag) const {
  const auto& times = potential_.times();
  const auto& anchors = potential_.anchors();
  if (flag) *flag = 0.0;
  if (times.empty()) return {};
  const double reach = kernel_->radius() / omega_;
  const double lo = std::max(t - reach, times.front());
  const double hi = std::min(t + reach, times.back() + tail_length_);
  const double panel = options_.panel_width / omega_;
  const auto& rule = quad::gauss_legendre(options_.gauss_order);

  cplx acc{};
  if (lo < hi) {
    auto j = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), lo) - times.begin()) - 1;
    for (; j < times.size(); ++j) {
      const double a = std::max(lo, times[j]);
      const double b = std::min(hi, j + 1 < times.size() ? times[j + 1] : kInf);
      if (a >= hi) break;
      if (b <= a) continue;
      const auto panels = static_cast<long>(std::max(1.0, std::ceil((b - a) / panel)));
      const double h = (b - a) / static_cast<double>(panels);
      double part = 0.0;
      for (long p = 0; p < panels; ++p) {
        const double mid = a + h * (static_cast<double>(p) + 0.5);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          const double x = mid + 0.5 * h * rule.nodes[i];
          const double kv = eval_decoder_kernel(*kernel_, omega_, alpha0_, t - x);
          const double wgt = rule.weights[i] * 0.5 * h * kv * std::exp(-alpha0_ * (x - times[j]));
          part += wgt;
        }
      }
      acc += anchors[j] * part;
    }
  }
  if (flag) {
    const double outside =
        potential_.mass_before(t - reach) + (potential_.total_mass() - potential_.mass_before(t + reach));
    *flag = edge_kernel_ * outside;
  }
  return acc;
}

ReconstructedSignal AnsatzDecoder::finish(std::span<const double> grid, std::vector<cplx> values,
                                          std::vector<double> flags) const {
  const double limit = 1e-3 * theta();
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (flags[i] > limit)
      throw Error(ErrorCode::KernelRadiusTooSmall,
                  "kernel truncation mass " + std::to_string(flags[i]) + " at t = " + std::to_string(grid[i]));
  ReconstructedSignal r;
  r.grid.assign(grid.begin(), grid.end());
  r.values = std::move(values);
  r.truncation_flag = std::move(flags);
  r.omega = omega_;
  r.alpha0 = alpha0_;
  return r;
}

ReconstructedSignal AnsatzDecoder::decode(std::span<const double> grid) const {
  std::vector<cplx> values(grid.size());
  std::vector<double> flags(grid.size());
  const auto n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < n; ++i) values[i] = (*this)(grid[i], &flags[i]);
  return finish(grid, std::move(values), std::move(flags));
}

ReconstructedSignal AnsatzDecoder::decode_serial(std::span<const double> grid) const {
  std::vector<cplx> values(grid.size());
  std::vector<double> flags(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = (*this)(grid[i], &flags[i]);
  return finish(grid, std::move(values), std::move(flags));
}

ReconstructedSignal decode(const SpikeTrain& train, double alpha0, double omega, const CutoffKernel& kernel,
                           std::span<const double> grid) {
  return AnsatzDecoder(train, alpha0, omega, kernel).decode(grid);
}

cplx decode_reference_point(const SpikeTrain& train, double alpha0, double omega, const CutoffKernel& kernel,
                            double t, const DecoderOptions& options) {
  const auto& times = train.times;
  const std::size_t n = times.size();
  if (n == 0) return {};
  const double reach = kernel.radius() / omega;
  const double tail = std::log(1.0 / options.tail_cutoff) / alpha0;
  const double panel = options.panel_width / omega;
  cplx acc{};
  for (std::size_t j = 0; j < n; ++j) {
    const double a = std::max(times[j], t - reach);
    const double b = std::min(j + 1 < n ? times[j + 1] : times[j] + tail, t + reach);
    if (b <= a) continue;
    for (std::size_t k = 0; k <= j; ++k) {
      const double tk = times[k];
      const double term = quad::gauss_panels(
          RealFn([&](double x) { return eval_decoder_kernel(kernel, omega, alpha0, t - x) * std::exp(alpha0 * (tk - x)); }),
          a, b, panel, options.gauss_order);
      acc += train.config.theta * train.phases[k] * term;
    }
  }
  return acc;
}

std::vector<double> window_grid(const InferenceWindow& w, double per_unit) {
  if (w.empty()) throw Error(ErrorCode::EmptyWindow, "inference window is empty");
  const auto count = static_cast<std::size_t>(std::max(2.0, std::ceil(w.length() * per_unit) + 1.0));
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = (i + 1 == count) ? w.T2 : w.T1 + w.length() * static_cast<double>(i) / static_cast<double>(count - 1);
  return grid;
}

}  // namespace ifcodec
