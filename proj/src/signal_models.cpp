#include "ifcodec/signal_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "ifcodec/error.hpp"

namespace ifcodec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double sinc(double u) {
  if (std::abs(u) < 1e-8) return 1.0 - kPi * kPi * u * u / 6.0;
  return std::sin(kPi * u) / (kPi * u);
}

// Centred B-spline of order m (degree m - 1), support [-m/2, m/2].
double bspline(int m, double x) {
  const double half = 0.5 * m;
  if (x <= -half || x >= half) return 0.0;
  double acc = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= m; ++k) {
    const double arg = x + half - k;
    if (arg > 0.0) acc += ((k % 2 == 0) ? 1.0 : -1.0) * binom * std::pow(arg, m - 1);
    binom = binom * (m - k) / (k + 1);
  }
  double fact = 1.0;
  for (int i = 2; i < m; ++i) fact *= i;
  return acc / fact;
}

double atom_shape(GeneratorFamily family, int order, double u) {
  switch (family) {
    case GeneratorFamily::Gaussian: return std::exp(-kPi * u * u);
    case GeneratorFamily::Fejer: {
      const double s = sinc(u);
      return s * s;
    }
    case GeneratorFamily::BSpline: return bspline(order, u);
  }
  return 0.0;
}

double total_abs(const std::vector<cplx>& c) {
  double s = 0.0;
  for (const auto& v : c) s += std::abs(v);
  return s;
}

// Leaky integral int_a^b f(x) e^{alpha (x - b)} dx by Gauss-Legendre on one cell.
cplx leaky_cell(const SignalModel& m, double alpha, double a, double b) {
  const auto& rule = quad::gauss_legendre(8);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  cplx acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = mid + half * rule.nodes[i];
    acc += rule.weights[i] * m(x) * std::exp(alpha * (x - b));
  }
  return half * acc;
}

}  // namespace

std::string to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::FejerAtomSum: return "fejer_atoms";
    case SignalKind::GaussianAtomSum: return "gaussian_atoms";
    case SignalKind::ShiftInvariant: return "shift_invariant";
    case SignalKind::FreeNodeSpline: return "free_node";
    case SignalKind::Constant: return "constant";
  }
  return "unknown";
}

std::string to_string(GeneratorFamily family) {
  switch (family) {
    case GeneratorFamily::Gaussian: return "gaussian";
    case GeneratorFamily::BSpline: return "bspline";
    case GeneratorFamily::Fejer: return "fejer";
  }
  return "unknown";
}

SignalKind signal_kind_from_string(const std::string& s) {
  for (auto k : {SignalKind::FejerAtomSum, SignalKind::GaussianAtomSum, SignalKind::ShiftInvariant,
                 SignalKind::FreeNodeSpline, SignalKind::Constant})
    if (to_string(k) == s) return k;
  throw Error(ErrorCode::InvalidSpec, "unknown signal kind '" + s + "'");
}

GeneratorFamily generator_family_from_string(const std::string& s) {
  for (auto f : {GeneratorFamily::Gaussian, GeneratorFamily::BSpline, GeneratorFamily::Fejer})
    if (to_string(f) == s) return f;
  throw Error(ErrorCode::InvalidSpec, "unknown generator family '" + s + "'");
}

double generator_spectrum(GeneratorFamily family, int order, double w, double xi) {
  const double u = w * xi;
  switch (family) {
    case GeneratorFamily::Gaussian: return w * std::exp(-kPi * u * u);
    case GeneratorFamily::Fejer: return w * std::max(0.0, 1.0 - std::abs(u));
    case GeneratorFamily::BSpline: return w * std::pow(sinc(u), order);
  }
  return 0.0;
}

double default_envelope_s(GeneratorFamily family, int order) {
  switch (family) {
    case GeneratorFamily::Gaussian: return 2.0;
    case GeneratorFamily::Fejer: return 1.0;
    case GeneratorFamily::BSpline: return order - 1.0;
  }
  return 1.0;
}

double fit_envelope_D(GeneratorFamily family, int order, double w, double s) {
  auto ratio = [&](double xi) {
    return std::abs(generator_spectrum(family, order, w, xi)) * std::pow(1.0 + xi, s + 1.0);
  };
  double hi = 0.0;
  switch (family) {
    case GeneratorFamily::Gaussian: hi = std::max(10.0, 10.0 / w); break;
    case GeneratorFamily::Fejer: hi = 1.0 / w; break;
    case GeneratorFamily::BSpline: hi = std::max(40.0, 40.0 / w); break;
  }
  constexpr int kPoints = 200000;
  double best = 0.0;
  for (int i = 0; i <= kPoints; ++i) best = std::max(best, ratio(hi * i / kPoints));
  if (family == GeneratorFamily::BSpline) {
    // Beyond the grid |sinc(w xi)|^m <= (pi w xi)^-m, and (1+xi)^{s+1} (pi w xi)^-m
    // is non-increasing when s + 1 <= m.
    if (s + 1.0 > order) return kInf;
    best = std::max(best, w * std::pow((1.0 + hi) / (kPi * w * hi), order) * std::pow(1.0 + hi, s + 1.0 - order));
  }
  return best * 1.01;
}

double envelope_violation(GeneratorFamily family, int order, double w, double D, double s) {
  double worst = 0.0;
  auto check = [&](double xi) {
    const double bound = D * std::pow(1.0 + xi, -s - 1.0);
    worst = std::max(worst, std::abs(generator_spectrum(family, order, w, xi)) / bound);
  };
  check(0.0);
  constexpr int kPoints = 40000;
  const double lo = std::log(1e-4), hi = std::log(1e4);
  for (int i = 0; i <= kPoints; ++i) check(std::exp(lo + (hi - lo) * i / kPoints));
  return worst;
}

double generator_floor_tau(GeneratorFamily family, int order, double w) {
  double tau = kInf;
  constexpr int kPoints = 2000;
  for (int i = 0; i <= kPoints; ++i)
    tau = std::min(tau, std::abs(generator_spectrum(family, order, w, 0.5 * i / kPoints)));
  return tau;
}

double riesz_lower_bound(GeneratorFamily family, int order, double w) {
  const int K = static_cast<int>(std::max(50.0, std::ceil(20.0 / w)));
  double best = kInf;
  constexpr int kPoints = 400;
  for (int i = 0; i <= kPoints; ++i) {
    const double xi = 0.5 * i / kPoints;
    double acc = 0.0;
    for (int k = -K; k <= K; ++k) {
      const double v = generator_spectrum(family, order, w, xi + k);
      acc += v * v;
    }
    best = std::min(best, acc);
  }
  return best;
}

cplx SignalModel::atom(double y) const { return atom_shape(generator_.family, generator_.order, y / scale_); }

cplx SignalModel::atom_spectrum(double xi) const {
  return generator_spectrum(generator_.family, generator_.order, scale_, xi);
}

cplx SignalModel::operator()(double t) const {
  if (clip_ && !clip_->contains(t)) return {};
  if (kind_ == SignalKind::Constant) return coefficients_.front();
  cplx acc{};
  for (std::size_t k = 0; k < nodes_.size(); ++k) acc += coefficients_[k] * atom(t - nodes_[k]);
  return acc;
}

cplx SignalModel::spectrum(double xi) const {
  if (!has_spectrum()) throw Error(ErrorCode::SpectrumUnavailable, "model has no closed-form spectrum");
  cplx m{};
  for (std::size_t k = 0; k < nodes_.size(); ++k)
    m += coefficients_[k] * std::polar(1.0, -2.0 * kPi * xi * nodes_[k]);
  return m * atom_spectrum(xi);
}

double SignalModel::atom_width() const { return kind_ == SignalKind::Constant ? kInf : scale_; }

double SignalModel::atom_radius(double eps) const {
  switch (generator_.family) {
    case GeneratorFamily::Gaussian: return scale_ * std::sqrt(std::log(1.0 / std::min(eps, 0.5)) / kPi);
    case GeneratorFamily::Fejer: return scale_ / (kPi * std::sqrt(eps));
    case GeneratorFamily::BSpline: return 0.5 * generator_.order * scale_;
  }
  return kInf;
}

Interval SignalModel::effective_support(double eps) const {
  Interval s{-kInf, kInf};
  if (kind_ != SignalKind::Constant && !nodes_.empty()) {
    const double total = std::max(total_abs(coefficients_), 1e-300);
    const double r = atom_radius(eps / total);
    s = {nodes_.front() - r, nodes_.back() + r};
  }
  if (clip_) s = {std::max(s.lo, clip_->lo), std::min(s.hi, clip_->hi)};
  return s;
}

double SignalModel::spectral_support_radius() const {
  return generator_.family == GeneratorFamily::Fejer && kind_ != SignalKind::Constant ? 1.0 / scale_ : kInf;
}

double SignalModel::min_node_gap() const {
  double gap = kInf;
  for (std::size_t k = 1; k < nodes_.size(); ++k) gap = std::min(gap, nodes_[k] - nodes_[k - 1]);
  return gap;
}

void SignalModel::certify_amp_bound() {
  if (kind_ == SignalKind::Constant) {
    amp_bound_ = 1.05 * std::abs(coefficients_.front());
    return;
  }
  if (nodes_.empty()) {
    amp_bound_ = 0.0;
    return;
  }
  const double pad = 6.0 * scale_;
  double lo = nodes_.front() - pad, hi = nodes_.back() + pad;
  if (clip_) lo = std::max(lo, clip_->lo), hi = std::min(hi, clip_->hi);
  double best = 0.0;
  if (hi >= lo) {
    const double step = scale_ / 40.0;
    const auto count = static_cast<long>(std::ceil((hi - lo) / step));
    for (long i = 0; i <= count; ++i) best = std::max(best, std::abs((*this)(std::min(hi, lo + step * i))));
    if (clip_) best = std::max({best, std::abs((*this)(lo)), std::abs((*this)(hi))});
  }
  double tail = 0.0;
  if (generator_.family == GeneratorFamily::Fejer) tail = total_abs(coefficients_) / (36.0 * kPi * kPi);
  amp_bound_ = std::max(1.05 * best, tail);
}

SignalModel SignalModel::rescaled(double omega) const {
  SignalModel out = *this;
  for (auto& c : out.coefficients_) c /= omega;
  for (auto& x : out.nodes_) x *= omega;
  if (out.clip_) out.clip_ = Interval{clip_->lo * omega, clip_->hi * omega};
  out.amp_bound_ = amp_bound_ / omega;
  if (kind_ != SignalKind::Constant) {
    out.scale_ = scale_ * omega;
    out.generator_.envelope_D =
        fit_envelope_D(generator_.family, generator_.order, out.scale_, generator_.envelope_s);
    out.generator_.floor_tau = generator_floor_tau(generator_.family, generator_.order, out.scale_);
  }
  return out;
}

SignalModel SignalModel::phase_rotated(double phi) const {
  SignalModel out = *this;
  const cplx rot = std::polar(1.0, phi);
  for (auto& c : out.coefficients_) c *= rot;
  return out;
}

SignalModel SignalModel::with_coefficients(std::vector<cplx> coefficients) const {
  if (coefficients.size() != coefficients_.size())
    throw Error(ErrorCode::InvalidSpec, "coefficient count does not match the model");
  SignalModel out = *this;
  out.coefficients_ = std::move(coefficients);
  out.certify_amp_bound();
  return out;
}

SignalModel make_constant_signal(cplx value, std::optional<Interval> clip) {
  SignalModel m;
  m.kind_ = SignalKind::Constant;
  m.coefficients_ = {value};
  m.clip_ = clip;
  m.certify_amp_bound();
  return m;
}

SignalModel build_signal(const SignalDescription& desc) {
  if (desc.kind == SignalKind::Constant) {
    if (desc.coefficients.size() != 1)
      throw Error(ErrorCode::InvalidSpec, "constant signal takes exactly one coefficient");
    return make_constant_signal(desc.coefficients.front(), desc.clip);
  }
  if (desc.coefficients.empty()) throw Error(ErrorCode::EmptyModel, "signal has no atoms");
  if (desc.coefficients.size() != desc.nodes.size())
    throw Error(ErrorCode::InvalidSpec, "coefficients and nodes differ in length");
  if (!(desc.scale > 0.0) || !std::isfinite(desc.scale))
    throw Error(ErrorCode::InvalidSpec, "atom scale must be positive");
  for (std::size_t k = 1; k < desc.nodes.size(); ++k)
    if (!(desc.nodes[k] > desc.nodes[k - 1])) throw Error(ErrorCode::InvalidSpec, "nodes must be strictly increasing");
  if (desc.clip && !(desc.clip->hi > desc.clip->lo)) throw Error(ErrorCode::InvalidSpec, "empty clip window");

  SignalModel m;
  m.kind_ = desc.kind;
  m.coefficients_ = desc.coefficients;
  m.nodes_ = desc.nodes;
  m.scale_ = desc.scale;
  m.clip_ = desc.clip;

  GeneratorSpec& g = m.generator_;
  switch (desc.kind) {
    case SignalKind::FejerAtomSum: g.family = GeneratorFamily::Fejer; break;
    case SignalKind::GaussianAtomSum: g.family = GeneratorFamily::Gaussian; break;
    default: g.family = desc.family; break;
  }
  g.order = desc.order;
  if (g.family == GeneratorFamily::BSpline && (g.order < 2 || g.order > 12))
    throw Error(ErrorCode::InvalidSpec, "B-spline order must lie in [2, 12]");

  if (desc.kind == SignalKind::ShiftInvariant) {
    for (double x : desc.nodes)
      if (std::abs(x - std::round(x)) > 1e-12)
        throw Error(ErrorCode::InvalidSpec, "shift-invariant nodes must be integers");
  }
  if (desc.kind == SignalKind::FreeNodeSpline && desc.nodes.size() > 1) {
    const double delta = m.min_node_gap();
    if (!(delta > 1.0))
      throw Error(ErrorCode::NodeSeparationViolation,
                  "minimum node separation " + std::to_string(delta) + " must exceed 1");
  }

  g.envelope_s = desc.envelope_s.value_or(default_envelope_s(g.family, g.order));
  if (!(g.envelope_s > 0.0)) throw Error(ErrorCode::InvalidSpec, "envelope exponent must be positive");
  if (desc.envelope_D) {
    g.envelope_D = *desc.envelope_D;
    const double worst = envelope_violation(g.family, g.order, m.scale_, g.envelope_D, g.envelope_s);
    if (worst > 1.0 + 1e-12)
      throw Error(ErrorCode::EnvelopeViolation,
                  "measured spectrum exceeds the declared envelope by factor " + std::to_string(worst));
  } else {
    g.envelope_D = fit_envelope_D(g.family, g.order, m.scale_, g.envelope_s);
    if (!std::isfinite(g.envelope_D))
      throw Error(ErrorCode::EnvelopeViolation, "no finite envelope constant for this exponent");
  }
  g.floor_tau = generator_floor_tau(g.family, g.order, m.scale_);

  if (desc.normalize_l2) {
    m.certify_amp_bound();
    const double norm = l2_norm(m);
    if (norm > 0.0)
      for (auto& c : m.coefficients_) c /= norm;
  }
  m.certify_amp_bound();
  return m;
}

double signal_charge(const SignalModel& m, double a, double b) {
  if (!(a <= b)) throw Error(ErrorCode::IntervalInvalid, "signal_charge needs a <= b");
  if (a == b) return 0.0;
  std::vector<double> cuts{a};
  if (m.clip()) {
    for (double c : {m.clip()->lo, m.clip()->hi})
      if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  const double panel = std::isinf(m.atom_width()) ? std::max(b - a, 1e-300) : 0.25 * m.atom_width();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += quad::integrate(RealFn([&](double x) { return std::abs(m(x)); }), cuts[i], cuts[i + 1], panel, 1e-10);
  return total;
}

double l2_norm(const SignalModel& m) {
  if (m.has_spectrum()) {
    double span = m.nodes().empty() ? 1.0 : std::max(1.0, m.nodes().back() - m.nodes().front());
    double cut = 0.0;
    switch (m.generator().family) {
      case GeneratorFamily::Fejer: cut = 1.0 / m.scale(); break;
      case GeneratorFamily::Gaussian: cut = 7.0 / m.scale(); break;
      case GeneratorFamily::BSpline: cut = 200.0 / m.scale(); break;
    }
    const double panel = 1.0 / (4.0 * span + 4.0 / m.scale());
    const double e = quad::gauss_panels(RealFn([&](double xi) { return std::norm(m.spectrum(xi)); }), -cut, cut, panel, 16);
    return std::sqrt(e);
  }
  const Interval s = m.effective_support(1e-10);
  if (!std::isfinite(s.lo) || !std::isfinite(s.hi)) return kInf;
  const double panel = std::isinf(m.atom_width()) ? std::max(s.length(), 1e-300) : 0.25 * m.atom_width();
  return std::sqrt(quad::integrate(RealFn([&](double x) { return std::norm(m(x)); }), s.lo, s.hi, panel, 1e-10));
}

ChargePair past_future_charge(const SignalModel& m, double alpha0, double delta_alpha, double t_last) {
  const double alpha_min = alpha0 - delta_alpha;
  if (!(alpha_min > 0.0) || delta_alpha < 0.0)
    throw Error(ErrorCode::LeakageSpecInvalid, "need alpha0 - delta_alpha > 0");
  const double safe = m.amp_bound() / alpha_min;
  if (m.amp_bound() == 0.0) return {};

  std::vector<double> alphas;
  if (delta_alpha == 0.0) {
    alphas = {alpha0};
  } else {
    for (int i = 0; i <= 10; ++i) alphas.push_back(alpha_min + 2.0 * delta_alpha * i / 10.0);
  }

  const Interval support = m.effective_support(1e-14);
  const double width = m.atom_width();
  double node_lo = 0.0, node_hi = t_last;
  if (!m.nodes().empty()) node_lo = m.nodes().front(), node_hi = std::max(t_last, m.nodes().back());

  double past = 0.0, future = 0.0;
  for (double a : alphas) {
    const double w = std::isinf(width) ? 1.0 / a : width;
    const double h = std::min(w / 8.0, 0.05 / a);

    // Past: sup over t <= 0 of |F_a(t)|, F_a propagated along a grid ending at 0.
    if (support.lo < 0.0) {
      const double start = std::max(std::min(node_lo, 0.0) - 40.0 * w - 40.0 / a, support.lo - 40.0 / a);
      cplx F{};
      {
        const double lower = start - 40.0 / a;
        F = quad::gauss_panels(
            [&](double x) { return m(x) * std::exp(a * (x - start)); }, lower, start, std::min(w / 4.0, 0.25 / a), 8);
      }
      past = std::max(past, std::abs(F));
      const auto steps = static_cast<long>(std::ceil(-start / h));
      const double hh = -start / static_cast<double>(steps);
      double t = start;
      for (long i = 0; i < steps; ++i) {
        const double next = (i + 1 == steps) ? 0.0 : t + hh;
        F = F * std::exp(-a * (next - t)) + leaky_cell(m, a, t, next);
        t = next;
        past = std::max(past, std::abs(F));
      }
    }

    // Future: sup over t > t_last of |int_{t_last}^t f e^{a (x - t)}|.
    {
      double content_hi = std::isinf(width) ? (std::isfinite(support.hi) ? support.hi : t_last) : node_hi + 40.0 * w;
      if (m.clip()) content_hi = std::min(content_hi, m.clip()->hi);
      const double stop = std::max(t_last, content_hi) + 40.0 / a;
      const auto steps = static_cast<long>(std::ceil((stop - t_last) / h));
      const double hh = (stop - t_last) / static_cast<double>(steps);
      cplx y{};
      double t = t_last;
      for (long i = 0; i < steps; ++i) {
        const double next = t + hh;
        y = y * std::exp(-a * hh) + leaky_cell(m, a, t, next);
        t = next;
        future = std::max(future, std::abs(y));
      }
    }
  }
  return {std::min(1.05 * past, safe), std::min(1.05 * future, safe)};
}

}  // namespace ifcodec
