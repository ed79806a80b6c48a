#include "ifcodec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ifcodec/error.hpp"
#include "ifcodec/metrics.hpp"

namespace ifcodec {

namespace {

constexpr double kPi = std::numbers::pi;

void require_leakage(double alpha0, double delta_alpha) {
  if (!(alpha0 - delta_alpha > 0.0) || delta_alpha < 0.0)
    throw Error(ErrorCode::LeakageSpecInvalid, "need 0 <= delta_alpha < alpha0");
}

double integer_bandwidth(double threshold) {
  if (!std::isfinite(threshold)) throw Error(ErrorCode::CertificateInvalid, "bandwidth threshold is not finite");
  return std::max(1.0, std::ceil(threshold * (1.0 - 1e-14)));
}

}  // namespace

BoundReport thm_main_bracket(double theta, double omega, double alpha0, double delta_alpha, double delta_t,
                             double n) {
  require_leakage(alpha0, delta_alpha);
  if (!(theta > 0.0) || !(omega > 0.0)) throw Error(ErrorCode::ConfigInvalid, "theta and omega must be positive");
  const double inner = 1.0 + n * delta_alpha / (alpha0 - delta_alpha) + delta_t * (alpha0 + n * omega);
  const double outer = alpha0 + delta_alpha + omega;
  BoundReport r;
  r.bracket = omega >= 1.0 ? theta * outer * inner : theta * (1.0 + outer * inner);
  r.inputs = {theta, omega, alpha0, delta_alpha, delta_t, n};
  return r;
}

double lemma_leakage_rhs(double theta, double delta_alpha, double alpha0, double n) {
  require_leakage(alpha0, delta_alpha);
  return theta * delta_alpha * n / (alpha0 - delta_alpha);
}

double lemma_spikes_rhs(double theta, double alpha, double n, double delta_t) {
  return delta_t * theta * (alpha + 4.0 * n);
}

double theorem2_bracket(double theta, double omega, double alpha0, double delta_alpha, double delta_t, double n) {
  require_leakage(alpha0, delta_alpha);
  if (alpha0 + delta_alpha > omega)
    throw Error(ErrorCode::RegimeViolation, "two-signal bound needs alpha0 + delta_alpha <= omega");
  return theta * omega * (1.0 + n * delta_alpha / (alpha0 - delta_alpha) + delta_t * n * omega);
}

double tail_sum_bound(double M, double s) {
  if (!(M >= 1.0) || !(s > 0.0)) throw Error(ErrorCode::ConfigInvalid, "tail_sum_bound needs M >= 1, s > 0");
  return std::pow(M, -s) / s;
}

std::string to_string(CertificateMethod m) {
  switch (m) {
    case CertificateMethod::ShiftInvariant: return "shift_invariant";
    case CertificateMethod::FreeNode: return "free_node";
    case CertificateMethod::NumericTail: return "numeric_tail";
  }
  return "unknown";
}

CertificateMethod certificate_method_from_string(const std::string& s) {
  for (auto m : {CertificateMethod::ShiftInvariant, CertificateMethod::FreeNode, CertificateMethod::NumericTail})
    if (to_string(m) == s) return m;
  throw Error(ErrorCode::ConfigInvalid, "unknown certificate method '" + s + "'");
}

BandwidthCertificate sis_bandwidth(double N, double A, double D, double s, double theta) {
  if (!(N >= 1.0) || !(A > 0.0) || !(D > 0.0) || !(s > 0.0) || !(theta > 0.0))
    throw Error(ErrorCode::ConfigInvalid, "sis_bandwidth needs N >= 1 and positive A, D, s, theta");
  BandwidthCertificate c;
  c.method = CertificateMethod::ShiftInvariant;
  c.tolerance = theta;
  c.N = N;
  c.riesz_A = A;
  c.D = D;
  c.s = s;
  c.threshold = std::pow(std::sqrt(N / A) * 2.0 * D / (s * theta), 1.0 / s);
  c.omega = integer_bandwidth(c.threshold);
  return c;
}

InghamBounds ingham_bounds(double delta) {
  if (!(delta > 1.0)) throw Error(ErrorCode::SeparationTooSmall, "node separation must exceed 1");
  const double B = 2.0 * (delta + 1.0) / delta;
  double A = kPi * kPi / 64.0;
  if (delta <= 2.0) A = std::max(A, kPi * kPi * (delta * delta - 1.0) / (8.0 * delta * delta * delta));
  return {A, B};
}

double free_node_constant() { return std::sqrt(192.0) / kPi; }

BandwidthCertificate free_node_bandwidth(double tau, double delta, double D, double s, double theta) {
  const InghamBounds ib = ingham_bounds(delta);
  if (!(tau > 0.0) || !(D > 0.0) || !(s > 0.0) || !(theta > 0.0))
    throw Error(ErrorCode::ConfigInvalid, "free_node_bandwidth needs positive tau, D, s, theta");
  BandwidthCertificate c;
  c.method = CertificateMethod::FreeNode;
  c.tolerance = theta;
  c.ingham_A = ib.A;
  c.ingham_B = ib.B;
  c.D = D;
  c.s = s;
  c.tau = tau;
  c.delta = delta;
  const double sep = std::min(std::sqrt(delta - 1.0), 1.0);
  c.threshold = std::pow(2.0 * free_node_constant() * D / (s * tau * theta * sep), 1.0 / s);
  c.omega = integer_bandwidth(c.threshold);
  return c;
}

BandwidthCertificate certify_model(const SignalModel& m, CertificateMethod method, double theta) {
  if (!(theta > 0.0)) throw Error(ErrorCode::ConfigInvalid, "certificate tolerance must be positive");
  if (!m.has_spectrum()) throw Error(ErrorCode::CertificateInvalid, "model has no closed-form spectrum");
  const GeneratorSpec& g = m.generator();
  auto require_unit_norm = [&] {
    const double norm = l2_norm(m);
    if (norm > 1.0 + 1e-9)
      throw Error(ErrorCode::CertificateInvalid, "analytic certificates need ||f||_2 <= 1, got " + std::to_string(norm));
  };

  BandwidthCertificate c;
  switch (method) {
    case CertificateMethod::ShiftInvariant: {
      if (m.kind() != SignalKind::ShiftInvariant)
        throw Error(ErrorCode::CertificateInvalid, "shift_invariant certificate needs a shift-invariant model");
      require_unit_norm();
      c = sis_bandwidth(1.0, riesz_lower_bound(g.family, g.order, m.scale()), g.envelope_D, g.envelope_s, theta);
      break;
    }
    case CertificateMethod::FreeNode: {
      if (m.kind() != SignalKind::FreeNodeSpline)
        throw Error(ErrorCode::CertificateInvalid, "free_node certificate needs a free-node model");
      require_unit_norm();
      double delta = m.min_node_gap();
      if (std::isinf(delta)) delta = 2.0;
      if (!(g.floor_tau > 0.0)) throw Error(ErrorCode::CertificateInvalid, "generator spectrum vanishes on [-1/2, 1/2]");
      c = free_node_bandwidth(g.floor_tau, delta, g.envelope_D, g.envelope_s, theta);
      break;
    }
    case CertificateMethod::NumericTail: {
      c.method = CertificateMethod::NumericTail;
      c.tolerance = theta;
      if (g.family == GeneratorFamily::Fejer) {
        c.omega = std::max(1.0, m.spectral_support_radius());
      } else {
        double hi = 1.0;
        while (spectral_tail(m, hi).total() > theta) {
          hi *= 2.0;
          if (hi > 1e7) throw Error(ErrorCode::CertificateInvalid, "spectral tail does not reach the tolerance");
        }
        double lo = std::max(1.0, hi / 2.0);
        if (spectral_tail(m, lo).total() <= theta) hi = lo;
        while (hi - lo > 1.0) {
          const double mid = std::floor(0.5 * (lo + hi));
          if (spectral_tail(m, mid).total() <= theta) hi = mid;
          else lo = mid;
        }
        c.omega = hi;
      }
      c.threshold = c.omega;
      break;
    }
  }
  return c;
}

void validate_certificate(const SignalModel& m, BandwidthCertificate& cert) {
  const SpectralTail tail = spectral_tail(m, cert.omega);
  cert.tail = tail.value;
  cert.tail_remainder = tail.remainder;
  cert.margin = cert.tolerance - tail.total();
  cert.validated = cert.margin >= 0.0;
  if (!cert.validated)
    throw Error(ErrorCode::CertificateInvalid, "spectral tail " + std::to_string(tail.total()) +
                                                   " exceeds tolerance " + std::to_string(cert.tolerance) +
                                                   " at omega " + std::to_string(cert.omega));
}

}  // namespace ifcodec
