#pragma once

// Right-hand sides of the reconstruction and bandwidth estimates. Absolute
// constants are left at 1 and reported separately so experiments can fit them.

#include <string>

#include "ifcodec/signal_models.hpp"

namespace ifcodec {

struct BoundInputs {
  double theta = 0.0;
  double omega = 0.0;
  double alpha0 = 0.0;
  double delta_alpha = 0.0;
  double delta_t = 0.0;
  double n = 0.0;
};

struct BoundReport {
  double bracket = 0.0;
  double constant_slot = 1.0;
  BoundInputs inputs;
};

/// theta (alpha0 + dalpha + Omega) [1 + n dalpha/(alpha0 - dalpha) + dt (alpha0 + n Omega)]
/// for Omega >= 1, and theta {1 + (...)[...]} below.
BoundReport thm_main_bracket(double theta, double omega, double alpha0, double delta_alpha, double delta_t,
                             double n);

/// theta dalpha n / (alpha0 - dalpha).
double lemma_leakage_rhs(double theta, double delta_alpha, double alpha0, double n);

/// dt theta (alpha + 4 n).
double lemma_spikes_rhs(double theta, double alpha, double n, double delta_t);

/// theta Omega [1 + n dalpha/(alpha0 - dalpha) + dt n Omega]; requires alpha0 + dalpha <= Omega.
double theorem2_bracket(double theta, double omega, double alpha0, double delta_alpha, double delta_t, double n);

/// (1/s) M^{-s}, an upper bound for sum_{l >= M} (1 + l)^{-s-1}.
double tail_sum_bound(double M, double s);

enum class CertificateMethod { ShiftInvariant, FreeNode, NumericTail };
std::string to_string(CertificateMethod m);
CertificateMethod certificate_method_from_string(const std::string& s);

struct BandwidthCertificate {
  double omega = 1.0;
  double tolerance = 0.0;
  CertificateMethod method = CertificateMethod::NumericTail;
  // Inputs of the formula that produced omega. Unused fields stay 0.
  double N = 0.0;
  double riesz_A = 0.0;
  double ingham_A = 0.0;
  double ingham_B = 0.0;
  double D = 0.0;
  double s = 0.0;
  double tau = 0.0;
  double delta = 0.0;
  double threshold = 0.0;  // the lower bound that floor(Omega) must reach
  // Filled by validate_certificate.
  bool validated = false;
  double tail = 0.0;
  double tail_remainder = 0.0;
  double margin = 0.0;
};

/// Smallest integer Omega >= 1 with floor(Omega) >= (sqrt(N/A) 2D/(s theta))^{1/s}.
BandwidthCertificate sis_bandwidth(double N, double A, double D, double s, double theta);

/// Ingham frame bounds for nodes with separation delta > 1.
struct InghamBounds {
  double A;
  double B;
};
InghamBounds ingham_bounds(double delta);

/// sqrt(192)/pi: uniform bound on sqrt(B/A) * min(sqrt(delta - 1), 1).
double free_node_constant();

/// Smallest integer Omega >= 1 with
/// floor(Omega) >= (2 C D / (s tau theta min(sqrt(delta-1), 1)))^{1/s}, C = free_node_constant().
BandwidthCertificate free_node_bandwidth(double tau, double delta, double D, double s, double theta);

/// Certificate for a concrete model: shift-invariant and free-node methods use
/// the generator data of the model (and require ||f||_2 <= 1); the numeric method
/// returns the spectral support radius for the Fejer family and otherwise the
/// smallest integer Omega >= 1 whose numeric tail is <= theta.
BandwidthCertificate certify_model(const SignalModel& m, CertificateMethod method, double theta);

/// Computes the spectral tail at the issued Omega; throws CertificateInvalid
/// when it exceeds the tolerance.
void validate_certificate(const SignalModel& m, BandwidthCertificate& cert);

}  // namespace ifcodec
