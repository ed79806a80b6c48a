#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ifcodec/bounds.hpp"
#include "ifcodec/error.hpp"
#include "ifcodec/metrics.hpp"
#include "ifcodec/perturbation.hpp"
#include "support/shared.hpp"

using namespace ifcodec;
using std::numbers::pi;

namespace {

double partial_tail(double M, double s) {
  // sum_{l >= M} (1 + l)^{-s-1}: explicit terms, then an integral tail that is exact to O(L^{-s-2}).
  const long L = 2000000;
  double acc = 0.0;
  for (long l = static_cast<long>(M); l < L; ++l) acc += std::pow(1.0 + static_cast<double>(l), -s - 1.0);
  const double x = 1.0 + static_cast<double>(L);
  return acc + std::pow(x - 0.5, -s) / s;
}

}  // namespace

TEST_CASE("main bracket") {
  CHECK(thm_main_bracket(0.01, 4.0, 1.5, 0.0, 0.0, 12.0).bracket == doctest::Approx(0.01 * 5.5).epsilon(1e-14));
  const double v = thm_main_bracket(0.01, 10.0, 1.0, 0.1, 0.02, 5.0).bracket;
  CHECK(v == doctest::Approx(0.01 * 11.1 * (1.0 + 0.5 / 0.9 + 0.02 * 51.0)).epsilon(1e-14));
  CHECK(v == doctest::Approx(0.28588667).epsilon(1e-7));
  CHECK(v == doctest::Approx(0.2859).epsilon(1e-3));
  CHECK(thm_main_bracket(0.01, 4.0, 1.0, 0.2, 0.0, 1.0).constant_slot == 1.0);
}

TEST_CASE("simplified regime bound") {
  UniformSource rng(3);
  for (int i = 0; i < 200; ++i) {
    const double a0 = rng.uniform(0.1, 3.0), da = rng.uniform(0.0, 0.9 * a0);
    const double om = rng.uniform(std::max(1.0, a0 + da), 50.0), th = rng.uniform(1e-4, 1.0);
    const double dt = rng.uniform(0.0, 0.1), n = std::floor(rng.uniform(0.0, 30.0));
    const double inner = 1.0 + n * da / (a0 - da) + dt * (a0 + n * om);
    CHECK(thm_main_bracket(th, om, a0, da, dt, n).bracket <= 2.0 * th * om * inner * (1 + 1e-14));
  }
}

TEST_CASE("brackets are nonnegative and monotone") {
  const double base[] = {0.01, 3.0, 1.0, 0.1, 0.01, 5.0};
  auto eval = [](const double* p) { return thm_main_bracket(p[0], p[1], p[2], p[3], p[4], p[5]).bracket; };
  const double b0 = eval(base);
  CHECK(b0 >= 0.0);
  for (int k : {3, 4, 5}) {
    double p[6];
    std::copy(base, base + 6, p);
    p[k] *= 1.5;
    CHECK(eval(p) >= b0);
  }
  CHECK(theorem2_bracket(0.01, 3.0, 1.0, 0.2, 0.0, 5.0) >= theorem2_bracket(0.01, 3.0, 1.0, 0.1, 0.0, 5.0));
  CHECK(theorem2_bracket(0.01, 3.0, 1.0, 0.1, 0.02, 5.0) >= theorem2_bracket(0.01, 3.0, 1.0, 0.1, 0.01, 5.0));
}

TEST_CASE("lemma right-hand sides") {
  CHECK(lemma_leakage_rhs(0.1, 0.0, 0.5, 3.0) == 0.0);
  CHECK(lemma_leakage_rhs(0.1, 0.05, 0.5, 3.0) == doctest::Approx(0.1 * 0.05 * 3.0 / 0.45).epsilon(1e-14));
  CHECK(lemma_leakage_rhs(0.1, 0.05, 0.5, 3.0) == doctest::Approx(0.0333).epsilon(1e-3));
  CHECK(lemma_spikes_rhs(1.0, 1.0, 2.0, 0.0) == 0.0);
  CHECK(lemma_spikes_rhs(1.0, 1.0, 2.0, 0.1) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK_THROWS_AS(lemma_leakage_rhs(0.1, 0.5, 0.5, 3.0), Error);
}

TEST_CASE("two-signal bracket") {
  CHECK(theorem2_bracket(0.01, 10.0, 1.0, 0.0, 0.0, 4.0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(theorem2_bracket(0.01, 10.0, 1.0, 0.0, 0.01, 4.0) == doctest::Approx(0.14).epsilon(1e-14));
  try {
    theorem2_bracket(0.01, 1.0, 1.0, 0.1, 0.0, 4.0);
    FAIL("expected RegimeViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RegimeViolation);
  }
}

TEST_CASE("tail sum bound") {
  CHECK(tail_sum_bound(10.0, 1.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(partial_tail(10.0, 1.0) == doctest::Approx(0.0951653).epsilon(1e-6));
  CHECK(partial_tail(10.0, 1.0) <= 0.1);
  CHECK(tail_sum_bound(1.0, 3.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // sum_{l >= 1} (1 + l)^{-4} = zeta(4) - 1.
  CHECK(partial_tail(1.0, 3.0) == doctest::Approx(std::pow(pi, 4) / 90.0 - 1.0).epsilon(1e-9));
  CHECK(partial_tail(1.0, 3.0) <= 1.0 / 3.0);
  for (double M = 1.0; M < 50.0; M += 1.0) CHECK(tail_sum_bound(M + 1.0, 2.0) < tail_sum_bound(M, 2.0));
}

TEST_CASE("tail sum bound dominates partial sums") {
  for (double s : {0.5, 1.0, 2.0, 3.0}) {
    // Walk M downwards so each partial sum costs one term.
    double acc = partial_tail(100.0, s);
    for (int M = 100; M >= 1; --M) {
      if (M < 100) acc += std::pow(1.0 + M, -s - 1.0);
      CHECK(acc <= tail_sum_bound(M, s));
    }
  }
}

TEST_CASE("shift-invariant bandwidth") {
  const BandwidthCertificate c = sis_bandwidth(1.0, 1.0, 1.0, 1.0, 0.01);
  CHECK(c.threshold == doctest::Approx(200.0).epsilon(1e-14));
  CHECK(c.omega == 200.0);
  CHECK(c.method == CertificateMethod::ShiftInvariant);
  for (double s : {1.0, 2.0, 3.0}) {
    const double a = std::pow(sis_bandwidth(1.0, 0.5, 1.0, s, 0.01).threshold, s);
    const double b = std::pow(sis_bandwidth(1.0, 0.5, 2.0, s, 0.01).threshold, s);
    CHECK(b == doctest::Approx(2.0 * a).epsilon(1e-12));
  }
}

TEST_CASE("Ingham bounds and the free-node constant") {
  const InghamBounds ib = ingham_bounds(2.5);
  CHECK(ib.A == doctest::Approx(pi * pi / 64.0).epsilon(1e-14));
  CHECK(ib.A == doctest::Approx(0.1542).epsilon(1e-3));
  CHECK(ib.B <= 3.0);
  // Both branches apply at delta = 2; the larger A = 3 pi^2 / 64 is kept.
  CHECK(ingham_bounds(2.0).A == doctest::Approx(3.0 * pi * pi / 64.0).epsilon(1e-14));
  CHECK(ingham_bounds(1.5).A == doctest::Approx(pi * pi / 8.0 * (1.25 / 3.375)).epsilon(1e-14));
  for (double d : {2.0, 3.0, 10.0}) CHECK(ingham_bounds(d).B <= 3.0);
  // sqrt(B/A) min(sqrt(delta - 1), 1) stays below the constant.
  for (double d = 1.001; d < 20.0; d *= 1.1) {
    const InghamBounds b = ingham_bounds(d);
    CHECK(std::sqrt(b.B / b.A) * std::min(std::sqrt(d - 1.0), 1.0) <= free_node_constant() * (1 + 1e-12));
  }
  CHECK(free_node_constant() == doctest::Approx(std::sqrt(192.0) / pi));
  try {
    ingham_bounds(1.0);
    FAIL("expected SeparationTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SeparationTooSmall);
  }
  try {
    free_node_bandwidth(0.5, 0.8, 1.0, 3.0, 0.01);
    FAIL("expected SeparationTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SeparationTooSmall);
  }
}

TEST_CASE("free-node bandwidth diverges as separation tends to one") {
  double prev = 0.0;
  for (double d : {2.0, 1.5, 1.1, 1.01, 1.0001, 1.000001}) {
    const double t = free_node_bandwidth(0.5, d, 1.0, 3.0, 0.01).threshold;
    CHECK(t >= prev);
    prev = t;
  }
  CHECK(prev > 10.0 * free_node_bandwidth(0.5, 2.0, 1.0, 3.0, 0.01).threshold);
}

TEST_CASE("certificates validate on conforming models") {
  SUBCASE("Gaussian shift-invariant") {
    SignalDescription d;
    d.kind = SignalKind::ShiftInvariant;
    d.family = GeneratorFamily::Gaussian;
    d.coefficients = {0.5, -0.3, 0.8, 0.2, -0.6};
    d.nodes = {2, 3, 4, 5, 6};
    d.scale = 0.5;
    d.normalize_l2 = true;
    const SignalModel m = build_signal(d);
    BandwidthCertificate c = certify_model(m, CertificateMethod::ShiftInvariant, 0.01);
    validate_certificate(m, c);
    CHECK(c.validated);
    CHECK(c.margin > 0.0);
  }
  SUBCASE("free-node B-spline with delta = 2") {
    SignalDescription d;
    d.kind = SignalKind::FreeNodeSpline;
    d.family = GeneratorFamily::BSpline;
    d.order = 4;
    d.coefficients = {0.5, cplx{0.2, 0.4}, -0.7};
    d.nodes = {0.0, 2.0, 4.0};
    d.normalize_l2 = true;
    const SignalModel m = build_signal(d);
    BandwidthCertificate c = certify_model(m, CertificateMethod::FreeNode, 0.01);
    CHECK(c.delta == 2.0);
    validate_certificate(m, c);
    CHECK(c.validated);
    CHECK(spectral_tail(m, c.omega).total() <= 0.01);
  }
  SUBCASE("Fejer numeric certificate is the support radius") {
    const SignalModel m = testing::fejer_signal(0.25);
    BandwidthCertificate c = certify_model(m, CertificateMethod::NumericTail, 1e-3);
    CHECK(c.omega == 4.0);
    validate_certificate(m, c);
    CHECK(c.tail == 0.0);
  }
  SUBCASE("numeric certificate is the smallest passing integer") {
    const SignalModel m = testing::gaussian_atom(0.0, 0.4);
    const BandwidthCertificate c = certify_model(m, CertificateMethod::NumericTail, 1e-3);
    CHECK(spectral_tail(m, c.omega).total() <= 1e-3);
    if (c.omega > 1.0) CHECK(spectral_tail(m, c.omega - 1.0).total() > 1e-3);
  }
}

TEST_CASE("certificate misuse") {
  const SignalModel g = testing::gaussian_atom(0.0, 1.0, 3.0);
  CHECK_THROWS_AS(certify_model(g, CertificateMethod::ShiftInvariant, 0.01), Error);
  CHECK_THROWS_AS(certify_model(make_constant_signal(1.0), CertificateMethod::NumericTail, 0.01), Error);
  BandwidthCertificate bad;
  bad.omega = 1.0;
  bad.tolerance = 1e-6;
  CHECK_THROWS_AS(validate_certificate(g, bad), Error);
  CHECK_FALSE(bad.validated);
  CHECK(certificate_method_from_string("free_node") == CertificateMethod::FreeNode);
  CHECK_THROWS_AS(certificate_method_from_string("magic"), Error);
}
