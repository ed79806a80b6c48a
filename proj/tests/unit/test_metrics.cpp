#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ifcodec/error.hpp"
#include "ifcodec/experiment.hpp"
#include "ifcodec/metrics.hpp"
#include "support/shared.hpp"

using namespace ifcodec;

namespace {

// Optimal coupling of two uniform measures with n atoms each is a permutation
// (Birkhoff), so the LP optimum is the best permutation cost.
double transport_by_permutations(std::vector<double> a, const std::vector<double>& b) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) c += std::abs(a[i] - b[perm[i]]);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(a.size());
}

ComplexFn indicator(double lo, double hi) {
  return [=](double x) { return cplx(x >= lo && x <= hi ? 1.0 : 0.0); };
}

}  // namespace

TEST_CASE("spike uncertainty and Wasserstein distance") {
  const std::vector<double> a{0.1, 0.5, 0.9}, b{0.2, 0.5, 0.8};
  CHECK(spike_uncertainty(a, a) == 0.0);
  CHECK(spike_uncertainty(a, b) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(spike_uncertainty(std::vector<double>{0.3}, std::vector<double>{1.7}) == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(wasserstein1(a, b) == doctest::Approx(0.2 / 3.0).epsilon(1e-14));
  CHECK(wasserstein1(a, a) == 0.0);
  CHECK_THROWS_AS(spike_uncertainty(a, std::vector<double>{1.0}), Error);
  CHECK_THROWS_AS(wasserstein1(a, std::vector<double>{1.0}), Error);
}

TEST_CASE("Wasserstein equals the permutation optimum") {
  UniformSource rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(1 + rng.next() * 5);
    std::vector<double> a(n), b(n);
    for (auto& x : a) x = rng.uniform(0.0, 10.0);
    for (auto& x : b) x = rng.uniform(0.0, 10.0);
    CHECK(std::abs(wasserstein1(a, b) - transport_by_permutations(a, b)) <= 1e-12);
    // Index pairing can only be worse than the sorted matching.
    CHECK(spike_uncertainty(a, b) >= static_cast<double>(n) * wasserstein1(a, b) - 1e-12);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(spike_uncertainty(a, b) == doctest::Approx(static_cast<double>(n) * wasserstein1(a, b)).epsilon(1e-14));
  }
}

TEST_CASE("amalgam norm") {
  CHECK(amalgam_norm(indicator(0.0, 2.0), Interval{0.0, 2.0}, 1e-3, std::vector<double>{0.0, 2.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(amalgam_norm(indicator(0.0, 0.4), Interval{0.0, 0.4}, 1e-3, std::vector<double>{0.0, 0.4}) ==
        doctest::Approx(0.4).epsilon(1e-12));

  SUBCASE("between one window and the total mass") {
    UniformSource rng(5);
    const SignalModel m = random_model(rng, GeneratorFamily::Gaussian, 6.0);
    const ComplexFn g = [&](double x) { return m(x); };
    const double v = amalgam_norm(g, Interval{-2.0, 8.0}, 1e-3);
    const double total = signal_charge(m, -4.0, 10.0);
    CHECK(v <= total * (1 + 1e-9));
    for (double c = -1.0; c <= 7.0; c += 0.37) CHECK(v >= signal_charge(m, c - 0.5, c + 0.5) * (1 - 1e-9));
  }
  SUBCASE("jittered potentials obey the spike lemma") {
    UniformSource rng(6);
    for (int i = 0; i < 10; ++i) {
      const SpikeTrain tr = random_train(rng, 5, 0.2, 5.0);
      const JitterResult jr = jitter_spikes(tr, JitterSpec{JitterMode::UniformJitter, 0.05, 0.0, 100u + i});
      const Potential a(tr, 1.0), b(jr.train, 1.0);
      std::vector<double> cuts = tr.times;
      cuts.insert(cuts.end(), jr.train.times.begin(), jr.train.times.end());
      const double v = amalgam_norm([&](double t) { return a(t) - b(t); }, Interval{0.0, 10.0}, 1e-3, cuts);
      CHECK(v <= lemma_spikes_rhs(0.2, 1.0, 5.0, jr.actual_delta_t) + 1e-6);
    }
  }
}

TEST_CASE("windowed sup norm") {
  const InferenceWindow w{0.0, 10.0, 0.0};
  const ComplexFn zero = [](double) { return cplx{}; };
  const ComplexFn bump = [](double x) { return cplx(0.7 * std::exp(-std::numbers::pi * (x - 4.3217) * (x - 4.3217))); };
  CHECK(sup_norm_window(bump, bump, w, 16).value == 0.0);
  const WindowedDistance d = sup_norm_window(bump, zero, w, 4);
  CHECK(std::abs(d.value - 0.7) < 1e-8);
  CHECK(std::abs(d.argmax_t - 4.3217) < 1e-4);

  const ComplexFn wiggle = [](double x) { return cplx(std::sin(7.3 * x) * std::exp(-0.1 * x), 0.2 * std::cos(3.1 * x)); };
  double prev = 0.0;
  for (double spu : {4.0, 8.0, 16.0, 32.0, 64.0}) {
    const double v = sup_norm_window(wiggle, zero, w, spu).value;
    CHECK(v >= prev - 1e-9);
    prev = v;
  }
  CHECK_THROWS_AS(sup_norm_window(bump, zero, InferenceWindow{2.0, 1.0, 0.0}, 4), Error);
}

TEST_CASE("spectral tail") {
  SUBCASE("Gaussian atom: erfc(sqrt(pi))") {
    const SpectralTail t = spectral_tail(testing::gaussian_atom(), 1.0);
    CHECK(t.total() == doctest::Approx(std::erfc(std::sqrt(std::numbers::pi))).epsilon(1e-8));
    CHECK(t.total() == doctest::Approx(0.0122).epsilon(1e-2));
  }
  SUBCASE("Fejer atoms vanish beyond the support") {
    const SignalModel m = testing::fejer_signal(0.5);
    CHECK(spectral_tail(m, 2.0).total() == 0.0);
    CHECK(spectral_tail(m, 3.0).total() == 0.0);
    CHECK(spectral_tail(m, 1.0).total() > 0.0);
  }
  SUBCASE("non-increasing in omega") {
    UniformSource rng(9);
    for (auto fam : {GeneratorFamily::Gaussian, GeneratorFamily::Fejer, GeneratorFamily::BSpline}) {
      const SignalModel m = random_model(rng, fam, 6.0);
      double prev = INFINITY;
      for (double om = 0.0; om <= 8.0; om += 0.5) {
        const double v = spectral_tail(m, om).total();
        CHECK(v <= prev * (1 + 1e-9));
        prev = v;
      }
    }
  }
  CHECK_THROWS_AS(spectral_tail(make_constant_signal(1.0), 1.0), Error);
}
