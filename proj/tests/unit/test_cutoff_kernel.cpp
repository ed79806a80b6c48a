#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "ifcodec/cutoff_kernel.hpp"
#include "ifcodec/error.hpp"
#include "support/shared.hpp"

using namespace ifcodec;
using testing::shared_kernel;

TEST_CASE("psi(0) = 3 and unit mass") {
  const CutoffKernel& k = shared_kernel();
  CHECK(std::abs(k.psi(0.0) - 3.0) < 1e-6);
  CHECK(k.dpsi(0.0) == 0.0);
  CHECK(std::abs(quad::trapezoid(k.psi_table(), k.grid_step()) - 1.0) < 1e-6);
}

TEST_CASE("spectrum of the tabulated cut-off") {
  const CutoffKernel& k = shared_kernel();
  CHECK(std::abs(cutoff_spectrum(k, 0.5) - 1.0) < 1e-6);
  CHECK(std::abs(cutoff_spectrum(k, 2.5)) < 1e-6);
  CHECK(std::abs(cutoff_spectrum(k, 1.5)) <= 1.0 + 1e-6);
}

TEST_CASE("fresh kernel passes every check") {
  const CutoffReport r = verify_cutoff(shared_kernel());
  CHECK(r.decay_ok);
  CHECK(r.flatness_ok);
  CHECK(r.support_ok);
  CHECK(r.bounded_ok);
  CHECK(r.evenness_ok);
  CHECK(std::isfinite(r.decay_C));
  CHECK(r.passed());
}

TEST_CASE("truncated table loses flatness, keeps decay") {
  const CutoffReport r = verify_cutoff(shared_kernel().truncated(5.0));
  CHECK(r.decay_ok);
  CHECK_FALSE(r.flatness_ok);
  CHECK(r.worst_flatness > 1e-6);
}

TEST_CASE("evenness on symmetric table points") {
  const CutoffKernel& k = shared_kernel();
  const std::size_t h = k.half_count();
  for (std::size_t i = 1; i <= h; i += 997) {
    CHECK(k.psi_table()[h + i] == k.psi_table()[h - i]);
    CHECK(k.dpsi_table()[h + i] == -k.dpsi_table()[h - i]);
  }
  for (double x = 0.0123; x < 40.0; x += 1.77) {
    CHECK(k.psi(x) == doctest::Approx(k.psi(-x)).epsilon(1e-12));
    CHECK(k.dpsi(x) == doctest::Approx(-k.dpsi(-x)).epsilon(1e-12));
  }
}

TEST_CASE("interpolation agrees with direct evaluation") {
  const CutoffKernel& k = shared_kernel();
  for (double x : {0.00037, 0.4321, 1.2345, 7.777, 23.4567}) {
    const BumpTransform b = bump_transform(x, 1000);
    const double window = std::sin(3.0 * std::numbers::pi * x) / (std::numbers::pi * x);
    CHECK(std::abs(k.psi(x) - b.value * window) < 1e-9);
  }
}

TEST_CASE("decoder kernel") {
  const CutoffKernel& k = shared_kernel();
  SUBCASE("value at the origin") {
    for (double a0 : {0.5, 1.0, 2.0}) CHECK(eval_decoder_kernel(k, 1.0, a0, 0.0) == doctest::Approx(3.0 * a0).epsilon(1e-6));
  }
  SUBCASE("omega scaling") {
    // K_{Omega, a}(t) = Omega^2 K_{1, a/Omega}(Omega t).
    const double om = 4.0, a0 = 1.5;
    for (double t = -3.0; t <= 3.0; t += 0.173)
      CHECK(eval_decoder_kernel(k, om, a0, t) ==
            doctest::Approx(om * om * eval_decoder_kernel(k, 1.0, a0 / om, om * t)).epsilon(1e-12));
  }
  SUBCASE("L1 mass") {
    for (double a0 : {0.5, 1.0, 3.0}) {
      double l1 = 0.0;
      const auto& p = k.psi_table();
      const auto& d = k.dpsi_table();
      for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(a0 * p[i] + d[i]) * k.grid_step();
      CHECK(l1 <= 4.0 * k.decay_C() * (a0 + 1.0));
    }
  }
  SUBCASE("outside the table") {
    bool trunc = false;
    CHECK(eval_decoder_kernel(k, 1.0, 1.0, 60.0, &trunc) == 0.0);
    CHECK(trunc);
  }
}

TEST_CASE("cache round trip") {
  const auto dir = testing::scratch_dir("kernel");
  const CutoffKernel& k = shared_kernel();
  k.save(dir / "k.bin");
  CHECK(CutoffKernel::load(dir / "k.bin") == k);
  CHECK(load_or_build_cutoff(dir / "k.bin", 50.0, 1e-3) == k);
  CHECK_THROWS_AS(CutoffKernel::load(dir / "missing.bin"), Error);
  std::ofstream(dir / "bad.bin") << "nope";
  CHECK_THROWS_AS(CutoffKernel::load(dir / "bad.bin"), Error);
}

TEST_CASE("build arguments") {
  CHECK_THROWS_AS(build_cutoff(10.0, 1e-3), Error);
  CHECK_THROWS_AS(build_cutoff(50.0, 1e-2), Error);
  CHECK_THROWS_AS(bump_transform(1.0, 4), Error);
}
