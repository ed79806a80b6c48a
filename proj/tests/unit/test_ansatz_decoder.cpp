#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ifcodec/ansatz_decoder.hpp"
#include "ifcodec/error.hpp"
#include "ifcodec/experiment.hpp"
#include "support/shared.hpp"

using namespace ifcodec;
using testing::shared_kernel;

namespace {

SpikeTrain make_train(std::vector<double> times, std::vector<cplx> phases, double theta, double T) {
  SpikeTrain tr;
  tr.times = std::move(times);
  tr.phases = std::move(phases);
  tr.config = SamplerConfig{theta, 1.0, T, 0.0};
  return tr;
}

}  // namespace

TEST_CASE("potential basics") {
  const SpikeTrain one = make_train({0.0}, {1.0}, 1.0, 5.0);
  const Potential u(one, 1.0);
  CHECK(u(-0.1) == cplx{});
  CHECK(std::abs(u(std::numbers::ln2) - 0.5) < 1e-15);

  UniformSource rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<std::size_t>(1 + rng.next() * 8);
    const SpikeTrain tr = random_train(rng, n, rng.uniform(0.01, 1.0), 6.0);
    const double a = rng.uniform(0.2, 3.0);
    const Potential p(tr, a);
    double sup = 0.0;
    for (double t = -1.0; t <= 7.0; t += 1e-3) sup = std::max(sup, std::abs(p(t)));
    for (double t : tr.times) sup = std::max(sup, std::abs(p(t)));
    CHECK(sup <= static_cast<double>(n) * tr.config.theta * (1 + 1e-15));
    CHECK(p.sup_norm() == doctest::Approx(sup).epsilon(1e-12));

    // u(t) e^{a t} is constant on each inter-spike interval.
    for (std::size_t j = 0; j < n; ++j) {
      const double lo = tr.times[j], hi = j + 1 < n ? tr.times[j + 1] : 6.0;
      const double s = lo + 0.3 * (hi - lo), e = lo + 0.9 * (hi - lo);
      const cplx a1 = p(s) * std::exp(a * s), a2 = p(e) * std::exp(a * e);
      CHECK(std::abs(a1 - a2) <= 1e-12 * std::abs(a1));
    }
  }
}

TEST_CASE("potential mass in closed form") {
  UniformSource rng(2);
  const SpikeTrain tr = random_train(rng, 6, 0.3, 5.0);
  const Potential p(tr, 1.3);
  for (double x : {-1.0, 0.7, 2.2, 4.9, 9.0}) {
    const double ref = tr.times.front() < x
                           ? quad::integrate(RealFn([&](double y) { return std::abs(p(y)); }), tr.times.front(), x,
                                             0.01, 1e-12)
                           : 0.0;
    CHECK(p.mass_before(x) == doctest::Approx(ref).epsilon(1e-9));
  }
  CHECK(p.total_mass() == doctest::Approx(p.mass_before(1e3)).epsilon(1e-12));
}

TEST_CASE("leaky primitive") {
  CHECK(leaky_primitive(make_constant_signal(0.0), 1.0, 3.0) == cplx{});
  const SignalModel one = make_constant_signal(1.0, Interval{0.0, 1000.0});
  for (double a : {0.5, 1.0, 2.0})
    CHECK(std::abs(leaky_primitive(one, a, 40.0) - 1.0 / a) < 1e-8);

  SUBCASE("agrees with the potential at firing times of causal encodes") {
    UniformSource rng(4);
    for (auto fam : {GeneratorFamily::Gaussian, GeneratorFamily::Fejer, GeneratorFamily::BSpline}) {
      const SignalModel m = random_model(rng, fam, 8.0, true);
      const double theta = 0.02, a = 1.3;
      const SpikeTrain tr = encode(m, SamplerConfig{theta, a, 8.0, 0.0});
      const Potential u(tr, a);
      for (double t : tr.times) CHECK(std::abs(leaky_primitive(m, a, t) - u(t)) <= 1e-6 * theta);
    }
  }
  SUBCASE("grid scan matches pointwise evaluation") {
    UniformSource rng(6);
    const SignalModel m = random_model(rng, GeneratorFamily::Gaussian, 8.0);
    std::vector<double> grid;
    for (double t = -2.0; t <= 9.0; t += 0.05) grid.push_back(t);
    const auto a = leaky_primitive_on_grid(m, 0.8, grid);
    const auto b = leaky_primitive_on_grid_serial(m, 0.8, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
  }
}

TEST_CASE("step-3 inequality on clean encodes") {
  UniformSource rng(10);
  for (int i = 0; i < 6; ++i) {
    const SignalModel m = random_model(rng, i % 2 ? GeneratorFamily::Fejer : GeneratorFamily::Gaussian, 8.0, true);
    const double theta = 0.05, a = rng.uniform(0.5, 2.0);
    const SpikeTrain tr = encode(m, SamplerConfig{theta, a, 8.0, 0.0});
    std::vector<double> grid;
    for (double t = 0.0; t <= 8.0; t += 0.01) grid.push_back(t);
    const auto F = leaky_primitive_on_grid(m, a, grid);
    const Potential u(tr, a);
    for (std::size_t g = 0; g < grid.size(); ++g) CHECK(std::abs(u(grid[g]) - F[g]) <= 2.0 * theta + 1e-6);
  }
}

TEST_CASE("inference window") {
  const double th = 0.01;
  InferenceWindow w = inference_window(th, 4.0, 1.0, 0.0, th, th, 10.0);
  CHECK(w.sigma == 0.0);
  CHECK(w.T1 == 0.0);
  CHECK(w.T2 == 10.0);

  w = inference_window(th, 16.0, 1.5, 0.5, std::exp(2.0) * th, 0.0, 10.0);
  CHECK(w.sigma == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(w.T1 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(w.T2 == doctest::Approx(9.0).epsilon(1e-14));

  w = inference_window(th, 1.0, 1.0, 0.0, 0.1 * th, 0.5 * th, 3.0);
  CHECK(w.sigma == 0.0);

  w = inference_window(th, 1.0, 1.0, 0.0, 1e6 * th, 0.0, 3.0);
  CHECK(w.empty());
  CHECK_THROWS_AS(window_grid(w, 32.0), Error);
  CHECK_THROWS_AS(inference_window(th, 1.0, 1.0, 1.0, 0.0, 0.0, 3.0), Error);
}

TEST_CASE("decoding an empty train gives zero") {
  const SpikeTrain empty = make_train({}, {}, 0.1, 5.0);
  const std::vector<double> grid = window_grid(InferenceWindow{0.0, 5.0, 0.0}, 8.0);
  const ReconstructedSignal r = decode(empty, 1.0, 2.0, shared_kernel(), grid);
  for (const auto& v : r.values) CHECK(v == cplx{});
}

TEST_CASE("single spike against a dense trapezoid convolution") {
  const CutoffKernel& k = shared_kernel();
  const double theta = 0.2, a0 = 1.0, t1 = 1.0;
  const cplx q = std::polar(1.0, 0.4);
  const SpikeTrain tr = make_train({t1}, {q}, theta, 5.0);
  const AnsatzDecoder dec(tr, a0, 1.0, k);
  for (double t : {0.0, 0.8, 1.0, 1.7, 3.0}) {
    const double h = 2e-4, end = t1 + 30.0;
    double acc = 0.0;
    const auto steps = static_cast<long>((end - t1) / h);
    for (long i = 0; i <= steps; ++i) {
      const double x = t1 + h * static_cast<double>(i);
      const double wgt = (i == 0 || i == steps) ? 0.5 : 1.0;
      acc += wgt * eval_decoder_kernel(k, 1.0, a0, t - x) * std::exp(a0 * (t1 - x));
    }
    CHECK(std::abs(dec(t) - theta * q * acc * h) <= 1e-6 * theta);
  }
}

TEST_CASE("rescaling identity") {
  const CutoffKernel& k = shared_kernel();
  UniformSource rng(12);
  const SpikeTrain tr = random_train(rng, 7, 0.1, 6.0);
  const double om = 3.0, a0 = 1.2;
  SpikeTrain scaled = tr;
  for (auto& t : scaled.times) t *= om;
  scaled.config.T *= om;
  const AnsatzDecoder big(tr, a0, om, k), unit(scaled, a0 / om, 1.0, k);
  for (double x = 0.3; x < 6.0; x += 0.41) {
    const cplx lhs = om * unit(om * x), rhs = big(x);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("decoder properties") {
  const CutoffKernel& k = shared_kernel();
  UniformSource rng(13);
  const SpikeTrain tr = random_train(rng, 9, 0.05, 8.0);
  const double a0 = 1.0, om = 2.0;
  std::vector<double> grid;
  for (double t = 0.0; t <= 8.0; t += 0.093) grid.push_back(t);

  const AnsatzDecoder dec(tr, a0, om, k);
  const ReconstructedSignal par = dec.decode(grid), ser = dec.decode_serial(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(par.values[i] == ser.values[i]);

  SUBCASE("negated phases negate the output") {
    SpikeTrain neg = tr;
    for (auto& q : neg.phases) q = -q;
    const ReconstructedSignal r = AnsatzDecoder(neg, a0, om, k).decode(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(r.values[i] + par.values[i]) <= 1e-15 * (1 + std::abs(par.values[i])));
  }
  SUBCASE("halving the panel width") {
    DecoderOptions fine;
    fine.panel_width = 0.125;
    const ReconstructedSignal r = AnsatzDecoder(tr, a0, om, k, fine).decode(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(r.values[i] - par.values[i]) < 1e-4 * tr.config.theta);
  }
  SUBCASE("compact form equals the double sum") {
    for (std::size_t i = 0; i < grid.size(); i += 9)
      CHECK(std::abs(decode_reference_point(tr, a0, om, k, grid[i]) - par.values[i]) < 1e-9 * tr.config.theta);
  }
  SUBCASE("flags stay small with the full table") {
    for (double f : par.truncation_flag) CHECK(f <= 1e-3 * tr.config.theta);
  }
}

TEST_CASE("short kernel table is rejected") {
  UniformSource rng(14);
  const SpikeTrain tr = random_train(rng, 40, 0.1, 30.0);
  const CutoffKernel short_k = shared_kernel().truncated(2.0);
  const std::vector<double> grid{15.0};
  try {
    AnsatzDecoder(tr, 1.0, 1.0, short_k).decode(grid);
    FAIL("expected KernelRadiusTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KernelRadiusTooSmall);
  }
}
