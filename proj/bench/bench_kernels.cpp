// Serial reference vs OpenMP kernels. Usage: bench_kernels [threads]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "ifcodec/ansatz_decoder.hpp"
#include "ifcodec/cutoff_kernel.hpp"
#include "ifcodec/experiment.hpp"

using namespace ifcodec;

namespace {

double seconds(const std::function<void()>& fn, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-26s %10.4f %10.4f %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) omp_set_num_threads(std::atoi(argv[1]));
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-26s %10s %10s %9s\n", "kernel", "serial[s]", "omp[s]", "speedup");

  CutoffKernel k;
  const double ts = seconds([] { build_cutoff_serial(50.0, 1e-3); }, 1);
  const double tp = seconds([&] { k = build_cutoff(50.0, 1e-3); }, 1);
  row("cutoff table fill", ts, tp);

  UniformSource rng(1);
  const SignalModel m = random_model(rng, GeneratorFamily::Fejer, 40.0);
  const SpikeTrain tr = encode(m, SamplerConfig{1e-3, 1.0, 40.0, 0.0});
  const AnsatzDecoder dec(tr, 1.0, 4.0, k);
  std::vector<double> grid;
  for (double t = 0.0; t <= 40.0; t += 1.0 / 128.0) grid.push_back(t);
  row("decode (n spikes, grid)", seconds([&] { dec.decode_serial(grid); }), seconds([&] { dec.decode(grid); }));

  std::vector<double> fine;
  for (double t = 0.0; t <= 40.0; t += 0.05) fine.push_back(t);
  row("leaky primitive on grid", seconds([&] { leaky_primitive_on_grid_serial(m, 1.0, fine); }),
      seconds([&] { leaky_primitive_on_grid(m, 1.0, fine); }));

  std::printf("spikes: %zu, decode grid: %zu, primitive grid: %zu\n", tr.size(), grid.size(), fine.size());
  return 0;
}
