#include "ifcodec/perturbation.hpp"

#include <cmath>

#include "ifcodec/error.hpp"
#include "ifcodec/metrics.hpp"

namespace ifcodec {

namespace {

std::vector<double> uniform_jitter(const SpikeTrain& train, const JitterSpec& spec) {
  const std::size_t n = train.size();
  const double T = train.config.T;
  const double gap = 2.0 * train.config.effective_time_tol();
  UniformSource rng(spec.seed);
  std::vector<double> offset(n);
  double total = 0.0;
  for (auto& o : offset) {
    o = rng.uniform(-1.0, 1.0);
    total += std::abs(o);
  }
  if (total == 0.0) return train.times;
  for (auto& o : offset) o *= spec.budget / total;

  for (int round = 0; round < 64; ++round) {
    bool clean = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = train.times[i] + offset[i];
      if (t < 0.0 || t > T) {
        offset[i] *= 0.5;
        clean = false;
      }
      if (i > 0 && t - (train.times[i - 1] + offset[i - 1]) < gap) {
        offset[i] *= 0.5;
        offset[i - 1] *= 0.5;
        clean = false;
      }
    }
    if (clean) {
      std::vector<double> out(n);
      for (std::size_t i = 0; i < n; ++i) out[i] = train.times[i] + offset[i];
      return out;
    }
  }
  throw Error(ErrorCode::OrderUnrecoverable, "jittered train cannot keep strict order inside [0, T]");
}

std::vector<double> grid_snap(const SpikeTrain& train, double step) {
  std::vector<double> out;
  out.reserve(train.size());
  for (double t : train.times) {
    double s = std::round(t / step) * step;
    if (s > train.config.T) s -= step;
    if (s < 0.0) s = 0.0;
    if (!out.empty() && !(s > out.back()))
      throw Error(ErrorCode::OrderUnrecoverable, "grid snapping merges two spikes");
    out.push_back(s);
  }
  return out;
}

}  // namespace

JitterResult jitter_spikes(const SpikeTrain& train, const JitterSpec& spec) {
  JitterResult r;
  r.train = train;
  switch (spec.mode) {
    case JitterMode::UniformJitter:
      if (!(spec.budget >= 0.0)) throw Error(ErrorCode::ConfigInvalid, "jitter budget must be >= 0");
      if (spec.budget == 0.0) return r;
      if (train.empty()) throw Error(ErrorCode::ConfigInvalid, "cannot jitter an empty train");
      r.train.times = uniform_jitter(train, spec);
      break;
    case JitterMode::GridSnap:
      if (!(spec.grid_step > 0.0)) throw Error(ErrorCode::ConfigInvalid, "grid snapping needs grid_step > 0");
      r.train.times = grid_snap(train, spec.grid_step);
      break;
  }
  r.actual_delta_t = spike_uncertainty(train.times, r.train.times);
  return r;
}

double leakage_draw(double alpha0, double delta_alpha, std::uint64_t seed) {
  if (!(alpha0 - delta_alpha > 0.0) || delta_alpha < 0.0)
    throw Error(ErrorCode::LeakageSpecInvalid, "need 0 <= delta_alpha < alpha0");
  if (delta_alpha == 0.0) return alpha0;
  UniformSource rng(seed);
  return rng.uniform(alpha0 - delta_alpha, alpha0 + delta_alpha);
}

}  // namespace ifcodec
