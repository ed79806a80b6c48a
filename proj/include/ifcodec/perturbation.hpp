#pragma once

#include <cstdint>
#include <random>

#include "ifcodec/if_encoder.hpp"

namespace ifcodec {

enum class JitterMode { UniformJitter, GridSnap };

struct JitterSpec {
  JitterMode mode = JitterMode::UniformJitter;
  double budget = 0.0;     // target total displacement (UniformJitter)
  double grid_step = 0.0;  // GridSnap resolution
  std::uint64_t seed = 0;
};

struct JitterResult {
  SpikeTrain train;
  double actual_delta_t = 0.0;
};

/// Perturbs firing times; phases are unchanged. Uniform jitter scales i.i.d.
/// offsets so that sum |offset| = budget and then shrinks any offset that would
/// break strict order (gap 2 time_tol) or leave [0, T].
JitterResult jitter_spikes(const SpikeTrain& train, const JitterSpec& spec);

/// Reproducible uniform draw from [alpha0 - dalpha, alpha0 + dalpha].
double leakage_draw(double alpha0, double delta_alpha, std::uint64_t seed);

/// Uniform double in [0, 1) from the top 53 bits of std::mt19937_64.
/// Bit-identical across standard libraries, unlike std::uniform_real_distribution.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ifcodec
