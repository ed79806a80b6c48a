#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifcodec/ansatz_decoder.hpp"
#include "ifcodec/bounds.hpp"
#include "ifcodec/cutoff_kernel.hpp"
#include "ifcodec/if_encoder.hpp"
#include "ifcodec/perturbation.hpp"
#include "ifcodec/signal_models.hpp"

namespace ifcodec {

struct Uncertainty {
  double alpha0 = 1.0;
  double delta_alpha = 0.0;
  double delta_t = 0.0;  // jitter budget
  JitterMode jitter_mode = JitterMode::UniformJitter;
  double grid_step = 0.0;
  std::optional<double> delta_past;
  std::optional<double> delta_future;
};

struct KernelSettings {
  double radius = 50.0;
  double grid_step = 1e-3;
  std::filesystem::path cache;
};

struct OutputPaths {
  std::filesystem::path spikes;
  std::filesystem::path reconstruction;
  std::filesystem::path report;
  std::filesystem::path certificate;
  std::filesystem::path sweep;
};

struct SweepAxes {
  std::vector<double> theta;
  std::vector<double> omega;
  std::vector<double> delta_alpha;
  std::vector<double> delta_t;
};

struct Manifest {
  std::filesystem::path base_dir;
  std::optional<SignalDescription> signal;
  SamplerConfig sampler;
  bool alpha_given = false;
  Uncertainty uncertainty;
  std::optional<double> omega;
  std::filesystem::path omega_certificate;
  KernelSettings kernel;
  std::string certify_method = "numeric_tail";
  std::optional<double> certify_theta;
  int lemma_trials = 200;
  std::filesystem::path spikes_in;
  SweepAxes sweep;
  std::uint64_t seed = 0;
  double samples_per_unit = 32.0;  // per 1/Omega
  OutputPaths outputs;
};

/// Parses a manifest; relative paths resolve against the manifest's directory.
Manifest read_manifest(const std::filesystem::path& path);
Manifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Omega from the manifest: explicit value or the certificate file it points to.
double resolve_omega(const Manifest& m);

struct CellParams {
  double theta = 0.0;
  double omega = 0.0;
  double alpha0 = 1.0;
  double delta_alpha = 0.0;
  double delta_t = 0.0;
  JitterMode jitter_mode = JitterMode::UniformJitter;
  double grid_step = 0.0;
  std::optional<double> alpha_true;  // drawn from [alpha0 - dalpha, alpha0 + dalpha] when absent
  std::optional<double> delta_past;
  std::optional<double> delta_future;
  double T = 1.0;
  double time_tol = 0.0;
  std::uint64_t seed = 0;
  double samples_per_unit = 32.0;
};

struct CellResult {
  SpikeTrain clean;
  SpikeTrain perturbed;
  double alpha_true = 0.0;
  double actual_delta_t = 0.0;
  ChargePair charges;
  InferenceWindow window;
  ReconstructedSignal reconstruction;
  double sup_error = 0.0;
  double argmax_t = 0.0;
  double bracket = 0.0;
  double ratio = 0.0;
};

/// encode -> perturb -> charges -> window -> decode -> sup error and bracket.
/// When `spikes` is given it replaces the encode step.
CellResult run_cell(const SignalModel& m, const CellParams& p, const CutoffKernel& kernel,
                    const SpikeTrain* spikes = nullptr);

/// Deterministic sweep over the Cartesian product of the axes; rows in axis order
/// (theta outermost). Cells run in parallel.
std::string run_sweep(const SignalModel& m, const Manifest& man, const CutoffKernel& kernel);

struct LemmaReport {
  int trials = 0;
  int leakage_violations = 0;
  int spikes_violations = 0;
  int step3_violations = 0;
  double leakage_worst_ratio = 0.0;  // lhs / rhs
  double spikes_worst_ratio = 0.0;
  double step3_worst_ratio = 0.0;    // sup |u - F| / (2 theta)
  bool passed() const { return leakage_violations == 0 && spikes_violations == 0 && step3_violations == 0; }
};

LemmaReport verify_lemmas(int trials, std::uint64_t seed);

/// Randomized model of the given family on roughly [0, T]. BSpline draws free-node
/// models with separation > 1; `causal` keeps the support inside [0, inf).
SignalModel random_model(UniformSource& rng, GeneratorFamily family, double T, bool causal = false);

/// Random train with n spikes in [0, T] and random unit phases.
SpikeTrain random_train(UniformSource& rng, std::size_t n, double theta, double T);

namespace cli {
/// Entry point of the ifcodec tool. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
}  // namespace cli

}  // namespace ifcodec
