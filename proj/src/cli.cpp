#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <ostream>

#include "ifcodec/error.hpp"
#include "ifcodec/experiment.hpp"
#include "ifcodec/io.hpp"

namespace ifcodec::cli {

using nlohmann::json;

namespace {

SignalModel require_signal(const Manifest& m) {
  if (!m.signal) throw Error(ErrorCode::ConfigInvalid, "manifest has no signal");
  return build_signal(*m.signal);
}

CutoffKernel kernel_for(const Manifest& m) {
  if (!m.kernel.cache.empty()) return load_or_build_cutoff(m.kernel.cache, m.kernel.radius, m.kernel.grid_step);
  return build_cutoff(m.kernel.radius, m.kernel.grid_step);
}

int cmd_encode(const Manifest& man, std::ostream& out) {
  const SignalModel m = require_signal(man);
  const SpikeTrain train = encode(m, man.sampler);
  const auto res = firing_residuals(m, train);
  const double worst = res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
  if (!man.outputs.spikes.empty()) io::write_spike_train(man.outputs.spikes, train);
  else out << io::spike_train_to_string(train);
  out << "n=" << train.size() << '\n'
      << "spike_count_bound=" << io::format_double(spike_count_bound(m, man.sampler)) << '\n'
      << "residual_max=" << io::format_double(worst) << '\n';
  return 0;
}

CellParams params_from(const Manifest& man, double omega) {
  CellParams p;
  p.theta = man.sampler.theta;
  p.omega = omega;
  p.alpha0 = man.uncertainty.alpha0;
  p.delta_alpha = man.uncertainty.delta_alpha;
  p.delta_t = man.uncertainty.delta_t;
  p.jitter_mode = man.uncertainty.jitter_mode;
  p.grid_step = man.uncertainty.grid_step;
  if (man.alpha_given) p.alpha_true = man.sampler.alpha;
  p.delta_past = man.uncertainty.delta_past;
  p.delta_future = man.uncertainty.delta_future;
  p.T = man.sampler.T;
  p.time_tol = man.sampler.time_tol;
  p.seed = man.seed;
  p.samples_per_unit = man.samples_per_unit;
  return p;
}

int cmd_decode(const Manifest& man, std::ostream& out) {
  const std::filesystem::path src = man.spikes_in.empty() ? man.outputs.spikes : man.spikes_in;
  if (src.empty()) throw Error(ErrorCode::ConfigInvalid, "manifest names no spike-train file");
  const SpikeTrain train = io::read_spike_train(src);
  const double omega = resolve_omega(man);
  const CutoffKernel kernel = kernel_for(man);
  CellParams p = params_from(man, omega);
  p.theta = train.config.theta;
  p.T = train.config.T;

  json report;
  ReconstructedSignal rec;
  if (man.signal) {
    const SignalModel m = build_signal(*man.signal);
    const CellResult r = run_cell(m, p, kernel, &train);
    rec = r.reconstruction;
    report = {{"n", r.clean.size()},
              {"delta_t", r.actual_delta_t},
              {"window", {r.window.T1, r.window.T2}},
              {"sigma", r.window.sigma},
              {"delta_past", r.charges.past},
              {"delta_future", r.charges.future},
              {"sup_error", r.sup_error},
              {"argmax_t", r.argmax_t},
              {"bracket", r.bracket},
              {"ratio", r.ratio}};
  } else {
    SpikeTrain used = train;
    double dt = 0.0;
    if ((p.delta_t > 0.0 || p.jitter_mode == JitterMode::GridSnap) && !train.empty()) {
      JitterResult j = jitter_spikes(train, JitterSpec{p.jitter_mode, p.delta_t, p.grid_step, p.seed});
      used = std::move(j.train);
      dt = j.actual_delta_t;
    }
    const double past = p.delta_past.value_or(0.0), future = p.delta_future.value_or(0.0);
    const InferenceWindow w = inference_window(p.theta, omega, p.alpha0, p.delta_alpha, past, future, p.T);
    const AnsatzDecoder decoder(used, p.alpha0, omega, kernel);
    rec = decoder.decode(window_grid(w, p.samples_per_unit * omega));
    report = {{"n", train.size()},
              {"delta_t", dt},
              {"window", {w.T1, w.T2}},
              {"sigma", w.sigma},
              {"delta_past", past},
              {"delta_future", future},
              {"bracket", thm_main_bracket(p.theta, omega, p.alpha0, p.delta_alpha, dt,
                                           static_cast<double>(train.size()))
                              .bracket}};
  }
  report["theta"] = p.theta;
  report["alpha0"] = p.alpha0;
  report["delta_alpha"] = p.delta_alpha;
  report["omega"] = omega;
  report["decay_C"] = kernel.decay_C();
  report["max_truncation_flag"] =
      rec.truncation_flag.empty() ? 0.0 : *std::max_element(rec.truncation_flag.begin(), rec.truncation_flag.end());

  if (!man.outputs.reconstruction.empty()) io::write_reconstruction_csv(man.outputs.reconstruction, rec);
  if (!man.outputs.report.empty()) io::write_text(man.outputs.report, report.dump(2) + "\n");
  out << report.dump(2) << '\n';
  return 0;
}

int cmd_certify(const Manifest& man, std::ostream& out) {
  const SignalModel m = require_signal(man);
  const double theta = man.certify_theta.value_or(man.sampler.theta);
  BandwidthCertificate cert = certify_model(m, certificate_method_from_string(man.certify_method), theta);
  validate_certificate(m, cert);
  if (!man.outputs.certificate.empty()) io::write_certificate(man.outputs.certificate, cert);
  out << io::certificate_to_json(cert).dump(2) << '\n';
  return 0;
}

int cmd_sweep(const Manifest& man, std::ostream& out) {
  const SignalModel m = require_signal(man);
  const CutoffKernel kernel = kernel_for(man);
  const std::string csv = run_sweep(m, man, kernel);
  if (!man.outputs.sweep.empty()) io::write_text(man.outputs.sweep, csv);
  else out << csv;
  return 0;
}

int cmd_verify_kernel(const Manifest& man, std::ostream& out) {
  const CutoffKernel k = kernel_for(man);
  const CutoffReport r = verify_cutoff(k);
  const CutoffKernel fine = build_cutoff(man.kernel.radius, man.kernel.grid_step / 2.0);
  const double drift = std::abs(fine.decay_C() - k.decay_C()) / k.decay_C();
  const bool stable = std::isfinite(k.decay_C()) && drift <= 0.1;
  out << "decay_C=" << io::format_double(r.decay_C) << " worst_decay_ratio=" << io::format_double(r.worst_decay_ratio)
      << '\n'
      << "flatness=" << io::format_double(r.worst_flatness) << " support=" << io::format_double(r.worst_support)
      << " bounded=" << io::format_double(r.worst_bounded) << " even=" << (r.evenness_ok ? "yes" : "no") << '\n'
      << "decay_C_half_step=" << io::format_double(fine.decay_C()) << " drift=" << io::format_double(drift) << '\n'
      << (r.passed() && stable ? "PASS" : "FAIL") << '\n';
  if (!(r.passed() && stable)) throw Error(ErrorCode::QuadratureFailure, "cut-off kernel failed verification");
  return 0;
}

int cmd_verify_lemmas(const Manifest& man, std::ostream& out) {
  const LemmaReport r = verify_lemmas(man.lemma_trials, man.seed);
  out << "trials=" << r.trials << '\n'
      << "leakage violations=" << r.leakage_violations << " worst_ratio=" << io::format_double(r.leakage_worst_ratio)
      << '\n'
      << "spikes violations=" << r.spikes_violations << " worst_ratio=" << io::format_double(r.spikes_worst_ratio)
      << '\n'
      << "step3 violations=" << r.step3_violations << " worst_ratio=" << io::format_double(r.step3_worst_ratio)
      << '\n'
      << (r.passed() ? "PASS" : "FAIL") << '\n';
  if (!r.passed()) throw Error(ErrorCode::QuadratureFailure, "lemma check found violations");
  return 0;
}

void apply_thread_limit() {
  if (const char* env = std::getenv("IFCODEC_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) omp_set_num_threads(static_cast<int>(n));
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Integrate-and-fire time encoding: encode, decode, certify, sweep."};
  app.name("ifcodec");
  app.require_subcommand(1);

  std::string manifest;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("manifest", manifest, "Experiment manifest (JSON)")->required();
    sub->add_option("--seed", seed, "Override the manifest seed");
    return sub;
  };
  CLI::App* enc = add("encode", "Encode the manifest signal into a spike-train file");
  CLI::App* dec = add("decode", "Decode a spike-train file on the inference window");
  CLI::App* cer = add("certify", "Issue and validate a bandwidth certificate");
  CLI::App* swp = add("sweep", "Run the theta/omega/delta_alpha/delta_t sweep and emit CSV");
  CLI::App* vk = add("verify-kernel", "Build and check the cut-off kernel tables");
  CLI::App* vl = add("verify-lemmas", "Randomized checks of the potential-function inequalities");
  vl->add_option("--trials", trials, "Number of random draws per inequality");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  apply_thread_limit();
  try {
    Manifest man = read_manifest(manifest);
    if (seed) man.seed = *seed;
    if (trials) man.lemma_trials = *trials;
    if (*enc) return cmd_encode(man, out);
    if (*dec) return cmd_decode(man, out);
    if (*cer) return cmd_certify(man, out);
    if (*swp) return cmd_sweep(man, out);
    if (*vk) return cmd_verify_kernel(man, out);
    if (*vl) return cmd_verify_lemmas(man, out);
  } catch (const Error& e) {
    err << "ERROR: " << e.what() << '\n';
    return is_numeric_failure(e.code()) ? 3 : 2;
  } catch (const json::exception& e) {
    err << "ERROR: ConfigInvalid: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "ERROR: IoError: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace ifcodec::cli
