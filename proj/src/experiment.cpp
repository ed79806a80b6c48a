#include "ifcodec/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ifcodec/error.hpp"
#include "ifcodec/io.hpp"
#include "ifcodec/metrics.hpp"

namespace ifcodec {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw Error(ErrorCode::ConfigInvalid, std::string("field '") + key + "' must be a number");
  return j[key].get<double>();
}

std::vector<double> number_list(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  if (!j[key].is_array()) throw Error(ErrorCode::ConfigInvalid, std::string("sweep axis '") + key + "' must be a list");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw Error(ErrorCode::ConfigInvalid, std::string("sweep axis '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string path_field(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  if (!j[key].is_string()) throw Error(ErrorCode::ConfigInvalid, std::string("field '") + key + "' must be a path");
  return j[key].get<std::string>();
}

}  // namespace

Manifest manifest_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, "manifest must be a JSON object");
  Manifest m;
  m.base_dir = base_dir;
  if (j.contains("signal")) {
    if (j["signal"].is_string()) m.signal = io::read_signal_file(resolve(base_dir, j["signal"].get<std::string>()));
    else m.signal = io::signal_from_json(j["signal"]);
  }
  if (j.contains("sampler")) {
    const json& s = j["sampler"];
    m.sampler.theta = number(s, "theta", m.sampler.theta);
    m.alpha_given = s.contains("alpha");
    m.sampler.alpha = number(s, "alpha", m.sampler.alpha);
    m.sampler.T = number(s, "T", m.sampler.T);
    m.sampler.time_tol = number(s, "time_tol", 0.0);
  }
  m.uncertainty.alpha0 = m.alpha_given ? m.sampler.alpha : 1.0;
  if (j.contains("uncertainty")) {
    const json& u = j["uncertainty"];
    m.uncertainty.alpha0 = number(u, "alpha0", m.uncertainty.alpha0);
    m.uncertainty.delta_alpha = number(u, "delta_alpha", 0.0);
    m.uncertainty.delta_t = number(u, "delta_t", 0.0);
    m.uncertainty.grid_step = number(u, "grid_step", 0.0);
    const std::string mode = u.value("jitter_mode", std::string("uniform"));
    if (mode == "uniform") m.uncertainty.jitter_mode = JitterMode::UniformJitter;
    else if (mode == "grid_snap") m.uncertainty.jitter_mode = JitterMode::GridSnap;
    else throw Error(ErrorCode::ConfigInvalid, "jitter_mode must be 'uniform' or 'grid_snap'");
    if (u.contains("delta_past")) m.uncertainty.delta_past = number(u, "delta_past", 0.0);
    if (u.contains("delta_future")) m.uncertainty.delta_future = number(u, "delta_future", 0.0);
  }
  if (j.contains("omega")) {
    if (j["omega"].is_number()) m.omega = j["omega"].get<double>();
    else if (j["omega"].is_object() && j["omega"].contains("certificate"))
      m.omega_certificate = resolve(base_dir, path_field(j["omega"], "certificate"));
    else throw Error(ErrorCode::ConfigInvalid, "omega must be a number or {certificate: path}");
  }
  if (j.contains("kernel")) {
    const json& k = j["kernel"];
    m.kernel.radius = number(k, "radius", m.kernel.radius);
    m.kernel.grid_step = number(k, "grid_step", m.kernel.grid_step);
    m.kernel.cache = resolve(base_dir, path_field(k, "cache"));
  }
  if (j.contains("certify")) {
    m.certify_method = j["certify"].value("method", m.certify_method);
    if (j["certify"].contains("theta")) m.certify_theta = number(j["certify"], "theta", 0.0);
  }
  if (j.contains("lemmas")) m.lemma_trials = static_cast<int>(number(j["lemmas"], "trials", m.lemma_trials));
  m.spikes_in = resolve(base_dir, path_field(j, "spikes"));
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    m.sweep.theta = number_list(s, "theta");
    m.sweep.omega = number_list(s, "omega");
    m.sweep.delta_alpha = number_list(s, "delta_alpha");
    m.sweep.delta_t = number_list(s, "delta_t");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw Error(ErrorCode::ConfigInvalid, "seed must be a non-negative integer");
    m.seed = j["seed"].get<std::uint64_t>();
  }
  m.samples_per_unit = number(j, "samples_per_unit", m.samples_per_unit);
  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    m.outputs.spikes = resolve(base_dir, path_field(o, "spikes"));
    m.outputs.reconstruction = resolve(base_dir, path_field(o, "reconstruction"));
    m.outputs.report = resolve(base_dir, path_field(o, "report"));
    m.outputs.certificate = resolve(base_dir, path_field(o, "certificate"));
    m.outputs.sweep = resolve(base_dir, path_field(o, "sweep"));
  }
  return m;
}

Manifest read_manifest(const std::filesystem::path& path) {
  const json j = io::read_json(path);
  return manifest_from_json(j, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

double resolve_omega(const Manifest& m) {
  if (m.omega) {
    if (!(*m.omega > 0.0)) throw Error(ErrorCode::ConfigInvalid, "omega must be positive");
    return *m.omega;
  }
  if (!m.omega_certificate.empty()) return io::read_certificate(m.omega_certificate).omega;
  throw Error(ErrorCode::ConfigInvalid, "manifest gives no omega");
}

CellResult run_cell(const SignalModel& m, const CellParams& p, const CutoffKernel& kernel, const SpikeTrain* spikes) {
  CellResult r;
  r.alpha_true = p.alpha_true ? *p.alpha_true : leakage_draw(p.alpha0, p.delta_alpha, p.seed);
  if (spikes) {
    r.clean = *spikes;
  } else {
    r.clean = encode(m, SamplerConfig{p.theta, r.alpha_true, p.T, p.time_tol});
  }
  const double theta = r.clean.config.theta;
  const double T = r.clean.config.T;

  r.perturbed = r.clean;
  const bool snap = p.jitter_mode == JitterMode::GridSnap && p.grid_step > 0.0;
  if ((snap || p.delta_t > 0.0) && !r.clean.empty()) {
    JitterResult j = jitter_spikes(r.clean, JitterSpec{p.jitter_mode, p.delta_t, p.grid_step, p.seed});
    r.perturbed = std::move(j.train);
    r.actual_delta_t = j.actual_delta_t;
  }

  if (p.delta_past && p.delta_future) {
    r.charges = {*p.delta_past, *p.delta_future};
  } else {
    r.charges = past_future_charge(m, p.alpha0, p.delta_alpha, r.clean.empty() ? 0.0 : r.clean.times.back());
    if (p.delta_past) r.charges.past = *p.delta_past;
    if (p.delta_future) r.charges.future = *p.delta_future;
  }
  r.window = inference_window(theta, p.omega, p.alpha0, p.delta_alpha, r.charges.past, r.charges.future, T);

  const AnsatzDecoder decoder(r.perturbed, p.alpha0, p.omega, kernel);
  const double per_unit = p.samples_per_unit * p.omega;
  r.reconstruction = decoder.decode(window_grid(r.window, per_unit));
  const WindowedDistance d = sup_norm_window([&](double t) { return m(t); }, [&](double t) { return decoder(t); },
                                             r.window, per_unit);
  r.sup_error = d.value;
  r.argmax_t = d.argmax_t;
  r.bracket = thm_main_bracket(theta, p.omega, p.alpha0, p.delta_alpha, r.actual_delta_t,
                               static_cast<double>(r.clean.size()))
                  .bracket;
  r.ratio = r.sup_error / r.bracket;
  return r;
}

std::string run_sweep(const SignalModel& m, const Manifest& man, const CutoffKernel& kernel) {
  const SweepAxes& ax = man.sweep;
  if (ax.theta.empty() && ax.omega.empty() && ax.delta_alpha.empty() && ax.delta_t.empty())
    throw Error(ErrorCode::ConfigInvalid, "sweep needs at least one nonempty axis");
  auto or_default = [](const std::vector<double>& v, double d) { return v.empty() ? std::vector<double>{d} : v; };
  const auto thetas = or_default(ax.theta, man.sampler.theta);
  const auto omegas = ax.omega.empty() ? std::vector<double>{resolve_omega(man)} : ax.omega;
  const auto dalphas = or_default(ax.delta_alpha, man.uncertainty.delta_alpha);
  const auto dts = or_default(ax.delta_t, man.uncertainty.delta_t);

  struct Cell {
    double theta, omega, dalpha, dt;
  };
  std::vector<Cell> cells;
  for (double th : thetas)
    for (double om : omegas)
      for (double da : dalphas)
        for (double dt : dts) cells.push_back({th, om, da, dt});

  std::vector<std::string> rows(cells.size());
  const auto n = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    const Cell& c = cells[i];
    CellParams p;
    p.theta = c.theta;
    p.omega = c.omega;
    p.alpha0 = man.uncertainty.alpha0;
    p.delta_alpha = c.dalpha;
    p.delta_t = c.dt;
    p.jitter_mode = man.uncertainty.jitter_mode;
    p.grid_step = man.uncertainty.grid_step;
    if (man.alpha_given) p.alpha_true = man.sampler.alpha;
    p.delta_past = man.uncertainty.delta_past;
    p.delta_future = man.uncertainty.delta_future;
    p.T = man.sampler.T;
    p.time_tol = man.sampler.time_tol;
    p.seed = man.seed + static_cast<std::uint64_t>(i);
    p.samples_per_unit = man.samples_per_unit;
    std::ostringstream row;
    row << io::format_double(c.theta) << ',' << io::format_double(c.omega) << ',' << io::format_double(c.dalpha)
        << ',';
    try {
      const CellResult r = run_cell(m, p, kernel);
      row << io::format_double(r.actual_delta_t) << ',' << r.clean.size() << ',' << io::format_double(r.sup_error)
          << ',' << io::format_double(r.bracket) << ',' << io::format_double(r.ratio) << ",ok";
    } catch (const Error& e) {
      row << io::format_double(c.dt) << ",,,,," << to_string(e.code());
    }
    rows[i] = row.str();
  }
  std::string out = "theta,omega,delta_alpha,delta_t,n,sup_error,bracket,ratio,status\n";
  for (const auto& r : rows) out += r + '\n';
  return out;
}

SignalModel random_model(UniformSource& rng, GeneratorFamily family, double T, bool causal) {
  SignalDescription d;
  const int count = 2 + static_cast<int>(rng.next() * 4.0);
  if (family == GeneratorFamily::BSpline) {
    d.kind = SignalKind::FreeNodeSpline;
    d.family = GeneratorFamily::BSpline;
    d.order = 4;
    d.scale = rng.uniform(0.3, 0.5);
    double x = causal ? 2.0 * d.scale + rng.uniform(0.05, 0.5) : rng.uniform(0.5, 1.5);
    for (int k = 0; k < count && x < T - 0.5; ++k) {
      d.nodes.push_back(x);
      x += rng.uniform(1.1, 2.0);
    }
  } else {
    d.kind = family == GeneratorFamily::Gaussian ? SignalKind::GaussianAtomSum : SignalKind::FejerAtomSum;
    d.family = family;
    d.scale = rng.uniform(0.3, 0.8);
    std::vector<double> x(count);
    for (;;) {
      for (auto& v : x) v = rng.uniform(1.0, std::max(1.5, T - 1.0));
      std::sort(x.begin(), x.end());
      bool ok = true;
      for (int k = 1; k < count; ++k) ok = ok && x[k] - x[k - 1] > 0.1;
      if (ok) break;
    }
    d.nodes = x;
    if (causal) d.clip = Interval{0.0, T + 100.0};
  }
  for (std::size_t k = 0; k < d.nodes.size(); ++k)
    d.coefficients.push_back(std::polar(rng.uniform(0.2, 1.0), rng.uniform(-std::numbers::pi, std::numbers::pi)));
  return build_signal(d);
}

SpikeTrain random_train(UniformSource& rng, std::size_t n, double theta, double T) {
  SpikeTrain train;
  train.config = SamplerConfig{theta, 1.0, T, 0.0};
  train.config.time_tol = train.config.effective_time_tol();
  std::vector<double> t(n);
  for (;;) {
    for (auto& v : t) v = rng.uniform(0.0, T);
    std::sort(t.begin(), t.end());
    bool ok = true;
    for (std::size_t k = 1; k < n; ++k) ok = ok && t[k] - t[k - 1] > 1e-6;
    if (ok) break;
  }
  train.times = t;
  for (std::size_t k = 0; k < n; ++k) train.phases.push_back(std::polar(1.0, rng.uniform(-std::numbers::pi, std::numbers::pi)));
  return train;
}

LemmaReport verify_lemmas(int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::ConfigInvalid, "lemma trials must be >= 1");
  LemmaReport rep;
  rep.trials = trials;
  UniformSource rng(seed);

  for (int i = 0; i < trials; ++i) {
    // Leakage sensitivity.
    const auto n = static_cast<std::size_t>(1 + rng.next() * 12);
    const double theta = rng.uniform(0.01, 1.0), T = rng.uniform(2.0, 10.0);
    const double alpha0 = rng.uniform(0.5, 3.0);
    const double dalpha = rng.uniform(0.0, 0.9 * alpha0);
    const double alpha = rng.uniform(alpha0 - dalpha, alpha0 + dalpha);
    const SpikeTrain tr = random_train(rng, n, theta, T);
    const Potential ua(tr, alpha), u0(tr, alpha0);
    double sup = 0.0;
    for (int g = 0; g <= 4000; ++g) {
      const double t = T * g / 4000.0 + 0.0;
      sup = std::max(sup, std::abs(ua(t) - u0(t)));
    }
    for (double t : tr.times) sup = std::max(sup, std::abs(ua(t) - u0(t)));
    const double rhs = lemma_leakage_rhs(theta, dalpha, alpha0, static_cast<double>(n));
    if (sup > rhs + 1e-9) ++rep.leakage_violations;
    if (rhs > 0.0) rep.leakage_worst_ratio = std::max(rep.leakage_worst_ratio, sup / rhs);
  }

  for (int i = 0; i < trials; ++i) {
    // Firing-time sensitivity.
    const auto n = static_cast<std::size_t>(1 + rng.next() * 10);
    const double theta = rng.uniform(0.01, 1.0), T = rng.uniform(2.0, 8.0);
    const double alpha = rng.uniform(0.3, 3.0);
    const SpikeTrain tr = random_train(rng, n, theta, T);
    const double budget = rng.uniform(0.0, 0.05) * T / static_cast<double>(n);
    const JitterResult jr = jitter_spikes(tr, JitterSpec{JitterMode::UniformJitter, budget, 0.0, rng.engine()()});
    const Potential ua(tr, alpha), ub(jr.train, alpha);
    std::vector<double> cuts = tr.times;
    cuts.insert(cuts.end(), jr.train.times.begin(), jr.train.times.end());
    const double lhs = amalgam_norm([&](double t) { return ua(t) - ub(t); }, Interval{0.0, T + 5.0 / alpha}, 1e-3,
                                    cuts);
    const double rhs = lemma_spikes_rhs(theta, alpha, static_cast<double>(n), jr.actual_delta_t);
    if (lhs > rhs + 1e-6) ++rep.spikes_violations;
    if (rhs > 0.0) rep.spikes_worst_ratio = std::max(rep.spikes_worst_ratio, lhs / rhs);
  }

  const int runs = std::max(1, trials / 4);
  const GeneratorFamily families[] = {GeneratorFamily::Gaussian, GeneratorFamily::Fejer, GeneratorFamily::BSpline};
  for (int i = 0; i < runs; ++i) {
    // Clean encodes with no past charge: |u - F| <= 2 theta.
    const double T = 8.0;
    const SignalModel m = random_model(rng, families[i % 3], T, true);
    const double theta = std::array{0.1, 0.05, 0.02}[i % 3];
    const double alpha = rng.uniform(0.5, 2.0);
    const SpikeTrain tr = encode(m, SamplerConfig{theta, alpha, T, 0.0});
    std::vector<double> grid;
    for (int g = 0; g <= 800; ++g) grid.push_back(T * g / 800.0);
    grid.insert(grid.end(), tr.times.begin(), tr.times.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const auto F = leaky_primitive_on_grid(m, alpha, grid);
    const Potential u(tr, alpha);
    double sup = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) sup = std::max(sup, std::abs(u(grid[g]) - F[g]));
    if (sup > 2.0 * theta + 1e-6) ++rep.step3_violations;
    rep.step3_worst_ratio = std::max(rep.step3_worst_ratio, sup / (2.0 * theta));
  }
  return rep;
}

}  // namespace ifcodec
