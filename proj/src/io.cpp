#include "ifcodec/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ifcodec/error.hpp"

namespace ifcodec::io {

using nlohmann::json;

namespace {

cplx complex_from_json(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  if (v.is_object() && v.contains("re")) return {v.at("re").get<double>(), v.value("im", 0.0)};
  throw Error(ErrorCode::InvalidSpec, "coefficient must be a number, [re, im] or {re, im}");
}

template <class T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidSpec, std::string("missing or malformed field '") + key + "'");
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidSpec, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

SignalDescription signal_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidSpec, "signal spec must be an object");
  SignalDescription d;
  d.kind = signal_kind_from_string(field<std::string>(j, "kind"));
  if (j.contains("coefficients")) {
    if (!j["coefficients"].is_array()) throw Error(ErrorCode::InvalidSpec, "coefficients must be a list");
    for (const auto& c : j["coefficients"]) d.coefficients.push_back(complex_from_json(c));
  }
  if (j.contains("nodes")) d.nodes = field<std::vector<double>>(j, "nodes");
  if (j.contains("generator")) {
    const json& g = j["generator"];
    if (g.contains("family")) d.family = generator_family_from_string(field<std::string>(g, "family"));
    if (g.contains("order")) d.order = field<int>(g, "order");
    if (g.contains("envelope_D")) d.envelope_D = field<double>(g, "envelope_D");
    if (g.contains("envelope_s")) d.envelope_s = field<double>(g, "envelope_s");
  }
  if (j.contains("scale")) d.scale = field<double>(j, "scale");
  if (j.contains("clip")) {
    const auto c = field<std::vector<double>>(j, "clip");
    if (c.size() != 2) throw Error(ErrorCode::InvalidSpec, "clip must be [lo, hi]");
    d.clip = Interval{c[0], c[1]};
  }
  if (j.contains("normalize_l2")) d.normalize_l2 = field<bool>(j, "normalize_l2");
  return d;
}

json signal_to_json(const SignalDescription& d) {
  json j;
  j["kind"] = to_string(d.kind);
  j["coefficients"] = json::array();
  for (const auto& c : d.coefficients) j["coefficients"].push_back({c.real(), c.imag()});
  j["nodes"] = d.nodes;
  j["generator"] = {{"family", to_string(d.family)}, {"order", d.order}};
  if (d.envelope_D) j["generator"]["envelope_D"] = *d.envelope_D;
  if (d.envelope_s) j["generator"]["envelope_s"] = *d.envelope_s;
  j["scale"] = d.scale;
  if (d.clip) j["clip"] = {d.clip->lo, d.clip->hi};
  j["normalize_l2"] = d.normalize_l2;
  return j;
}

SignalDescription read_signal_file(const std::filesystem::path& path) { return signal_from_json(read_json(path)); }

std::string spike_train_to_string(const SpikeTrain& train) {
  std::ostringstream out;
  out << "{\n  \"theta\": " << format_double(train.config.theta) << ",\n  \"alpha\": "
      << format_double(train.config.alpha) << ",\n  \"T\": " << format_double(train.config.T)
      << ",\n  \"time_tol\": " << format_double(train.config.effective_time_tol()) << ",\n  \"spikes\": [";
  for (std::size_t k = 0; k < train.size(); ++k) {
    out << (k == 0 ? "\n" : ",\n") << "    {\"t\": " << format_double(train.times[k])
        << ", \"q_re\": " << format_double(train.phases[k].real())
        << ", \"q_im\": " << format_double(train.phases[k].imag()) << "}";
  }
  out << (train.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return out.str();
}

void write_spike_train(const std::filesystem::path& path, const SpikeTrain& train) {
  write_text(path, spike_train_to_string(train));
}

SpikeTrain read_spike_train(const std::filesystem::path& path) {
  const json j = read_json(path);
  SpikeTrain train;
  train.config.theta = field<double>(j, "theta");
  train.config.alpha = field<double>(j, "alpha");
  train.config.T = field<double>(j, "T");
  train.config.time_tol = j.value("time_tol", 0.0);
  for (const auto& s : field<json>(j, "spikes")) {
    train.times.push_back(field<double>(s, "t"));
    train.phases.emplace_back(field<double>(s, "q_re"), field<double>(s, "q_im"));
  }
  train.config.validate();
  train.validate();
  return train;
}

void write_reconstruction_csv(const std::filesystem::path& path, const ReconstructedSignal& r) {
  std::ostringstream out;
  out << "t,re,im,truncation_flag\n";
  for (std::size_t i = 0; i < r.grid.size(); ++i)
    out << format_double(r.grid[i]) << ',' << format_double(r.values[i].real()) << ','
        << format_double(r.values[i].imag()) << ',' << format_double(r.truncation_flag[i]) << '\n';
  write_text(path, out.str());
}

json certificate_to_json(const BandwidthCertificate& c) {
  return {{"omega", c.omega},       {"tolerance", c.tolerance}, {"method", to_string(c.method)},
          {"N", c.N},               {"riesz_A", c.riesz_A},     {"ingham_A", c.ingham_A},
          {"ingham_B", c.ingham_B}, {"D", c.D},                 {"s", c.s},
          {"tau", c.tau},           {"delta", c.delta},         {"threshold", c.threshold},
          {"validated", c.validated}, {"tail", c.tail},         {"tail_remainder", c.tail_remainder},
          {"margin", c.margin}};
}

BandwidthCertificate certificate_from_json(const json& j) {
  BandwidthCertificate c;
  c.omega = field<double>(j, "omega");
  c.tolerance = j.value("tolerance", 0.0);
  if (j.contains("method")) c.method = certificate_method_from_string(field<std::string>(j, "method"));
  c.N = j.value("N", 0.0);
  c.riesz_A = j.value("riesz_A", 0.0);
  c.ingham_A = j.value("ingham_A", 0.0);
  c.ingham_B = j.value("ingham_B", 0.0);
  c.D = j.value("D", 0.0);
  c.s = j.value("s", 0.0);
  c.tau = j.value("tau", 0.0);
  c.delta = j.value("delta", 0.0);
  c.threshold = j.value("threshold", 0.0);
  c.validated = j.value("validated", false);
  c.tail = j.value("tail", 0.0);
  c.tail_remainder = j.value("tail_remainder", 0.0);
  c.margin = j.value("margin", 0.0);
  return c;
}

void write_certificate(const std::filesystem::path& path, const BandwidthCertificate& c) {
  write_text(path, certificate_to_json(c).dump(2) + "\n");
}

BandwidthCertificate read_certificate(const std::filesystem::path& path) {
  return certificate_from_json(read_json(path));
}

}  // namespace ifcodec::io
