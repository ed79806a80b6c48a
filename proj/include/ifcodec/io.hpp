#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ifcodec/ansatz_decoder.hpp"
#include "ifcodec/bounds.hpp"
#include "ifcodec/if_encoder.hpp"
#include "ifcodec/signal_models.hpp"

namespace ifcodec::io {

/// "%.17g"; round-trips every finite double.
std::string format_double(double x);

SignalDescription signal_from_json(const nlohmann::json& j);
nlohmann::json signal_to_json(const SignalDescription& d);
SignalDescription read_signal_file(const std::filesystem::path& path);

/// {theta, alpha, T, spikes: [{t, q_re, q_im}]} in this field order.
std::string spike_train_to_string(const SpikeTrain& train);
void write_spike_train(const std::filesystem::path& path, const SpikeTrain& train);
SpikeTrain read_spike_train(const std::filesystem::path& path);

/// Columns t, re, im, truncation_flag.
void write_reconstruction_csv(const std::filesystem::path& path, const ReconstructedSignal& r);

nlohmann::json certificate_to_json(const BandwidthCertificate& c);
BandwidthCertificate certificate_from_json(const nlohmann::json& j);
void write_certificate(const std::filesystem::path& path, const BandwidthCertificate& c);
BandwidthCertificate read_certificate(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ifcodec::io
