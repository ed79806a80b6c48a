#pragma once

#include <cmath>
#include <filesystem>
#include <string>

#include "ifcodec/cutoff_kernel.hpp"
#include "ifcodec/signal_models.hpp"

namespace testing {

// Built once per process; the table fill takes under a second.
inline const ifcodec::CutoffKernel& shared_kernel() {
  static const ifcodec::CutoffKernel k = ifcodec::build_cutoff(50.0, 1e-3);
  return k;
}

inline ifcodec::SignalModel gaussian_atom(double node = 0.0, double w = 1.0, ifcodec::cplx c = 1.0) {
  ifcodec::SignalDescription d;
  d.kind = ifcodec::SignalKind::GaussianAtomSum;
  d.coefficients = {c};
  d.nodes = {node};
  d.scale = w;
  return ifcodec::build_signal(d);
}

inline ifcodec::SignalModel fejer_signal(double w = 0.5, double lo = 3.0, double hi = 9.0) {
  ifcodec::SignalDescription d;
  d.kind = ifcodec::SignalKind::FejerAtomSum;
  d.scale = w;
  int k = 0;
  for (double x = lo; x <= hi + 1e-12; x += 1.0, ++k) {
    d.nodes.push_back(x);
    d.coefficients.push_back(std::polar(0.5 + 0.1 * (k % 4), 0.7 * k));
  }
  return ifcodec::build_signal(d);
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ifcodec_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing
