/*
 * Copyright 2026 The PCEN Frontend Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pcen/dsp/audio.hpp"
#include "pcen/errors.hpp"
#include "pcen/matrix.hpp"

namespace pcen::dsp {

inline double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// n_mels + 2 edge frequencies equally spaced on the mel scale; filter m
// spans edges [m, m+2] and peaks at edge m+1.
inline std::vector<double> mel_edge_frequencies(const FrontendConfig& cfg) {
  const double lo = hz_to_mel(cfg.fmin_hz);
  const double hi = hz_to_mel(cfg.fmax_hz);
  const int n = cfg.n_mels + 2;
  std::vector<double> edges(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    edges[i] = mel_to_hz(lo + (hi - lo) * i / (n - 1));
  }
  return edges;
}

inline std::vector<double> mel_center_frequencies(const FrontendConfig& cfg) {
  auto edges = mel_edge_frequencies(cfg);
  return {edges.begin() + 1, edges.end() - 1};
}

// F x (fft_size/2 + 1) triangular filters, each scaled to a peak of exactly
// 1.0. Throws ConfigurationError when some filter covers no FFT bin.
inline Matrix<double> mel_filterbank_matrix(const FrontendConfig& cfg,
                                            int sample_rate) {
  cfg.validate(sample_rate);
  const int n_fft = cfg.resolved_fft_size(sample_rate);
  const std::size_t n_bins = static_cast<std::size_t>(n_fft) / 2 + 1;
  const auto edges = mel_edge_frequencies(cfg);
  Matrix<double> fb(static_cast<std::size_t>(cfg.n_mels), n_bins, 0.0);
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double left = edges[m];
    const double center = edges[m + 1];
    const double right = edges[m + 2];
    auto row = fb.row(static_cast<std::size_t>(m));
    double peak = 0.0;
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / n_fft;
      double v = 0.0;
      if (f > left && f <= center) {
        v = (f - left) / (center - left);
      } else if (f > center && f < right) {
        v = (right - f) / (right - center);
      }
      row[k] = v;
      peak = std::max(peak, v);
    }
    if (!(peak > 0.0)) {
      throw ConfigurationError(
          "mel filter " + std::to_string(m) + " (" + std::to_string(left) +
          "-" + std::to_string(right) + " Hz) covers no FFT bin; n_mels=" +
          std::to_string(cfg.n_mels) + " is too large for fft_size " +
          std::to_string(n_fft));
    }
    for (double& v : row) v /= peak;
  }
  return fb;
}

}  // namespace pcen::dsp
