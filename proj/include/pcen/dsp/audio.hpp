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

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pcen/errors.hpp"

namespace pcen::dsp {

// Mono signal. Full scale is 1.0.
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;

  std::size_t size() const noexcept { return samples.size(); }

  void validate() const {
    if (sample_rate <= 0) {
      throw ParameterError("sample_rate must be positive, got " +
                           std::to_string(sample_rate));
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!std::isfinite(samples[i])) {
        throw ParameterError("non-finite sample at index " + std::to_string(i));
      }
    }
  }
};

// Analysis geometry. Defaults are the 40-channel, 25 ms / 10 ms frontend.
struct FrontendConfig {
  double window_ms = 25.0;
  double hop_ms = 10.0;
  // 0 selects the next power of two >= the window length.
  int fft_size = 0;
  int n_mels = 40;
  double fmin_hz = 125.0;
  double fmax_hz = 7500.0;

  int window_samples(int sample_rate) const {
    return static_cast<int>(std::lround(window_ms * sample_rate / 1000.0));
  }
  int hop_samples(int sample_rate) const {
    return static_cast<int>(std::lround(hop_ms * sample_rate / 1000.0));
  }
  int resolved_fft_size(int sample_rate) const {
    if (fft_size > 0) return fft_size;
    int n = 1;
    while (n < window_samples(sample_rate)) n <<= 1;
    return n;
  }

  void validate(int sample_rate) const {
    if (sample_rate <= 0) throw ConfigurationError("sample_rate must be positive");
    if (!(hop_ms > 0.0) || !(hop_ms <= window_ms)) {
      throw ConfigurationError("need 0 < hop_ms <= window_ms");
    }
    if (window_samples(sample_rate) < 1 || hop_samples(sample_rate) < 1) {
      throw ConfigurationError("window or hop shorter than one sample");
    }
    if (fft_size != 0 && fft_size < window_samples(sample_rate)) {
      throw ConfigurationError("fft_size " + std::to_string(fft_size) +
                               " shorter than window of " +
                               std::to_string(window_samples(sample_rate)) +
                               " samples");
    }
    if (!(fmin_hz >= 0.0) || !(fmin_hz < fmax_hz) ||
        !(fmax_hz <= sample_rate / 2.0)) {
      throw ConfigurationError("need 0 <= fmin_hz < fmax_hz <= sample_rate/2");
    }
    if (n_mels < 1) throw ConfigurationError("n_mels must be >= 1");
  }
};

inline double rms(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double x : samples) acc += x * x;
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

// Level in dB relative to a full-scale RMS of 1.0.
inline double rms_dbfs(const AudioBuffer& audio) {
  return 20.0 * std::log10(rms(audio.samples));
}

}  // namespace pcen::dsp
