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
#include <string>
#include <utility>
#include <vector>

#include "pcen/dsp/audio.hpp"
#include "pcen/dsp/fft.hpp"
#include "pcen/dsp/framing.hpp"
#include "pcen/dsp/mel.hpp"
#include "pcen/errors.hpp"
#include "pcen/matrix.hpp"

namespace pcen::dsp {

// T x F linear mel filterbank energies.
struct EnergyGram {
  Gram values;
  FrontendConfig config;
  int sample_rate = 16000;

  std::size_t frames() const noexcept { return values.rows(); }
  std::size_t channels() const noexcept { return values.cols(); }
};

// Frame -> power spectrum -> mel projection, with the FFT plan and filterbank
// built once for a fixed (config, sample rate) pair.
class EnergyExtractor {
 public:
  EnergyExtractor(const FrontendConfig& cfg, int sample_rate)
      : cfg_(cfg),
        sample_rate_(sample_rate),
        fb_(mel_filterbank_matrix(cfg, sample_rate)),
        spectrum_(cfg.resolved_fft_size(sample_rate)) {
    support_.reserve(fb_.rows());
    for (std::size_t m = 0; m < fb_.rows(); ++m) {
      auto row = fb_.row(m);
      std::size_t b = 0;
      while (b < row.size() && row[b] == 0.0) ++b;
      std::size_t e = row.size();
      while (e > b && row[e - 1] == 0.0) --e;
      support_.emplace_back(b, e);
    }
  }

  const Matrix<double>& filterbank() const noexcept { return fb_; }

  EnergyGram operator()(const AudioBuffer& audio) const {
    audio.validate();
    if (audio.sample_rate != sample_rate_) {
      throw ConfigurationError("extractor built for " +
                               std::to_string(sample_rate_) + " Hz, got " +
                               std::to_string(audio.sample_rate) + " Hz");
    }
    const auto frames = frame_signal(audio, cfg_);
    EnergyGram out{Gram(frames.rows(), fb_.rows()), cfg_, sample_rate_};
    for (std::size_t t = 0; t < frames.rows(); ++t) {
      const auto power = spectrum_(frames.row(t));
      auto dst = out.values.row(t);
      for (std::size_t m = 0; m < fb_.rows(); ++m) {
        const auto w = fb_.row(m);
        double acc = 0.0;
        for (std::size_t k = support_[m].first; k < support_[m].second; ++k) {
          acc += w[k] * power[k];
        }
        dst[m] = acc;
      }
    }
    return out;
  }

 private:
  FrontendConfig cfg_;
  int sample_rate_;
  Matrix<double> fb_;
  PowerSpectrum spectrum_;
  std::vector<std::pair<std::size_t, std::size_t>> support_;
};

inline EnergyGram filterbank_energies(const AudioBuffer& audio,
                                      const FrontendConfig& cfg) {
  return EnergyExtractor(cfg, audio.sample_rate)(audio);
}

// Applies the gain that moves the RMS level to target_dbfs. No clipping.
inline AudioBuffer scale_to_dbfs(const AudioBuffer& audio, double target_dbfs) {
  const double level = rms(audio.samples);
  if (!(level > 0.0)) {
    throw CannotScaleError("cannot scale a silent signal (RMS = 0)");
  }
  const double current = 20.0 * std::log10(level);
  const double gain = std::pow(10.0, (target_dbfs - current) / 20.0);
  AudioBuffer out{audio.samples, audio.sample_rate};
  for (double& x : out.samples) x *= gain;
  return out;
}

}  // namespace pcen::dsp
