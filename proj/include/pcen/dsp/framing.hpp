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
#include <numbers>
#include <string>
#include <vector>

#include "pcen/dsp/audio.hpp"
#include "pcen/errors.hpp"
#include "pcen/matrix.hpp"

namespace pcen::dsp {

// Symmetric Hann window: w[n] = 0.5 - 0.5 cos(2 pi n / (N - 1)).
inline std::vector<double> hann_window(int length) {
  std::vector<double> w(static_cast<std::size_t>(length), 1.0);
  if (length <= 1) return w;
  for (int n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / (length - 1));
  }
  return w;
}

inline std::size_t frame_count(std::size_t n_samples, int window, int hop) {
  if (n_samples < static_cast<std::size_t>(window)) return 0;
  return (n_samples - window) / hop + 1;
}

// T x window matrix of Hann-weighted frames. Frame t covers samples
// [t*hop, t*hop + window); no edge padding.
inline Matrix<double> frame_signal(const AudioBuffer& audio,
                                   const FrontendConfig& cfg) {
  cfg.validate(audio.sample_rate);
  const int win = cfg.window_samples(audio.sample_rate);
  const int hop = cfg.hop_samples(audio.sample_rate);
  const std::size_t n_frames = frame_count(audio.size(), win, hop);
  if (n_frames == 0) {
    throw EmptyOutputError("signal of " + std::to_string(audio.size()) +
                           " samples is shorter than one " +
                           std::to_string(win) + "-sample window");
  }
  const auto window = hann_window(win);
  Matrix<double> frames(n_frames, static_cast<std::size_t>(win));
  for (std::size_t t = 0; t < n_frames; ++t) {
    const double* src = audio.samples.data() + t * hop;
    auto dst = frames.row(t);
    for (int n = 0; n < win; ++n) dst[n] = src[n] * window[n];
  }
  return frames;
}

}  // namespace pcen::dsp
