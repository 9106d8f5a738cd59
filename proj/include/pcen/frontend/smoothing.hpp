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
#include <limits>
#include <span>
#include <vector>

#include "pcen/errors.hpp"
#include "pcen/frontend/params.hpp"
#include "pcen/matrix.hpp"

namespace pcen::frontend {

// M(t) = (1 - s) M(t-1) + s E(t). Every smoothing path in the library goes
// through this so batch, streaming and trainable results agree bit-exactly.
inline double iir_step(double previous, double energy, double s) {
  return (1.0 - s) * previous + s * energy;
}

inline double iir_first(double energy, double s, SmootherInit init) {
  return init == SmootherInit::kFirstFrame ? energy : iir_step(0.0, energy, s);
}

// Column-wise softmax over the K rows of a K x F logit matrix.
inline Gram softmax_weights(const Gram& logits) {
  const std::size_t k_count = logits.rows();
  const std::size_t channels = logits.cols();
  Gram w(k_count, channels);
  for (std::size_t f = 0; f < channels; ++f) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < k_count; ++k) peak = std::max(peak, logits(k, f));
    double total = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      w(k, f) = std::exp(logits(k, f) - peak);
      total += w(k, f);
    }
    for (std::size_t k = 0; k < k_count; ++k) w(k, f) /= total;
  }
  return w;
}

// Per-channel first-order IIR smoothing along time; s has one entry per
// channel.
inline Gram iir_smooth(const Gram& energies, std::span<const double> s,
                       SmootherInit init = SmootherInit::kFirstFrame) {
  if (s.size() != energies.cols()) {
    throw ShapeError("iir_smooth: " + std::to_string(s.size()) +
                     " coefficients for " + std::to_string(energies.cols()) +
                     " channels");
  }
  for (double c : s) validate_coefficient(c);
  Gram m(energies.rows(), energies.cols());
  if (energies.rows() == 0) return m;
  for (std::size_t f = 0; f < energies.cols(); ++f) {
    m(0, f) = iir_first(energies(0, f), s[f], init);
  }
  for (std::size_t t = 1; t < energies.rows(); ++t) {
    for (std::size_t f = 0; f < energies.cols(); ++f) {
      m(t, f) = iir_step(m(t - 1, f), energies(t, f), s[f]);
    }
  }
  return m;
}

inline Gram iir_smooth(const Gram& energies, double s,
                       SmootherInit init = SmootherInit::kFirstFrame) {
  std::vector<double> per_channel(energies.cols(), s);
  return iir_smooth(energies, per_channel, init);
}

// Weighted sum of precomputed smoother outputs, accumulated in k order.
inline Gram mix_smoothed(const std::vector<Gram>& smoothed, const Gram& weights) {
  Gram m(smoothed.front().rows(), smoothed.front().cols());
  for (std::size_t t = 0; t < m.rows(); ++t) {
    for (std::size_t f = 0; f < m.cols(); ++f) {
      double acc = 0.0;
      for (std::size_t k = 0; k < smoothed.size(); ++k) {
        acc += weights(k, f) * smoothed[k](t, f);
      }
      m(t, f) = acc;
    }
  }
  return m;
}

// Frequency-dependent convex combination of K smoothers.
inline Gram combine_smoothers(const Gram& energies,
                              std::span<const double> coefficients,
                              const Gram& logits,
                              SmootherInit init = SmootherInit::kFirstFrame) {
  if (coefficients.empty()) {
    throw ParameterError("combine_smoothers needs K >= 1 coefficients");
  }
  if (logits.rows() != coefficients.size() || logits.cols() != energies.cols()) {
    throw ShapeError("combine_smoothers: logits must be K x F");
  }
  std::vector<Gram> smoothed;
  smoothed.reserve(coefficients.size());
  for (double s : coefficients) smoothed.push_back(iir_smooth(energies, s, init));
  return mix_smoothed(smoothed, softmax_weights(logits));
}

}  // namespace pcen::frontend
