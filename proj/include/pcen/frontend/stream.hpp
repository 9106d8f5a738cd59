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
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <utility>
#include <vector>

#include "pcen/errors.hpp"
#include "pcen/frontend/params.hpp"
#include "pcen/frontend/pcen.hpp"
#include "pcen/frontend/smoothing.hpp"
#include "pcen/matrix.hpp"

namespace pcen::frontend {

// Per-channel running M(f) for one smoother.
struct SmootherState {
  std::vector<double> m;
  bool initialized = false;
};

// Causal frame-by-frame PCEN. Output over a gram is bit-identical to
// pcen_forward on the same gram. A stream is single-owner state: move it
// between threads freely, but never step it concurrently.
class PcenStream {
 public:
  PcenStream(PcenParams params, std::size_t channels)
      : params_(std::move(params)), channels_(channels) {
    params_.validate(channels_);
    std::visit(
        [&](const auto& sm) {
          using T = std::decay_t<decltype(sm)>;
          if constexpr (std::is_same_v<T, SingleSmoother>) {
            coefficients_.push_back(std::vector<double>(channels_, sm.s));
          } else if constexpr (std::is_same_v<T, PerChannelSmoother>) {
            coefficients_.push_back(sm.s);
          } else {
            for (double s : sm.coefficients) {
              coefficients_.push_back(std::vector<double>(channels_, s));
            }
            weights_ = softmax_weights(sm.logits);
          }
        },
        params_.smoother);
    states_.resize(coefficients_.size());
  }

  std::size_t channels() const noexcept { return channels_; }
  const PcenParams& params() const noexcept { return params_; }
  const std::vector<SmootherState>& states() const noexcept { return states_; }

  std::vector<double> step(std::span<const double> energy) {
    if (energy.size() != channels_) {
      throw ShapeError("stream frame has " + std::to_string(energy.size()) +
                       " channels, expected " + std::to_string(channels_));
    }
    for (std::size_t f = 0; f < channels_; ++f) {
      if (!(energy[f] >= 0.0) || !std::isfinite(energy[f])) {
        throw ParameterError("negative or non-finite stream energy");
      }
    }
    for (std::size_t k = 0; k < states_.size(); ++k) {
      auto& st = states_[k];
      const auto& s = coefficients_[k];
      if (!st.initialized) {
        st.m.resize(channels_);
        for (std::size_t f = 0; f < channels_; ++f) {
          st.m[f] = iir_first(energy[f], s[f], params_.init);
        }
        st.initialized = true;
      } else {
        for (std::size_t f = 0; f < channels_; ++f) {
          st.m[f] = iir_step(st.m[f], energy[f], s[f]);
        }
      }
    }
    std::vector<double> out(channels_);
    for (std::size_t f = 0; f < channels_; ++f) {
      double m = states_[0].m[f];
      if (!weights_.empty()) {
        double acc = 0.0;
        for (std::size_t k = 0; k < states_.size(); ++k) {
          acc += weights_(k, f) * states_[k].m[f];
        }
        m = acc;
      }
      if (params_.delta[f] == 0.0 && energy[f] == 0.0) {
        throw ParameterError("delta = 0 with zero energy at channel " +
                             std::to_string(f));
      }
      out[f] = pcen_bin(energy[f], m, params_.eps, params_.alpha[f],
                        params_.delta[f], params_.r[f]);
    }
    return out;
  }

 private:
  PcenParams params_;
  std::size_t channels_;
  std::vector<std::vector<double>> coefficients_;
  Gram weights_;
  std::vector<SmootherState> states_;
};

inline PcenStream stream_init(PcenParams params, std::size_t channels) {
  return PcenStream(std::move(params), channels);
}

inline std::vector<double> stream_step(PcenStream& stream,
                                       std::span<const double> energy_frame) {
  return stream.step(energy_frame);
}

}  // namespace pcen::frontend
