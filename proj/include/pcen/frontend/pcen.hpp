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
#include <type_traits>
#include <variant>
#include <vector>

#include "pcen/errors.hpp"
#include "pcen/frontend/feature_gram.hpp"
#include "pcen/frontend/params.hpp"
#include "pcen/frontend/smoothing.hpp"
#include "pcen/matrix.hpp"

namespace pcen::frontend {

// (E / (eps + M)^alpha + delta)^r - delta^r for a single bin.
inline double pcen_bin(double energy, double smoothed, double eps, double alpha,
                       double delta, double r) {
  return std::pow(energy / std::pow(eps + smoothed, alpha) + delta, r) -
         std::pow(delta, r);
}

inline void validate_energies(const Gram& energies) {
  for (std::size_t i = 0; i < energies.size(); ++i) {
    double e = energies.flat()[i];
    if (!(e >= 0.0) || !std::isfinite(e)) {
      throw ParameterError("energy at flat index " + std::to_string(i) +
                           " is negative or non-finite");
    }
  }
}

inline FeatureGram pcen_compress(const Gram& energies, const Gram& smoothed,
                                 const PcenParams& params) {
  require_same_shape(energies, smoothed, "pcen_compress");
  const std::size_t channels = energies.cols();
  FeatureGram out{Gram(energies.rows(), channels), FeatureKind::kPcen};
  for (std::size_t t = 0; t < energies.rows(); ++t) {
    for (std::size_t f = 0; f < channels; ++f) {
      const double e = energies(t, f);
      const double m = smoothed(t, f);
      if (m < 0.0) {
        throw ParameterError("negative smoothed energy at (" +
                             std::to_string(t) + ", " + std::to_string(f) + ")");
      }
      if (params.delta[f] == 0.0 && e == 0.0) {
        throw ParameterError("delta = 0 with zero energy at channel " +
                             std::to_string(f));
      }
      out.values(t, f) = pcen_bin(e, m, params.eps, params.alpha[f],
                                  params.delta[f], params.r[f]);
    }
  }
  return out;
}

// M(t, f) for whichever smoother the parameters describe.
inline Gram smooth_energies(const Gram& energies, const PcenParams& params) {
  return std::visit(
      [&](const auto& sm) -> Gram {
        using T = std::decay_t<decltype(sm)>;
        if constexpr (std::is_same_v<T, SingleSmoother>) {
          return iir_smooth(energies, sm.s, params.init);
        } else if constexpr (std::is_same_v<T, PerChannelSmoother>) {
          return iir_smooth(energies, sm.s, params.init);
        } else {
          return combine_smoothers(energies, sm.coefficients, sm.logits,
                                   params.init);
        }
      },
      params.smoother);
}

inline FeatureGram pcen_forward(const Gram& energies, const PcenParams& params) {
  params.validate(energies.cols());
  validate_energies(energies);
  return pcen_compress(energies, smooth_energies(energies, params), params);
}

enum class LogMode { kClipped, kStabilized };

// clipped: log(max(offset, E)); stabilized: log(E + offset). Natural log.
inline FeatureGram log_mel(const Gram& energies, double offset,
                           LogMode mode = LogMode::kStabilized) {
  if (!(offset > 0.0)) {
    throw ParameterError("log offset must be > 0, got " + std::to_string(offset));
  }
  FeatureGram out{Gram(energies.rows(), energies.cols()), FeatureKind::kLogMel};
  auto src = energies.flat();
  auto dst = out.values.flat();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = mode == LogMode::kClipped ? std::log(std::max(offset, src[i]))
                                       : std::log(src[i] + offset);
  }
  return out;
}

}  // namespace pcen::frontend
