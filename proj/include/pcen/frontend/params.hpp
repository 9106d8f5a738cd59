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
#include <type_traits>
#include <variant>
#include <vector>

#include "pcen/errors.hpp"
#include "pcen/matrix.hpp"

namespace pcen::frontend {

// How M(t, f) is seeded at the first frame.
enum class SmootherInit {
  kFirstFrame,  // M(0, f) = E(0, f)
  kZero,        // M(-1, f) = 0, so M(0, f) = s * E(0, f)
};

// One coefficient shared by every channel.
struct SingleSmoother {
  double s = 0.025;
};

// One coefficient per channel.
struct PerChannelSmoother {
  std::vector<double> s;
};

// K fixed coefficients mixed per channel by softmax(logits(:, f)).
struct SmootherBank {
  std::vector<double> coefficients;
  Gram logits;  // K x F
};

using SmootherSpec = std::variant<SingleSmoother, PerChannelSmoother, SmootherBank>;

inline void validate_coefficient(double s) {
  if (!(s > 0.0 && s <= 1.0)) {
    throw ParameterError("smoothing coefficient " + std::to_string(s) +
                         " outside (0, 1]");
  }
}

// Even channels use the slow smoother, odd channels the fast one.
inline std::vector<double> alternating_coefficients(std::size_t channels,
                                                    double even_s = 0.015,
                                                    double odd_s = 0.08) {
  std::vector<double> s(channels);
  for (std::size_t f = 0; f < channels; ++f) s[f] = (f % 2 == 0) ? even_s : odd_s;
  return s;
}

struct PcenParams {
  double eps = 1e-6;
  std::vector<double> alpha;
  std::vector<double> delta;
  std::vector<double> r;
  SmootherSpec smoother = SingleSmoother{};
  SmootherInit init = SmootherInit::kFirstFrame;

  std::size_t channels() const noexcept { return alpha.size(); }

  // Scalar parameters broadcast to every channel.
  static PcenParams uniform(std::size_t channels, double alpha, double delta,
                            double r, double s, double eps = 1e-6) {
    PcenParams p;
    p.eps = eps;
    p.alpha.assign(channels, alpha);
    p.delta.assign(channels, delta);
    p.r.assign(channels, r);
    p.smoother = SingleSmoother{s};
    return p;
  }

  // s = 0.025, alpha = 0.98, delta = 2, r = 0.5, eps = 1e-6.
  static PcenParams fixed_defaults(std::size_t channels) {
    return uniform(channels, 0.98, 2.0, 0.5, 0.025, 1e-6);
  }

  // eps = 0 is accepted so callers can test exact gain cancellation; the
  // caller is then responsible for keeping M > 0. delta = 0 is accepted here
  // and rejected per-bin in the compression when E = 0.
  void validate(std::size_t expected_channels) const {
    auto check_size = [&](const std::vector<double>& v, const char* name) {
      if (v.size() != expected_channels) {
        throw ShapeError(std::string(name) + " has " + std::to_string(v.size()) +
                         " channels, expected " +
                         std::to_string(expected_channels));
      }
    };
    check_size(alpha, "alpha");
    check_size(delta, "delta");
    check_size(r, "r");
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
      throw ParameterError("eps must be finite and >= 0");
    }
    for (std::size_t f = 0; f < expected_channels; ++f) {
      if (!(alpha[f] > 0.0) || !std::isfinite(alpha[f])) {
        throw ParameterError("alpha[" + std::to_string(f) + "] must be > 0");
      }
      if (!(delta[f] >= 0.0) || !std::isfinite(delta[f])) {
        throw ParameterError("delta[" + std::to_string(f) + "] must be >= 0");
      }
      if (!(r[f] > 0.0) || !std::isfinite(r[f])) {
        throw ParameterError("r[" + std::to_string(f) + "] must be > 0");
      }
    }
    std::visit(
        [&](const auto& sm) {
          using T = std::decay_t<decltype(sm)>;
          if constexpr (std::is_same_v<T, SingleSmoother>) {
            validate_coefficient(sm.s);
          } else if constexpr (std::is_same_v<T, PerChannelSmoother>) {
            check_size(sm.s, "per-channel smoother");
            for (double s : sm.s) validate_coefficient(s);
          } else {
            if (sm.coefficients.empty()) {
              throw ParameterError("smoother bank needs K >= 1 coefficients");
            }
            for (double s : sm.coefficients) validate_coefficient(s);
            if (sm.logits.rows() != sm.coefficients.size() ||
                sm.logits.cols() != expected_channels) {
              throw ShapeError("smoother logits must be K x F");
            }
            for (double z : sm.logits.flat()) {
              if (std::isnan(z)) throw ParameterError("NaN smoother logit");
            }
          }
        },
        smoother);
  }
};

}  // namespace pcen::frontend
