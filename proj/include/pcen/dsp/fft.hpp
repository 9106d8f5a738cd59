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
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "pcen/errors.hpp"

namespace pcen::dsp {

// Real-input DFT returning squared magnitudes of bins 0..n/2. Power-of-two
// sizes use an iterative radix-2 FFT; other sizes fall back to a direct DFT.
class PowerSpectrum {
 public:
  explicit PowerSpectrum(int fft_size) : n_(fft_size) {
    if (n_ < 1) throw SizeError("fft_size must be >= 1");
    pow2_ = (n_ & (n_ - 1)) == 0;
    if (pow2_) {
      twiddles_.resize(static_cast<std::size_t>(n_ / 2));
      for (int k = 0; k < n_ / 2; ++k) {
        double a = -2.0 * std::numbers::pi * k / n_;
        twiddles_[k] = {std::cos(a), std::sin(a)};
      }
      bitrev_.resize(static_cast<std::size_t>(n_));
      int bits = 0;
      while ((1 << bits) < n_) ++bits;
      for (int i = 0; i < n_; ++i) {
        int r = 0;
        for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1) << (bits - 1 - b);
        bitrev_[i] = r;
      }
    } else {
      twiddles_.resize(static_cast<std::size_t>(n_));
      for (int k = 0; k < n_; ++k) {
        double a = -2.0 * std::numbers::pi * k / n_;
        twiddles_[k] = {std::cos(a), std::sin(a)};
      }
    }
  }

  int fft_size() const noexcept { return n_; }
  std::size_t num_bins() const noexcept { return static_cast<std::size_t>(n_) / 2 + 1; }

  std::vector<double> operator()(std::span<const double> frame) const {
    if (frame.size() > static_cast<std::size_t>(n_)) {
      throw SizeError("frame of " + std::to_string(frame.size()) +
                      " samples exceeds fft_size " + std::to_string(n_));
    }
    std::vector<double> out(num_bins());
    if (pow2_) {
      std::vector<std::complex<double>> buf(static_cast<std::size_t>(n_));
      for (std::size_t i = 0; i < frame.size(); ++i) buf[bitrev_[i]] = frame[i];
      for (int len = 2; len <= n_; len <<= 1) {
        const int stride = n_ / len;
        for (int start = 0; start < n_; start += len) {
          for (int j = 0; j < len / 2; ++j) {
            auto u = buf[start + j];
            auto v = buf[start + j + len / 2] * twiddles_[j * stride];
            buf[start + j] = u + v;
            buf[start + j + len / 2] = u - v;
          }
        }
      }
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::norm(buf[k]);
    } else {
      for (std::size_t k = 0; k < out.size(); ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < frame.size(); ++i) {
          acc += frame[i] * twiddles_[(k * i) % static_cast<std::size_t>(n_)];
        }
        out[k] = std::norm(acc);
      }
    }
    return out;
  }

 private:
  int n_;
  bool pow2_ = false;
  std::vector<std::complex<double>> twiddles_;
  std::vector<int> bitrev_;
};

// |DFT_k|^2 of the zero-padded frame, k = 0..fft_size/2, unnormalized.
inline std::vector<double> power_spectrum(std::span<const double> frame,
                                          int fft_size) {
  return PowerSpectrum(fft_size)(frame);
}

}  // namespace pcen::dsp
