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

#include <cstddef>
#include <string>
#include <thread>
#include <vector>

#include "pcen/dsp/energy.hpp"
#include "pcen/errors.hpp"
#include "pcen/frontend/feature_gram.hpp"
#include "pcen/frontend/params.hpp"
#include "pcen/frontend/pcen.hpp"
#include "pcen/kws/dataset.hpp"
#include "pcen/matrix.hpp"

namespace pcen::kws {

// 23 past + 1 current + 8 future frames.
inline constexpr std::size_t kLeftContext = 23;
inline constexpr std::size_t kRightContext = 8;

enum class FrontendMode { kLogMel, kFixedPcen, kTrainablePcen };

inline std::string to_string(FrontendMode m) {
  switch (m) {
    case FrontendMode::kLogMel:
      return "logmel";
    case FrontendMode::kFixedPcen:
      return "fixed-pcen";
    case FrontendMode::kTrainablePcen:
      return "trainable-pcen";
  }
  return "unknown";
}

inline FrontendMode frontend_mode_from_string(const std::string& s) {
  if (s == "logmel" || s == "log-mel") return FrontendMode::kLogMel;
  if (s == "fixed-pcen" || s == "pcen") return FrontendMode::kFixedPcen;
  if (s == "trainable-pcen") return FrontendMode::kTrainablePcen;
  throw ParseError("unknown frontend mode '" + s + "'");
}

// A fixed (inference-time) frontend: log-mel or PCEN with given parameters.
struct FeatureFrontend {
  bool use_pcen = true;
  frontend::PcenParams pcen;
  double log_offset = 0.1;
  frontend::LogMode log_mode = frontend::LogMode::kStabilized;

  static FeatureFrontend log_mel(double offset = 0.1,
                                 frontend::LogMode mode = frontend::LogMode::kStabilized) {
    FeatureFrontend f;
    f.use_pcen = false;
    f.log_offset = offset;
    f.log_mode = mode;
    return f;
  }

  static FeatureFrontend pcen_with(frontend::PcenParams params) {
    FeatureFrontend f;
    f.use_pcen = true;
    f.pcen = std::move(params);
    return f;
  }

  frontend::FeatureGram operator()(const Gram& energies) const {
    return use_pcen ? frontend::pcen_forward(energies, pcen)
                    : frontend::log_mel(energies, log_offset, log_mode);
  }
};

// Filterbank energies for every clip. jobs > 1 splits clips over threads;
// results do not depend on the job count.
inline std::vector<Gram> clip_energies(const std::vector<LabeledClip>& clips,
                                       const dsp::FrontendConfig& cfg, unsigned jobs = 1) {
  std::vector<Gram> out(clips.size());
  if (clips.empty()) return out;
  const dsp::EnergyExtractor extract(cfg, clips.front().audio.sample_rate);
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < clips.size(); i += step) {
      out[i] = extract(clips[i].audio).values;
    }
  };
  if (jobs <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j, jobs);
    for (auto& t : pool) t.join();
  }
  return out;
}

inline std::size_t window_count(std::size_t frames, std::size_t left, std::size_t right) {
  const std::size_t span = left + right + 1;
  return frames < span ? 0 : frames - span + 1;
}

// One flattened (left + right + 1) x F window per center frame that has full
// context. Row w is centered on frame w + left.
inline Matrix<double> context_windows(const Gram& features, std::size_t left, std::size_t right) {
  const std::size_t n = window_count(features.rows(), left, right);
  if (n == 0) {
    throw EmptyOutputError("gram of " + std::to_string(features.rows()) +
                           " frames is shorter than a " +
                           std::to_string(left + right + 1) + "-frame context");
  }
  const std::size_t width = (left + right + 1) * features.cols();
  Matrix<double> out(n, width);
  for (std::size_t w = 0; w < n; ++w) {
    auto src = features.flat().subspan(w * features.cols(), width);
    std::copy(src.begin(), src.end(), out.row(w).begin());
  }
  return out;
}

}  // namespace pcen::kws
