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
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pcen/dsp/audio.hpp"
#include "pcen/errors.hpp"
#include "pcen/frontend/params.hpp"
#include "pcen/frontend/pcen.hpp"
#include "pcen/graddsp/trainable.hpp"
#include "pcen/kws/dataset.hpp"
#include "pcen/kws/features.hpp"
#include "pcen/kws/model.hpp"
#include "pcen/matrix.hpp"

namespace pcen::kws {

struct TrainConfig {
  FrontendMode mode = FrontendMode::kTrainablePcen;
  // Joint epochs. In trainable mode with bootstrap enabled, bootstrap_epochs
  // classifier-only epochs on the initial (frozen) layer run first.
  std::size_t epochs = 10;
  double lr = 0.01;
  std::uint64_t seed = 0;
  std::size_t hidden = 64;
  std::size_t batch_clips = 8;
  // Every window_stride-th context window is used for training and for the
  // loss history.
  std::size_t window_stride = 1;
  double frontend_lr_scale = 1.0;
  bool bootstrap = true;
  std::size_t bootstrap_epochs = 5;
  std::size_t smoothers = 2;
  double log_offset = 0.1;
  frontend::LogMode log_mode = frontend::LogMode::kStabilized;
  // Parameters for fixed-pcen mode; fixed_defaults(F) when unset.
  std::optional<frontend::PcenParams> fixed_params;
  std::size_t left_context = kLeftContext;
  std::size_t right_context = kRightContext;
};

struct TrainResult {
  FrontendMode mode = FrontendMode::kLogMel;
  ToyModel model;
  std::optional<graddsp::TrainablePcen> layer;  // trainable mode only
  frontend::PcenParams fixed_params;            // fixed-pcen mode only
  double log_offset = 0.1;
  frontend::LogMode log_mode = frontend::LogMode::kStabilized;
  // Mean window cross-entropy over the whole training set: entry 0 before
  // training, then one entry per epoch.
  std::vector<double> loss_history;

  // The inference frontend; a trained layer is frozen.
  FeatureFrontend frontend() const {
    switch (mode) {
      case FrontendMode::kLogMel:
        return FeatureFrontend::log_mel(log_offset, log_mode);
      case FrontendMode::kFixedPcen:
        return FeatureFrontend::pcen_with(fixed_params);
      case FrontendMode::kTrainablePcen:
        return FeatureFrontend::pcen_with(graddsp::freeze(*layer));
    }
    throw ConfigurationError("unknown frontend mode");
  }
};

namespace train_detail {

struct Sample {
  const Gram* energies;
  int label;
};

// Start rows of the windows used for training.
inline std::vector<std::size_t> window_starts(std::size_t frames, const TrainConfig& cfg) {
  const std::size_t n = window_count(frames, cfg.left_context, cfg.right_context);
  if (n == 0) {
    throw EmptyOutputError("clip of " + std::to_string(frames) +
                           " frames is shorter than the context window");
  }
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < n; w += cfg.window_stride) out.push_back(w);
  return out;
}

inline std::span<const double> window(const Gram& features, std::size_t start,
                                      std::size_t width) {
  return features.flat().subspan(start * features.cols(), width);
}

}  // namespace train_detail

// Trains on precomputed filterbank energies (one gram per clip).
inline TrainResult train_on_energies(const std::vector<Gram>& energies,
                                     const std::vector<Label>& labels,
                                     const TrainConfig& cfg) {
  using train_detail::window;
  if (energies.empty() || energies.size() != labels.size()) {
    throw TrainingError("training needs a non-empty dataset with one label per clip");
  }
  const bool has_pos = std::count(labels.begin(), labels.end(), Label::kKeyword) > 0;
  const bool has_neg = std::count(labels.begin(), labels.end(), Label::kNonKeyword) > 0;
  if (!has_pos || !has_neg) throw TrainingError("training set must contain both classes");
  if (cfg.window_stride == 0 || cfg.batch_clips == 0) {
    throw ConfigurationError("window_stride and batch_clips must be >= 1");
  }
  if (!(cfg.lr >= 0.0) || !std::isfinite(cfg.lr)) {
    throw ConfigurationError("learning rate must be finite and >= 0");
  }
  const std::size_t channels = energies.front().cols();
  for (const auto& e : energies) {
    if (e.cols() != channels) throw ShapeError("clips differ in channel count");
  }
  const std::size_t span = cfg.left_context + cfg.right_context + 1;
  const std::size_t width = span * channels;

  TrainResult result;
  result.mode = cfg.mode;
  result.log_offset = cfg.log_offset;
  result.log_mode = cfg.log_mode;
  result.fixed_params = cfg.fixed_params.value_or(frontend::PcenParams::fixed_defaults(channels));
  result.model = ToyModel::init(width, cfg.hidden, synth_detail::splitmix64(cfg.seed));
  const bool trainable = cfg.mode == FrontendMode::kTrainablePcen;
  if (trainable) result.layer = graddsp::init_trainable(channels, cfg.smoothers, cfg.seed);

  std::vector<std::vector<std::size_t>> starts(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    starts[i] = train_detail::window_starts(energies[i].rows(), cfg);
  }

  // Features for the fixed frontends never change.
  std::vector<Gram> fixed_features;
  if (!trainable) {
    const FeatureFrontend fe = result.frontend();
    fixed_features.reserve(energies.size());
    for (const auto& e : energies) fixed_features.push_back(fe(e).values);
  }
  auto features_of = [&](std::size_t i) -> Gram {
    if (!trainable) return fixed_features[i];
    return graddsp::trainable_forward(energies[i], *result.layer).first.values;
  };

  auto dataset_loss = [&]() {
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < energies.size(); ++i) {
      const Gram feats = features_of(i);
      const int label = static_cast<int>(labels[i]);
      for (std::size_t w : starts[i]) {
        total += cross_entropy(model_forward(result.model, window(feats, w, width)), label);
        ++count;
      }
    }
    const double loss = total / static_cast<double>(count);
    if (!std::isfinite(loss)) throw TrainingError("training diverged (non-finite loss)");
    return loss;
  };

  result.loss_history.push_back(dataset_loss());
  std::mt19937_64 shuffle_rng(synth_detail::splitmix64(cfg.seed + 1));
  std::vector<std::size_t> order(energies.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const std::size_t warmup = trainable && cfg.bootstrap ? cfg.bootstrap_epochs : 0;
  for (std::size_t epoch = 0; epoch < warmup + cfg.epochs; ++epoch) {
    const bool update_layer = trainable && epoch >= warmup;
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t b = 0; b < order.size(); b += cfg.batch_clips) {
      const std::size_t end = std::min(order.size(), b + cfg.batch_clips);
      std::size_t batch_windows = 0;
      for (std::size_t j = b; j < end; ++j) batch_windows += starts[order[j]].size();
      const double scale = 1.0 / static_cast<double>(batch_windows);

      ModelGrad grad = ModelGrad::zeros_like(result.model);
      std::optional<graddsp::GradBundle> layer_grad;
      if (update_layer) layer_grad = graddsp::GradBundle::zeros(channels, cfg.smoothers);
      std::vector<double> d_input(update_layer ? width : 0);
      for (std::size_t j = b; j < end; ++j) {
        const std::size_t i = order[j];
        const int label = static_cast<int>(labels[i]);
        if (!update_layer) {
          const Gram feats = features_of(i);
          for (std::size_t w : starts[i]) {
            const auto x = window(feats, w, width);
            model_backward(result.model, x, model_forward(result.model, x), label, scale, grad);
          }
          continue;
        }
        auto [feats, cache] = graddsp::trainable_forward(energies[i], *result.layer);
        Gram upstream(feats.values.rows(), channels, 0.0);
        for (std::size_t w : starts[i]) {
          const auto x = window(feats.values, w, width);
          std::fill(d_input.begin(), d_input.end(), 0.0);
          model_backward(result.model, x, model_forward(result.model, x), label, scale, grad,
                         d_input);
          double* dst = upstream.flat().data() + w * channels;
          for (std::size_t k = 0; k < width; ++k) dst[k] += d_input[k];
        }
        *layer_grad += graddsp::trainable_backward(cache, upstream, {.energy_gradient = false});
      }
      apply_sgd(result.model, grad, cfg.lr);
      if (update_layer) {
        *result.layer =
            graddsp::sgd_step(*result.layer, *layer_grad, cfg.lr * cfg.frontend_lr_scale);
        ++result.layer->steps;
      }
    }
    result.loss_history.push_back(dataset_loss());
  }
  if (!result.model.all_finite()) throw TrainingError("classifier weights became non-finite");
  return result;
}

inline std::vector<Label> labels_of(const std::vector<LabeledClip>& clips) {
  std::vector<Label> out;
  out.reserve(clips.size());
  for (const auto& c : clips) out.push_back(c.label);
  return out;
}

inline TrainResult train_joint(const std::vector<LabeledClip>& clips, const TrainConfig& cfg,
                               const dsp::FrontendConfig& frontend_cfg = {},
                               unsigned jobs = 1) {
  if (clips.empty()) throw TrainingError("training set is empty");
  return train_on_energies(clip_energies(clips, frontend_cfg, jobs), labels_of(clips), cfg);
}

}  // namespace pcen::kws
