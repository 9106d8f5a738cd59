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
#include <cstdint>
#include <string>
#include <string_view>

#include "pcen/errors.hpp"
#include "pcen/graddsp/trainable.hpp"
#include "pcen/keyvalue.hpp"

namespace pcen::graddsp {

// Checkpoint text file with the unconstrained parameters. Schema:
//   format = trainable-pcen, version = 1, channels, smoothers, eps, init,
//   seed, steps, coefficients, log_alpha, log_delta, log_r, z.<k>
inline std::string serialize_checkpoint(const TrainablePcen& layer) {
  KeyValueDoc doc;
  doc.set("format", "trainable-pcen");
  doc.set_integer("version", 1);
  doc.set_integer("channels", static_cast<std::int64_t>(layer.channels()));
  doc.set_integer("smoothers", static_cast<std::int64_t>(layer.smoothers()));
  doc.set_real("eps", layer.eps);
  doc.set("init", layer.init == SmootherInit::kFirstFrame ? "first-frame" : "zero");
  doc.set("seed", std::to_string(layer.seed));
  doc.set_integer("steps", layer.steps);
  doc.set_reals("coefficients", layer.smoother_coefficients);
  doc.set_reals("log_alpha", layer.log_alpha);
  doc.set_reals("log_delta", layer.log_delta);
  doc.set_reals("log_r", layer.log_r);
  for (std::size_t k = 0; k < layer.z.rows(); ++k) {
    doc.set_reals("z." + std::to_string(k), layer.z.row(k));
  }
  return doc.render("trainable-pcen checkpoint");
}

inline TrainablePcen parse_checkpoint(std::string_view text) {
  const KeyValueDoc doc = KeyValueDoc::parse(text);
  if (doc.get("format") != "trainable-pcen") {
    throw ParseError("not a trainable-pcen checkpoint");
  }
  if (doc.get_integer("version") != 1) throw ParseError("unsupported checkpoint version");
  const auto channels = static_cast<std::size_t>(doc.get_integer("channels"));
  const auto k_count = static_cast<std::size_t>(doc.get_integer("smoothers"));
  TrainablePcen layer;
  layer.eps = doc.get_real("eps");
  const auto& init = doc.get("init");
  if (init != "first-frame" && init != "zero") throw ParseError("unknown init '" + init + "'");
  layer.init = init == "first-frame" ? SmootherInit::kFirstFrame : SmootherInit::kZero;
  layer.seed = parse_unsigned(doc.get("seed"));
  layer.steps = doc.get_integer("steps");
  layer.smoother_coefficients = doc.get_reals("coefficients", k_count);
  layer.log_alpha = doc.get_reals("log_alpha", channels);
  layer.log_delta = doc.get_reals("log_delta", channels);
  layer.log_r = doc.get_reals("log_r", channels);
  layer.z = Gram(k_count, channels);
  for (std::size_t k = 0; k < k_count; ++k) {
    auto row = doc.get_reals("z." + std::to_string(k), channels);
    std::copy(row.begin(), row.end(), layer.z.row(k).begin());
  }
  layer.validate();
  return layer;
}

inline void save_checkpoint(const std::string& path, const TrainablePcen& layer) {
  write_text_file(path, serialize_checkpoint(layer));
}

inline TrainablePcen load_checkpoint(const std::string& path) {
  return parse_checkpoint(read_text_file(path));
}

}  // namespace pcen::graddsp
