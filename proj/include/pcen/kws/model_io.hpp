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

#include <optional>
#include <string>

#include "pcen/errors.hpp"
#include "pcen/frontend/params_io.hpp"
#include "pcen/graddsp/trainable.hpp"
#include "pcen/keyvalue.hpp"
#include "pcen/kws/model.hpp"
#include "pcen/kws/train.hpp"

namespace pcen::kws {

inline std::string to_string(frontend::LogMode m) {
  return m == frontend::LogMode::kClipped ? "clipped" : "stabilized";
}

inline frontend::LogMode log_mode_from_string(const std::string& s) {
  if (s == "clipped") return frontend::LogMode::kClipped;
  if (s == "stabilized") return frontend::LogMode::kStabilized;
  throw ParseError("unknown log mode '" + s + "'");
}

// The classifier together with the description of its frontend. A trained
// PCEN layer is stored separately as a layer checkpoint; fixed PCEN
// parameters are embedded under the "pcen." prefix.
inline std::string serialize_trained_model(const TrainResult& r) {
  KeyValueDoc doc = model_to_doc(r.model);
  doc.set("frontend", to_string(r.mode));
  doc.set_real("log_offset", r.log_offset);
  doc.set("log_mode", to_string(r.log_mode));
  if (r.mode == FrontendMode::kFixedPcen) {
    const KeyValueDoc params = frontend::params_to_doc(r.fixed_params);
    for (const auto& [k, v] : params.entries()) {
      doc.set("pcen." + k, v);
    }
  }
  doc.set_reals("loss_history", r.loss_history);
  return doc.render("keyword classifier");
}

// The layer must be supplied for a trainable-pcen model.
inline TrainResult parse_trained_model(std::string_view text,
                                       std::optional<graddsp::TrainablePcen> layer = {}) {
  const KeyValueDoc doc = KeyValueDoc::parse(text);
  TrainResult r;
  r.model = model_from_doc(doc);
  r.mode = frontend_mode_from_string(doc.get("frontend"));
  r.log_offset = doc.get_real("log_offset");
  r.log_mode = log_mode_from_string(doc.get("log_mode"));
  if (doc.has("loss_history")) r.loss_history = doc.get_reals("loss_history");
  if (r.mode == FrontendMode::kFixedPcen) {
    KeyValueDoc params;
    for (const auto& [k, v] : doc.entries()) {
      if (k.rfind("pcen.", 0) == 0) params.set(k.substr(5), v);
    }
    r.fixed_params = frontend::params_from_doc(params);
  }
  if (r.mode == FrontendMode::kTrainablePcen) {
    if (!layer) throw ConfigurationError("a trainable-pcen model needs its layer checkpoint");
    layer->validate();
    r.layer = std::move(layer);
  }
  return r;
}

}  // namespace pcen::kws
