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

// PcenParams text files. Schema (one "key = value" per line, '#' comments):
//
//   format = pcen-params
//   version = 1
//   channels = F
//   eps = <real>
//   init = first-frame | zero
//   alpha = <F reals>
//   delta = <F reals>
//   r = <F reals>
//   smoother = single | per-channel | bank
//   smoother.s = <real>                    (single)
//   smoother.s = <F reals>                 (per-channel)
//   smoother.coefficients = <K reals>      (bank)
//   smoother.logits.<k> = <F reals>        (bank, k = 0..K-1)
//
// Reals use shortest round-trip formatting, so save -> load is bit-exact.

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "pcen/errors.hpp"
#include "pcen/frontend/params.hpp"
#include "pcen/keyvalue.hpp"

namespace pcen::frontend {

inline KeyValueDoc params_to_doc(const PcenParams& p) {
  KeyValueDoc doc;
  doc.set("format", "pcen-params");
  doc.set_integer("version", 1);
  doc.set_integer("channels", static_cast<std::int64_t>(p.channels()));
  doc.set_real("eps", p.eps);
  doc.set("init", p.init == SmootherInit::kFirstFrame ? "first-frame" : "zero");
  doc.set_reals("alpha", p.alpha);
  doc.set_reals("delta", p.delta);
  doc.set_reals("r", p.r);
  std::visit(
      [&](const auto& sm) {
        using T = std::decay_t<decltype(sm)>;
        if constexpr (std::is_same_v<T, SingleSmoother>) {
          doc.set("smoother", "single");
          doc.set_real("smoother.s", sm.s);
        } else if constexpr (std::is_same_v<T, PerChannelSmoother>) {
          doc.set("smoother", "per-channel");
          doc.set_reals("smoother.s", sm.s);
        } else {
          doc.set("smoother", "bank");
          doc.set_reals("smoother.coefficients", sm.coefficients);
          for (std::size_t k = 0; k < sm.logits.rows(); ++k) {
            doc.set_reals("smoother.logits." + std::to_string(k), sm.logits.row(k));
          }
        }
      },
      p.smoother);
  return doc;
}

inline PcenParams params_from_doc(const KeyValueDoc& doc) {
  if (doc.get("format") != "pcen-params") {
    throw ParseError("not a pcen-params document");
  }
  if (doc.get_integer("version") != 1) {
    throw ParseError("unsupported pcen-params version");
  }
  const auto channels = static_cast<std::size_t>(doc.get_integer("channels"));
  PcenParams p;
  p.eps = doc.get_real("eps");
  const auto& init = doc.get("init");
  if (init == "first-frame") {
    p.init = SmootherInit::kFirstFrame;
  } else if (init == "zero") {
    p.init = SmootherInit::kZero;
  } else {
    throw ParseError("unknown init '" + init + "'");
  }
  p.alpha = doc.get_reals("alpha", channels);
  p.delta = doc.get_reals("delta", channels);
  p.r = doc.get_reals("r", channels);
  const auto& kind = doc.get("smoother");
  if (kind == "single") {
    p.smoother = SingleSmoother{doc.get_real("smoother.s")};
  } else if (kind == "per-channel") {
    p.smoother = PerChannelSmoother{doc.get_reals("smoother.s", channels)};
  } else if (kind == "bank") {
    SmootherBank bank;
    bank.coefficients = doc.get_reals("smoother.coefficients");
    bank.logits = Gram(bank.coefficients.size(), channels);
    for (std::size_t k = 0; k < bank.coefficients.size(); ++k) {
      auto row = doc.get_reals("smoother.logits." + std::to_string(k), channels);
      std::copy(row.begin(), row.end(), bank.logits.row(k).begin());
    }
    p.smoother = std::move(bank);
  } else {
    throw ParseError("unknown smoother kind '" + kind + "'");
  }
  p.validate(channels);
  return p;
}

inline std::string serialize_params(const PcenParams& p) {
  return params_to_doc(p).render("pcen-params");
}

inline PcenParams parse_params(std::string_view text) {
  return params_from_doc(KeyValueDoc::parse(text));
}

inline void save_params(const std::string& path, const PcenParams& p) {
  write_text_file(path, serialize_params(p));
}

inline PcenParams load_params(const std::string& path) {
  return parse_params(read_text_file(path));
}

}  // namespace pcen::frontend
