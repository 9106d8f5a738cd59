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

#include <cstdint>
#include <string>
#include <string_view>

#include "pcen/errors.hpp"
#include "pcen/matrix.hpp"

namespace pcen::frontend {

enum class FeatureKind : std::uint8_t { kPcen = 0, kLogMel = 1 };

inline std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::kPcen ? "pcen" : "log-mel";
}

// T x F compressed features.
struct FeatureGram {
  Gram values;
  FeatureKind kind = FeatureKind::kPcen;

  std::size_t frames() const noexcept { return values.rows(); }
  std::size_t channels() const noexcept { return values.cols(); }
};

}  // namespace pcen::frontend
