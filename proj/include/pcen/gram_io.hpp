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

// Binary and CSV serialization of energy and feature grams.
//
// Binary layout (all integers little-endian):
//   EnergyGram:  "EGRM" | version u32 | T u32 | F u32 | T*F float32
//   FeatureGram: "FGRM" | version u32 | kind u8 | T u32 | F u32 | T*F float32
// Values are row-major (frame by frame). kind is 0 for pcen, 1 for log-mel.

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "pcen/dsp/energy.hpp"
#include "pcen/errors.hpp"
#include "pcen/frontend/feature_gram.hpp"
#include "pcen/keyvalue.hpp"
#include "pcen/matrix.hpp"

namespace pcen {

inline constexpr std::uint32_t kGramFormatVersion = 1;

namespace gram_detail {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  if (at + 4 > b.size()) throw ParseError("gram file truncated");
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

inline void put_values(std::vector<std::uint8_t>& out, const Gram& g) {
  for (double v : g.flat()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

inline Gram get_values(std::span<const std::uint8_t> b, std::size_t at,
                       std::uint32_t rows, std::uint32_t cols) {
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  if (b.size() != at + 4 * n) {
    throw ParseError("gram payload is " + std::to_string(b.size() - at) +
                     " bytes, expected " + std::to_string(4 * n));
  }
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    data[i] = static_cast<double>(std::bit_cast<float>(get_u32(b, at + 4 * i)));
  }
  return Gram(rows, cols, std::move(data));
}

inline void check_magic(std::span<const std::uint8_t> b, const char* magic) {
  if (b.size() < 8 || std::memcmp(b.data(), magic, 4) != 0) {
    throw ParseError(std::string("missing '") + magic + "' magic");
  }
  if (get_u32(b, 4) != kGramFormatVersion) {
    throw ParseError("unsupported gram version " + std::to_string(get_u32(b, 4)));
  }
}

}  // namespace gram_detail

inline std::vector<std::uint8_t> encode_energy_gram(const Gram& values) {
  using namespace gram_detail;
  std::vector<std::uint8_t> out{'E', 'G', 'R', 'M'};
  put_u32(out, kGramFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(values.rows()));
  put_u32(out, static_cast<std::uint32_t>(values.cols()));
  put_values(out, values);
  return out;
}

inline Gram decode_energy_gram(std::span<const std::uint8_t> bytes) {
  using namespace gram_detail;
  check_magic(bytes, "EGRM");
  return get_values(bytes, 16, get_u32(bytes, 8), get_u32(bytes, 12));
}

inline std::vector<std::uint8_t> encode_feature_gram(
    const frontend::FeatureGram& g) {
  using namespace gram_detail;
  std::vector<std::uint8_t> out{'F', 'G', 'R', 'M'};
  put_u32(out, kGramFormatVersion);
  out.push_back(static_cast<std::uint8_t>(g.kind));
  put_u32(out, static_cast<std::uint32_t>(g.values.rows()));
  put_u32(out, static_cast<std::uint32_t>(g.values.cols()));
  put_values(out, g.values);
  return out;
}

inline frontend::FeatureGram decode_feature_gram(
    std::span<const std::uint8_t> bytes) {
  using namespace gram_detail;
  check_magic(bytes, "FGRM");
  if (bytes.size() < 17) throw ParseError("gram file truncated");
  const std::uint8_t kind = bytes[8];
  if (kind > 1) throw ParseError("unknown feature kind " + std::to_string(kind));
  return {get_values(bytes, 17, get_u32(bytes, 9), get_u32(bytes, 13)),
          static_cast<frontend::FeatureKind>(kind)};
}

// One frame per line, channels comma-separated, shortest round-trip reals.
inline std::string gram_to_csv(const Gram& g) {
  std::string out;
  for (std::size_t t = 0; t < g.rows(); ++t) {
    auto row = g.row(t);
    for (std::size_t f = 0; f < row.size(); ++f) {
      if (f) out += ',';
      out += format_real(row[f]);
    }
    out += '\n';
  }
  return out;
}

inline Gram gram_from_csv(std::string_view text) {
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::size_t n = 0;
    std::size_t s = 0;
    while (true) {
      std::size_t c = line.find(',', s);
      data.push_back(parse_real(line.substr(s, c == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : c - s)));
      ++n;
      if (c == std::string_view::npos) break;
      s = c + 1;
    }
    if (rows == 0) cols = n;
    if (n != cols) {
      throw ParseError("CSV row " + std::to_string(rows) + " has " +
                       std::to_string(n) + " columns, expected " +
                       std::to_string(cols));
    }
    ++rows;
  }
  return Gram(rows, cols, std::move(data));
}

}  // namespace pcen
