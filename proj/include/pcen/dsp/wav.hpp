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

// RIFF/WAVE reading and writing. Supports PCM 16-bit and IEEE float 32-bit,
// any channel count (averaged to mono on decode).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "pcen/dsp/audio.hpp"
#include "pcen/errors.hpp"

namespace pcen::dsp {

enum class WavEncoding { kPcm16, kFloat32 };

namespace wav_detail {

inline std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

inline std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

inline bool tag_is(std::span<const std::uint8_t> b, std::size_t at,
                   const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace wav_detail

inline AudioBuffer decode_wav(std::span<const std::uint8_t> bytes) {
  using namespace wav_detail;
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") ||
      !tag_is(bytes, 8, "WAVE")) {
    throw DecodeError("malformed RIFF header: missing RIFF/WAVE tags");
  }

  bool have_fmt = false;
  std::uint16_t format_tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    std::string id(reinterpret_cast<const char*>(bytes.data() + pos), 4);
    std::uint32_t size = read_u32(bytes, pos + 4);
    std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      throw DecodeError("malformed '" + id + "' chunk: declared size " +
                        std::to_string(size) + " exceeds file length");
    }
    if (id == "fmt ") {
      if (size < 16) throw DecodeError("malformed 'fmt ' chunk: too short");
      format_tag = read_u16(bytes, body);
      channels = read_u16(bytes, body + 2);
      sample_rate = read_u32(bytes, body + 4);
      bits = read_u16(bytes, body + 14);
      if (format_tag == 0xFFFE) {
        if (size < 40) {
          throw DecodeError("malformed 'fmt ' chunk: short extensible header");
        }
        format_tag = read_u16(bytes, body + 24);
      }
      have_fmt = true;
    } else if (id == "data") {
      data = bytes.subspan(body, size);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt) throw DecodeError("malformed file: missing 'fmt ' chunk");
  if (!have_data) throw DecodeError("malformed file: missing 'data' chunk");
  if (channels == 0) throw DecodeError("malformed 'fmt ' chunk: zero channels");
  if (sample_rate == 0) {
    throw DecodeError("malformed 'fmt ' chunk: zero sample rate");
  }

  const bool pcm16 = format_tag == 1 && bits == 16;
  const bool float32 = format_tag == 3 && bits == 32;
  if (!pcm16 && !float32) {
    throw UnsupportedFormatError("unsupported WAVE encoding: format tag " +
                                 std::to_string(format_tag) + ", " +
                                 std::to_string(bits) + " bits");
  }

  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * bits / 8;
  const std::size_t n_frames = data.size() / frame_bytes;
  AudioBuffer out;
  out.sample_rate = static_cast<int>(sample_rate);
  out.samples.resize(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      std::size_t at = i * frame_bytes + c * bits / 8;
      if (pcm16) {
        auto v = static_cast<std::int16_t>(read_u16(data, at));
        acc += static_cast<double>(v) / 32768.0;
      } else {
        float f = std::bit_cast<float>(read_u32(data, at));
        acc += static_cast<double>(f);
      }
    }
    out.samples[i] = acc / channels;
  }
  return out;
}

// Writes a mono file. PCM16 samples are rounded and saturated.
inline std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio,
                                            WavEncoding encoding) {
  using namespace wav_detail;
  const std::uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(audio.samples.size() * bits / 8);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, encoding == WavEncoding::kPcm16 ? 1 : 3);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate) * bits / 8);
  put_u16(out, bits / 8);
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_size);
  for (double x : audio.samples) {
    if (encoding == WavEncoding::kPcm16) {
      double v = std::round(x * 32768.0);
      v = std::min(32767.0, std::max(-32768.0, v));
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
    } else {
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
    }
  }
  return out;
}

inline std::vector<std::uint8_t> read_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

inline void write_binary_file(const std::string& path,
                              std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline AudioBuffer read_wav(const std::string& path) {
  auto bytes = read_binary_file(path);
  try {
    return decode_wav(bytes);
  } catch (const DecodeError& e) {
    throw DecodeError(path + ": " + e.what());
  } catch (const UnsupportedFormatError& e) {
    throw UnsupportedFormatError(path + ": " + e.what());
  }
}

inline void write_wav(const std::string& path, const AudioBuffer& audio,
                      WavEncoding encoding = WavEncoding::kFloat32) {
  write_binary_file(path, encode_wav(audio, encoding));
}

}  // namespace pcen::dsp
