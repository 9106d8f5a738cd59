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

// Synthetic two-class keyword corpus. A "keyword" is a fixed pair of
// harmonic chirps (a rising segment followed by a falling one) with jitter
// in pitch and timing over colored background noise. Non-keywords are
// either noise alone or a single segment of the keyword. Every clip is
// normalized to the same RMS level, so energy alone does not identify the
// class.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "pcen/dsp/audio.hpp"
#include "pcen/dsp/energy.hpp"
#include "pcen/errors.hpp"

namespace pcen::kws {

enum class Label : int { kNonKeyword = 0, kKeyword = 1 };

enum class ClipTemplate { kKeyword, kNoise, kSingleChirp };

inline std::string to_string(ClipTemplate t) {
  switch (t) {
    case ClipTemplate::kKeyword:
      return "keyword";
    case ClipTemplate::kNoise:
      return "noise";
    case ClipTemplate::kSingleChirp:
      return "single-chirp";
  }
  return "unknown";
}

inline ClipTemplate template_from_string(const std::string& s) {
  if (s == "keyword") return ClipTemplate::kKeyword;
  if (s == "noise") return ClipTemplate::kNoise;
  if (s == "single-chirp") return ClipTemplate::kSingleChirp;
  throw ParseError("unknown clip template '" + s + "'");
}

struct ClipMetadata {
  std::uint64_t seed = 0;
  ClipTemplate clip_template = ClipTemplate::kNoise;
  double dbfs = 0.0;  // RMS level of the stored samples
};

struct LabeledClip {
  dsp::AudioBuffer audio;
  Label label = Label::kNonKeyword;
  ClipMetadata metadata;
};

struct SynthConfig {
  double clip_seconds = 0.6;
  double level_dbfs = -30.0;
  // Keyword-to-noise ratio, drawn uniformly per clip.
  double snr_db_lo = 0.0;
  double snr_db_hi = 12.0;
  // Relative pitch jitter (uniform in [1 - j, 1 + j]).
  double pitch_jitter = 0.08;
};

namespace synth_detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Linear-frequency chirp with three decaying harmonics and 10 ms raised-
// cosine attack/release, added into out starting at sample `start`.
inline void add_chirp(std::vector<double>& out, int sample_rate, std::size_t start,
                      double seconds, double f_begin, double f_end, double amplitude) {
  const auto n = static_cast<std::size_t>(seconds * sample_rate);
  const auto ramp = static_cast<std::size_t>(0.010 * sample_rate);
  double phase = 0.0;
  for (std::size_t i = 0; i < n && start + i < out.size(); ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(n);
    const double f = f_begin + (f_end - f_begin) * frac;
    phase += 2.0 * std::numbers::pi * f / sample_rate;
    double env = 1.0;
    if (i < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * i / ramp);
    if (n - i <= ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * (n - i) / ramp);
    const double v = std::sin(phase) + 0.5 * std::sin(2.0 * phase) +
                     0.25 * std::sin(3.0 * phase);
    out[start + i] += amplitude * env * v;
  }
}

// Gaussian noise through a one-pole filter; `color` in [0, 0.9) tilts the
// spectrum toward low frequencies.
inline std::vector<double> colored_noise(std::size_t n, double color, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> out(n);
  double state = 0.0;
  for (auto& x : out) {
    state = color * state + g(rng);
    x = state;
  }
  return out;
}

inline double energy(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

}  // namespace synth_detail

// Segment shapes of the keyword (Hz, before pitch jitter).
inline constexpr double kRiseBegin = 500.0, kRiseEnd = 1100.0;
inline constexpr double kFallBegin = 2400.0, kFallEnd = 1300.0;
inline constexpr double kSegmentSeconds = 0.12, kGapSeconds = 0.04;

inline LabeledClip synth_clip(std::uint64_t clip_seed, ClipTemplate tmpl, int sample_rate,
                              const SynthConfig& cfg) {
  using namespace synth_detail;
  std::mt19937_64 rng(clip_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<std::size_t>(cfg.clip_seconds * sample_rate);
  std::vector<double> signal(n, 0.0);

  const double pitch = 1.0 + cfg.pitch_jitter * (2.0 * unit(rng) - 1.0);
  const double seg = kSegmentSeconds * (0.9 + 0.2 * unit(rng));
  const double gap = kGapSeconds * (0.5 + unit(rng));
  const double span = 2.0 * seg + gap;
  const double latest = std::max(0.05, cfg.clip_seconds - span - 0.05);
  const double onset = 0.05 + (latest - 0.05) * unit(rng);
  const auto at = [&](double seconds) { return static_cast<std::size_t>(seconds * sample_rate); };

  const bool rise_first = unit(rng) < 0.5;
  switch (tmpl) {
    case ClipTemplate::kKeyword:
      add_chirp(signal, sample_rate, at(onset), seg, kRiseBegin * pitch, kRiseEnd * pitch, 1.0);
      add_chirp(signal, sample_rate, at(onset + seg + gap), seg, kFallBegin * pitch,
                kFallEnd * pitch, 1.0);
      break;
    case ClipTemplate::kSingleChirp:
      if (rise_first) {
        add_chirp(signal, sample_rate, at(onset), seg, kRiseBegin * pitch, kRiseEnd * pitch, 1.0);
      } else {
        add_chirp(signal, sample_rate, at(onset + seg + gap), seg, kFallBegin * pitch,
                  kFallEnd * pitch, 1.0);
      }
      break;
    case ClipTemplate::kNoise:
      break;
  }

  const double color = 0.9 * unit(rng);
  std::vector<double> noise = colored_noise(n, color, rng);
  const double snr_db = cfg.snr_db_lo + (cfg.snr_db_hi - cfg.snr_db_lo) * unit(rng);
  // Keyword power is measured over the keyword span only.
  // Mean power of the three harmonics at unit amplitude: (1 + 1/4 + 1/16) / 2.
  const double keyword_power = 0.65625;
  const double noise_power = energy(noise) / static_cast<double>(n);
  const double noise_gain =
      std::sqrt(keyword_power / std::pow(10.0, snr_db / 10.0) / noise_power);
  for (std::size_t i = 0; i < n; ++i) signal[i] += noise_gain * noise[i];

  LabeledClip clip;
  clip.audio = dsp::scale_to_dbfs(dsp::AudioBuffer{std::move(signal), sample_rate},
                                  cfg.level_dbfs);
  clip.label = tmpl == ClipTemplate::kKeyword ? Label::kKeyword : Label::kNonKeyword;
  clip.metadata = {clip_seed, tmpl, cfg.level_dbfs};
  return clip;
}

// n_per_class keywords followed by n_per_class non-keywords (alternating
// noise and single-chirp templates). Deterministic given seed.
inline std::vector<LabeledClip> synth_dataset(std::size_t n_per_class, std::uint64_t seed,
                                              int sample_rate = 16000,
                                              const SynthConfig& cfg = {}) {
  using synth_detail::splitmix64;
  if (n_per_class < 1) throw ParameterError("synth_dataset needs n_per_class >= 1");
  std::vector<LabeledClip> out;
  out.reserve(2 * n_per_class);
  std::uint64_t state = seed;
  for (std::size_t i = 0; i < n_per_class; ++i) {
    state = splitmix64(state);
    out.push_back(synth_clip(state, ClipTemplate::kKeyword, sample_rate, cfg));
  }
  for (std::size_t i = 0; i < n_per_class; ++i) {
    state = splitmix64(state);
    out.push_back(synth_clip(state, i % 2 == 0 ? ClipTemplate::kNoise
                                               : ClipTemplate::kSingleChirp,
                             sample_rate, cfg));
  }
  return out;
}

// Rescales the clip to a level drawn uniformly from [lo_dbfs, hi_dbfs].
inline LabeledClip augment_loudness(const LabeledClip& clip, std::uint64_t rng_seed,
                                    double lo_dbfs = -45.0, double hi_dbfs = -15.0) {
  if (!(lo_dbfs <= hi_dbfs)) throw ParameterError("augment_loudness needs lo <= hi");
  std::mt19937_64 rng(rng_seed);
  const double target =
      lo_dbfs == hi_dbfs ? lo_dbfs
                         : std::uniform_real_distribution<double>(lo_dbfs, hi_dbfs)(rng);
  LabeledClip out = clip;
  out.audio = dsp::scale_to_dbfs(clip.audio, target);
  out.metadata.dbfs = target;
  return out;
}

// Every clip rescaled to one fixed level.
inline std::vector<LabeledClip> at_level(const std::vector<LabeledClip>& clips, double dbfs) {
  std::vector<LabeledClip> out;
  out.reserve(clips.size());
  for (const auto& c : clips) out.push_back(augment_loudness(c, 0, dbfs, dbfs));
  return out;
}

// `copies` independently augmented versions of each clip.
inline std::vector<LabeledClip> multi_loudness(const std::vector<LabeledClip>& clips,
                                               std::uint64_t seed, std::size_t copies = 1,
                                               double lo_dbfs = -45.0,
                                               double hi_dbfs = -15.0) {
  std::vector<LabeledClip> out;
  out.reserve(clips.size() * copies);
  std::uint64_t state = seed;
  for (std::size_t c = 0; c < copies; ++c) {
    for (const auto& clip : clips) {
      state = synth_detail::splitmix64(state);
      out.push_back(augment_loudness(clip, state, lo_dbfs, hi_dbfs));
    }
  }
  return out;
}

}  // namespace pcen::kws
