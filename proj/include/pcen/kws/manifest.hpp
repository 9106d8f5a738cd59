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
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "pcen/dsp/wav.hpp"
#include "pcen/errors.hpp"
#include "pcen/keyvalue.hpp"
#include "pcen/kws/dataset.hpp"

namespace pcen::kws {

// One manifest line: `path label seed template dbfs`. Paths are relative to
// the manifest's directory unless absolute and may not contain whitespace.
struct ManifestEntry {
  std::string path;
  Label label = Label::kNonKeyword;
  ClipMetadata metadata;
};

inline constexpr const char* kManifestHeader = "# path label seed template dbfs";

inline std::string render_manifest(const std::vector<ManifestEntry>& entries) {
  std::string out = std::string(kManifestHeader) + "\n";
  for (const auto& e : entries) {
    if (e.path.empty() || e.path.find_first_of(" \t\r\n") != std::string::npos) {
      throw ParameterError("manifest path '" + e.path + "' is empty or contains whitespace");
    }
    out += e.path + " " + std::to_string(static_cast<int>(e.label)) + " " +
           std::to_string(e.metadata.seed) + " " + to_string(e.metadata.clip_template) + " " +
           format_real(e.metadata.dbfs) + "\n";
  }
  return out;
}

inline std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto tokens = split_whitespace(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    const std::string where = "manifest line " + std::to_string(line_no);
    if (tokens.size() != 5) throw ParseError(where + ": expected 5 fields");
    ManifestEntry e;
    e.path = std::string(tokens[0]);
    const std::int64_t label = parse_integer(tokens[1]);
    if (label != 0 && label != 1) throw ParseError(where + ": label must be 0 or 1");
    e.label = static_cast<Label>(label);
    e.metadata.seed = parse_unsigned(tokens[2]);
    e.metadata.clip_template = template_from_string(std::string(tokens[3]));
    e.metadata.dbfs = parse_real(tokens[4]);
    out.push_back(std::move(e));
  }
  return out;
}

// Writes every clip as a float WAV next to the manifest and returns the
// manifest path.
inline std::string write_dataset(const std::string& directory,
                                 const std::vector<LabeledClip>& clips,
                                 const std::string& manifest_name = "manifest.txt") {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create directory '" + directory + "': " + ec.message());
  std::vector<ManifestEntry> entries;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "clip_%05zu.wav", i);
    dsp::write_wav((std::filesystem::path(directory) / name).string(), clips[i].audio);
    entries.push_back({name, clips[i].label, clips[i].metadata});
  }
  const std::string path = (std::filesystem::path(directory) / manifest_name).string();
  write_text_file(path, render_manifest(entries));
  return path;
}

inline std::vector<LabeledClip> load_dataset(const std::string& manifest_path) {
  const auto entries = parse_manifest(read_text_file(manifest_path));
  const auto base = std::filesystem::path(manifest_path).parent_path();
  std::vector<LabeledClip> clips;
  clips.reserve(entries.size());
  for (const auto& e : entries) {
    const std::filesystem::path p(e.path);
    LabeledClip c;
    c.audio = dsp::read_wav((p.is_absolute() ? p : base / p).string());
    c.label = e.label;
    c.metadata = e.metadata;
    clips.push_back(std::move(c));
  }
  return clips;
}

}  // namespace pcen::kws
