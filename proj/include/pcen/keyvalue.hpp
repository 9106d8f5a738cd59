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

// Line-oriented "key = value" text documents used for parameter files,
// checkpoints and manifests. Real numbers are written in shortest
// round-trip form so save/load is exact.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "pcen/errors.hpp"

namespace pcen {

inline std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view token) {
  double v = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw ParseError("not a real number: '" + std::string(token) + "'");
  }
  return v;
}

inline std::int64_t parse_integer(std::string_view token) {
  std::int64_t v = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw ParseError("not an integer: '" + std::string(token) + "'");
  }
  return v;
}

inline std::uint64_t parse_unsigned(std::string_view token) {
  std::uint64_t v = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw ParseError("not an unsigned integer: '" + std::string(token) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

class KeyValueDoc {
 public:
  void set(std::string key, std::string value) {
    for (auto& [k, v] : entries_) {
      if (k == key) {
        v = std::move(value);
        return;
      }
    }
    entries_.emplace_back(std::move(key), std::move(value));
  }
  void set_real(std::string key, double v) { set(std::move(key), format_real(v)); }
  void set_integer(std::string key, std::int64_t v) {
    set(std::move(key), std::to_string(v));
  }
  void set_reals(std::string key, std::span<const double> values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) s += ' ';
      s += format_real(values[i]);
    }
    set(std::move(key), std::move(s));
  }

  bool has(std::string_view key) const { return find(key) != nullptr; }

  const std::string& get(std::string_view key) const {
    const std::string* v = find(key);
    if (v == nullptr) throw ParseError("missing key '" + std::string(key) + "'");
    return *v;
  }
  double get_real(std::string_view key) const { return parse_real(get(key)); }
  std::int64_t get_integer(std::string_view key) const {
    return parse_integer(get(key));
  }
  std::vector<double> get_reals(std::string_view key) const {
    std::vector<double> out;
    for (auto tok : split_whitespace(get(key))) out.push_back(parse_real(tok));
    return out;
  }
  std::vector<double> get_reals(std::string_view key,
                                std::size_t expected) const {
    auto out = get_reals(key);
    if (out.size() != expected) {
      throw ParseError("key '" + std::string(key) + "' has " +
                       std::to_string(out.size()) + " values, expected " +
                       std::to_string(expected));
    }
    return out;
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  std::string render(std::string_view header_comment = {}) const {
    std::ostringstream os;
    if (!header_comment.empty()) os << "# " << header_comment << '\n';
    for (const auto& [k, v] : entries_) os << k << " = " << v << '\n';
    return os.str();
  }

  static KeyValueDoc parse(std::string_view text) {
    KeyValueDoc doc;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      auto first = line.find_first_not_of(" \t");
      if (first == std::string_view::npos || line[first] == '#') {
        if (end == text.size()) break;
        continue;
      }
      auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected 'key = value'");
      }
      doc.set(std::string(trim(line.substr(0, eq))),
              std::string(trim(line.substr(eq + 1))));
      if (end == text.size()) break;
    }
    return doc;
  }

 private:
  static std::string_view trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
  }

  const std::string* find(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  std::vector<std::pair<std::string, std::string>> entries_;
};

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace pcen
