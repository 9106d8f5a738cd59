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

#include <stdexcept>
#include <string>

namespace pcen {

// Base class for every error raised by the library. The category lets the
// command-line tool map failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  enum class Category {
    kDecode,
    kUnsupportedFormat,
    kEmptyOutput,
    kSize,
    kShape,
    kConfiguration,
    kParameter,
    kCannotScale,
    kTraining,
    kIo,
    kParse,
  };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

#define PCEN_DEFINE_ERROR(Name, Cat)                 \
  class Name : public Error {                        \
   public:                                           \
    explicit Name(const std::string& what)           \
        : Error(Category::Cat, what) {}              \
  };

PCEN_DEFINE_ERROR(DecodeError, kDecode)
PCEN_DEFINE_ERROR(UnsupportedFormatError, kUnsupportedFormat)
PCEN_DEFINE_ERROR(EmptyOutputError, kEmptyOutput)
PCEN_DEFINE_ERROR(SizeError, kSize)
PCEN_DEFINE_ERROR(ShapeError, kShape)
PCEN_DEFINE_ERROR(ConfigurationError, kConfiguration)
PCEN_DEFINE_ERROR(ParameterError, kParameter)
PCEN_DEFINE_ERROR(CannotScaleError, kCannotScale)
PCEN_DEFINE_ERROR(TrainingError, kTraining)
PCEN_DEFINE_ERROR(IoError, kIo)
PCEN_DEFINE_ERROR(ParseError, kParse)

#undef PCEN_DEFINE_ERROR

}  // namespace pcen
