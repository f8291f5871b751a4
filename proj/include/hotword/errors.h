// Copyright (c) 2026 The Hotword Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HOTWORD_ERRORS_H_
#define HOTWORD_ERRORS_H_

#include <stdexcept>
#include <string>

namespace hotword {

// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent input data: malformed files, wrong shapes, invalid
// parameters. The CLI maps these to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

// Environment failures (unreadable paths, broken audio sources). Exit code 3.
class IoError : public Error {
 public:
  using Error::Error;
};

#define HOTWORD_DATA_ERROR(Name)          \
  class Name : public DataError {         \
   public:                                \
    explicit Name(const std::string& msg) \
        : DataError(#Name ": " + msg) {}  \
  }

HOTWORD_DATA_ERROR(DecodeError);
HOTWORD_DATA_ERROR(UnsupportedFormat);
HOTWORD_DATA_ERROR(RateMismatch);
HOTWORD_DATA_ERROR(EmptyCorpus);
HOTWORD_DATA_ERROR(ShapeError);
HOTWORD_DATA_ERROR(ParamError);
HOTWORD_DATA_ERROR(BadMagic);
HOTWORD_DATA_ERROR(ManifestMismatch);
HOTWORD_DATA_ERROR(NonFiniteTensor);
HOTWORD_DATA_ERROR(TemplateError);

#undef HOTWORD_DATA_ERROR

}  // namespace hotword

#endif  // HOTWORD_ERRORS_H_
