// Copyright 2026 The Morphoseed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace morphoseed {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (encodings, TSV rows, model files).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A lexicon or hierarchy that parsed but violates an integrity rule.
// Carries every diagnostic found, each prefixed with file:line.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> diagnostics)
      : Error(Join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  static std::string Join(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) {
      if (!out.empty()) out += '\n';
      out += l;
    }
    return out;
  }

  std::vector<std::string> diagnostics_;
};

// Token not present in an embedding vocabulary.
class OovError : public Error {
 public:
  explicit OovError(const std::string& token)
      : Error("out-of-vocabulary token: " + token), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

// Node id not present in the MC hierarchy.
class UnknownNodeError : public Error {
 public:
  explicit UnknownNodeError(const std::string& id)
      : Error("unknown hierarchy node: " + id) {}
};

// A numeric quantity is undefined for the given input (zero vector,
// zero rank variance, degenerate covariance).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace morphoseed
