// Copyright 2026 The cutmix-lp Authors. All rights reserved.
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

namespace cutmixlp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated (bad box, mismatched shapes).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Invalid or incomplete configuration (policy without auxiliary data,
/// infeasible box range, p outside [0,1], ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Dataset manifest / label file problems. Messages name the file and line or
/// the offending sample id.
class DatasetError : public Error {
 public:
  using Error::Error;
};

enum class FormatErrc {
  kIo,
  kBadMagic,
  kBadVersion,
  kBadDtype,
  kBadRank,
  kDimOverflow,
  kTruncatedPayload,
  kTrailingBytes,
  kUnsupportedPng,
  kValueOutOfRange,
};

const char* to_string(FormatErrc code);

/// Tensor / PNG decoding failures. Each failure mode has its own code.
class FormatError : public Error {
 public:
  FormatError(FormatErrc code, const std::string& what)
      : Error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  FormatErrc code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  FormatErrc code_;
  std::string detail_;
};

}  // namespace cutmixlp
