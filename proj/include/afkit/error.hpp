// Copyright 2026 The afkit Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace afkit {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kImageTooSmall,
  kFileNotFound,
  kUnwritablePath,
  kMalformedPng,
  kUnsupportedBitDepth,
  kAlphaRejected,
  kNotQuantized,
  kJpegParse,
  kJpegUnsupported,
  kModelFormat,
  kSchema,
  kMissingPrediction,
  kPairing,
  kWorkerUnavailable,
  kWorkerTimeout,
  kWorkerExit,
  kWorkerProtocol,
  kWorkerTaskFailed,
  kWorkerContract,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map them to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  bool is_worker_error() const noexcept {
    return code_ >= ErrorCode::kWorkerUnavailable;
  }

 private:
  ErrorCode code_;
};

/// JPEG stream errors remember where in the byte stream parsing stopped.
class JpegParseError : public Error {
 public:
  JpegParseError(std::size_t offset, const std::string& message);

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// CSV/manifest schema violation, with the 1-based line it was found on.
class SchemaError : public Error {
 public:
  SchemaError(std::string source, std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_;
  std::size_t line_;
};

}  // namespace afkit
