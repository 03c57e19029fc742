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

#include "afkit/error.hpp"

namespace afkit {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kImageTooSmall: return "image-too-small";
    case ErrorCode::kFileNotFound: return "file-not-found";
    case ErrorCode::kUnwritablePath: return "unwritable-path";
    case ErrorCode::kMalformedPng: return "malformed-png";
    case ErrorCode::kUnsupportedBitDepth: return "unsupported-bit-depth";
    case ErrorCode::kAlphaRejected: return "alpha-rejected";
    case ErrorCode::kNotQuantized: return "not-quantized";
    case ErrorCode::kJpegParse: return "jpeg-parse";
    case ErrorCode::kJpegUnsupported: return "jpeg-unsupported";
    case ErrorCode::kModelFormat: return "model-format";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kMissingPrediction: return "missing-prediction";
    case ErrorCode::kPairing: return "pairing";
    case ErrorCode::kWorkerUnavailable: return "worker-unavailable";
    case ErrorCode::kWorkerTimeout: return "worker-timeout";
    case ErrorCode::kWorkerExit: return "worker-exit";
    case ErrorCode::kWorkerProtocol: return "worker-protocol";
    case ErrorCode::kWorkerTaskFailed: return "worker-task-failed";
    case ErrorCode::kWorkerContract: return "worker-contract";
  }
  return "unknown";
}

JpegParseError::JpegParseError(std::size_t offset, const std::string& message)
    : Error(ErrorCode::kJpegParse,
            "jpeg parse error at byte " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

SchemaError::SchemaError(std::string source, std::size_t line,
                         const std::string& message)
    : Error(ErrorCode::kSchema,
            source + ":" + std::to_string(line) + ": " + message),
      source_(std::move(source)),
      line_(line) {}

}  // namespace afkit
