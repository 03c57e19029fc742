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

#include <filesystem>

#include "afkit/image.hpp"

namespace afkit {

enum class AlphaPolicy { kStrip, kReject };

/// Reads an 8-bit grayscale or RGB PNG (palette and sub-byte gray are
/// expanded to 8 bits). No gamma or color conversion is applied.
///
/// Errors: kFileNotFound, kMalformedPng, kUnsupportedBitDepth (16-bit),
/// kAlphaRejected (alpha present and policy is kReject).
ImageBuffer load_png(const std::filesystem::path& path,
                     AlphaPolicy alpha = AlphaPolicy::kStrip);

/// Writes an 8-bit image losslessly. Float buffers are refused with
/// kNotQuantized; call quantize_u8 first.
void save_png(const ImageBuffer& img, const std::filesystem::path& path);

}  // namespace afkit
