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

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace afkit {

enum class SampleType { kU8, kFloat };

/// Decoded raster image. Samples are row-major and channel-interleaved,
/// either 8-bit or floating point with a nominal [0,255] range.
///
/// Only 1 (gray) and 3 (RGB) channels are representable.
class ImageBuffer {
 public:
  ImageBuffer() = default;

  /// Zero-filled buffer.
  static ImageBuffer zeros(int width, int height, int channels, SampleType type);

  static ImageBuffer from_u8(int width, int height, int channels,
                             std::vector<std::uint8_t> samples);
  static ImageBuffer from_float(int width, int height, int channels,
                                std::vector<double> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t sample_count() const noexcept {
    return static_cast<std::size_t>(width_) * height_ * channels_;
  }
  bool empty() const noexcept { return sample_count() == 0; }

  SampleType type() const noexcept {
    return std::holds_alternative<std::vector<std::uint8_t>>(samples_)
               ? SampleType::kU8
               : SampleType::kFloat;
  }
  bool is_u8() const noexcept { return type() == SampleType::kU8; }

  /// Typed sample access. Throws kInvalidArgument on a type mismatch.
  std::span<const std::uint8_t> u8() const;
  std::span<std::uint8_t> u8();
  std::span<const double> f64() const;
  std::span<double> f64();

  /// Sample at (x, y, c) as double regardless of storage type.
  double at(int x, int y, int c) const;

  bool same_shape(const ImageBuffer& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  /// Sample-wise equality including the storage type.
  bool operator==(const ImageBuffer& other) const = default;

 private:
  ImageBuffer(int width, int height, int channels,
              std::variant<std::vector<std::uint8_t>, std::vector<double>> samples);

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::variant<std::vector<std::uint8_t>, std::vector<double>> samples_;
};

/// Round half away from zero, clamp to [0,255]. NaN maps to 0.
std::uint8_t saturate_u8(double v) noexcept;

/// Float to 8-bit with saturate_u8 per sample. 8-bit input is returned as is.
ImageBuffer quantize_u8(const ImageBuffer& img);

/// 8-bit to float without scaling. Float input is returned as is.
ImageBuffer to_float(const ImageBuffer& img);

/// BT.601 luma (0.299 R + 0.587 G + 0.114 B) as a 1-channel float image.
/// A 1-channel input is passed through unchanged (converted to float).
ImageBuffer to_luma(const ImageBuffer& img);

/// Copy of a rectangular region. The rectangle must lie inside the image.
ImageBuffer crop(const ImageBuffer& img, int x, int y, int width, int height);

}  // namespace afkit
