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

#include "afkit/image.hpp"

#include <cmath>
#include <string>

#include "afkit/error.hpp"
#include "afkit/simd.hpp"

namespace afkit {

namespace {

void check_shape(int width, int height, int channels, std::size_t n) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "image dimensions must be >= 1, got " + std::to_string(width) +
                    "x" + std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "unsupported channel count " + std::to_string(channels));
  }
  if (n != static_cast<std::size_t>(width) * height * channels) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample count " + std::to_string(n) + " does not match " +
                    std::to_string(width) + "x" + std::to_string(height) + "x" +
                    std::to_string(channels));
  }
}

}  // namespace

ImageBuffer::ImageBuffer(
    int width, int height, int channels,
    std::variant<std::vector<std::uint8_t>, std::vector<double>> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {}

ImageBuffer ImageBuffer::zeros(int width, int height, int channels, SampleType type) {
  const std::size_t n = static_cast<std::size_t>(std::max(width, 0)) *
                        std::max(height, 0) * std::max(channels, 0);
  if (type == SampleType::kU8) {
    return from_u8(width, height, channels, std::vector<std::uint8_t>(n, 0));
  }
  return from_float(width, height, channels, std::vector<double>(n, 0.0));
}

ImageBuffer ImageBuffer::from_u8(int width, int height, int channels,
                                 std::vector<std::uint8_t> samples) {
  check_shape(width, height, channels, samples.size());
  return ImageBuffer(width, height, channels, std::move(samples));
}

ImageBuffer ImageBuffer::from_float(int width, int height, int channels,
                                    std::vector<double> samples) {
  check_shape(width, height, channels, samples.size());
  return ImageBuffer(width, height, channels, std::move(samples));
}

std::span<const std::uint8_t> ImageBuffer::u8() const {
  if (const auto* v = std::get_if<std::vector<std::uint8_t>>(&samples_)) return *v;
  throw Error(ErrorCode::kInvalidArgument, "image holds float samples, not 8-bit");
}

std::span<std::uint8_t> ImageBuffer::u8() {
  if (auto* v = std::get_if<std::vector<std::uint8_t>>(&samples_)) return *v;
  throw Error(ErrorCode::kInvalidArgument, "image holds float samples, not 8-bit");
}

std::span<const double> ImageBuffer::f64() const {
  if (const auto* v = std::get_if<std::vector<double>>(&samples_)) return *v;
  throw Error(ErrorCode::kInvalidArgument, "image holds 8-bit samples, not float");
}

std::span<double> ImageBuffer::f64() {
  if (auto* v = std::get_if<std::vector<double>>(&samples_)) return *v;
  throw Error(ErrorCode::kInvalidArgument, "image holds 8-bit samples, not float");
}

double ImageBuffer::at(int x, int y, int c) const {
  const std::size_t i =
      (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  if (const auto* v = std::get_if<std::vector<std::uint8_t>>(&samples_)) return (*v)[i];
  return std::get<std::vector<double>>(samples_)[i];
}

std::uint8_t saturate_u8(double v) noexcept {
  if (!(v > 0.0)) return 0;  // also catches NaN
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::round(v));
}

ImageBuffer quantize_u8(const ImageBuffer& img) {
  if (img.is_u8()) return img;
  const auto src = img.f64();
  std::vector<std::uint8_t> out(src.size());
  simd::active_kernels().quantize_u8(src.data(), out.data(), src.size());
  return ImageBuffer::from_u8(img.width(), img.height(), img.channels(), std::move(out));
}

ImageBuffer to_float(const ImageBuffer& img) {
  if (!img.is_u8()) return img;
  const auto src = img.u8();
  std::vector<double> out(src.begin(), src.end());
  return ImageBuffer::from_float(img.width(), img.height(), img.channels(), std::move(out));
}

ImageBuffer to_luma(const ImageBuffer& img) {
  if (img.channels() == 1) return to_float(img);
  const std::size_t n = static_cast<std::size_t>(img.width()) * img.height();
  std::vector<double> out(n);
  if (img.is_u8()) {
    const auto s = img.u8();
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = 0.299 * s[3 * i] + 0.587 * s[3 * i + 1] + 0.114 * s[3 * i + 2];
    }
  } else {
    const auto s = img.f64();
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = 0.299 * s[3 * i] + 0.587 * s[3 * i + 1] + 0.114 * s[3 * i + 2];
    }
  }
  return ImageBuffer::from_float(img.width(), img.height(), 1, std::move(out));
}

ImageBuffer crop(const ImageBuffer& img, int x, int y, int width, int height) {
  if (x < 0 || y < 0 || width < 1 || height < 1 || x + width > img.width() ||
      y + height > img.height()) {
    throw Error(ErrorCode::kInvalidArgument, "crop rectangle outside image");
  }
  const int c = img.channels();
  const std::size_t row = static_cast<std::size_t>(width) * c;
  auto copy_rows = [&](auto src, auto& dst) {
    for (int r = 0; r < height; ++r) {
      const std::size_t off = (static_cast<std::size_t>(y + r) * img.width() + x) * c;
      std::copy_n(src.begin() + off, row, dst.begin() + r * row);
    }
  };
  if (img.is_u8()) {
    std::vector<std::uint8_t> out(row * height);
    copy_rows(img.u8(), out);
    return ImageBuffer::from_u8(width, height, c, std::move(out));
  }
  std::vector<double> out(row * height);
  copy_rows(img.f64(), out);
  return ImageBuffer::from_float(width, height, c, std::move(out));
}

}  // namespace afkit
