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

#include "afkit/plane.hpp"

#include <algorithm>
#include <string>

#include "afkit/error.hpp"

namespace afkit {

int border_index(int i, int n, Border border) noexcept {
  if (i >= 0 && i < n) return i;
  if (n == 1) return 0;
  switch (border) {
    case Border::kReplicate:
      return std::clamp(i, 0, n - 1);
    case Border::kReflect101:
    case Border::kSymmetric: {
      const int delta = border == Border::kReflect101 ? 1 : 0;
      do {
        if (i < 0) {
          i = -i - 1 + delta;
        } else {
          i = n - 1 - (i - n) - delta;
        }
      } while (i < 0 || i >= n);
      return i;
    }
  }
  return 0;
}

std::vector<Plane> split_planes(const ImageBuffer& img) {
  const int c = img.channels();
  std::vector<Plane> planes(c, Plane(img.width(), img.height()));
  const std::size_t n = static_cast<std::size_t>(img.width()) * img.height();
  if (img.is_u8()) {
    const auto s = img.u8();
    for (std::size_t i = 0; i < n; ++i) {
      for (int ch = 0; ch < c; ++ch) planes[ch].data[i] = s[i * c + ch];
    }
  } else {
    const auto s = img.f64();
    for (std::size_t i = 0; i < n; ++i) {
      for (int ch = 0; ch < c; ++ch) planes[ch].data[i] = s[i * c + ch];
    }
  }
  return planes;
}

ImageBuffer merge_planes(std::span<const Plane> planes, SampleType type) {
  if (planes.empty()) throw Error(ErrorCode::kInvalidArgument, "no planes to merge");
  const int w = planes[0].width;
  const int h = planes[0].height;
  const int c = static_cast<int>(planes.size());
  for (const auto& p : planes) {
    if (p.width != w || p.height != h) {
      throw Error(ErrorCode::kDimensionMismatch, "plane sizes differ");
    }
  }
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> interleaved(n * c);
  for (std::size_t i = 0; i < n; ++i) {
    for (int ch = 0; ch < c; ++ch) interleaved[i * c + ch] = planes[ch].data[i];
  }
  if (type == SampleType::kFloat) {
    return ImageBuffer::from_float(w, h, c, std::move(interleaved));
  }
  std::vector<std::uint8_t> out(interleaved.size());
  simd::active_kernels().quantize_u8(interleaved.data(), out.data(), out.size());
  return ImageBuffer::from_u8(w, h, c, std::move(out));
}

namespace {

void pad_row(const double* src, int n, int left, int right, Border border, double* dst) {
  for (int i = -left; i < n + right; ++i) dst[i + left] = src[border_index(i, n, border)];
}

}  // namespace

Plane correlate(const Plane& src, std::span<const double> weights, int ksize,
                Border border, const simd::Kernels& k) {
  if (ksize < 1 || ksize % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "kernel size must be odd, got " + std::to_string(ksize));
  }
  if (weights.size() != static_cast<std::size_t>(ksize) * ksize) {
    throw Error(ErrorCode::kInvalidArgument, "kernel weight count mismatch");
  }
  const int r = ksize / 2;
  const int pw = src.width + 2 * r;
  Plane padded(pw, src.height + 2 * r);
  for (int y = -r; y < src.height + r; ++y) {
    pad_row(src.row(border_index(y, src.height, border)), src.width, r, r, border,
            padded.row(y + r));
  }
  Plane out(src.width, src.height);
  for (int y = 0; y < src.height; ++y) {
    double* dst = out.row(y);
    for (int i = 0; i < ksize; ++i) {
      const double* prow = padded.row(y + i);
      for (int j = 0; j < ksize; ++j) {
        k.axpy(dst, prow + j, weights[i * ksize + j], src.width);
      }
    }
  }
  return out;
}

Plane filter_separable(const Plane& src, std::span<const double> kernel, Border border,
                       const simd::Kernels& k) {
  const int n = static_cast<int>(kernel.size());
  if (n % 2 == 0) throw Error(ErrorCode::kInvalidArgument, "kernel size must be odd");
  const int r = n / 2;
  Plane horiz(src.width, src.height);
  std::vector<double> padded(src.width + 2 * r);
  for (int y = 0; y < src.height; ++y) {
    pad_row(src.row(y), src.width, r, r, border, padded.data());
    double* dst = horiz.row(y);
    for (int j = 0; j < n; ++j) k.axpy(dst, padded.data() + j, kernel[j], src.width);
  }
  Plane out(src.width, src.height);
  for (int y = 0; y < src.height; ++y) {
    double* dst = out.row(y);
    for (int i = 0; i < n; ++i) {
      k.axpy(dst, horiz.row(border_index(y + i - r, src.height, border)), kernel[i],
             src.width);
    }
  }
  return out;
}

Plane filter_separable_valid(const Plane& src, std::span<const double> kernel,
                             const simd::Kernels& k) {
  const int n = static_cast<int>(kernel.size());
  const int ow = src.width - n + 1;
  const int oh = src.height - n + 1;
  if (ow < 1 || oh < 1) {
    throw Error(ErrorCode::kImageTooSmall, "plane smaller than filter window");
  }
  Plane horiz(ow, src.height);
  for (int y = 0; y < src.height; ++y) {
    double* dst = horiz.row(y);
    for (int j = 0; j < n; ++j) k.axpy(dst, src.row(y) + j, kernel[j], ow);
  }
  Plane out(ow, oh);
  for (int y = 0; y < oh; ++y) {
    double* dst = out.row(y);
    for (int i = 0; i < n; ++i) k.axpy(dst, horiz.row(y + i), kernel[i], ow);
  }
  return out;
}

Plane resample(const Plane& src, const ResampleTable& x, const ResampleTable& y,
               Border border, const simd::Kernels& k) {
  if (x.in_size != src.width || y.in_size != src.height) {
    throw Error(ErrorCode::kDimensionMismatch, "resample table does not match plane");
  }
  // Horizontal: pad each row so every tap run is contiguous.
  int lo = 0;
  int hi = src.width - 1;
  for (int i = 0; i < x.out_size; ++i) {
    lo = std::min(lo, x.start[i]);
    hi = std::max(hi, x.start[i] + x.taps - 1);
  }
  const int left = -lo;
  const int right = hi - (src.width - 1);
  std::vector<std::int32_t> start(x.out_size);
  for (int i = 0; i < x.out_size; ++i) start[i] = x.start[i] + left;

  Plane horiz(x.out_size, src.height);
  std::vector<double> padded(src.width + left + right);
  for (int r = 0; r < src.height; ++r) {
    pad_row(src.row(r), src.width, left, right, border, padded.data());
    k.gather_taps(horiz.row(r), padded.data(), start.data(), x.weights.data(), x.taps,
                  x.out_size);
  }

  Plane out(x.out_size, y.out_size);
  for (int r = 0; r < y.out_size; ++r) {
    double* dst = out.row(r);
    for (int t = 0; t < y.taps; ++t) {
      const int sr = border_index(y.start[r] + t, src.height, border);
      k.axpy(dst, horiz.row(sr), y.weights[static_cast<std::size_t>(t) * y.out_size + r],
             x.out_size);
    }
  }
  return out;
}

}  // namespace afkit
