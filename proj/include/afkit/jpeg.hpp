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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "afkit/image.hpp"

namespace afkit::jpeg {

/// 8x8 tables in natural (row-major) order, entries in [1,255].
struct QuantTables {
  std::array<std::uint16_t, 64> luma{};
  std::array<std::uint16_t, 64> chroma{};

  bool operator==(const QuantTables&) const = default;
};

enum class ChromaSubsampling { k420, k444 };

struct JpegConfig {
  int quality = 75;
  ChromaSubsampling subsampling = ChromaSubsampling::k420;
  int restart_interval = 0;  // MCUs between RST markers, 0 = none
};

/// The Annex K example tables (the quality-50 baseline).
const QuantTables& annex_k_tables();

/// IJG quality scaling: scale = 5000/q for q < 50, else 200 - 2q;
/// entry = clamp((base * scale + 50) / 100, 1, 255).
QuantTables scale_quant_tables(int quality);

/// Baseline sequential JFIF encoder: BT.601 YCbCr, optional 2x2 box-averaged
/// chroma, float DCT, Annex K Huffman tables. Output is a pure function of
/// the inputs. Gray input produces a single-component stream.
std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, const JpegConfig& cfg);

/// Baseline (SOF0/SOF1, Huffman) decoder. Reproduces the IJG "islow"
/// integer IDCT, triangular ("fancy") chroma upsampling and fixed-point
/// YCbCr->RGB conversion, so output matches libjpeg defaults exactly on
/// 4:4:4, 4:2:2 and 4:2:0 streams. Gray streams decode to 1 channel.
///
/// Errors: JpegParseError (with byte offset) for malformed or truncated
/// data; kJpegUnsupported for progressive, arithmetic, lossless,
/// 12-bit or 4-component streams.
ImageBuffer decode_jpeg(std::span<const std::uint8_t> bytes);

struct MarkerSegment {
  std::uint8_t marker = 0;
  std::size_t offset = 0;      // offset of the 0xFF byte
  std::size_t length = 0;      // value of the length field (0 if none)
  std::size_t next = 0;        // offset just past this segment / scan data
};

/// Walks the marker structure, skipping entropy-coded data. Throws
/// JpegParseError when a declared length overruns the buffer.
std::vector<MarkerSegment> list_markers(std::span<const std::uint8_t> bytes);

/// Zigzag position -> natural index.
extern const std::array<std::uint8_t, 64> kZigzag;

}  // namespace afkit::jpeg
