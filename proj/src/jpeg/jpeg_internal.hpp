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
#include <cstdint>
#include <vector>

namespace afkit::jpeg::detail {

struct HuffmanSpec {
  std::array<std::uint8_t, 16> bits;  // code count per length 1..16
  std::vector<std::uint8_t> values;
};

const HuffmanSpec& std_dc_luma();
const HuffmanSpec& std_ac_luma();
const HuffmanSpec& std_dc_chroma();
const HuffmanSpec& std_ac_chroma();

enum Marker : std::uint8_t {
  kSOF0 = 0xC0,
  kSOF1 = 0xC1,
  kSOF2 = 0xC2,
  kDHT = 0xC4,
  kRST0 = 0xD0,
  kSOI = 0xD8,
  kEOI = 0xD9,
  kSOS = 0xDA,
  kDQT = 0xDB,
  kDRI = 0xDD,
  kAPP0 = 0xE0,
  kAPP14 = 0xEE,
  kCOM = 0xFE,
};

/// IJG accurate integer inverse DCT ("islow"): dequantizes the natural-order
/// coefficients and writes 8 rows of 8 clamped samples.
void idct_islow(const std::int16_t* coef, const std::uint16_t* quant, std::uint8_t* out,
                int stride);

/// Orthonormal float forward DCT of a level-shifted 8x8 block, natural order.
void fdct_float(const double* in, double* out);

}  // namespace afkit::jpeg::detail
