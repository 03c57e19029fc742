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

#include <array>
#include <cmath>
#include <numbers>

#include "jpeg_internal.hpp"

namespace afkit::jpeg::detail {

namespace {

// Loeffler-Ligtenberg-Moschytz integer IDCT with 13-bit constants and two
// extra bits of precision between passes, the scheme libjpeg calls islow.
constexpr int kConstBits = 13;
constexpr int kPass1Bits = 2;

constexpr std::int64_t kFix_0_298631336 = 2446;
constexpr std::int64_t kFix_0_390180644 = 3196;
constexpr std::int64_t kFix_0_541196100 = 4433;
constexpr std::int64_t kFix_0_765366865 = 6270;
constexpr std::int64_t kFix_0_899976223 = 7373;
constexpr std::int64_t kFix_1_175875602 = 9633;
constexpr std::int64_t kFix_1_501321110 = 12299;
constexpr std::int64_t kFix_1_847759065 = 15137;
constexpr std::int64_t kFix_1_961570560 = 16069;
constexpr std::int64_t kFix_2_053119869 = 16819;
constexpr std::int64_t kFix_2_562915447 = 20995;
constexpr std::int64_t kFix_3_072711026 = 25172;

constexpr std::int64_t descale(std::int64_t x, int n) {
  return (x + (std::int64_t{1} << (n - 1))) >> n;
}

// Post-IDCT range limiting with the same 10-bit wraparound mask libjpeg uses.
constexpr std::uint8_t range_limit(std::int64_t x) {
  const int i = static_cast<int>(x & 1023);
  if (i < 128) return static_cast<std::uint8_t>(128 + i);
  if (i < 512) return 255;
  if (i < 896) return 0;
  return static_cast<std::uint8_t>(i - 896);
}

// One 1-D butterfly on eight inputs; used for both passes.
struct Butterfly {
  std::int64_t o[8];
};

Butterfly butterfly(std::int64_t in0, std::int64_t in1, std::int64_t in2, std::int64_t in3,
                    std::int64_t in4, std::int64_t in5, std::int64_t in6, std::int64_t in7) {
  std::int64_t z2 = in2;
  std::int64_t z3 = in6;
  std::int64_t z1 = (z2 + z3) * kFix_0_541196100;
  std::int64_t tmp2 = z1 + z3 * (-kFix_1_847759065);
  std::int64_t tmp3 = z1 + z2 * kFix_0_765366865;

  std::int64_t tmp0 = (in0 + in4) * (std::int64_t{1} << kConstBits);
  std::int64_t tmp1 = (in0 - in4) * (std::int64_t{1} << kConstBits);

  const std::int64_t tmp10 = tmp0 + tmp3;
  const std::int64_t tmp13 = tmp0 - tmp3;
  const std::int64_t tmp11 = tmp1 + tmp2;
  const std::int64_t tmp12 = tmp1 - tmp2;

  tmp0 = in7;
  tmp1 = in5;
  tmp2 = in3;
  tmp3 = in1;
  z1 = tmp0 + tmp3;
  z2 = tmp1 + tmp2;
  z3 = tmp0 + tmp2;
  std::int64_t z4 = tmp1 + tmp3;
  const std::int64_t z5 = (z3 + z4) * kFix_1_175875602;

  tmp0 *= kFix_0_298631336;
  tmp1 *= kFix_2_053119869;
  tmp2 *= kFix_3_072711026;
  tmp3 *= kFix_1_501321110;
  z1 *= -kFix_0_899976223;
  z2 *= -kFix_2_562915447;
  z3 *= -kFix_1_961570560;
  z4 *= -kFix_0_390180644;
  z3 += z5;
  z4 += z5;
  tmp0 += z1 + z3;
  tmp1 += z2 + z4;
  tmp2 += z2 + z3;
  tmp3 += z1 + z4;

  return {{tmp10 + tmp3, tmp11 + tmp2, tmp12 + tmp1, tmp13 + tmp0, tmp13 - tmp0,
           tmp12 - tmp1, tmp11 - tmp2, tmp10 - tmp3}};
}

}  // namespace

void idct_islow(const std::int16_t* coef, const std::uint16_t* quant, std::uint8_t* out,
                int stride) {
  std::int64_t ws[64];
  for (int c = 0; c < 8; ++c) {
    std::int64_t in[8];
    for (int r = 0; r < 8; ++r) {
      in[r] = static_cast<std::int64_t>(coef[r * 8 + c]) * quant[r * 8 + c];
    }
    const Butterfly b = butterfly(in[0], in[1], in[2], in[3], in[4], in[5], in[6], in[7]);
    for (int r = 0; r < 8; ++r) ws[r * 8 + c] = descale(b.o[r], kConstBits - kPass1Bits);
  }
  for (int r = 0; r < 8; ++r) {
    const std::int64_t* w = ws + r * 8;
    const Butterfly b = butterfly(w[0], w[1], w[2], w[3], w[4], w[5], w[6], w[7]);
    std::uint8_t* dst = out + r * stride;
    for (int c = 0; c < 8; ++c) {
      dst[c] = range_limit(descale(b.o[c], kConstBits + kPass1Bits + 3));
    }
  }
}

void fdct_float(const double* in, double* out) {
  static const auto basis = [] {
    std::array<double, 64> b{};
    for (int u = 0; u < 8; ++u) {
      const double cu = u == 0 ? std::sqrt(0.125) : 0.5;
      for (int x = 0; x < 8; ++x) {
        b[u * 8 + x] = cu * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
      }
    }
    return b;
  }();
  double rows[64];
  for (int y = 0; y < 8; ++y) {
    for (int u = 0; u < 8; ++u) {
      double acc = 0.0;
      for (int x = 0; x < 8; ++x) acc += basis[u * 8 + x] * in[y * 8 + x];
      rows[y * 8 + u] = acc;
    }
  }
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      double acc = 0.0;
      for (int y = 0; y < 8; ++y) acc += basis[v * 8 + y] * rows[y * 8 + u];
      out[v * 8 + u] = acc;
    }
  }
}

}  // namespace afkit::jpeg::detail
