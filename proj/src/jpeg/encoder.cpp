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

#include <algorithm>
#include <cmath>
#include <string>

#include "afkit/error.hpp"
#include "afkit/jpeg.hpp"
#include "jpeg_internal.hpp"

namespace afkit::jpeg {

namespace {

using detail::HuffmanSpec;

struct HuffmanCode {
  std::array<std::uint16_t, 256> code{};
  std::array<std::uint8_t, 256> length{};
};

// Canonical code assignment from the BITS/HUFFVAL lists.
HuffmanCode build_code(const HuffmanSpec& spec) {
  HuffmanCode hc;
  std::uint16_t code = 0;
  std::size_t k = 0;
  for (int len = 1; len <= 16; ++len) {
    for (int i = 0; i < spec.bits[len - 1]; ++i) {
      const std::uint8_t sym = spec.values[k++];
      hc.code[sym] = code;
      hc.length[sym] = static_cast<std::uint8_t>(len);
      ++code;
    }
    code <<= 1;
  }
  return hc;
}

class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void put(std::uint32_t bits, int count) {
    for (int i = count - 1; i >= 0; --i) {
      acc_ = static_cast<std::uint8_t>((acc_ << 1) | ((bits >> i) & 1U));
      if (++filled_ == 8) emit();
    }
  }

  /// Pads the last byte with 1-bits.
  void flush() {
    while (filled_ != 0) {
      acc_ = static_cast<std::uint8_t>((acc_ << 1) | 1U);
      if (++filled_ == 8) emit();
    }
  }

 private:
  void emit() {
    out_.push_back(acc_);
    if (acc_ == 0xFF) out_.push_back(0x00);
    acc_ = 0;
    filled_ = 0;
  }

  std::vector<std::uint8_t>& out_;
  std::uint8_t acc_ = 0;
  int filled_ = 0;
};

int magnitude_category(int v) {
  int a = std::abs(v);
  int n = 0;
  while (a != 0) {
    ++n;
    a >>= 1;
  }
  return n;
}

// Value bits for a coefficient of the given category (negatives use the
// one's-complement convention).
std::uint32_t value_bits(int v, int category) {
  if (v >= 0) return static_cast<std::uint32_t>(v);
  return static_cast<std::uint32_t>(v + (1 << category) - 1);
}

void put_u16(std::vector<std::uint8_t>& out, std::size_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_marker(std::vector<std::uint8_t>& out, std::uint8_t m) {
  out.push_back(0xFF);
  out.push_back(m);
}

void write_dht(std::vector<std::uint8_t>& out, int table_class, int id,
               const HuffmanSpec& spec) {
  put_marker(out, detail::kDHT);
  put_u16(out, 2 + 1 + 16 + spec.values.size());
  out.push_back(static_cast<std::uint8_t>((table_class << 4) | id));
  out.insert(out.end(), spec.bits.begin(), spec.bits.end());
  out.insert(out.end(), spec.values.begin(), spec.values.end());
}

struct ComponentPlane {
  int h = 1;
  int v = 1;
  int width = 0;   // padded sample width
  int height = 0;  // padded sample height
  std::vector<double> samples;  // level-shifted
  const std::uint16_t* quant = nullptr;
  const HuffmanCode* dc = nullptr;
  const HuffmanCode* ac = nullptr;
  int dc_pred = 0;
};

void encode_block(const ComponentPlane& comp, int bx, int by, BitWriter& bits, int& dc_pred) {
  double block[64];
  for (int y = 0; y < 8; ++y) {
    const double* src =
        comp.samples.data() + static_cast<std::size_t>(by * 8 + y) * comp.width + bx * 8;
    std::copy_n(src, 8, block + y * 8);
  }
  double coef[64];
  detail::fdct_float(block, coef);

  int q[64];
  for (int k = 0; k < 64; ++k) {
    const int nat = kZigzag[k];
    q[k] = static_cast<int>(std::round(coef[nat] / comp.quant[nat]));
  }
  q[0] = std::clamp(q[0], -2047, 2047);
  for (int k = 1; k < 64; ++k) q[k] = std::clamp(q[k], -1023, 1023);

  const int diff = q[0] - dc_pred;
  dc_pred = q[0];
  const int dcat = magnitude_category(diff);
  bits.put(comp.dc->code[dcat], comp.dc->length[dcat]);
  if (dcat != 0) bits.put(value_bits(diff, dcat), dcat);

  int run = 0;
  for (int k = 1; k < 64; ++k) {
    if (q[k] == 0) {
      ++run;
      continue;
    }
    while (run > 15) {
      bits.put(comp.ac->code[0xF0], comp.ac->length[0xF0]);
      run -= 16;
    }
    const int cat = magnitude_category(q[k]);
    const int sym = (run << 4) | cat;
    bits.put(comp.ac->code[sym], comp.ac->length[sym]);
    bits.put(value_bits(q[k], cat), cat);
    run = 0;
  }
  if (run > 0) bits.put(comp.ac->code[0x00], comp.ac->length[0x00]);
}

}  // namespace

std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, const JpegConfig& cfg) {
  if (img.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot encode empty image");
  if (!img.is_u8()) {
    throw Error(ErrorCode::kNotQuantized, "encode_jpeg needs 8-bit samples");
  }
  if (img.width() > 65535 || img.height() > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "image too large for baseline JPEG");
  }
  if (cfg.restart_interval < 0 || cfg.restart_interval > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "restart interval out of range");
  }
  const QuantTables tables = scale_quant_tables(cfg.quality);
  static const HuffmanCode dc_luma = build_code(detail::std_dc_luma());
  static const HuffmanCode ac_luma = build_code(detail::std_ac_luma());
  static const HuffmanCode dc_chroma = build_code(detail::std_dc_chroma());
  static const HuffmanCode ac_chroma = build_code(detail::std_ac_chroma());

  const bool color = img.channels() == 3;
  const bool subsample = color && cfg.subsampling == ChromaSubsampling::k420;
  const int hmax = subsample ? 2 : 1;
  const int vmax = hmax;
  const int mcu_w = 8 * hmax;
  const int mcu_h = 8 * vmax;
  const int mcus_x = (img.width() + mcu_w - 1) / mcu_w;
  const int mcus_y = (img.height() + mcu_h - 1) / mcu_h;
  const int pw = mcus_x * mcu_w;
  const int ph = mcus_y * mcu_h;

  // Color conversion on the edge-replicated padded raster.
  const auto src = img.u8();
  const int nc = img.channels();
  std::vector<ComponentPlane> comps(nc);
  for (auto& c : comps) {
    c.width = pw;
    c.height = ph;
    c.samples.resize(static_cast<std::size_t>(pw) * ph);
  }
  for (int y = 0; y < ph; ++y) {
    const int sy = std::min(y, img.height() - 1);
    for (int x = 0; x < pw; ++x) {
      const int sx = std::min(x, img.width() - 1);
      const std::size_t si = (static_cast<std::size_t>(sy) * img.width() + sx) * nc;
      const std::size_t di = static_cast<std::size_t>(y) * pw + x;
      if (!color) {
        comps[0].samples[di] = src[si] - 128.0;
        continue;
      }
      const double r = src[si];
      const double g = src[si + 1];
      const double b = src[si + 2];
      comps[0].samples[di] = 0.299 * r + 0.587 * g + 0.114 * b - 128.0;
      comps[1].samples[di] = -0.168735892 * r - 0.331264108 * g + 0.5 * b;
      comps[2].samples[di] = 0.5 * r - 0.418687589 * g - 0.081312411 * b;
    }
  }
  comps[0].h = hmax;
  comps[0].v = vmax;
  comps[0].quant = tables.luma.data();
  comps[0].dc = &dc_luma;
  comps[0].ac = &ac_luma;
  for (int ci = 1; ci < nc; ++ci) {
    auto& c = comps[ci];
    c.quant = tables.chroma.data();
    c.dc = &dc_chroma;
    c.ac = &ac_chroma;
    if (subsample) {
      std::vector<double> half(static_cast<std::size_t>(pw / 2) * (ph / 2));
      for (int y = 0; y < ph / 2; ++y) {
        for (int x = 0; x < pw / 2; ++x) {
          const double* r0 = c.samples.data() + static_cast<std::size_t>(2 * y) * pw + 2 * x;
          const double* r1 = r0 + pw;
          half[static_cast<std::size_t>(y) * (pw / 2) + x] = 0.25 * (r0[0] + r0[1] + r1[0] + r1[1]);
        }
      }
      c.samples = std::move(half);
      c.width = pw / 2;
      c.height = ph / 2;
    }
  }

  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(pw) * ph / 4 + 1024);
  put_marker(out, detail::kSOI);

  // JFIF 1.01, no density units, 1:1 aspect, no thumbnail.
  put_marker(out, detail::kAPP0);
  put_u16(out, 16);
  for (char ch : {'J', 'F', 'I', 'F', '\0'}) out.push_back(static_cast<std::uint8_t>(ch));
  out.insert(out.end(), {0x01, 0x01, 0x00, 0x00, 0x01, 0x00, 0x01, 0x00, 0x00});

  auto write_dqt = [&](int id, const std::array<std::uint16_t, 64>& t) {
    put_marker(out, detail::kDQT);
    put_u16(out, 2 + 1 + 64);
    out.push_back(static_cast<std::uint8_t>(id));
    for (int k = 0; k < 64; ++k) out.push_back(static_cast<std::uint8_t>(t[kZigzag[k]]));
  };
  write_dqt(0, tables.luma);
  if (color) write_dqt(1, tables.chroma);

  put_marker(out, detail::kSOF0);
  put_u16(out, 8 + 3 * nc);
  out.push_back(8);
  put_u16(out, img.height());
  put_u16(out, img.width());
  out.push_back(static_cast<std::uint8_t>(nc));
  for (int ci = 0; ci < nc; ++ci) {
    out.push_back(static_cast<std::uint8_t>(ci + 1));
    out.push_back(static_cast<std::uint8_t>((comps[ci].h << 4) | comps[ci].v));
    out.push_back(ci == 0 ? 0 : 1);
  }

  write_dht(out, 0, 0, detail::std_dc_luma());
  write_dht(out, 1, 0, detail::std_ac_luma());
  if (color) {
    write_dht(out, 0, 1, detail::std_dc_chroma());
    write_dht(out, 1, 1, detail::std_ac_chroma());
  }

  if (cfg.restart_interval > 0) {
    put_marker(out, detail::kDRI);
    put_u16(out, 4);
    put_u16(out, static_cast<std::size_t>(cfg.restart_interval));
  }

  put_marker(out, detail::kSOS);
  put_u16(out, 6 + 2 * nc);
  out.push_back(static_cast<std::uint8_t>(nc));
  for (int ci = 0; ci < nc; ++ci) {
    out.push_back(static_cast<std::uint8_t>(ci + 1));
    out.push_back(ci == 0 ? 0x00 : 0x11);
  }
  out.insert(out.end(), {0x00, 0x3F, 0x00});

  BitWriter bits(out);
  const int total_mcus = mcus_x * mcus_y;
  int mcu_index = 0;
  int restart_count = 0;
  for (int my = 0; my < mcus_y; ++my) {
    for (int mx = 0; mx < mcus_x; ++mx) {
      for (auto& c : comps) {
        for (int v = 0; v < c.v; ++v) {
          for (int h = 0; h < c.h; ++h) {
            encode_block(c, mx * c.h + h, my * c.v + v, bits, c.dc_pred);
          }
        }
      }
      ++mcu_index;
      if (cfg.restart_interval > 0 && mcu_index % cfg.restart_interval == 0 &&
          mcu_index < total_mcus) {
        bits.flush();
        put_marker(out, static_cast<std::uint8_t>(detail::kRST0 + (restart_count++ & 7)));
        for (auto& c : comps) c.dc_pred = 0;
      }
    }
  }
  bits.flush();
  put_marker(out, detail::kEOI);
  return out;
}

}  // namespace afkit::jpeg
