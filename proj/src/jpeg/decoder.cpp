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
#include <cstring>
#include <optional>
#include <string>

#include "afkit/error.hpp"
#include "afkit/jpeg.hpp"
#include "jpeg_internal.hpp"

namespace afkit::jpeg {

namespace {

[[noreturn]] void fail(std::size_t offset, const std::string& msg) {
  throw JpegParseError(offset, msg);
}

[[noreturn]] void unsupported(const std::string& msg) {
  throw Error(ErrorCode::kJpegUnsupported, msg);
}

bool is_rst(std::uint8_t m) { return m >= detail::kRST0 && m <= detail::kRST0 + 7; }

bool has_no_length(std::uint8_t m) {
  return m == detail::kSOI || m == detail::kEOI || is_rst(m) || m == 0x01;
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }
  std::size_t remaining() const { return data_.size() - pos_; }

  void need(std::size_t n) const {
    if (remaining() < n) fail(pos_, "unexpected end of JPEG data");
  }
  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const std::uint16_t v = static_cast<std::uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::span<const std::uint8_t> data() const { return data_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

struct HuffTable {
  bool defined = false;
  int maxcode[17]{};
  int mincode[17]{};
  int valptr[17]{};
  std::vector<std::uint8_t> values;
};

HuffTable build_table(const std::array<std::uint8_t, 16>& bits, std::vector<std::uint8_t> values,
                      std::size_t offset) {
  HuffTable t;
  t.values = std::move(values);
  int code = 0;
  int k = 0;
  for (int len = 1; len <= 16; ++len) {
    const int n = bits[len - 1];
    if (n == 0) {
      t.maxcode[len] = -1;
    } else {
      t.valptr[len] = k;
      t.mincode[len] = code;
      code += n;
      k += n;
      t.maxcode[len] = code - 1;
      if (code > (1 << len)) fail(offset, "invalid Huffman table");
    }
    code <<= 1;
  }
  t.defined = true;
  return t;
}

// Entropy-coded segment reader. Bytes are pulled one at a time, so it never
// looks past the data a well-formed scan actually needs.
class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> data, std::size_t pos) : data_(data), pos_(pos) {}

  int bit() {
    if (nbits_ == 0) fill();
    --nbits_;
    return (acc_ >> nbits_) & 1;
  }

  int receive(int n) {
    int v = 0;
    for (int i = 0; i < n; ++i) v = (v << 1) | bit();
    return v;
  }

  int decode(const HuffTable& t) {
    int code = bit();
    for (int len = 1;; ++len) {
      if (code <= t.maxcode[len]) {
        const std::size_t idx = static_cast<std::size_t>(t.valptr[len] + code - t.mincode[len]);
        if (idx >= t.values.size()) fail(pos_, "corrupt Huffman code");
        return t.values[idx];
      }
      if (len == 16) fail(pos_, "corrupt Huffman code");
      code = (code << 1) | bit();
    }
  }

  /// Drops buffered bits and consumes the expected RSTn marker.
  void restart(int expected) {
    nbits_ = 0;
    if (pos_ + 1 >= data_.size()) fail(pos_, "truncated before restart marker");
    if (data_[pos_] != 0xFF) fail(pos_, "missing restart marker");
    std::size_t p = pos_ + 1;
    while (p < data_.size() && data_[p] == 0xFF) ++p;
    if (p >= data_.size()) fail(pos_, "truncated before restart marker");
    if (data_[p] != detail::kRST0 + expected) fail(pos_, "unexpected restart marker");
    pos_ = p + 1;
  }

  std::size_t pos() const { return pos_; }

 private:
  void fill() {
    if (pos_ >= data_.size()) fail(pos_, "truncated entropy-coded data");
    std::uint8_t b = data_[pos_];
    if (b == 0xFF) {
      if (pos_ + 1 >= data_.size()) fail(pos_, "truncated entropy-coded data");
      if (data_[pos_ + 1] != 0x00) fail(pos_, "marker inside entropy-coded data");
      pos_ += 2;
    } else {
      ++pos_;
    }
    acc_ = b;
    nbits_ = 8;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_;
  std::uint32_t acc_ = 0;
  int nbits_ = 0;
};

int extend(int v, int s) { return v < (1 << (s - 1)) ? v - (1 << s) + 1 : v; }

struct Component {
  int id = 0;
  int h = 1;
  int v = 1;
  int tq = 0;
  int ds_width = 0;   // downsampled width in samples
  int ds_height = 0;
  int blocks_w = 0;   // allocated, padded to whole MCUs
  int blocks_h = 0;
  std::vector<std::int16_t> coef;
  std::optional<std::array<std::uint16_t, 64>> quant;  // latched at first scan
  int dc_table = 0;
  int ac_table = 0;
  int dc_pred = 0;
};

struct Frame {
  bool present = false;
  int width = 0;
  int height = 0;
  int hmax = 1;
  int vmax = 1;
  int mcus_x = 0;
  int mcus_y = 0;
  std::vector<Component> comps;
};

class Decoder {
 public:
  explicit Decoder(std::span<const std::uint8_t> bytes) : in_(bytes) {}

  ImageBuffer run() {
    if (in_.remaining() < 2 || in_.data()[0] != 0xFF || in_.data()[1] != detail::kSOI) {
      fail(0, "missing SOI marker");
    }
    in_.seek(2);
    for (;;) {
      const std::size_t marker_pos = in_.pos();
      if (in_.remaining() == 0) fail(marker_pos, "missing EOI marker");
      if (in_.u8() != 0xFF) fail(marker_pos, "expected marker");
      std::uint8_t m = in_.u8();
      while (m == 0xFF) m = in_.u8();
      if (m == detail::kEOI) break;
      if (is_rst(m)) continue;
      if (m == detail::kSOI) fail(marker_pos, "unexpected SOI marker");
      if (m == 0x00) fail(marker_pos, "invalid marker");
      const std::size_t seg_start = in_.pos();
      const std::size_t len = in_.u16();
      if (len < 2) fail(seg_start, "bad segment length");
      in_.need(len - 2);
      const std::size_t seg_end = seg_start + len;
      switch (m) {
        case detail::kSOF0:
        case detail::kSOF1:
          read_sof(seg_end);
          break;
        case detail::kDHT:
          read_dht(seg_end);
          break;
        case detail::kDQT:
          read_dqt(seg_end);
          break;
        case detail::kDRI:
          if (len != 4) fail(seg_start, "bad DRI length");
          restart_interval_ = in_.u16();
          break;
        case detail::kSOS:
          read_sos(seg_end);
          decode_scan();
          continue;  // decode_scan leaves the reader on the next marker
        case detail::kAPP0:
          read_app0(seg_end);
          break;
        case detail::kAPP14:
          read_app14(seg_end);
          break;
        case 0xCC:
          unsupported("arithmetic-coded JPEG is not supported");
        case 0xDC:
          unsupported("DNL marker is not supported");
        default:
          if (m >= 0xC0 && m <= 0xCF && m != detail::kDHT) {
            unsupported(m == detail::kSOF2 || m == 0xC6 || m == 0xCA
                            ? "progressive JPEG is not supported"
                            : "only baseline sequential Huffman JPEG is supported");
          }
          if (m == 0xDE || m == 0xDF) unsupported("hierarchical JPEG is not supported");
          break;  // APPn, COM and others are skipped
      }
      if (in_.pos() > seg_end) fail(seg_start, "segment overruns its length");
      in_.seek(seg_end);
    }
    if (!frame_.present) fail(in_.pos(), "no frame header before EOI");
    if (!saw_scan_) fail(in_.pos(), "no scan before EOI");
    return reconstruct();
  }

 private:
  void read_sof(std::size_t seg_end) {
    const std::size_t at = in_.pos();
    if (frame_.present) fail(at, "duplicate frame header");
    const int precision = in_.u8();
    if (precision != 8) unsupported("only 8-bit JPEG is supported");
    frame_.height = in_.u16();
    frame_.width = in_.u16();
    const int nc = in_.u8();
    if (frame_.height == 0) unsupported("DNL-defined height is not supported");
    if (frame_.width == 0) fail(at, "zero image width");
    if (nc == 2 || nc == 4) unsupported("only 1- and 3-component JPEG is supported");
    if (nc != 1 && nc != 3) fail(at, "bad component count");
    if (in_.pos() + 3 * static_cast<std::size_t>(nc) > seg_end) fail(at, "short frame header");
    frame_.comps.resize(nc);
    for (auto& c : frame_.comps) {
      c.id = in_.u8();
      const int hv = in_.u8();
      c.h = hv >> 4;
      c.v = hv & 15;
      c.tq = in_.u8();
      if (c.h < 1 || c.h > 4 || c.v < 1 || c.v > 4) fail(at, "bad sampling factors");
      if (c.tq > 3) fail(at, "bad quantization table selector");
      frame_.hmax = std::max(frame_.hmax, c.h);
      frame_.vmax = std::max(frame_.vmax, c.v);
    }
    frame_.mcus_x = (frame_.width + 8 * frame_.hmax - 1) / (8 * frame_.hmax);
    frame_.mcus_y = (frame_.height + 8 * frame_.vmax - 1) / (8 * frame_.vmax);
    for (auto& c : frame_.comps) {
      if (frame_.hmax % c.h != 0 || frame_.vmax % c.v != 0) {
        unsupported("fractional sampling ratios are not supported");
      }
      c.ds_width = (frame_.width * c.h + frame_.hmax - 1) / frame_.hmax;
      c.ds_height = (frame_.height * c.v + frame_.vmax - 1) / frame_.vmax;
      c.blocks_w = frame_.mcus_x * c.h;
      c.blocks_h = frame_.mcus_y * c.v;
    }
    frame_.present = true;
  }

  void read_dht(std::size_t seg_end) {
    while (in_.pos() < seg_end) {
      const std::size_t at = in_.pos();
      const int tcth = in_.u8();
      const int tc = tcth >> 4;
      const int th = tcth & 15;
      if (tc > 1 || th > 3) fail(at, "bad Huffman table id");
      std::array<std::uint8_t, 16> bits{};
      std::size_t count = 0;
      for (auto& b : bits) {
        b = in_.u8();
        count += b;
      }
      if (count > 256 || in_.pos() + count > seg_end) fail(at, "bad Huffman table size");
      std::vector<std::uint8_t> values(count);
      for (auto& v : values) v = in_.u8();
      (tc == 0 ? dc_[th] : ac_[th]) = build_table(bits, std::move(values), at);
    }
  }

  void read_dqt(std::size_t seg_end) {
    while (in_.pos() < seg_end) {
      const std::size_t at = in_.pos();
      const int pqtq = in_.u8();
      const int pq = pqtq >> 4;
      const int tq = pqtq & 15;
      if (pq > 1 || tq > 3) fail(at, "bad quantization table id");
      std::array<std::uint16_t, 64> t{};
      for (int k = 0; k < 64; ++k) t[kZigzag[k]] = pq == 0 ? in_.u8() : in_.u16();
      quant_[tq] = t;
    }
  }

  void read_app0(std::size_t seg_end) {
    if (seg_end - in_.pos() >= 5 && std::memcmp(in_.data().data() + in_.pos(), "JFIF\0", 5) == 0) {
      saw_jfif_ = true;
    }
  }

  void read_app14(std::size_t seg_end) {
    const std::size_t p = in_.pos();
    if (seg_end - p >= 12 && std::memcmp(in_.data().data() + p, "Adobe", 5) == 0) {
      adobe_transform_ = in_.data()[p + 11];
    }
  }

  void read_sos(std::size_t seg_end) {
    const std::size_t at = in_.pos();
    if (!frame_.present) fail(at, "scan before frame header");
    const int ns = in_.u8();
    if (ns < 1 || ns > 4 || in_.pos() + 2 * static_cast<std::size_t>(ns) + 3 > seg_end) {
      fail(at, "bad scan header");
    }
    scan_.clear();
    for (int i = 0; i < ns; ++i) {
      const int cs = in_.u8();
      const int tdta = in_.u8();
      auto it = std::find_if(frame_.comps.begin(), frame_.comps.end(),
                             [cs](const Component& c) { return c.id == cs; });
      if (it == frame_.comps.end()) fail(at, "scan references unknown component");
      Component* c = &*it;
      if (std::find(scan_.begin(), scan_.end(), c) != scan_.end()) {
        fail(at, "component repeated in scan");
      }
      c->dc_table = tdta >> 4;
      c->ac_table = tdta & 15;
      if (c->dc_table > 3 || c->ac_table > 3) fail(at, "bad Huffman table selector");
      scan_.push_back(c);
    }
    const int ss = in_.u8();
    const int se = in_.u8();
    const int ahal = in_.u8();
    if (ss != 0 || se != 63 || ahal != 0) unsupported("progressive scan parameters");
    for (Component* c : scan_) {
      if (!dc_[c->dc_table].defined || !ac_[c->ac_table].defined) {
        fail(at, "scan uses undefined Huffman table");
      }
      if (!c->quant) {
        if (!quant_[c->tq]) fail(at, "component uses undefined quantization table");
        c->quant = quant_[c->tq];
      }
    }
    if (ns > 1) {
      int blocks = 0;
      for (Component* c : scan_) blocks += c->h * c->v;
      if (blocks > 10) fail(at, "too many blocks per MCU");
    }
    in_.seek(seg_end);
  }

  void decode_block(BitReader& br, Component& c, int bx, int by) {
    std::int16_t* blk = c.coef.data() + (static_cast<std::size_t>(by) * c.blocks_w + bx) * 64;
    const HuffTable& dc = dc_[c.dc_table];
    const HuffTable& ac = ac_[c.ac_table];
    const int s = br.decode(dc);
    if (s > 11) fail(br.pos(), "bad DC magnitude");
    const int diff = s == 0 ? 0 : extend(br.receive(s), s);
    c.dc_pred += diff;
    blk[0] = static_cast<std::int16_t>(c.dc_pred);
    for (int k = 1; k < 64;) {
      const int rs = br.decode(ac);
      const int r = rs >> 4;
      const int sz = rs & 15;
      if (sz == 0) {
        if (r != 15) break;
        k += 16;
        continue;
      }
      k += r;
      if (k > 63) fail(br.pos(), "AC coefficient index out of range");
      blk[kZigzag[k]] = static_cast<std::int16_t>(extend(br.receive(sz), sz));
      ++k;
    }
  }

  void decode_scan() {
    const bool interleaved = scan_.size() > 1;
    int units_x = frame_.mcus_x;
    int units_y = frame_.mcus_y;
    std::size_t blocks = 0;
    if (interleaved) {
      for (Component* c : scan_) blocks += static_cast<std::size_t>(c->h) * c->v;
      blocks *= static_cast<std::size_t>(units_x) * units_y;
    } else {
      units_x = (scan_[0]->ds_width + 7) / 8;
      units_y = (scan_[0]->ds_height + 7) / 8;
      blocks = static_cast<std::size_t>(units_x) * units_y;
    }
    // Every block costs at least two bits; reject headers that promise far
    // more blocks than the remaining bytes could hold before allocating.
    if (blocks > 4 * in_.remaining() + 4) fail(in_.pos(), "truncated scan data");
    for (Component* c : scan_) {
      if (c->coef.empty()) {
        c->coef.assign(static_cast<std::size_t>(c->blocks_w) * c->blocks_h * 64, 0);
      }
      c->dc_pred = 0;
    }

    BitReader br(in_.data(), in_.pos());
    const long total = static_cast<long>(units_x) * units_y;
    long done = 0;
    int next_rst = 0;
    for (int uy = 0; uy < units_y; ++uy) {
      for (int ux = 0; ux < units_x; ++ux) {
        if (interleaved) {
          for (Component* c : scan_) {
            for (int v = 0; v < c->v; ++v) {
              for (int h = 0; h < c->h; ++h) decode_block(br, *c, ux * c->h + h, uy * c->v + v);
            }
          }
        } else {
          decode_block(br, *scan_[0], ux, uy);
        }
        ++done;
        if (restart_interval_ > 0 && done % restart_interval_ == 0 && done < total) {
          br.restart(next_rst);
          next_rst = (next_rst + 1) & 7;
          for (Component* c : scan_) c->dc_pred = 0;
        }
      }
    }
    saw_scan_ = true;

    // Skip any trailing padding up to the next real marker.
    const auto data = in_.data();
    std::size_t p = br.pos();
    for (;;) {
      if (p + 1 >= data.size()) fail(p, "missing marker after scan");
      if (data[p] == 0xFF && data[p + 1] != 0x00 && data[p + 1] != 0xFF && !is_rst(data[p + 1])) {
        break;
      }
      ++p;
    }
    in_.seek(p);
  }

  ImageBuffer reconstruct() {
    const int w = frame_.width;
    const int h = frame_.height;
    std::vector<std::vector<std::uint8_t>> full;
    for (auto& c : frame_.comps) {
      const int stride = c.blocks_w * 8;
      std::vector<std::uint8_t> plane(static_cast<std::size_t>(stride) * c.blocks_h * 8, 0);
      if (!c.coef.empty()) {
        for (int by = 0; by < c.blocks_h; ++by) {
          for (int bx = 0; bx < c.blocks_w; ++bx) {
            const std::int16_t* blk =
                c.coef.data() + (static_cast<std::size_t>(by) * c.blocks_w + bx) * 64;
            detail::idct_islow(blk, c.quant->data(),
                               plane.data() + static_cast<std::size_t>(by) * 8 * stride + bx * 8,
                               stride);
          }
        }
      }
      full.push_back(upsample(plane, stride, c, w, h));
    }

    const int nc = static_cast<int>(frame_.comps.size());
    ImageBuffer out = ImageBuffer::zeros(w, h, nc, SampleType::kU8);
    auto dst = out.u8();
    const std::size_t npix = static_cast<std::size_t>(w) * h;
    if (nc == 1) {
      std::copy(full[0].begin(), full[0].end(), dst.begin());
      return out;
    }
    if (is_rgb_coded()) {
      for (std::size_t i = 0; i < npix; ++i) {
        for (int ci = 0; ci < 3; ++ci) dst[i * 3 + ci] = full[ci][i];
      }
      return out;
    }
    // Fixed-point BT.601 YCbCr -> RGB with 16 fractional bits.
    constexpr int kScale = 16;
    constexpr std::int32_t kHalf = 1 << (kScale - 1);
    auto fix = [](double v) { return static_cast<std::int32_t>(v * (1 << kScale) + 0.5); };
    static const std::int32_t k1402 = fix(1.40200);
    static const std::int32_t k1772 = fix(1.77200);
    static const std::int32_t k0714 = fix(0.71414);
    static const std::int32_t k0344 = fix(0.34414);
    auto clamp8 = [](std::int32_t v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); };
    for (std::size_t i = 0; i < npix; ++i) {
      const std::int32_t y = full[0][i];
      const std::int32_t cb = full[1][i] - 128;
      const std::int32_t cr = full[2][i] - 128;
      dst[i * 3 + 0] = clamp8(y + ((k1402 * cr + kHalf) >> kScale));
      dst[i * 3 + 1] = clamp8(y + ((-k0344 * cb + kHalf - k0714 * cr) >> kScale));
      dst[i * 3 + 2] = clamp8(y + ((k1772 * cb + kHalf) >> kScale));
    }
    return out;
  }

  bool is_rgb_coded() const {
    if (saw_jfif_) return false;
    if (adobe_transform_) return *adobe_transform_ == 0;
    const auto& c = frame_.comps;
    return c[0].id == 'R' && c[1].id == 'G' && c[2].id == 'B';
  }

  // Chroma upsampling with the IJG "fancy" triangle filters; the output is
  // cropped to w x h.
  std::vector<std::uint8_t> upsample(const std::vector<std::uint8_t>& plane, int stride,
                                     const Component& c, int w, int h) const {
    const int hf = frame_.hmax / c.h;
    const int vf = frame_.vmax / c.v;
    const int dw = c.ds_width;
    const int dh = c.ds_height;
    std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * h);
    auto in_row = [&](int y) {
      return plane.data() + static_cast<std::size_t>(std::clamp(y, 0, dh - 1)) * stride;
    };
    // Upsampled rows are up to one column/row wider than w/h; write through
    // a scratch row and crop.
    std::vector<std::uint8_t> row(static_cast<std::size_t>(dw) * hf + 2);

    auto emit = [&](int oy) {
      if (oy < h) std::copy_n(row.data(), w, out.data() + static_cast<std::size_t>(oy) * w);
    };

    if (hf == 1 && vf == 1) {
      for (int y = 0; y < h; ++y) std::copy_n(in_row(y), w, out.data() + static_cast<std::size_t>(y) * w);
      return out;
    }
    if (hf == 2 && vf == 1 && dw > 2) {
      for (int y = 0; y < dh; ++y) {
        const std::uint8_t* in = in_row(y);
        std::uint8_t* o = row.data();
        int v = in[0];
        *o++ = static_cast<std::uint8_t>(v);
        *o++ = static_cast<std::uint8_t>((v * 3 + in[1] + 2) >> 2);
        for (int x = 1; x < dw - 1; ++x) {
          v = in[x] * 3;
          *o++ = static_cast<std::uint8_t>((v + in[x - 1] + 1) >> 2);
          *o++ = static_cast<std::uint8_t>((v + in[x + 1] + 2) >> 2);
        }
        v = in[dw - 1];
        *o++ = static_cast<std::uint8_t>((v * 3 + in[dw - 2] + 1) >> 2);
        *o++ = static_cast<std::uint8_t>(v);
        emit(y);
      }
      return out;
    }
    if (hf == 1 && vf == 2) {
      for (int y = 0; y < dh; ++y) {
        for (int pass = 0; pass < 2; ++pass) {
          const std::uint8_t* in0 = in_row(y);
          const std::uint8_t* in1 = in_row(pass == 0 ? y - 1 : y + 1);
          const int bias = pass == 0 ? 1 : 2;
          for (int x = 0; x < dw; ++x) {
            row[x] = static_cast<std::uint8_t>((in0[x] * 3 + in1[x] + bias) >> 2);
          }
          emit(2 * y + pass);
        }
      }
      return out;
    }
    if (hf == 2 && vf == 2 && dw > 2) {
      for (int y = 0; y < dh; ++y) {
        for (int pass = 0; pass < 2; ++pass) {
          const std::uint8_t* in0 = in_row(y);
          const std::uint8_t* in1 = in_row(pass == 0 ? y - 1 : y + 1);
          std::uint8_t* o = row.data();
          int this_sum = in0[0] * 3 + in1[0];
          int next_sum = in0[1] * 3 + in1[1];
          *o++ = static_cast<std::uint8_t>((this_sum * 4 + 8) >> 4);
          *o++ = static_cast<std::uint8_t>((this_sum * 3 + next_sum + 7) >> 4);
          int last_sum = this_sum;
          this_sum = next_sum;
          for (int x = 2; x < dw; ++x) {
            next_sum = in0[x] * 3 + in1[x];
            *o++ = static_cast<std::uint8_t>((this_sum * 3 + last_sum + 8) >> 4);
            *o++ = static_cast<std::uint8_t>((this_sum * 3 + next_sum + 7) >> 4);
            last_sum = this_sum;
            this_sum = next_sum;
          }
          *o++ = static_cast<std::uint8_t>((this_sum * 3 + last_sum + 8) >> 4);
          *o++ = static_cast<std::uint8_t>((this_sum * 4 + 7) >> 4);
          emit(2 * y + pass);
        }
      }
      return out;
    }
    // Plain replication for everything else (including narrow images).
    for (int y = 0; y < dh; ++y) {
      const std::uint8_t* in = in_row(y);
      for (int x = 0; x < dw; ++x) {
        for (int k = 0; k < hf; ++k) row[static_cast<std::size_t>(x) * hf + k] = in[x];
      }
      for (int k = 0; k < vf; ++k) emit(y * vf + k);
    }
    return out;
  }

  ByteReader in_;
  Frame frame_;
  HuffTable dc_[4];
  HuffTable ac_[4];
  std::optional<std::array<std::uint16_t, 64>> quant_[4];
  std::vector<Component*> scan_;
  int restart_interval_ = 0;
  bool saw_scan_ = false;
  bool saw_jfif_ = false;
  std::optional<int> adobe_transform_;
};

}  // namespace

ImageBuffer decode_jpeg(std::span<const std::uint8_t> bytes) { return Decoder(bytes).run(); }

std::vector<MarkerSegment> list_markers(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 0xFF || bytes[1] != detail::kSOI) {
    fail(0, "missing SOI marker");
  }
  std::vector<MarkerSegment> out;
  out.push_back({detail::kSOI, 0, 0, 2});
  std::size_t p = 2;
  while (p < bytes.size()) {
    if (bytes[p] != 0xFF) fail(p, "expected marker");
    const std::size_t at = p;
    while (p < bytes.size() && bytes[p] == 0xFF) ++p;
    if (p >= bytes.size()) fail(at, "truncated marker");
    const std::uint8_t m = bytes[p++];
    MarkerSegment seg{m, p - 2, 0, p};
    if (!has_no_length(m)) {
      if (p + 2 > bytes.size()) fail(p, "truncated segment length");
      seg.length = static_cast<std::size_t>((bytes[p] << 8) | bytes[p + 1]);
      if (seg.length < 2 || p + seg.length > bytes.size()) fail(p, "segment length overruns data");
      p += seg.length;
      if (m == detail::kSOS) {
        // Skip entropy-coded data, including stuffed bytes and RSTn.
        while (p + 1 < bytes.size() &&
               !(bytes[p] == 0xFF && bytes[p + 1] != 0x00 && !is_rst(bytes[p + 1]))) {
          ++p;
        }
        if (p + 1 >= bytes.size()) fail(p, "unterminated scan data");
      }
      seg.next = p;
    }
    out.push_back(seg);
    if (m == detail::kEOI) break;
  }
  return out;
}

}  // namespace afkit::jpeg
