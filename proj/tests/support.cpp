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

#include "support.hpp"

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <jpeglib.h>

#include "afkit/pipeline.hpp"

namespace afkit::test {

namespace fs = std::filesystem;

ImageBuffer random_u8(std::mt19937_64& rng, int w, int h, int c) {
  std::uniform_int_distribution<int> d(0, 255);
  std::vector<std::uint8_t> s(static_cast<std::size_t>(w) * h * c);
  for (auto& v : s) v = static_cast<std::uint8_t>(d(rng));
  return ImageBuffer::from_u8(w, h, c, std::move(s));
}

ImageBuffer random_float(std::mt19937_64& rng, int w, int h, int c) {
  std::uniform_real_distribution<double> d(0.0, 255.0);
  std::vector<double> s(static_cast<std::size_t>(w) * h * c);
  for (auto& v : s) v = d(rng);
  return ImageBuffer::from_float(w, h, c, std::move(s));
}

ImageBuffer smooth_u8(std::mt19937_64& rng, int w, int h, int c) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 2.0);
  std::vector<std::uint8_t> s(static_cast<std::size_t>(w) * h * c);
  for (int k = 0; k < c; ++k) {
    const double fx = 0.02 + 0.1 * u(rng), fy = 0.02 + 0.1 * u(rng);
    const double px = 6.3 * u(rng), py = 6.3 * u(rng);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double v = 128 + 60 * std::sin(fx * x + px) + 50 * std::cos(fy * y + py) + n(rng);
        s[(static_cast<std::size_t>(y) * w + x) * c + k] = saturate_u8(v);
      }
    }
  }
  return ImageBuffer::from_u8(w, h, c, std::move(s));
}

ImageBuffer constant_u8(int w, int h, int c, std::uint8_t v) {
  return ImageBuffer::from_u8(w, h, c, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * c, v));
}

fs::path corpus_dir() { return AFKIT_TEST_CORPUS; }

std::vector<fs::path> corpus_files() { return list_images(corpus_dir()); }

std::vector<ImageBuffer> corpus(std::size_t n) {
  std::vector<ImageBuffer> out;
  for (const auto& p : corpus_files()) {
    if (n != 0 && out.size() == n) break;
    out.push_back(load_image(p));
  }
  return out;
}

fs::path stub_worker_path() { return AFKIT_STUB_WORKER; }

std::string stub_command(const std::string& mode, const std::string& extra) {
  std::string cmd = "'" + stub_worker_path().string() + "' " + mode;
  if (!extra.empty()) cmd += " " + extra;
  return cmd;
}

namespace {

struct JpegErr {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
};

void on_error(j_common_ptr cinfo) {
  std::longjmp(reinterpret_cast<JpegErr*>(cinfo->err)->jump, 1);
}

}  // namespace

std::vector<std::uint8_t> libjpeg_encode(const ImageBuffer& img, int quality, bool full_chroma,
                                         bool progressive) {
  jpeg_compress_struct cinfo{};
  JpegErr err{};
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = on_error;
  unsigned char* buf = nullptr;
  unsigned long size = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::free(buf);
    throw std::runtime_error("libjpeg encode failed");
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buf, &size);
  cinfo.image_width = static_cast<JDIMENSION>(img.width());
  cinfo.image_height = static_cast<JDIMENSION>(img.height());
  cinfo.input_components = img.channels();
  cinfo.in_color_space = img.channels() == 3 ? JCS_RGB : JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  if (full_chroma && img.channels() == 3) {
    cinfo.comp_info[0].h_samp_factor = 1;
    cinfo.comp_info[0].v_samp_factor = 1;
  }
  if (progressive) jpeg_simple_progression(&cinfo);
  jpeg_start_compress(&cinfo, TRUE);
  const auto px = img.u8();
  const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels();
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(px.data() + cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  std::vector<std::uint8_t> out(buf, buf + size);
  std::free(buf);
  return out;
}

ImageBuffer libjpeg_decode(std::span<const std::uint8_t> bytes) {
  jpeg_decompress_struct cinfo{};
  JpegErr err{};
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = on_error;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw std::runtime_error("libjpeg decode failed");
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.dct_method = JDCT_ISLOW;
  jpeg_start_decompress(&cinfo);
  const int w = static_cast<int>(cinfo.output_width), h = static_cast<int>(cinfo.output_height);
  const int c = cinfo.output_components;
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * c);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = px.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * c;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return ImageBuffer::from_u8(w, h, c, std::move(px));
}

double max_abs_diff(const ImageBuffer& a, const ImageBuffer& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("shape mismatch");
  double m = 0;
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      for (int k = 0; k < a.channels(); ++k) m = std::max(m, std::abs(a.at(x, y, k) - b.at(x, y, k)));
  return m;
}

TempDir::TempDir() {
  static std::mt19937_64 rng{std::random_device{}()};
  for (;;) {
    path_ = fs::temp_directory_path() / ("afkit-test-" + std::to_string(rng()));
    if (fs::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace afkit::test
