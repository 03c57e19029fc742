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

#include "afkit/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "afkit/error.hpp"

namespace afkit {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports errors through longjmp. The raw readers below keep every
// object that outlives the jump in caller-owned storage.
struct PngMessage {
  char text[256] = {0};
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* m = static_cast<PngMessage*>(png_get_error_ptr(png));
  if (m != nullptr) std::snprintf(m->text, sizeof(m->text), "%s", msg);
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

enum class ReadStatus { kOk, kMalformed, kSixteenBit, kAlpha };

struct RawPng {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  std::vector<std::uint8_t> samples;
  std::vector<png_bytep> rows;
};

ReadStatus read_png_raw(std::FILE* fp, AlphaPolicy alpha, RawPng* out, PngMessage* msg) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, msg, on_png_error, on_png_warning);
  if (png == nullptr) return ReadStatus::kMalformed;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return ReadStatus::kMalformed;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return ReadStatus::kMalformed;
  }

  png_init_io(png, fp);
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (bit_depth == 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    return ReadStatus::kSixteenBit;
  }
  const bool has_alpha = (color_type & PNG_COLOR_MASK_ALPHA) != 0 ||
                         png_get_valid(png, info, PNG_INFO_tRNS) != 0;
  if (has_alpha && alpha == AlphaPolicy::kReject) {
    png_destroy_read_struct(&png, &info, nullptr);
    return ReadStatus::kAlpha;
  }

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if ((color_type & PNG_COLOR_MASK_ALPHA) != 0) png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  out->width = png_get_image_width(png, info);
  out->height = png_get_image_height(png, info);
  out->channels = png_get_channels(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  out->samples.resize(rowbytes * out->height);
  out->rows.resize(out->height);
  for (png_uint_32 y = 0; y < out->height; ++y) {
    out->rows[y] = out->samples.data() + y * rowbytes;
  }
  png_read_image(png, out->rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return ReadStatus::kOk;
}

bool write_png_raw(std::FILE* fp, const ImageBuffer& img, std::vector<png_bytep>* rows,
                   PngMessage* msg) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, msg, on_png_error, on_png_warning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, img.width(), img.height(), 8,
               img.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows->data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

}  // namespace

ImageBuffer load_png(const std::filesystem::path& path, AlphaPolicy alpha) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kFileNotFound, "no such file: " + path.string());
  }
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw Error(ErrorCode::kFileNotFound, "cannot open " + path.string());

  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw Error(ErrorCode::kMalformedPng, path.string() + ": not a PNG file");
  }

  RawPng raw;
  PngMessage msg;
  switch (read_png_raw(fp.get(), alpha, &raw, &msg)) {
    case ReadStatus::kOk:
      break;
    case ReadStatus::kMalformed:
      throw Error(ErrorCode::kMalformedPng,
                  path.string() + ": malformed PNG (" + msg.text + ")");
    case ReadStatus::kSixteenBit:
      throw Error(ErrorCode::kUnsupportedBitDepth,
                  path.string() + ": 16-bit PNG is not supported");
    case ReadStatus::kAlpha:
      throw Error(ErrorCode::kAlphaRejected,
                  path.string() + ": PNG has an alpha channel");
  }
  if (raw.channels != 1 && raw.channels != 3) {
    throw Error(ErrorCode::kMalformedPng,
                path.string() + ": unexpected channel count after expansion");
  }
  return ImageBuffer::from_u8(static_cast<int>(raw.width), static_cast<int>(raw.height),
                              raw.channels, std::move(raw.samples));
}

void save_png(const ImageBuffer& img, const std::filesystem::path& path) {
  if (!img.is_u8()) {
    throw Error(ErrorCode::kNotQuantized,
                "save_png needs 8-bit samples; call quantize_u8 first");
  }
  if (img.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot save empty image");
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw Error(ErrorCode::kUnwritablePath, "cannot write " + path.string());

  // libpng takes non-const row pointers but does not modify them when writing.
  auto samples = img.u8();
  const std::size_t rowbytes = static_cast<std::size_t>(img.width()) * img.channels();
  std::vector<png_bytep> rows(img.height());
  for (int y = 0; y < img.height(); ++y) {
    rows[y] = const_cast<png_bytep>(samples.data() + y * rowbytes);
  }
  PngMessage msg;
  if (!write_png_raw(fp.get(), img, &rows, &msg)) {
    throw Error(ErrorCode::kUnwritablePath,
                "failed writing " + path.string() + ": " + msg.text);
  }
  if (std::fflush(fp.get()) != 0) {
    throw Error(ErrorCode::kUnwritablePath, "failed flushing " + path.string());
  }
}

}  // namespace afkit
