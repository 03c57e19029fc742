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

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "afkit/image.hpp"

namespace afkit::test {

/// Uniform random 8-bit image.
ImageBuffer random_u8(std::mt19937_64& rng, int w, int h, int c);
/// Uniform random float image in [0, 255].
ImageBuffer random_float(std::mt19937_64& rng, int w, int h, int c);
/// Smooth random image: low-frequency sinusoids plus mild noise.
ImageBuffer smooth_u8(std::mt19937_64& rng, int w, int h, int c);
ImageBuffer constant_u8(int w, int h, int c, std::uint8_t v);

std::filesystem::path corpus_dir();
std::vector<std::filesystem::path> corpus_files();
/// First n corpus images, decoded.
std::vector<ImageBuffer> corpus(std::size_t n = 0);

std::filesystem::path stub_worker_path();
/// Command line for the stub worker in the given mode.
std::string stub_command(const std::string& mode, const std::string& extra = "");

/// libjpeg reference encode (4:2:0 unless full_chroma) and decode.
std::vector<std::uint8_t> libjpeg_encode(const ImageBuffer& img, int quality,
                                         bool full_chroma = false, bool progressive = false);
ImageBuffer libjpeg_decode(std::span<const std::uint8_t> bytes);

double max_abs_diff(const ImageBuffer& a, const ImageBuffer& b);

/// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_text(const std::filesystem::path& p);
void write_text(const std::filesystem::path& p, const std::string& text);

}  // namespace afkit::test
