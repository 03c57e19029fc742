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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "afkit/image.hpp"
#include "afkit/worker.hpp"

namespace afkit {

enum class Method {
  kBlurSharp,
  kDownsizeUpsize,
  kJpegCar,
  kNoiseDenoise,
  kDownscaleUpscale,
};

inline constexpr Method kAllMethods[] = {Method::kBlurSharp, Method::kDownsizeUpsize,
                                         Method::kJpegCar, Method::kNoiseDenoise,
                                         Method::kDownscaleUpscale};

std::string_view method_name(Method m);
/// Throws kInvalidArgument for unknown names.
Method parse_method(std::string_view name);

/// Learned restoration step of a method, if it has one.
std::optional<WorkerTask> restoration_task(Method m);

inline constexpr int kDefaultQuality = 50;
inline constexpr double kDefaultSigma = 15.0;
/// downscale-upscale warns when the longer side is below this.
inline constexpr int kSmallImageSide = 512;

struct PipelineSpec {
  Method method = Method::kBlurSharp;
  std::optional<int> quality;   // jpeg-car only, 1..100
  std::optional<double> sigma;  // noise-denoise only, >= 0
  std::uint64_t seed = 0;
  // Tiling of the denoise step.
  int tile_window = 256;
  int tile_overlap = 32;
  int tile_min_size = 0;  // images are reflect-padded up to this before tiling

  int effective_quality() const { return quality.value_or(kDefaultQuality); }
  double effective_sigma() const { return sigma.value_or(kDefaultSigma); }
};

/// Throws kInvalidArgument when a parameter does not belong to the method or
/// is out of range.
void validate(const PipelineSpec& spec);

struct PipelineResult {
  ImageBuffer image;  // 8-bit, same dimensions as the input
  bool corruption_only = false;  // the restoration step was skipped
  std::vector<std::string> warnings;
};

/// Runs the corruption and restoration steps of `spec.method`. Without a
/// backend the learned step is skipped (downscale-upscale then upsamples
/// with cubic interpolation instead) and the result is flagged
/// corruption-only. Float input is quantized first.
PipelineResult run_pipeline(const ImageBuffer& img, const PipelineSpec& spec,
                            RestorationBackend* backend = nullptr);

/// PNG or baseline JPEG, chosen by extension (case-insensitive).
ImageBuffer load_image(const std::filesystem::path& path);

/// *.png, *.jpg, *.jpeg regular files directly inside `dir`, sorted by name.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

struct BatchEntry {
  std::string name;    // input file name
  std::string output;  // output file name, empty on failure
  std::uint64_t seed = 0;
  bool ok = false;
  bool corruption_only = false;
  std::string error_code;
  std::string message;
  std::vector<std::string> warnings;
  double seconds = 0.0;
};

struct BatchReport {
  PipelineSpec spec;
  std::vector<BatchEntry> entries;  // sorted by name
  bool timing = true;  // false drops "seconds" so reruns are byte-identical

  std::size_t failures() const;
  /// True when something failed and every failure came from the worker.
  bool worker_failure() const;
  std::string to_json() const;
};

inline constexpr std::string_view kBatchReportName = "batch_report.json";

/// Per-image seed: global seed XOR FNV-1a of the file name.
std::uint64_t image_seed(std::uint64_t global, std::string_view file_name);

/// Transforms every image of `in_dir` into `<stem>.png` in `out_dir`
/// (`<stem>.corrupt.png` when corruption-only) using up to `jobs` threads,
/// and writes kBatchReportName there. Per-image failures are recorded and
/// the batch continues. Throws for an unreadable input directory or an
/// unwritable output directory.
BatchReport run_batch(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir,
                      const PipelineSpec& spec, int jobs, RestorationBackend* backend = nullptr,
                      bool timing = true);

}  // namespace afkit
