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

#include "afkit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iterator>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "afkit/error.hpp"
#include "afkit/jpeg.hpp"
#include "afkit/png_io.hpp"
#include "afkit/rng.hpp"
#include "afkit/tiling.hpp"
#include "afkit/transforms.hpp"

namespace afkit {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMethodNames[] = {"blur-sharp", "downsize-upsize", "jpeg-car",
                                             "noise-denoise", "downscale-upscale"};

std::string dims(const ImageBuffer& img) {
  return std::to_string(img.width()) + "x" + std::to_string(img.height()) + "x" +
         std::to_string(img.channels());
}

ImageBuffer checked_restore(RestorationBackend& backend, WorkerTask task,
                            const WorkerParams& params, const ImageBuffer& in) {
  ImageBuffer out = backend.restore(task, params, in);
  const int f = task == WorkerTask::kSwinfirX2 ? 2 : 1;
  if (out.width() != in.width() * f || out.height() != in.height() * f ||
      out.channels() != in.channels()) {
    throw Error(ErrorCode::kWorkerContract, std::string(task_name(task)) + " returned " +
                                                dims(out) + " for a " + dims(in) + " input");
  }
  return out.is_u8() ? out : quantize_u8(out);
}

// Restores every tile, running up to backend.capacity() requests at once.
std::vector<ImageBuffer> restore_tiles(RestorationBackend& backend, WorkerTask task,
                                       const WorkerParams& params,
                                       const std::vector<ImageBuffer>& tiles) {
  std::vector<ImageBuffer> out(tiles.size());
  const int n = std::clamp<int>(backend.capacity(), 1, static_cast<int>(tiles.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  auto work = [&] {
    for (std::size_t i; (i = next++) < tiles.size();) {
      try {
        out[i] = checked_restore(backend, task, params, tiles[i]);
      } catch (...) {
        std::lock_guard g(err_mu);
        if (!first_error) first_error = std::current_exception();
        next = tiles.size();
      }
    }
  };
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

ImageBuffer denoise_tiled(RestorationBackend& backend, const ImageBuffer& noisy,
                          const PipelineSpec& spec) {
  const ImageBuffer padded = pad_reflect(noisy, spec.tile_min_size, spec.tile_min_size);
  const TileGrid grid =
      plan_tiles(padded.width(), padded.height(), spec.tile_window, spec.tile_overlap);
  const WorkerParams params{{"sigma", spec.effective_sigma()}};
  const auto restored =
      restore_tiles(backend, WorkerTask::kRestormerDenoise, params, split(padded, grid));
  const ImageBuffer merged = merge(restored, grid);
  return crop(merged, 0, 0, noisy.width(), noisy.height());
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::string_view method_name(Method m) { return kMethodNames[static_cast<int>(m)]; }

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown method '" + std::string(name) +
                  "' (expected blur-sharp, downsize-upsize, jpeg-car, noise-denoise or "
                  "downscale-upscale)");
}

std::optional<WorkerTask> restoration_task(Method m) {
  switch (m) {
    case Method::kJpegCar:
      return WorkerTask::kFbcnn;
    case Method::kNoiseDenoise:
      return WorkerTask::kRestormerDenoise;
    case Method::kDownscaleUpscale:
      return WorkerTask::kSwinfirX2;
    default:
      return std::nullopt;
  }
}

void validate(const PipelineSpec& spec) {
  const std::string m(method_name(spec.method));
  if (spec.quality && spec.method != Method::kJpegCar) {
    throw Error(ErrorCode::kInvalidArgument, "quality is only valid with jpeg-car, not " + m);
  }
  if (spec.sigma && spec.method != Method::kNoiseDenoise) {
    throw Error(ErrorCode::kInvalidArgument, "sigma is only valid with noise-denoise, not " + m);
  }
  if (spec.quality && (*spec.quality < 1 || *spec.quality > 100)) {
    throw Error(ErrorCode::kInvalidArgument, "quality must be in 1..100");
  }
  if (spec.sigma && (!(*spec.sigma >= 0.0) || !std::isfinite(*spec.sigma))) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be finite and >= 0");
  }
  if (spec.tile_window < 1 || spec.tile_overlap < 0 || spec.tile_overlap >= spec.tile_window) {
    throw Error(ErrorCode::kInvalidArgument, "tiling needs window >= 1 and 0 <= overlap < window");
  }
  if (spec.tile_min_size < 0) {
    throw Error(ErrorCode::kInvalidArgument, "tile_min_size must be >= 0");
  }
}

PipelineResult run_pipeline(const ImageBuffer& input, const PipelineSpec& spec,
                            RestorationBackend* backend) {
  validate(spec);
  if (input.empty()) throw Error(ErrorCode::kInvalidArgument, "empty input image");
  const ImageBuffer img = input.is_u8() ? input : quantize_u8(input);
  const int w = img.width();
  const int h = img.height();

  PipelineResult r;
  switch (spec.method) {
    case Method::kBlurSharp:
      r.image = sharpen3(blur5(img));
      break;

    case Method::kDownsizeUpsize: {
      const ImageBuffer small = resize(img, downsize_dims(w, h));
      r.image = resize(small, {w, h, ResizeFilter::kCubic});
      break;
    }

    case Method::kJpegCar: {
      jpeg::JpegConfig cfg;
      cfg.quality = spec.effective_quality();
      const ImageBuffer decoded = jpeg::decode_jpeg(jpeg::encode_jpeg(img, cfg));
      r.image = backend ? checked_restore(*backend, WorkerTask::kFbcnn, {}, decoded) : decoded;
      break;
    }

    case Method::kNoiseDenoise: {
      const ImageBuffer noisy = add_gaussian_noise(img, spec.effective_sigma(), spec.seed);
      r.image = backend ? denoise_tiled(*backend, noisy, spec) : noisy;
      break;
    }

    case Method::kDownscaleUpscale: {
      if (std::max(w, h) < kSmallImageSide) {
        r.warnings.push_back("downscale-upscale on a " + std::to_string(w) + "x" +
                             std::to_string(h) + " image; results degrade below " +
                             std::to_string(kSmallImageSide) + " px");
      }
      // Odd sides are reflect-padded by one so the 2x round trip is exact.
      const ImageBuffer even = pad_reflect(img, w + (w & 1), h + (h & 1));
      const ImageBuffer half =
          resize(even, {even.width() / 2, even.height() / 2, ResizeFilter::kLanczos4});
      const ImageBuffer up =
          backend ? checked_restore(*backend, WorkerTask::kSwinfirX2, {}, half)
                  : resize(half, {even.width(), even.height(), ResizeFilter::kCubic});
      r.image = crop(up, 0, 0, w, h);
      break;
    }
  }
  r.corruption_only = restoration_task(spec.method).has_value() && backend == nullptr;
  if (!r.image.is_u8()) r.image = quantize_u8(r.image);
  return r;
}

ImageBuffer load_image(const fs::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".png") return load_png(path);
  if (ext == ".jpg" || ext == ".jpeg") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open " + path.string());
    const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                          std::istreambuf_iterator<char>()};
    return jpeg::decode_jpeg(bytes);
  }
  throw Error(ErrorCode::kInvalidArgument, "unsupported image type: " + path.string());
}

std::vector<fs::path> list_images(const fs::path& dir) {
  std::error_code ec;
  fs::directory_iterator it(dir, ec);
  if (ec) throw Error(ErrorCode::kFileNotFound, "cannot read directory " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : it) {
    if (!e.is_regular_file()) continue;
    const std::string ext = lower(e.path().extension().string());
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

std::size_t BatchReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const BatchEntry& e) { return !e.ok; }));
}

bool BatchReport::worker_failure() const {
  bool any = false;
  for (const auto& e : entries) {
    if (e.ok) continue;
    if (e.error_code.rfind("worker", 0) != 0) return false;
    any = true;
  }
  return any;
}

std::string BatchReport::to_json() const {
  nlohmann::ordered_json j;
  j["method"] = std::string(method_name(spec.method));
  if (spec.method == Method::kJpegCar) j["quality"] = spec.effective_quality();
  if (spec.method == Method::kNoiseDenoise) {
    j["sigma"] = spec.effective_sigma();
    j["tile_window"] = spec.tile_window;
    j["tile_overlap"] = spec.tile_overlap;
    j["tile_min_size"] = spec.tile_min_size;
  }
  j["seed"] = spec.seed;
  j["total"] = entries.size();
  j["failed"] = failures();
  auto& items = j["images"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json it;
    it["name"] = e.name;
    it["status"] = e.ok ? "ok" : "error";
    if (e.ok) it["output"] = e.output;
    it["seed"] = e.seed;
    if (e.corruption_only) it["corruption_only"] = true;
    if (!e.ok) {
      it["error"] = e.error_code;
      it["message"] = e.message;
    }
    if (!e.warnings.empty()) it["warnings"] = e.warnings;
    if (timing) it["seconds"] = std::round(e.seconds * 1000.0) / 1000.0;
    items.push_back(std::move(it));
  }
  return j.dump(2) + "\n";
}

std::uint64_t image_seed(std::uint64_t global, std::string_view file_name) {
  return global ^ fnv1a64(file_name);
}

BatchReport run_batch(const fs::path& in_dir, const fs::path& out_dir, const PipelineSpec& spec,
                      int jobs, RestorationBackend* backend, bool timing) {
  validate(spec);
  if (jobs < 1) throw Error(ErrorCode::kInvalidArgument, "jobs must be >= 1");
  const auto inputs = list_images(in_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw Error(ErrorCode::kUnwritablePath, "cannot create output directory " + out_dir.string());
  }

  BatchReport report;
  report.spec = spec;
  report.timing = timing;
  report.entries.resize(inputs.size());
  const std::string suffix = restoration_task(spec.method) && !backend ? ".corrupt.png" : ".png";

  // Two inputs with the same stem (a.png, a.jpg) would write the same file.
  std::map<std::string, std::size_t> owner;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    auto& e = report.entries[i];
    e.name = inputs[i].filename().string();
    e.seed = image_seed(spec.seed, e.name);
    const std::string out_name = inputs[i].stem().string() + suffix;
    auto [it, fresh] = owner.emplace(out_name, i);
    if (fresh) {
      e.output = out_name;
    } else {
      e.error_code = std::string(error_code_name(ErrorCode::kInvalidArgument));
      e.message = "output " + out_name + " already produced by " + report.entries[it->second].name;
    }
  }

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < inputs.size();) {
      auto& e = report.entries[i];
      if (!e.message.empty()) continue;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        PipelineSpec s = spec;
        s.seed = e.seed;
        const PipelineResult r = run_pipeline(load_image(inputs[i]), s, backend);
        save_png(r.image, out_dir / e.output);
        e.ok = true;
        e.corruption_only = r.corruption_only;
        e.warnings = r.warnings;
      } catch (const Error& err) {
        e.error_code = std::string(error_code_name(err.code()));
        e.message = err.what();
      } catch (const std::exception& err) {
        e.error_code = "internal";
        e.message = err.what();
      }
      if (!e.ok) e.output.clear();
      e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int n = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(inputs.size(), 1)));
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::ofstream out(out_dir / kBatchReportName, std::ios::binary);
  out << report.to_json();
  if (!out) {
    throw Error(ErrorCode::kUnwritablePath, "cannot write " + (out_dir / kBatchReportName).string());
  }
  return report;
}

}  // namespace afkit
