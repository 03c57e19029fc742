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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "afkit/csv.hpp"
#include "afkit/error.hpp"
#include "afkit/eval.hpp"
#include "afkit/iqa.hpp"
#include "afkit/pipeline.hpp"
#include "afkit/worker.hpp"

namespace afkit::cli {

namespace fs = std::filesystem;

namespace {

struct TransformArgs {
  std::string method;
  std::string in_dir;
  std::string out_dir;
  std::optional<int> quality;
  std::optional<double> sigma;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string worker;
  double worker_timeout = 600.0;
  int tile_window = 256;
  int tile_overlap = 32;
  int tile_min_size = 0;
  bool no_timing = false;
};

struct MetricsArgs {
  std::string ref_dir;
  std::string dist_dir;
  std::string out;
  std::string brisque_model;
  bool luma = false;
  bool no_brisque = false;
  std::string dataset;
  std::string method;
  int jobs = 1;
};

struct EvaluateArgs {
  std::string manifest;
  std::string predictions;
  std::string out;
  double threshold = eval::kDefaultThreshold;
  std::string dataset;
  std::string method;
  std::string detector;
  std::string worker;
  std::string task;
  std::string predictions_out;
  double worker_timeout = 600.0;
};

struct ReportArgs {
  std::vector<std::string> quality;
  std::vector<std::string> detection;
  std::string out_dir;
};

// Flag combinations CLI11 cannot express.
[[noreturn]] void usage(const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); }

int exit_code_for(const Error& e) {
  if (e.is_worker_error()) return kExitWorker;
  switch (e.code()) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kSchema:
    case ErrorCode::kPairing:
    case ErrorCode::kMissingPrediction:
    case ErrorCode::kModelFormat:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

WorkerEndpoint endpoint(const std::string& command, double timeout_s) {
  if (!(timeout_s > 0.0)) usage("worker timeout must be positive");
  WorkerEndpoint ep;
  ep.command = command;
  ep.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(timeout_s * 1000.0));
  return ep;
}

// ---------------------------------------------------------------------------

int cmd_transform(const TransformArgs& a, std::ostream& out, std::ostream& err) {
  PipelineSpec spec;
  spec.method = parse_method(a.method);
  spec.quality = a.quality;
  spec.sigma = a.sigma;
  spec.seed = a.seed;
  spec.tile_window = a.tile_window;
  spec.tile_overlap = a.tile_overlap;
  spec.tile_min_size = a.tile_min_size;
  validate(spec);
  if (a.jobs < 1) usage("--jobs must be >= 1");
  if (!a.worker.empty() && !restoration_task(spec.method)) {
    usage("--worker has no effect for " + a.method);
  }

  std::unique_ptr<WorkerClient> client;
  if (!a.worker.empty()) client = std::make_unique<WorkerClient>(endpoint(a.worker, a.worker_timeout));
  if (!client && restoration_task(spec.method)) {
    err << "note: no --worker given; " << a.method
        << " runs its corruption step only (outputs named *.corrupt.png)\n";
  }

  const BatchReport rep = run_batch(a.in_dir, a.out_dir, spec, a.jobs, client.get(), !a.no_timing);
  for (const auto& e : rep.entries) {
    for (const auto& w : e.warnings) err << "warning: " << e.name << ": " << w << "\n";
    if (!e.ok) err << "error: " << e.name << ": " << e.message << "\n";
  }
  out << rep.entries.size() - rep.failures() << "/" << rep.entries.size() << " images written to "
      << a.out_dir << "\n";
  if (rep.failures() == 0) return kExitOk;
  return rep.worker_failure() ? kExitWorker : kExitPartial;
}

// ---------------------------------------------------------------------------

// Stem with the corruption-only marker removed, so "a.corrupt.png" pairs
// with "a.png".
std::string pair_key(const fs::path& p) {
  std::string stem = p.stem().string();
  constexpr std::string_view kMark = ".corrupt";
  if (stem.size() > kMark.size() && stem.ends_with(kMark)) stem.resize(stem.size() - kMark.size());
  return stem;
}

std::map<std::string, fs::path> keyed_images(const fs::path& dir) {
  std::map<std::string, fs::path> m;
  for (const auto& p : list_images(dir)) {
    const auto [it, fresh] = m.emplace(pair_key(p), p);
    if (!fresh) {
      throw Error(ErrorCode::kPairing, "ambiguous pairing in " + dir.string() + ": " +
                                           it->second.filename().string() + " and " +
                                           p.filename().string());
    }
  }
  return m;
}

ImageBuffer for_full_reference(const ImageBuffer& img, bool luma) {
  if (!luma || img.channels() == 1) return img;
  const ImageBuffer y = to_luma(img);
  return img.is_u8() ? quantize_u8(y) : y;
}

int cmd_metrics(const MetricsArgs& a, std::ostream& out, std::ostream& err) {
  if (a.jobs < 1) usage("--jobs must be >= 1");
  if (a.ref_dir.empty() && a.no_brisque) usage("nothing to compute: no --ref and --no-brisque");
  if (a.ref_dir.empty() && a.luma) usage("--luma needs --ref");

  const auto dist = keyed_images(a.dist_dir);
  std::vector<std::pair<fs::path, fs::path>> pairs;  // (ref or empty, dist)
  if (a.ref_dir.empty()) {
    for (const auto& [k, d] : dist) pairs.emplace_back(fs::path(), d);
  } else {
    const auto ref = keyed_images(a.ref_dir);
    std::vector<std::string> unmatched;
    for (const auto& [k, r] : ref) {
      if (!dist.count(k)) unmatched.push_back(r.filename().string() + " (only in --ref)");
    }
    for (const auto& [k, d] : dist) {
      if (!ref.count(k)) unmatched.push_back(d.filename().string() + " (only in --dist)");
    }
    if (!unmatched.empty()) {
      std::string msg = "unmatched files:";
      for (const auto& u : unmatched) msg += "\n  " + u;
      throw Error(ErrorCode::kPairing, msg);
    }
    for (const auto& [k, d] : dist) pairs.emplace_back(ref.at(k), d);
  }

  std::optional<iqa::BrisqueModel> model;
  if (!a.no_brisque) {
    model = iqa::BrisqueModel::load(a.brisque_model.empty() ? iqa::default_brisque_model_path()
                                                            : fs::path(a.brisque_model));
  }

  const std::string dataset =
      !a.dataset.empty() ? a.dataset
                         : fs::path(a.ref_dir.empty() ? a.dist_dir : a.ref_dir).lexically_normal()
                               .filename().string();
  const std::string method =
      !a.method.empty() ? a.method
                        : (a.ref_dir.empty() ? std::string(eval::kBaselineMethod)
                                             : fs::path(a.dist_dir).lexically_normal()
                                                   .filename().string());

  std::vector<eval::QualityRecord> records(pairs.size());
  std::vector<std::string> notes(pairs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto work = [&] {
    for (std::size_t i; (i = next++) < pairs.size();) {
      try {
        const auto& [rp, dp] = pairs[i];
        auto& r = records[i];
        r.dataset = dataset;
        r.method = method;
        r.image = dp.filename().string();
        const ImageBuffer d = load_image(dp);
        if (!rp.empty()) {
          const ImageBuffer ref = for_full_reference(load_image(rp), a.luma);
          const ImageBuffer dist_img = for_full_reference(d, a.luma);
          if (!ref.same_shape(dist_img)) {
            throw Error(ErrorCode::kDimensionMismatch,
                        rp.filename().string() + " and " + dp.filename().string() +
                            " differ in shape");
          }
          r.psnr = iqa::psnr(ref, dist_img);
          r.ssim = iqa::ssim(ref, dist_img);
        }
        if (model) {
          if (d.width() < iqa::kBrisqueMinSize || d.height() < iqa::kBrisqueMinSize) {
            notes[i] = r.image + ": too small for BRISQUE, left as n/a";
          } else {
            r.brisque = iqa::brisque(d, *model);
          }
        }
      } catch (...) {
        std::lock_guard g(mu);
        if (!failure) failure = std::current_exception();
        next = pairs.size();
      }
    }
  };
  const int n = std::min<int>(a.jobs, static_cast<int>(std::max<std::size_t>(pairs.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (const auto& note : notes) {
    if (!note.empty()) err << "warning: " << note << "\n";
  }
  csv::write_file(a.out, csv::format(eval::quality_csv(records)));
  out << records.size() << " image(s) measured, written to " << a.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.threshold >= 0.0 && a.threshold <= 1.0)) usage("--threshold must be in [0, 1]");
  if (a.predictions.empty() == a.worker.empty()) {
    usage("give exactly one of --predictions or --worker");
  }
  if (!a.worker.empty() && a.task.empty()) usage("--worker needs --task");
  if (a.worker.empty() && (!a.task.empty() || !a.predictions_out.empty())) {
    usage("--task and --predictions-out need --worker");
  }

  eval::DatasetManifest manifest = eval::load_manifest(a.manifest);
  if (!a.dataset.empty()) manifest.name = a.dataset;

  eval::Predictions preds;
  std::string detector = a.detector;
  std::string method = a.method;
  if (!a.worker.empty()) {
    const WorkerTask task = parse_task(a.task);
    if (!is_detection_task(task)) usage("--task must be a detection task");
    if (detector.empty()) detector = a.task;
    WorkerClient client(endpoint(a.worker, a.worker_timeout));
    const fs::path base = fs::path(a.manifest).parent_path();
    for (const auto& e : manifest.entries) {
      const fs::path p = fs::path(e.path).is_absolute() ? fs::path(e.path) : base / e.path;
      // Images go to the detector as they are, never resized.
      preds[e.id] = client.detect(task, p);
    }
    if (!a.predictions_out.empty()) csv::write_file(a.predictions_out, eval::format_predictions(preds));
  } else {
    preds = eval::load_predictions(a.predictions);
    if (method.empty()) method = fs::path(a.predictions).stem().string();
  }
  if (detector.empty()) detector = "detector";
  if (method.empty()) method = std::string(eval::kBaselineMethod);

  std::size_t extra = 0;
  for (const auto& [id, s] : preds) {
    extra += std::none_of(manifest.entries.begin(), manifest.entries.end(),
                          [&](const eval::ManifestEntry& e) { return e.id == id; });
  }
  if (extra) err << "warning: " << extra << " prediction(s) for ids not in the manifest ignored\n";

  eval::DetectionRecord rec;
  rec.dataset = manifest.name;
  rec.method = method;
  rec.detector = detector;
  rec.counts = eval::confusion(preds, manifest, a.threshold);
  rec.metrics = eval::metrics(rec.counts);
  csv::write_file(a.out, csv::format(eval::detection_csv({rec})));
  out << rec.dataset << " / " << rec.method << " / " << rec.detector
      << ": accuracy " << csv::number(rec.metrics.accuracy, 3) << ", recall "
      << csv::number(rec.metrics.recall, 2) << " (tp " << rec.counts.tp << ", tn "
      << rec.counts.tn << ", fp " << rec.counts.fp << ", fn " << rec.counts.fn << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream&) {
  if (a.quality.empty() && a.detection.empty()) usage("give --quality and/or --detection files");
  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec || !fs::is_directory(a.out_dir)) {
    throw Error(ErrorCode::kUnwritablePath, "cannot create " + a.out_dir);
  }
  const fs::path dir(a.out_dir);
  auto write = [&](const std::string& name, const std::string& text) {
    csv::write_file(dir / name, text);
  };

  if (!a.quality.empty()) {
    std::vector<eval::QualityRecord> all;
    for (const auto& f : a.quality) {
      auto recs = eval::parse_quality_csv(csv::read(f), f);
      all.insert(all.end(), recs.begin(), recs.end());
    }
    if (all.empty()) throw SchemaError(a.quality.front(), 2, "no per-image quality rows");
    const eval::ReportTable t = eval::quality_table(all);
    const std::string text = t.to_text("Image quality (mean per dataset)");
    write("quality_means.csv", csv::format(eval::quality_csv(all)));
    write("quality_table.csv", csv::format(t.to_csv()));
    write("quality_table.txt", text);
    write("quality_radar.csv", csv::format(eval::radar_csv(t)));
    out << text << "\n";
  }
  if (!a.detection.empty()) {
    std::vector<eval::DetectionRecord> all;
    for (const auto& f : a.detection) {
      auto recs = eval::parse_detection_csv(csv::read(f), f);
      all.insert(all.end(), recs.begin(), recs.end());
    }
    if (all.empty()) throw SchemaError(a.detection.front(), 2, "no detection rows");
    const eval::ReportTable t = eval::detection_table(all);
    const std::string text = t.to_text("Manipulation detection");
    write("detection_records.csv", csv::format(eval::detection_csv(all)));
    write("detection_table.csv", csv::format(t.to_csv()));
    write("detection_table.txt", text);
    write("detection_bars.csv", csv::format(eval::bar_csv(t)));
    write("detection_radar.csv", csv::format(eval::radar_csv(t)));
    out << text;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anti-forensics transforms, image quality metrics and detector evaluation", "afkit"};
  app.set_config("--config", "", "TOML file; [transform], [metrics], ... sections mirror the flags");
  app.require_subcommand(1);
  app.set_version_flag("--version", "afkit 1.0.0");

  TransformArgs ta;
  auto* tr = app.add_subcommand("transform", "Apply an anti-forensics method to a directory");
  tr->add_option("--method", ta.method, "blur-sharp, downsize-upsize, jpeg-car, noise-denoise or downscale-upscale")
      ->required();
  tr->add_option("--in", ta.in_dir, "Input directory (PNG/JPEG)")->required();
  tr->add_option("--out", ta.out_dir, "Output directory")->required();
  tr->add_option("--quality", ta.quality, "JPEG quality factor (jpeg-car, default 50)");
  tr->add_option("--sigma", ta.sigma, "Noise sigma (noise-denoise, default 15)");
  tr->add_option("--seed", ta.seed, "Global seed")->capture_default_str();
  tr->add_option("--jobs", ta.jobs, "Images processed in parallel")->capture_default_str();
  tr->add_option("--worker", ta.worker, "Restoration worker command line");
  tr->add_option("--worker-timeout", ta.worker_timeout, "Seconds per worker request")
      ->capture_default_str();
  tr->add_option("--tile-window", ta.tile_window, "Denoise tile size")->capture_default_str();
  tr->add_option("--tile-overlap", ta.tile_overlap, "Denoise tile overlap")->capture_default_str();
  tr->add_option("--tile-min-size", ta.tile_min_size, "Reflect-pad images up to this before tiling")
      ->capture_default_str();
  tr->add_flag("--no-timing", ta.no_timing, "Leave timings out of the batch report");

  MetricsArgs ma;
  auto* me = app.add_subcommand("metrics", "PSNR/SSIM/BRISQUE per image, paired by file name");
  me->add_option("--ref", ma.ref_dir, "Reference directory (omit for BRISQUE only)");
  me->add_option("--dist", ma.dist_dir, "Distorted directory")->required();
  me->add_option("--out", ma.out, "Output CSV")->required();
  me->add_option("--brisque-model", ma.brisque_model, "BRISQUE model file");
  me->add_flag("--luma", ma.luma, "PSNR/SSIM on BT.601 luma instead of all channels");
  me->add_flag("--no-brisque", ma.no_brisque, "Skip BRISQUE");
  me->add_option("--dataset", ma.dataset, "Dataset label (default: reference directory name)");
  me->add_option("--method", ma.method, "Method label (default: distorted directory name)");
  me->add_option("--jobs", ma.jobs, "Pairs measured in parallel")->capture_default_str();

  EvaluateArgs ea;
  auto* ev = app.add_subcommand("evaluate", "Accuracy and recall of detector scores");
  ev->add_option("--manifest", ea.manifest, "CSV id,path,label")->required();
  ev->add_option("--predictions", ea.predictions, "CSV id,score");
  ev->add_option("--out", ea.out, "Output CSV")->required();
  ev->add_option("--threshold", ea.threshold, "Flag as forged when score >= threshold")
      ->capture_default_str();
  ev->add_option("--dataset", ea.dataset, "Dataset label (default: manifest file stem)");
  ev->add_option("--method", ea.method, "Method label (default: predictions file stem)");
  ev->add_option("--detector", ea.detector, "Detector label");
  ev->add_option("--worker", ea.worker, "Detection worker command line (instead of --predictions)");
  ev->add_option("--task", ea.task, "detect-trufor or detect-earlyfusion");
  ev->add_option("--predictions-out", ea.predictions_out, "Save worker scores as CSV");
  ev->add_option("--worker-timeout", ea.worker_timeout, "Seconds per worker request")
      ->capture_default_str();

  ReportArgs ra;
  auto* re = app.add_subcommand("report", "Merge metric CSVs into tables and plot data");
  re->add_option("--quality", ra.quality, "Quality CSVs from `afkit metrics`");
  re->add_option("--detection", ra.detection, "Detection CSVs from `afkit evaluate`");
  re->add_option("--out-dir", ra.out_dir, "Output directory")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << "see: afkit " << sub->get_name() << " --help\n";
    }
    return kExitUsage;
  }

  try {
    if (tr->parsed()) return cmd_transform(ta, out, err);
    if (me->parsed()) return cmd_metrics(ma, out, err);
    if (ev->parsed()) return cmd_evaluate(ea, out, err);
    return cmd_report(ra, out, err);
  } catch (const Error& e) {
    const int code = exit_code_for(e);
    err << (code == kExitUsage ? "usage error: " : "error: ") << e.what() << "\n";
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace afkit::cli
