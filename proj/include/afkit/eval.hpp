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
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "afkit/csv.hpp"

namespace afkit::eval {

enum class Label { kForged, kAuthentic };

struct ManifestEntry {
  std::string id;
  std::string path;
  Label label = Label::kAuthentic;
};

struct DatasetManifest {
  std::string name;
  std::vector<ManifestEntry> entries;
};

/// `id,path,label` with label "forged" or "authentic"; ids unique.
/// Throws SchemaError.
DatasetManifest parse_manifest(const csv::Table& table, std::string name,
                               const std::string& source = "<manifest>");
/// Dataset name defaults to the file stem.
DatasetManifest load_manifest(const std::filesystem::path& path);

/// image id -> score in [0, 1].
using Predictions = std::map<std::string, double>;

/// `id,score`; at least one row, ids unique, scores in [0, 1].
/// Throws SchemaError.
Predictions parse_predictions(const csv::Table& table, const std::string& source = "<predictions>");
Predictions load_predictions(const std::filesystem::path& path);

std::string format_predictions(const Predictions& p);

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  std::int64_t total() const noexcept { return tp + tn + fp + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

inline constexpr double kDefaultThreshold = 0.5;

/// Forged is the positive class; an image is flagged when score >= threshold.
/// Throws kMissingPrediction naming every manifest id without a score.
ConfusionCounts confusion(const Predictions& predictions, const DatasetManifest& manifest,
                          double threshold = kDefaultThreshold);

/// Recall when there are no forged images.
inline constexpr double kRecallUndefined = std::numeric_limits<double>::quiet_NaN();

struct DetectionMetrics {
  double accuracy = 0.0;
  double recall = 0.0;  // kRecallUndefined when tp + fn == 0

  bool recall_defined() const noexcept { return recall == recall; }
};

/// Throws kInvalidArgument for negative or all-zero counts.
DetectionMetrics metrics(const ConfusionCounts& c);

// ---------------------------------------------------------------------------
// Per-run CSV records

/// One line of `afkit evaluate` output.
struct DetectionRecord {
  std::string dataset;
  std::string method;
  std::string detector;
  ConfusionCounts counts;
  DetectionMetrics metrics;
};

csv::Table detection_csv(const std::vector<DetectionRecord>& records);
std::vector<DetectionRecord> parse_detection_csv(const csv::Table& t, const std::string& source);

/// One per-image line of `afkit metrics` output. NaN marks a metric that was
/// not computed.
struct QualityRecord {
  std::string dataset;
  std::string method;
  std::string image;
  double psnr = std::numeric_limits<double>::quiet_NaN();
  double ssim = std::numeric_limits<double>::quiet_NaN();
  double brisque = std::numeric_limits<double>::quiet_NaN();
};

/// Image name of the per-(dataset, method) mean rows.
inline constexpr std::string_view kMeanRow = "mean";

/// Per-image rows followed by one mean row per (dataset, method). Means skip
/// NaN entries.
csv::Table quality_csv(const std::vector<QualityRecord>& records);
/// Per-image rows only (mean rows are dropped).
std::vector<QualityRecord> parse_quality_csv(const csv::Table& t, const std::string& source);

/// Mean of the finite-or-infinite (non-NaN) values, NaN if there are none.
double mean_skip_nan(const std::vector<double>& v);

// ---------------------------------------------------------------------------
// Report tables

/// Whether larger values rank first: psnr, ssim. brisque, accuracy and recall
/// rank lower-first (for accuracy/recall, lower means the attack worked).
bool higher_is_better(std::string_view metric);

/// Display precision: 3 for ssim and accuracy, 2 otherwise.
int metric_decimals(std::string_view metric);

/// Competition ranking (1, 2, 2, 4); ties share the better rank. NaN values
/// and excluded entries get rank 0.
std::vector<int> rank_values(const std::vector<double>& values, bool higher_better,
                             const std::vector<bool>& excluded = {});

/// Marker for ranks 1 and 2.
inline constexpr int kBestRanks = 2;

struct ReportColumn {
  std::string group;   // e.g. "DSO-1" or "TruFor/DSO-1"
  std::string metric;  // psnr, ssim, brisque, accuracy, recall

  bool operator==(const ReportColumn&) const = default;
};

/// Methods x metric columns. Baseline rows (the untouched images) are shown
/// but not ranked.
struct ReportTable {
  std::vector<ReportColumn> columns;
  std::vector<std::string> methods;
  std::vector<bool> baseline;
  std::vector<std::vector<double>> values;  // [method][column], NaN = missing
  std::vector<std::vector<int>> ranks;      // [method][column], 0 = unranked

  /// Recomputes ranks from values.
  void rank();

  /// `method,baseline,<group>:<metric>,<group>:<metric>:rank,...` with
  /// shortest round-trip numbers.
  csv::Table to_csv() const;
  static ReportTable from_csv(const csv::Table& t, const std::string& source = "<report>");

  /// Aligned text; best-two values carry a trailing '*'. Decimals follow
  /// metric_decimals().
  std::string to_text(const std::string& title) const;
};

/// Method name marking the baseline row.
inline constexpr std::string_view kBaselineMethod = "raw";

/// Mean PSNR/SSIM/BRISQUE per (dataset, method), one column group per
/// dataset. Row order follows first appearance, baseline first.
ReportTable quality_table(const std::vector<QualityRecord>& records);

/// Accuracy/recall per (detector, dataset, method), one column group per
/// detector/dataset pair.
ReportTable detection_table(const std::vector<DetectionRecord>& records);

/// `method,axis,rank,radius` with radius (n - rank + 1) / n over the n ranked
/// methods of each column, so rank 1 sits on the rim. Unranked cells are
/// skipped.
csv::Table radar_csv(const ReportTable& t);

/// `group,method,metric,value`, one line per non-missing cell.
csv::Table bar_csv(const ReportTable& t);

}  // namespace afkit::eval
