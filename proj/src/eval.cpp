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

#include "afkit/eval.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "afkit/error.hpp"

namespace afkit::eval {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t require(const csv::Table& t, std::string_view col, const std::string& source) {
  const auto c = t.column(col);
  if (!c) throw SchemaError(source, 1, "missing column '" + std::string(col) + "'");
  return *c;
}

double cell_number(const csv::Table& t, std::size_t r, std::size_t c, const std::string& source) {
  try {
    return csv::parse_number(t.rows[r][c]);
  } catch (const Error&) {
    throw SchemaError(source, t.lines[r],
                      "column '" + t.header[c] + "': not a number: '" + t.rows[r][c] + "'");
  }
}

std::int64_t cell_count(const csv::Table& t, std::size_t r, std::size_t c,
                        const std::string& source) {
  const std::string& s = t.rows[r][c];
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
    throw SchemaError(source, t.lines[r],
                      "column '" + t.header[c] + "': not a count: '" + s + "'");
  }
  return v;
}

// Index of `key` in `keys`, appending it when new.
std::size_t intern(std::vector<std::string>& keys, const std::string& key) {
  const auto it = std::find(keys.begin(), keys.end(), key);
  if (it != keys.end()) return static_cast<std::size_t>(it - keys.begin());
  keys.push_back(key);
  return keys.size() - 1;
}

// Baseline first, others in order of appearance.
std::vector<std::string> order_methods(std::vector<std::string> methods) {
  std::stable_partition(methods.begin(), methods.end(),
                        [](const std::string& m) { return m == kBaselineMethod; });
  return methods;
}

std::string pad(const std::string& s, std::size_t w, bool left) {
  if (s.size() >= w) return s;
  return left ? s + std::string(w - s.size(), ' ') : std::string(w - s.size(), ' ') + s;
}

}  // namespace

DatasetManifest parse_manifest(const csv::Table& t, std::string name, const std::string& source) {
  const std::size_t ci = require(t, "id", source);
  const std::size_t cp = require(t, "path", source);
  const std::size_t cl = require(t, "label", source);
  if (t.rows.empty()) throw SchemaError(source, 2, "manifest has no entries");
  DatasetManifest m;
  m.name = std::move(name);
  std::set<std::string> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row[ci].empty()) throw SchemaError(source, t.lines[r], "empty id");
    if (!seen.insert(row[ci]).second) {
      throw SchemaError(source, t.lines[r], "duplicate id '" + row[ci] + "'");
    }
    Label label;
    if (row[cl] == "forged") {
      label = Label::kForged;
    } else if (row[cl] == "authentic") {
      label = Label::kAuthentic;
    } else {
      throw SchemaError(source, t.lines[r],
                        "label must be 'forged' or 'authentic', got '" + row[cl] + "'");
    }
    m.entries.push_back({row[ci], row[cp], label});
  }
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(csv::read(path), path.stem().string(), path.string());
}

Predictions parse_predictions(const csv::Table& t, const std::string& source) {
  const std::size_t ci = require(t, "id", source);
  const std::size_t cs = require(t, "score", source);
  if (t.rows.empty()) throw SchemaError(source, 2, "no predictions");
  Predictions p;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double s = cell_number(t, r, cs, source);
    if (!(s >= 0.0 && s <= 1.0)) {
      throw SchemaError(source, t.lines[r], "score must be in [0, 1], got " + t.rows[r][cs]);
    }
    if (!p.emplace(t.rows[r][ci], s).second) {
      throw SchemaError(source, t.lines[r], "duplicate id '" + t.rows[r][ci] + "'");
    }
  }
  return p;
}

Predictions load_predictions(const std::filesystem::path& path) {
  return parse_predictions(csv::read(path), path.string());
}

std::string format_predictions(const Predictions& p) {
  csv::Table t;
  t.header = {"id", "score"};
  for (const auto& [id, s] : p) t.rows.push_back({id, csv::number(s, -1)});
  return csv::format(t);
}

ConfusionCounts confusion(const Predictions& predictions, const DatasetManifest& manifest,
                          double threshold) {
  ConfusionCounts c;
  std::vector<std::string> missing;
  for (const auto& e : manifest.entries) {
    const auto it = predictions.find(e.id);
    if (it == predictions.end()) {
      missing.push_back(e.id);
      continue;
    }
    const bool flagged = it->second >= threshold;
    if (e.label == Label::kForged) {
      ++(flagged ? c.tp : c.fn);
    } else {
      ++(flagged ? c.fp : c.tn);
    }
  }
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) + " image(s) without a prediction:";
    for (const auto& id : missing) msg += " " + id;
    throw Error(ErrorCode::kMissingPrediction, msg);
  }
  return c;
}

DetectionMetrics metrics(const ConfusionCounts& c) {
  if (c.tp < 0 || c.tn < 0 || c.fp < 0 || c.fn < 0) {
    throw Error(ErrorCode::kInvalidArgument, "confusion counts must be non-negative");
  }
  if (c.total() == 0) throw Error(ErrorCode::kInvalidArgument, "confusion counts are all zero");
  DetectionMetrics m;
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  m.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn)
                             : kRecallUndefined;
  return m;
}

csv::Table detection_csv(const std::vector<DetectionRecord>& records) {
  csv::Table t;
  t.header = {"dataset", "method", "detector", "tp", "tn", "fp", "fn", "accuracy", "recall"};
  for (const auto& r : records) {
    t.rows.push_back({r.dataset, r.method, r.detector, std::to_string(r.counts.tp),
                      std::to_string(r.counts.tn), std::to_string(r.counts.fp),
                      std::to_string(r.counts.fn), csv::number(r.metrics.accuracy, -1),
                      csv::number(r.metrics.recall, -1)});
  }
  return t;
}

std::vector<DetectionRecord> parse_detection_csv(const csv::Table& t, const std::string& source) {
  const std::size_t cd = require(t, "dataset", source);
  const std::size_t cm = require(t, "method", source);
  const std::size_t cdet = require(t, "detector", source);
  const std::size_t c_tp = require(t, "tp", source);
  const std::size_t c_tn = require(t, "tn", source);
  const std::size_t c_fp = require(t, "fp", source);
  const std::size_t c_fn = require(t, "fn", source);
  std::vector<DetectionRecord> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    DetectionRecord d;
    d.dataset = t.rows[r][cd];
    d.method = t.rows[r][cm];
    d.detector = t.rows[r][cdet];
    d.counts = {cell_count(t, r, c_tp, source), cell_count(t, r, c_tn, source),
                cell_count(t, r, c_fp, source), cell_count(t, r, c_fn, source)};
    if (d.counts.total() == 0) throw SchemaError(source, t.lines[r], "all counts are zero");
    // Metrics are always recomputed from the counts.
    d.metrics = metrics(d.counts);
    out.push_back(std::move(d));
  }
  return out;
}

double mean_skip_nan(const std::vector<double>& v) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double x : v) {
    if (std::isnan(x)) continue;
    sum += x;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : kNaN;
}

csv::Table quality_csv(const std::vector<QualityRecord>& records) {
  csv::Table t;
  t.header = {"dataset", "method", "image", "psnr", "ssim", "brisque"};
  std::vector<std::string> keys;
  std::vector<std::array<std::vector<double>, 3>> acc;
  std::vector<std::pair<std::string, std::string>> names;
  for (const auto& r : records) {
    t.rows.push_back({r.dataset, r.method, r.image, csv::number(r.psnr, -1),
                      csv::number(r.ssim, -1), csv::number(r.brisque, -1)});
    const std::size_t k = intern(keys, r.dataset + '\n' + r.method);
    if (k == acc.size()) {
      acc.emplace_back();
      names.emplace_back(r.dataset, r.method);
    }
    acc[k][0].push_back(r.psnr);
    acc[k][1].push_back(r.ssim);
    acc[k][2].push_back(r.brisque);
  }
  for (std::size_t k = 0; k < acc.size(); ++k) {
    t.rows.push_back({names[k].first, names[k].second, std::string(kMeanRow),
                      csv::number(mean_skip_nan(acc[k][0]), -1),
                      csv::number(mean_skip_nan(acc[k][1]), -1),
                      csv::number(mean_skip_nan(acc[k][2]), -1)});
  }
  return t;
}

std::vector<QualityRecord> parse_quality_csv(const csv::Table& t, const std::string& source) {
  const std::size_t cd = require(t, "dataset", source);
  const std::size_t cm = require(t, "method", source);
  const std::size_t ci = require(t, "image", source);
  const std::size_t cp = require(t, "psnr", source);
  const std::size_t cs = require(t, "ssim", source);
  const std::size_t cb = require(t, "brisque", source);
  std::vector<QualityRecord> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.rows[r][ci] == kMeanRow) continue;
    QualityRecord q;
    q.dataset = t.rows[r][cd];
    q.method = t.rows[r][cm];
    q.image = t.rows[r][ci];
    q.psnr = cell_number(t, r, cp, source);
    q.ssim = cell_number(t, r, cs, source);
    q.brisque = cell_number(t, r, cb, source);
    out.push_back(std::move(q));
  }
  return out;
}

bool higher_is_better(std::string_view metric) { return metric == "psnr" || metric == "ssim"; }

int metric_decimals(std::string_view metric) {
  return metric == "ssim" || metric == "accuracy" ? 3 : 2;
}

std::vector<int> rank_values(const std::vector<double>& values, bool higher_better,
                             const std::vector<bool>& excluded) {
  std::vector<int> ranks(values.size(), 0);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i]) || (i < excluded.size() && excluded[i])) continue;
    idx.push_back(i);
  }
  auto better = [&](std::size_t a, std::size_t b) {
    return higher_better ? values[a] > values[b] : values[a] < values[b];
  };
  std::stable_sort(idx.begin(), idx.end(), better);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const bool tied = k > 0 && values[idx[k]] == values[idx[k - 1]];
    ranks[idx[k]] = tied ? ranks[idx[k - 1]] : static_cast<int>(k) + 1;
  }
  return ranks;
}

void ReportTable::rank() {
  ranks.assign(methods.size(), std::vector<int>(columns.size(), 0));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    std::vector<double> col(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m) col[m] = values[m][c];
    const auto r = rank_values(col, higher_is_better(columns[c].metric), baseline);
    for (std::size_t m = 0; m < methods.size(); ++m) ranks[m][c] = r[m];
  }
}

csv::Table ReportTable::to_csv() const {
  csv::Table t;
  t.header = {"method", "baseline"};
  for (const auto& c : columns) {
    t.header.push_back(c.group + ":" + c.metric);
    t.header.push_back(c.group + ":" + c.metric + ":rank");
  }
  for (std::size_t m = 0; m < methods.size(); ++m) {
    csv::Row row = {methods[m], baseline[m] ? "1" : "0"};
    for (std::size_t c = 0; c < columns.size(); ++c) {
      row.push_back(csv::number(values[m][c], -1));
      row.push_back(ranks[m][c] ? std::to_string(ranks[m][c]) : "");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

ReportTable ReportTable::from_csv(const csv::Table& t, const std::string& source) {
  if (t.header.size() < 2 || t.header[0] != "method" || t.header[1] != "baseline" ||
      t.header.size() % 2 != 0) {
    throw SchemaError(source, 1, "expected 'method,baseline' then value/rank column pairs");
  }
  ReportTable r;
  for (std::size_t i = 2; i < t.header.size(); i += 2) {
    const std::string& h = t.header[i];
    const auto colon = h.rfind(':');
    if (colon == std::string::npos || t.header[i + 1] != h + ":rank") {
      throw SchemaError(source, 1, "bad column pair '" + h + "', '" + t.header[i + 1] + "'");
    }
    r.columns.push_back({h.substr(0, colon), h.substr(colon + 1)});
  }
  for (std::size_t row = 0; row < t.rows.size(); ++row) {
    const auto& cells = t.rows[row];
    r.methods.push_back(cells[0]);
    if (cells[1] != "0" && cells[1] != "1") {
      throw SchemaError(source, t.lines[row], "baseline must be 0 or 1");
    }
    r.baseline.push_back(cells[1] == "1");
    std::vector<double> v;
    std::vector<int> k;
    for (std::size_t i = 2; i < cells.size(); i += 2) {
      v.push_back(cell_number(t, row, i, source));
      if (cells[i + 1].empty()) {
        k.push_back(0);
      } else {
        k.push_back(static_cast<int>(cell_count(t, row, i + 1, source)));
      }
    }
    r.values.push_back(std::move(v));
    r.ranks.push_back(std::move(k));
  }
  return r;
}

std::string ReportTable::to_text(const std::string& title) const {
  // Header rows: group, metric; then one line per method.
  std::vector<std::vector<std::string>> cells(methods.size() + 2);
  cells[0].push_back("");
  cells[1].push_back("method");
  for (std::size_t m = 0; m < methods.size(); ++m) cells[m + 2].push_back(methods[m]);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const bool first_of_group = c == 0 || columns[c - 1].group != columns[c].group;
    cells[0].push_back(first_of_group ? columns[c].group : "");
    cells[1].push_back(columns[c].metric);
    const int dec = metric_decimals(columns[c].metric);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const double v = values[m][c];
      std::string s = std::isnan(v) ? "-" : csv::number(v, dec);
      const int rk = ranks.empty() ? 0 : ranks[m][c];
      s += rk >= 1 && rk <= kBestRanks ? "*" : " ";
      cells[m + 2].push_back(s);
    }
  }
  std::vector<std::size_t> width(columns.size() + 1, 0);
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream out;
  out << title << "\n";
  for (std::size_t r = 0; r < cells.size(); ++r) {
    std::string line;
    for (std::size_t i = 0; i < cells[r].size(); ++i) {
      if (i) line += "  ";
      line += pad(cells[r][i], width[i], i == 0 || r == 0);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << "\n";
  }
  out << "(* = best two per column; baseline rows unranked)\n";
  return out.str();
}

ReportTable quality_table(const std::vector<QualityRecord>& records) {
  std::vector<std::string> datasets, methods;
  for (const auto& q : records) {
    intern(datasets, q.dataset);
    intern(methods, q.method);
  }
  methods = order_methods(methods);
  static constexpr std::string_view kMetrics[] = {"psnr", "ssim", "brisque"};
  ReportTable t;
  for (const auto& d : datasets) {
    for (auto m : kMetrics) t.columns.push_back({d, std::string(m)});
  }
  t.methods = methods;
  for (const auto& m : methods) t.baseline.push_back(m == kBaselineMethod);
  // [method][dataset][metric] samples
  std::vector<std::vector<std::array<std::vector<double>, 3>>> acc(
      methods.size(), std::vector<std::array<std::vector<double>, 3>>(datasets.size()));
  for (const auto& q : records) {
    const std::size_t mi = intern(methods, q.method);
    const std::size_t di = intern(datasets, q.dataset);
    acc[mi][di][0].push_back(q.psnr);
    acc[mi][di][1].push_back(q.ssim);
    acc[mi][di][2].push_back(q.brisque);
  }
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    std::vector<double> row;
    for (std::size_t di = 0; di < datasets.size(); ++di) {
      for (int k = 0; k < 3; ++k) row.push_back(mean_skip_nan(acc[mi][di][k]));
    }
    t.values.push_back(std::move(row));
  }
  t.rank();
  return t;
}

ReportTable detection_table(const std::vector<DetectionRecord>& records) {
  std::vector<std::string> groups, methods;
  for (const auto& d : records) {
    intern(groups, d.detector + "/" + d.dataset);
    intern(methods, d.method);
  }
  methods = order_methods(methods);
  ReportTable t;
  for (const auto& g : groups) {
    t.columns.push_back({g, "accuracy"});
    t.columns.push_back({g, "recall"});
  }
  t.methods = methods;
  for (const auto& m : methods) t.baseline.push_back(m == kBaselineMethod);
  t.values.assign(methods.size(), std::vector<double>(t.columns.size(), kNaN));
  // Repeated (method, group) records are pooled by summing their counts.
  std::vector<std::vector<ConfusionCounts>> pooled(methods.size(),
                                                   std::vector<ConfusionCounts>(groups.size()));
  for (const auto& d : records) {
    auto& c = pooled[intern(methods, d.method)][intern(groups, d.detector + "/" + d.dataset)];
    c.tp += d.counts.tp;
    c.tn += d.counts.tn;
    c.fp += d.counts.fp;
    c.fn += d.counts.fn;
  }
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const auto& c = pooled[mi][gi];
      if (c.total() == 0) continue;
      const DetectionMetrics dm = metrics(c);
      t.values[mi][2 * gi] = dm.accuracy;
      t.values[mi][2 * gi + 1] = dm.recall;
    }
  }
  t.rank();
  return t;
}

csv::Table radar_csv(const ReportTable& t) {
  csv::Table out;
  out.header = {"method", "axis", "rank", "radius"};
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    int n = 0;
    for (std::size_t m = 0; m < t.methods.size(); ++m) n += t.ranks[m][c] > 0;
    for (std::size_t m = 0; m < t.methods.size(); ++m) {
      const int rk = t.ranks[m][c];
      if (rk == 0) continue;
      const double radius = static_cast<double>(n - rk + 1) / n;
      out.rows.push_back({t.methods[m], t.columns[c].group + ":" + t.columns[c].metric,
                          std::to_string(rk), csv::number(radius, -1)});
    }
  }
  return out;
}

csv::Table bar_csv(const ReportTable& t) {
  csv::Table out;
  out.header = {"group", "method", "metric", "value"};
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    for (std::size_t m = 0; m < t.methods.size(); ++m) {
      if (std::isnan(t.values[m][c])) continue;
      out.rows.push_back(
          {t.columns[c].group, t.methods[m], t.columns[c].metric, csv::number(t.values[m][c], -1)});
    }
  }
  return out;
}

}  // namespace afkit::eval
