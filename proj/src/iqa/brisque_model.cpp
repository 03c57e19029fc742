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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "afkit/error.hpp"
#include "afkit/iqa.hpp"

#ifndef AFKIT_DEFAULT_BRISQUE_MODEL
#define AFKIT_DEFAULT_BRISQUE_MODEL "data/brisque_live.model"
#endif

namespace afkit::iqa {

namespace {

constexpr std::string_view kMagic = "afkit-brisque-model";
constexpr int kVersion = 1;

[[noreturn]] void bad(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kModelFormat, "BRISQUE model line " + std::to_string(line) + ": " + msg);
}

// Line-oriented tokenizer that skips blank lines and '#' comments.
class Lines {
 public:
  explicit Lines(const std::string& text) : in_(text) {}

  /// Next non-empty line split on whitespace; empty vector at end of input.
  std::vector<std::string> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ss(line);
      std::vector<std::string> tok;
      for (std::string t; ss >> t;) tok.push_back(t);
      if (!tok.empty()) return tok;
    }
    ++number_;
    return {};
  }

  std::size_t number() const { return number_; }

 private:
  std::istringstream in_;
  std::size_t number_ = 0;
};

double to_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    bad(line, "not a finite number: '" + s + "'");
  }
  return v;
}

long to_count(const std::string& s, std::size_t line) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 1) {
    bad(line, "not a positive count: '" + s + "'");
  }
  return v;
}

std::vector<std::string> expect(Lines& lines, std::string_view key, std::size_t values) {
  auto tok = lines.next();
  if (tok.empty()) bad(lines.number(), "unexpected end of file, expected '" + std::string(key) + "'");
  if (tok[0] != key || tok.size() != values + 1) {
    bad(lines.number(), "expected '" + std::string(key) + "' with " + std::to_string(values) +
                            " value(s)");
  }
  return tok;
}

}  // namespace

BrisqueModel::BrisqueModel(double gamma, double rho, double scale_lower, double scale_upper,
                           std::vector<std::array<double, 2>> ranges,
                           std::vector<SupportVector> support_vectors)
    : gamma_(gamma),
      rho_(rho),
      lower_(scale_lower),
      upper_(scale_upper),
      ranges_(std::move(ranges)),
      svs_(std::move(support_vectors)) {
  if (!(gamma_ > 0.0) || !std::isfinite(gamma_) || !std::isfinite(rho_)) {
    throw Error(ErrorCode::kModelFormat, "BRISQUE model: gamma must be positive and finite");
  }
  if (!(lower_ < upper_)) throw Error(ErrorCode::kModelFormat, "BRISQUE model: bad scale range");
  if (ranges_.empty()) throw Error(ErrorCode::kModelFormat, "BRISQUE model: no feature ranges");
  for (const auto& r : ranges_) {
    if (!(r[0] < r[1])) {
      throw Error(ErrorCode::kModelFormat, "BRISQUE model: feature range needs min < max");
    }
  }
  if (svs_.empty()) throw Error(ErrorCode::kModelFormat, "BRISQUE model: no support vectors");
  for (const auto& sv : svs_) {
    if (sv.x.size() != ranges_.size()) {
      throw Error(ErrorCode::kModelFormat, "BRISQUE model: support vector dimension mismatch");
    }
  }
}

BrisqueModel BrisqueModel::parse(const std::string& text) {
  Lines lines(text);
  auto head = lines.next();
  if (head.size() != 2 || head[0] != kMagic) bad(lines.number(), "missing model header");
  if (to_count(head[1], lines.number()) != kVersion) {
    bad(lines.number(), "unsupported model version " + head[1]);
  }
  const long dim = to_count(expect(lines, "features", 1)[1], lines.number());
  const double gamma = to_double(expect(lines, "gamma", 1)[1], lines.number());
  const double rho = to_double(expect(lines, "rho", 1)[1], lines.number());
  const auto sc = expect(lines, "scale", 2);
  const double lo = to_double(sc[1], lines.number());
  const double hi = to_double(sc[2], lines.number());
  expect(lines, "ranges", 0);
  std::vector<std::array<double, 2>> ranges(dim);
  for (auto& r : ranges) {
    const auto tok = lines.next();
    if (tok.size() != 2) bad(lines.number(), "expected 'min max'");
    r = {to_double(tok[0], lines.number()), to_double(tok[1], lines.number())};
    if (!(r[0] < r[1])) bad(lines.number(), "range needs min < max");
  }
  const long count = to_count(expect(lines, "support_vectors", 1)[1], lines.number());
  std::vector<SupportVector> svs(count);
  for (auto& sv : svs) {
    const auto tok = lines.next();
    if (tok.size() != static_cast<std::size_t>(dim) + 1) {
      bad(lines.number(), "expected coefficient plus " + std::to_string(dim) + " values");
    }
    sv.coef = to_double(tok[0], lines.number());
    sv.x.resize(dim);
    for (long i = 0; i < dim; ++i) sv.x[i] = to_double(tok[i + 1], lines.number());
  }
  expect(lines, "end", 0);
  if (!lines.next().empty()) bad(lines.number(), "trailing content after 'end'");
  return BrisqueModel(gamma, rho, lo, hi, std::move(ranges), std::move(svs));
}

BrisqueModel BrisqueModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open BRISQUE model " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::vector<double> BrisqueModel::scale(std::span<const double> features) const {
  if (features.size() != ranges_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature vector has " + std::to_string(features.size()) + " entries, model expects " +
                    std::to_string(ranges_.size()));
  }
  std::vector<double> out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto [mn, mx] = ranges_[i];
    out[i] = lower_ + (upper_ - lower_) * (features[i] - mn) / (mx - mn);
  }
  return out;
}

double BrisqueModel::predict(std::span<const double> features) const {
  const std::vector<double> x = scale(features);
  double sum = 0.0;
  for (const auto& sv : svs_) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - sv.x[i];
      d2 += d * d;
    }
    sum += sv.coef * std::exp(-gamma_ * d2);
  }
  return sum - rho_;
}

double brisque_score(std::span<const double> features, const BrisqueModel& model) {
  return model.predict(features);
}

double brisque(const ImageBuffer& img, const BrisqueModel& model) {
  const auto f = brisque_features(img);
  return model.predict(f);
}

std::filesystem::path default_brisque_model_path() { return AFKIT_DEFAULT_BRISQUE_MODEL; }

}  // namespace afkit::iqa
